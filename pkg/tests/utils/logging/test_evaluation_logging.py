""" Test the statistics logger of single evaluations. """

import json

from src.utils.logging import EvaluationLogger


def test_statistics(tmp_path):
    logger = EvaluationLogger()
    assert logger.logs == {"statements": [], "cells_used": 0, "outcome": None}
    logger.log_start({"kind": "script", "seed": 7})
    logger.log_event({"statement": 1, "cells_used": 3})
    logger.log_event({"statement": 2, "cells_used": 5})
    logger.log_end({"outcome": "ok", "cells_used": 5})
    assert logger.logs["statements"][1] == {"statement": 2, "cells_used": 5}
    assert logger.logs["elapsed"] >= 0

    logger.save_logs(str(tmp_path))
    with open(tmp_path / "statistics.json") as json_file:
        saved = json.load(json_file)
    assert saved["seed"] == 7 and saved["outcome"] == "ok"
    assert len(saved["statements"]) == 2


def test_end_without_start():
    logger = EvaluationLogger()
    logger.log_end({"outcome": "ok"})
    assert "elapsed" not in logger.logs
