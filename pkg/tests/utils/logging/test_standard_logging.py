""" Test the standard logger. """

import json

from src.utils import logging


def test_logging(tmp_path):
    logger = logging.StandardLogger()
    logger.log_start({"config": {"ttl": 10, "root": "/ocpu"}})
    for index in range(10):
        logger.log_event({"status": 200 + index, "seconds": index / 2})
    logger.log_end({"final": 747})
    assert "other" not in logger.logs.keys()

    folder = tmp_path / "statistics"
    logger.save_logs(str(folder))
    with open(folder / "statistics.json", "r") as json_file:
        logs = json.load(json_file)

    assert set(logs.keys()) == {"config", "status", "seconds", "final"}
    for key in ["status", "seconds"]:
        assert isinstance(logs[key], list)
        assert len(logs[key]) == 10
    assert logs["status"][-1] == 209
    assert logs["config"] == {"ttl": 10, "root": "/ocpu"}
    assert logs["final"] == 747


def test_start_overwrites():
    logger = logging.StandardLogger()
    logger.log_start({"a": 1})
    logger.log_start({"a": 2, "b": 3})
    assert logger.logs == {"a": 2, "b": 3}
