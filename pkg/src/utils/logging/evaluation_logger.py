""" Implement a logger collecting the statistics of one evaluation. """

import time
from typing import Any, Dict

from src.utils.logging.base_logger import BaseLogger


class EvaluationLogger(BaseLogger):
    """
    Logger used for every RPC and every package script. It records what was
    evaluated, the seed, one entry per top level statement and the final
    resource usage.
    """

    def __init__(self) -> None:
        """
        Initialize the logger with empty statement statistics.
        """
        super().__init__()
        self.logs = {"statements": [], "cells_used": 0, "outcome": None}
        self._started = None

    def log_start(self, data: Dict[str, Any]) -> None:
        """
        Log the target and the seed of the evaluation and start the clock.

        :param data: Dictionary with e.g. target, kind and seed.
        """
        self._started = time.monotonic()
        self.logs.update(data)

    def log_event(self, data: Dict[str, Any]) -> None:
        """
        Log one evaluated statement.

        :param data: Dictionary with statement index and cells used so far.
        """
        self.logs["statements"].append(dict(data))

    def log_end(self, data: Dict[str, Any]) -> None:
        """
        Log the outcome and the elapsed time of the evaluation.

        :param data: Dictionary with outcome and cells used.
        """
        self.logs.update(data)
        if self._started is not None:
            self.logs["elapsed"] = round(time.monotonic() - self._started, 6)
