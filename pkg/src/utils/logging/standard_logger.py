""" This file implements a logger for arbitrary dictionaries. """

from typing import Any, Dict

from src.utils.logging.base_logger import BaseLogger


class StandardLogger(BaseLogger):
    """
    This class is a standard logger that logs random dictionaries.
    """

    def log_start(self, data: Dict[str, Any]) -> None:
        """
        Store start parameters, overwriting earlier values.

        :param data: The dictionary containing data and config.
        """
        self.logs.update(data)

    def log_event(self, data: Dict[str, Any]) -> None:
        """
        Append every value to the list stored under its key.

        :param data: The dictionary containing event data.
        """
        for key, value in data.items():
            if key not in self.logs.keys():
                self.logs[key] = [value]
            else:
                self.logs[key].append(value)

    def log_end(self, data: Dict[str, Any]) -> None:
        """
        Store final statistics, overwriting earlier values.

        :param data: The dictionary containing final statistics.
        """
        self.logs.update(data)
