""" Implement the logger used by the running server. """

import logging
from typing import Any, Dict

from src.utils.logging.standard_logger import StandardLogger


class ServerLogger(StandardLogger):
    """
    Standard logger that additionally writes one line per logged event to
    the "statgate" logger of the logging module, so operators can follow
    loaded packages, requests and eviction sweeps.
    """

    def __init__(self, level: str = "INFO", max_events: int = 1000) -> None:
        """
        Initialize the logger.

        :param level: Level name for the output logger.
        :param max_events: Number of events kept in memory per key.
        """
        super().__init__()
        self.max_events = max_events
        self.output = logging.getLogger("statgate")
        self.output.setLevel(level.upper())
        if not self.output.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(
                logging.Formatter("%(asctime)s %(levelname)s %(message)s")
            )
            self.output.addHandler(handler)

    def log_start(self, data: Dict[str, Any]) -> None:
        """
        Log server parameters at startup.

        :param data: The server configuration.
        """
        super().log_start(data)
        fields = " ".join(f"{key}={value}" for key, value in data.items())
        self.output.info(f"starting {fields}")

    def log_event(self, data: Dict[str, Any]) -> None:
        """
        Log one event and emit it as a single line.

        :param data: Event dictionary, "event" names the kind of event.
        """
        super().log_event(data)
        for key in data.keys():
            if len(self.logs[key]) > self.max_events:
                del self.logs[key][0]
        event = data.get("event", "event")
        fields = " ".join(
            f"{key}={value}" for key, value in data.items() if key != "event"
        )
        if data.get("level") == "error":
            self.output.error(f"{event} {fields}")
        else:
            self.output.info(f"{event} {fields}")

    def log_end(self, data: Dict[str, Any]) -> None:
        """
        Log the shutdown of the server.

        :param data: Final statistics.
        """
        super().log_end(data)
        self.output.info("shutdown")
