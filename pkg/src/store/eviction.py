""" Background removal of expired sessions. """

import threading
import time
from typing import Optional

from src.store.session_store import SessionStore
from src.utils.logging import ServerLogger


class EvictionThread(threading.Thread):
    """
    Daemon thread calling evict_expired on the session store at a fixed
    interval until stopped. Sweeps never hold locks readers need.
    """

    def __init__(
        self,
        sessions: SessionStore,
        interval: float,
        logger: Optional[ServerLogger] = None,
    ) -> None:
        """
        Create the thread, call start() to run it.

        :param sessions: The session store to sweep.
        :param interval: Seconds between sweeps.
        :param logger: Optional logger, one event per sweep.
        """
        super().__init__(name="statgate-eviction", daemon=True)
        self.sessions = sessions
        self.interval = interval
        self.logger = logger
        self.stopped = threading.Event()

    def sweep(self) -> int:
        """
        Run one sweep. Failures are logged, never raised.

        :return: Number of removed sessions.
        """
        started = time.monotonic()
        try:
            removed = self.sessions.evict_expired()
        except OSError as error:
            if self.logger is not None:
                self.logger.log_event(
                    {"event": "eviction", "level": "error", "error": error}
                )
            return 0
        if self.logger is not None:
            self.logger.log_event(
                {
                    "event": "eviction",
                    "removed": removed,
                    "seconds": round(time.monotonic() - started, 3),
                }
            )
        return removed

    def run(self) -> None:
        while not self.stopped.wait(self.interval):
            self.sweep()

    def stop(self) -> None:
        self.stopped.set()
