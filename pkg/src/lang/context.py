""" Evaluation contexts and their resource budgets. """

import os
import threading
import time
from typing import Dict, List, Optional, Sequence

from src.errors import ResourceError
from src.lang.graphics import GraphicsDevice
from src.lang.rng import Rng
from src.utils.logging import EvaluationLogger
from src.values.value import Value

MAX_DEPTH = 100


class Budget:
    """
    Wall clock deadline and value cell allowance of one evaluation. The
    deadline can be enforced from another thread by cancelling the budget.
    """

    def __init__(self, timeout: float = 30.0, cell_limit: int = 10**7) -> None:
        """
        Start the budget clock.

        :param timeout: Wall clock seconds until the deadline.
        :param cell_limit: Maximum number of value cells to allocate.
        """
        self.timeout = float(timeout)
        self.cell_limit = int(cell_limit)
        self.cells_used = 0
        self.deadline = time.monotonic() + self.timeout
        self.cancelled = threading.Event()

    def cancel(self) -> None:
        self.cancelled.set()

    def check(self) -> None:
        """
        Check the deadline.

        :raise ResourceError: If the deadline passed or the budget was
            cancelled.
        """
        if self.cancelled.is_set() or time.monotonic() > self.deadline:
            raise ResourceError(
                "time limit", f"time limit of {self.timeout:g} s exceeded"
            )

    def charge(self, cells: int) -> None:
        """
        Reserve value cells before they are allocated.

        :param cells: Number of cells about to be allocated.
        :raise ResourceError: If the deadline passed or the cell limit
            would be exceeded.
        """
        self.check()
        if self.cells_used + cells > self.cell_limit:
            raise ResourceError(
                "cell limit",
                f"cell limit of {self.cell_limit} cells exceeded",
            )
        self.cells_used += int(cells)


class EvalContext:
    """
    The isolated world of one RPC: a private namespace, a stdout buffer,
    a graphics device, the random number state and the resource budget.
    """

    def __init__(
        self,
        namespace: Optional[Dict[str, Value]] = None,
        seed: int = 0,
        budget: Optional[Budget] = None,
        workdir: Optional[str] = None,
        readonly_roots: Sequence[str] = (),
        logger: Optional[EvaluationLogger] = None,
    ) -> None:
        """
        Create the context.

        :param namespace: Initial namespace, e.g. the resolved arguments.
        :param seed: Seed of the random number generator.
        :param budget: The resource budget, a default budget if omitted.
        :param workdir: Directory for files written and read by code.
        :param readonly_roots: Further directories code may read from.
        :param logger: Optional statistics logger.
        """
        self.namespace = dict(namespace or {})
        self.budget = budget or Budget()
        self.rng = Rng(seed, self.budget.check)
        self.workdir = workdir
        self.readonly_roots = [
            os.path.abspath(root) for root in readonly_roots
        ]
        self.logger = logger
        self.device = GraphicsDevice()
        self.stdout: List[str] = []
        self.warnings: List[str] = []
        self.transcript = []
        self.visible = True
        self.depth = 0

    @property
    def seed(self) -> int:
        return self.rng.seed

    def write(self, text: str) -> None:
        self.stdout.append(text)

    def output(self) -> str:
        return "".join(self.stdout)

    def warn(self, message: str) -> None:
        """
        Record a warning and echo it to stdout.

        :param message: The warning text.
        """
        self.warnings.append(message)
        self.write(f"Warning message:\n{message}\n")

    def enter(self) -> None:
        """
        Enter a function call.

        :raise ResourceError: If the call depth limit is reached.
        """
        if self.depth >= MAX_DEPTH:
            raise ResourceError(
                "call depth",
                f"call depth limit of {MAX_DEPTH} nested calls exceeded",
            )
        self.depth += 1

    def leave(self) -> None:
        self.depth = max(self.depth - 1, 0)
