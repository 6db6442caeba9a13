"""Stable PPS sampling and stable combinatorial solvers."""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    ContractViolation,
    DomainError,
    Error,
    InfeasibleError,
    InputError,
    ScaleError,
)

__version__ = "0.1.0"
