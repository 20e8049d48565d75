"""Python bindings for the railload C++ core."""

from ._railload import *  # noqa: F401,F403
from ._railload import (
    DegenerateFitError,
    DivergenceError,
    Error,
    FormatError,
    InputError,
    SingularityError,
)

__all__ = [name for name in dir() if not name.startswith("_")]
