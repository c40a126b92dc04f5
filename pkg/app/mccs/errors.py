"""
Exceptions raised by the connected subgraph solvers.
"""

from typing import Optional


class MCCSError(Exception):
    """Base class for all solver-side errors."""


class GraphError(MCCSError, ValueError):
    """Invalid graph construction (bad extents, index out of range, self-loop)."""


class InputError(MCCSError, ValueError):
    """Invalid numeric input: probabilities, weights, constraint arguments."""


class SeparatorError(MCCSError):
    """A separator strategy was called outside its preconditions."""


class InstanceFormatError(MCCSError, ValueError):
    """Malformed instance or solution file."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")
