"""Exception types shared across the package."""

from __future__ import annotations


class DPFlexError(Exception):
    """Base class for all package errors."""


class InputError(DPFlexError):
    """Malformed input (files, tables, parameters)."""


class NotSimple(InputError):
    pass


class NotSymmetric(InputError):
    pass


class EmbeddingInconsistent(InputError):
    """Face tracing violates Euler's formula, so the rotation system is not planar."""


class Disconnected(DPFlexError):
    pass


class OutOfClass(DPFlexError):
    """Graph contains a 4-cycle or two intersecting triangles, or a query precondition failed."""


class NotA5Face(DPFlexError):
    pass


class BudgetExceeded(DPFlexError):
    pass


class NoExtension(DPFlexError):
    """A verified block admitted no extension; indicates a verification bug."""


class Stuck(DPFlexError):
    """Resolution could not continue on a nonempty residual."""

    def __init__(self, residual, message: str = "") -> None:
        self.residual = residual
        super().__init__(message or f"no verified reducible block in residual of size {len(residual)}")
