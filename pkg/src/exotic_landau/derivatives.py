"""Finite-difference derivatives used as independent oracles."""

from __future__ import annotations

from typing import Callable, NamedTuple


class Derivative(NamedTuple):
    value: float
    error: float


def central4(f: Callable[[float], float], x: float, h: float) -> float:
    """Fourth-order central stencil."""
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def richardson(f: Callable[[float], float], x: float, h: float) -> Derivative:
    """Richardson-extrapolated ``central4`` from steps h and h/2.

    The error estimate is |D(h) - D(h/2)|, which bounds the unextrapolated
    error at step h.
    """
    d1 = central4(f, x, h)
    d2 = central4(f, x, h / 2)
    return Derivative((16 * d2 - d1) / 15, abs(d1 - d2))
