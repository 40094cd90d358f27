"""Truncated single-mode Fock kernels: ladder steps, coherent amplitudes,
Poisson weights and the Mandel parameter."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammainc, gammaln, xlogy

from .errors import InvalidParameter, OverflowGuard


@dataclass(frozen=True)
class FockCutoff:
    """Basis {0, ..., N-1} per mode."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise InvalidParameter(f"Fock cutoff must be an integer >= 2, got {self.N!r}")


class LadderStep(NamedTuple):
    index: int
    amplitude: float
    truncated: bool = False


def _check_index(n: int, cutoff: FockCutoff) -> None:
    if not 0 <= n < cutoff.N:
        raise IndexError(f"level {n} outside basis 0..{cutoff.N - 1}")


def ladder_lower(n: int, cutoff: FockCutoff) -> LadderStep:
    """a|n> = sqrt(n)|n-1>; the vacuum maps to amplitude 0 (index stays 0)."""
    _check_index(n, cutoff)
    if n == 0:
        return LadderStep(0, 0.0)
    return LadderStep(n - 1, float(np.sqrt(n)))


def ladder_raise(n: int, cutoff: FockCutoff) -> LadderStep:
    """a+|n> = sqrt(n+1)|n+1>, flagged when n+1 falls outside the basis."""
    _check_index(n, cutoff)
    return LadderStep(n + 1, float(np.sqrt(n + 1)), truncated=n + 1 >= cutoff.N)


def lowering_matrix(N: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1)


def raising_matrix(N: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), -1)


@dataclass(frozen=True)
class CoherentAmplitudes:
    z: complex
    amps: np.ndarray
    tail_mass: float

    @property
    def N(self) -> int:
        return len(self.amps)

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


def poisson_tail(mean: float, N: int) -> float:
    """P(n >= N) for a Poisson variable of the given mean."""
    if mean == 0:
        return 0.0
    return float(gammainc(N, mean))


def coherent_amps(z: complex, cutoff: FockCutoff) -> CoherentAmplitudes:
    """<n|z> = exp(-|z|^2/2) z^n / sqrt(n!) for n < N, via the ratio recurrence.

    ``tail_mass`` is the exact Poisson mass beyond the cutoff, computed
    independently of the amplitudes (regularised incomplete gamma).
    """
    z = complex(z)
    u = abs(z) ** 2
    if u > cutoff.N:
        raise OverflowGuard(f"|z|^2 = {u:.4g} exceeds cutoff N = {cutoff.N}")
    ratios = np.empty(cutoff.N, dtype=complex)
    ratios[0] = np.exp(-u / 2)
    ratios[1:] = z / np.sqrt(np.arange(1, cutoff.N))
    amps = np.cumprod(ratios)
    return CoherentAmplitudes(z=z, amps=amps, tail_mass=poisson_tail(u, cutoff.N))


def poisson_weight(n, u):
    """exp(-u) u^n / n!, vectorised over n and u = |z|^2."""
    n = np.asarray(n)
    u = np.asarray(u, dtype=float)
    return np.exp(xlogy(n, u) - u - gammaln(n + 1))


def chiral_overlap(n_plus, n_minus, z_plus, z_minus):
    """|(n+, n-|z+, z-)|^2: product of two Poisson weights."""
    return poisson_weight(n_plus, np.abs(z_plus) ** 2) * poisson_weight(
        n_minus, np.abs(z_minus) ** 2
    )


def mandel_parameter(z: complex, cutoff: FockCutoff) -> float:
    """(<n^2> - <n>^2)/<n> - 1 from the truncated weights; 0 for the vacuum."""
    w = coherent_amps(z, cutoff).weights
    if abs(z) == 0:
        return 0.0
    n = np.arange(cutoff.N)
    mean = float(np.dot(n, w))
    var = float(np.dot((n - mean) ** 2, w))
    return var / mean - 1.0
