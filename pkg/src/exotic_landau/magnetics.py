"""Landau diamagnetism of the exotic model.

Free energy, magnetization and susceptibility follow the closed forms in
the reduced variable x = beta*hbar*w_c*(1 - eB theta); finite differences of
the free energy provide the consistency oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from .derivatives import richardson
from .errors import InvalidParameter
from .model import EPS_CRIT, DerivedModel, ModelParams, derive

SERIES_X = 0.1  # below this the direct forms lose ~12/x^2 ulps to cancellation


@dataclass(frozen=True)
class MagnetContext:
    params: ModelParams
    volume: float = 1.0
    particle_count: float = 1.0
    thermal_wavelength_beta: bool = False
    length: Optional[float] = None
    radius: Optional[float] = None
    eps_crit: float = EPS_CRIT

    def __post_init__(self):
        if not (self.volume > 0 and self.particle_count > 0):
            raise InvalidParameter("volume and particle_count must be > 0")
        # fail fast on critical fields
        object.__setattr__(self, "_derived", derive(self.params, self.eps_crit))

    @property
    def derived(self) -> DerivedModel:
        return self._derived

    @property
    def thermal_wavelength(self) -> float:
        """(2 pi hbar^2 / M)^{1/2}; with ``thermal_wavelength_beta`` the usual beta^{1/2} is included."""
        p = self.params
        lam2 = 2 * math.pi * p.hbar ** 2 / p.mass
        if self.thermal_wavelength_beta:
            lam2 *= p.beta
        return math.sqrt(lam2)

    @property
    def cyclotron_unit(self) -> float:
        """hbar e / (M c)."""
        p = self.params
        return p.hbar * p.charge / (p.mass * p.c)

    def with_field(self, field: float) -> "MagnetContext":
        return MagnetContext(
            self.params.replace(field=field), self.volume, self.particle_count,
            self.thermal_wavelength_beta, self.length, self.radius, self.eps_crit,
        )


# --- special functions of x -------------------------------------------------

def _log_sinhc(u: float) -> float:
    """ln(sinh(u)/u), stable for all u >= 0."""
    if u < 1e-4:
        return u * u / 6 - u ** 4 / 180
    if u > 20:
        return u - math.log(2 * u) + math.log1p(-math.exp(-2 * u))
    return math.log(math.sinh(u) / u)


def _bracket1(x: float) -> float:
    """1/x - (1/2) coth(x/2)."""
    if x < SERIES_X:
        return -x / 12 + x ** 3 / 720 - x ** 5 / 30240 + x ** 7 / 1209600
    return 1.0 / x - 0.5 / math.tanh(x / 2)


def _bracket2(x: float) -> float:
    """1/x^2 + (1/4)(1 - coth^2(x/2))."""
    if x < SERIES_X:
        return 1.0 / 12 - x ** 2 / 240 + x ** 4 / 6048 - x ** 6 / 172800
    c = 1.0 / math.tanh(x / 2)
    return 1.0 / x ** 2 + 0.25 * (1.0 - c * c)


# --- thermodynamics ---------------------------------------------------------

def log_partition_printed(ctx: MagnetContext) -> float:
    """ln Z for Z = (V/lambda^3) u / sinh(u), u = beta hbar w*_c / 2."""
    p = ctx.params
    u = p.beta * p.hbar * ctx.derived.omega_star / 2
    return math.log(ctx.volume / ctx.thermal_wavelength ** 3) - _log_sinhc(u)


def partition_printed(ctx: MagnetContext) -> float:
    return math.exp(log_partition_printed(ctx))


def free_energy(ctx: MagnetContext) -> float:
    """F = -(n/beta)[ln V/lambda^3 + ln(x/2) - ln sinh(x/2)]."""
    p = ctx.params
    x = ctx.derived.x
    return -(ctx.particle_count / p.beta) * (
        math.log(ctx.volume / ctx.thermal_wavelength ** 3) - _log_sinhc(x / 2)
    )


def magnetization(ctx: MagnetContext) -> float:
    """M = n (hbar e/Mc)(1 - 2eB theta)[1/x - (1/2) coth(x/2)]."""
    p = ctx.params
    return ctx.particle_count * ctx.cyclotron_unit * (1 - 2 * p.ebtheta) * _bracket1(ctx.derived.x)


def susceptibility(ctx: MagnetContext) -> float:
    p = ctx.params
    x = ctx.derived.x
    mu = ctx.cyclotron_unit
    return (
        -2 * mu * p.charge * p.theta * _bracket1(x)
        - mu ** 2 * p.beta * (1 - 2 * p.ebtheta) ** 2 * _bracket2(x)
    )


def susceptibility_high_t(kappa: float, beta: float, params: ModelParams) -> float:
    """chi = -(1/3)(hbar e / 2Mc)^2 beta (1 + 6 kappa + 6 kappa^2)."""
    mu = params.hbar * params.charge / (2 * params.mass * params.c)
    return -(1.0 / 3.0) * mu ** 2 * beta * (1 + 6 * kappa + 6 * kappa ** 2)


def standard_landau_chi(beta: float, params: ModelParams) -> float:
    return susceptibility_high_t(0.0, beta, params)


# --- sign structure ---------------------------------------------------------

class SignRow(NamedTuple):
    kappa: float
    sign: int
    regime: str


def _label(chi: float) -> tuple:
    if chi < 0:
        return -1, "diamagnetic"
    if chi > 0:
        return 1, "paramagnetic"
    return 0, "boundary"


def sign_scan(kappa_grid: Sequence[float], beta: float, params: ModelParams) -> List[SignRow]:
    rows = []
    for k in kappa_grid:
        if not -1 < k <= 0:
            raise InvalidParameter(f"kappa={k} outside (-1, 0]")
        rows.append(SignRow(k, *_label(susceptibility_high_t(k, beta, params))))
    return rows


def sign_boundary(lo: float, hi: float, beta: float, params: ModelParams,
                  xtol: float = 1e-14) -> float:
    """Bisect the high-temperature susceptibility for a sign change in [lo, hi]."""
    return bisect(lambda k: susceptibility_high_t(k, beta, params), lo, hi, xtol=xtol,
                  rtol=4 * np.finfo(float).eps, maxiter=200)


# --- consistency reports ----------------------------------------------------

class PartitionConsistency(NamedTuple):
    log_printed: float
    log_from_free_energy: float
    difference: float


def partition_consistency(ctx: MagnetContext) -> PartitionConsistency:
    """Compare ln Z as printed (argument w*_c) with -beta F / n (argument x).

    The two agree only at theta = 0; the discrepancy is reported, not fixed.
    """
    a = log_partition_printed(ctx)
    b = -ctx.params.beta * free_energy(ctx) / ctx.particle_count
    return PartitionConsistency(a, b, a - b)


def fd_step(field: float) -> float:
    return 1e-5 * max(abs(field), 1.0)


class DerivativeResiduals(NamedTuple):
    magnetization: float
    susceptibility: float


def derivative_residuals(ctx: MagnetContext) -> DerivativeResiduals:
    """Relative residuals of M = -dF/dB and chi = (1/n) dM/dB.

    Derivatives use the fourth-order central stencil with Richardson
    extrapolation; residuals are normalised by max(1, |value|).
    """
    B = ctx.params.field
    h = fd_step(B)
    dF = richardson(lambda b: free_energy(ctx.with_field(b)), B, h).value
    dM = richardson(lambda b: magnetization(ctx.with_field(b)), B, h).value
    m = magnetization(ctx)
    chi = susceptibility(ctx)
    return DerivativeResiduals(
        abs(m + dF) / max(1.0, abs(m)),
        abs(chi - dM / ctx.particle_count) / max(1.0, abs(chi)),
    )


class SweepRow(NamedTuple):
    kappa: float
    B: float
    beta: float
    F: float
    M: float
    chi: float
    chi_highT: float
    sign: int
    res_M: float
    res_chi: float


SWEEP_COLUMNS = SweepRow._fields


def sweep_row(ctx: MagnetContext) -> SweepRow:
    p = ctx.params
    chi = susceptibility(ctx)
    res = derivative_residuals(ctx)
    return SweepRow(
        ctx.derived.kappa, p.field, p.beta, free_energy(ctx), magnetization(ctx), chi,
        susceptibility_high_t(ctx.derived.kappa, p.beta, p), _label(chi)[0],
        res.magnetization, res.susceptibility,
    )
