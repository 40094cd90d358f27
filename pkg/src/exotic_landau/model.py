"""Parameters, derived frequencies and the two-oscillator spectrum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import CriticalRegime, EmptySpectrum, InvalidParameter

EPS_CRIT = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs of the exotic Landau problem.

    ``mass``, ``charge``, ``hbar``, ``c`` and ``beta`` must be strictly
    positive; ``field`` and ``theta`` non-negative.
    """

    mass: float
    charge: float
    field: float
    theta: float
    beta: float
    hbar: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        for name in ("mass", "charge", "hbar", "c", "beta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParameter(f"{name} must be > 0, got {v!r}")
        for name in ("field", "theta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise InvalidParameter(f"{name} must be >= 0, got {v!r}")

    @property
    def ebtheta(self) -> float:
        return self.charge * self.field * self.theta

    def replace(self, **changes) -> "ModelParams":
        fields = dict(
            mass=self.mass, charge=self.charge, field=self.field, theta=self.theta,
            beta=self.beta, hbar=self.hbar, c=self.c,
        )
        fields.update(changes)
        return ModelParams(**fields)


@dataclass(frozen=True)
class DerivedModel:
    effective_mass: float
    omega_c: float
    omega_star: float
    kappa: float
    critical_field: Optional[float]  # None when theta == 0
    x: float
    reduction: float  # 1 - e B theta


def derive(params: ModelParams, eps_crit: float = EPS_CRIT) -> DerivedModel:
    """Effective mass M* = (1 - eB theta) M and the chiral frequencies.

    Raises CriticalRegime when 1 - eB theta is within ``eps_crit`` of zero or
    negative.
    """
    p = params
    reduction = 1.0 - p.ebtheta
    if abs(reduction) <= eps_crit:
        raise CriticalRegime(
            f"critical field: 1 - e*B*theta = {reduction:.3g}; "
            f"B = {p.field} equals B_c = 1/(e*theta) = {1.0 / (p.charge * p.theta):.6g}"
        )
    if reduction < 0:
        raise CriticalRegime(
            f"supercritical field: 1 - e*B*theta = {reduction:.6g} < 0 "
            f"(B > B_c = {1.0 / (p.charge * p.theta):.6g})"
        )
    omega_c = p.charge * p.field / (p.mass * p.c)
    return DerivedModel(
        effective_mass=reduction * p.mass,
        omega_c=omega_c,
        omega_star=omega_c / reduction,
        kappa=-p.ebtheta,
        critical_field=1.0 / (p.charge * p.theta) if p.theta > 0 else None,
        x=p.beta * p.hbar * omega_c * reduction,
        reduction=reduction,
    )


def energy(n_plus: int, n_minus: int, d: DerivedModel, params: ModelParams) -> float:
    """E = hbar w_c (n+ + 1/2) + hbar w*_c (n- + 1/2)."""
    return params.hbar * (d.omega_c * (n_plus + 0.5) + d.omega_star * (n_minus + 0.5))


def enumerate_levels(
    d: DerivedModel, params: ModelParams, e_max: float
) -> List[Tuple[int, int, float]]:
    """All (n+, n-, E) with E <= e_max, ascending in E.

    Degenerate energies (equal to 12 significant digits) are ordered
    lexicographically on (n+, n-).
    """
    ground = energy(0, 0, d, params)
    if e_max < ground:
        raise EmptySpectrum(f"e_max={e_max} lies below the ground level E_00={ground}")
    if d.omega_c <= 0:
        raise InvalidParameter("zero field: every level is infinitely degenerate")
    levels = []
    n_plus = 0
    while energy(n_plus, 0, d, params) <= e_max:
        n_minus = 0
        while True:
            e = energy(n_plus, n_minus, d, params)
            if e > e_max:
                break
            levels.append((n_plus, n_minus, e))
            n_minus += 1
        n_plus += 1
    levels.sort(key=lambda t: (float(f"{t[2]:.12g}"), t[0], t[1]))
    return levels
