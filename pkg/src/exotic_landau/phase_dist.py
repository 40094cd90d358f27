"""Thermal phase-space distributions of the two chiral modes.

Each mode is a harmonic oscillator at inverse temperature beta; the + mode
runs at w_c and the - mode at w*_c. Everything factorises into per-mode
pieces, and the ``*_mode`` helpers expose those pieces directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DeltaLimit, DegenerateTemperature, InvalidParameter, QuadratureDivergence
from .fock import chiral_overlap, poisson_weight
from .model import DerivedModel, ModelParams
from .quadrature import PhaseQuadrature, QuadResult

EPS_P = 1e-8
X_MIN, X_MAX = 1e-10, 700.0
WEHRL_TOL = 1e-6


@dataclass(frozen=True)
class ThermalEnsemble:
    """Occupancies and partition factors for given beta*hbar*omega per mode.

    ``x_plus`` and ``x_minus`` are the dimensionless arguments
    beta*hbar*w_c and beta*hbar*w*_c.
    """

    beta: float
    x_plus: float
    x_minus: float

    @classmethod
    def from_occupancies(cls, nbar: float, nbar_star: float, beta: float = 1.0):
        return cls(beta, math.log1p(1.0 / nbar), math.log1p(1.0 / nbar_star))

    @property
    def nbar(self) -> float:
        return 1.0 / math.expm1(self.x_plus)

    @property
    def nbar_star(self) -> float:
        return 1.0 / math.expm1(self.x_minus)

    @property
    def Z_plus(self) -> float:
        return math.exp(-self.x_plus / 2) / -math.expm1(-self.x_plus)

    @property
    def Z_minus(self) -> float:
        return math.exp(-self.x_minus / 2) / -math.expm1(-self.x_minus)

    @property
    def Z(self) -> float:
        return self.Z_plus * self.Z_minus

    @property
    def q_plus(self) -> float:
        """1 - exp(-beta hbar w_c)."""
        return -math.expm1(-self.x_plus)

    @property
    def q_minus(self) -> float:
        return -math.expm1(-self.x_minus)

    def identity_residual(self) -> float:
        """max |(1 - e^{-x}) - 1/(nbar + 1)| over both modes."""
        return max(
            abs(self.q_plus - 1.0 / (self.nbar + 1.0)),
            abs(self.q_minus - 1.0 / (self.nbar_star + 1.0)),
        )


def ensemble(d: DerivedModel, params: ModelParams) -> ThermalEnsemble:
    xp = params.beta * params.hbar * d.omega_c
    xm = params.beta * params.hbar * d.omega_star
    for name, x in (("beta*hbar*omega_c", xp), ("beta*hbar*omega*_c", xm)):
        if not X_MIN <= x <= X_MAX:
            raise DegenerateTemperature(
                f"{name} = {x:.4g} outside [{X_MIN:g}, {X_MAX:g}]; use the asymptotic limits"
            )
    return ThermalEnsemble(params.beta, xp, xm)


# --- per-mode kernels (u = |z|^2) -------------------------------------------

def geometric_mode(n, nbar: float):
    """1/(nbar+1) (nbar/(nbar+1))^n."""
    n = np.asarray(n)
    return np.exp(n * np.log(nbar / (nbar + 1.0))) / (nbar + 1.0)


def husimi_mode(u, nbar: float):
    """Q(u) = 1/(nbar+1) exp(-u/(nbar+1))."""
    a = 1.0 / (nbar + 1.0)
    return a * np.exp(-a * np.asarray(u))


def p_mode(u, nbar: float, eps_p: float = EPS_P):
    """P(u) = (1/nbar) exp(-u/nbar)."""
    if nbar < eps_p:
        raise DeltaLimit(
            f"mean occupancy {nbar:.3g} < {eps_p:g}: P collapses to a point mass"
        )
    return np.exp(-np.asarray(u) / nbar) / nbar


# --- two-mode distributions -------------------------------------------------

def rho_diag(n_plus, n_minus, ens: ThermalEnsemble):
    """(n+, n-|rho|n+, n-) as a product of two geometric distributions."""
    return geometric_mode(n_plus, ens.nbar) * geometric_mode(n_minus, ens.nbar_star)


def husimi(z_plus, z_minus, ens: ThermalEnsemble):
    """Q-Husimi (z+, z-|rho|z+, z-) in the (1 - e^{-beta hbar w}) form."""
    qp, qm = ens.q_plus, ens.q_minus
    up, um = np.abs(z_plus) ** 2, np.abs(z_minus) ** 2
    return qp * np.exp(-qp * up) * qm * np.exp(-qm * um)


def husimi_occupancy_form(z_plus, z_minus, ens: ThermalEnsemble):
    """Same distribution written with the occupancies, 1/(nbar+1) exp(-|z|^2/(nbar+1))."""
    return husimi_mode(np.abs(z_plus) ** 2, ens.nbar) * husimi_mode(
        np.abs(z_minus) ** 2, ens.nbar_star
    )


def p_function(z_plus, z_minus, ens: ThermalEnsemble, eps_p: float = EPS_P):
    """Glauber-Sudarshan weight (1/nbar) e^{-|z+|^2/nbar} (1/nbar*) e^{-|z-|^2/nbar*}."""
    return p_mode(np.abs(z_plus) ** 2, ens.nbar, eps_p) * p_mode(
        np.abs(z_minus) ** 2, ens.nbar_star, eps_p
    )


def husimi_norm(ens: ThermalEnsemble, quad: PhaseQuadrature) -> QuadResult:
    """int d^2z+ d^2z- / pi^2 of the Husimi function."""
    return quad.integrate_radial2(
        lambda up, um: husimi(np.sqrt(up), np.sqrt(um), ens),
        scales=(ens.nbar + 1.0, ens.nbar_star + 1.0),
    )


def p_norm(ens: ThermalEnsemble, quad: PhaseQuadrature, eps_p: float = EPS_P) -> QuadResult:
    p_function(0, 0, ens, eps_p)  # domain guard before integrating
    return quad.integrate_radial2(
        lambda up, um: p_function(np.sqrt(up), np.sqrt(um), ens, eps_p),
        scales=(ens.nbar, ens.nbar_star),
    )


def smoothed_p_mode(z: complex, nbar: float, quad: PhaseQuadrature) -> QuadResult:
    """int d^2w/pi P(|w|^2) |<z|w>|^2 with |<z|w>|^2 = exp(-|z - w|^2).

    For a thermal mode this Gaussian smoothing of P reproduces Q(|z|^2).
    """
    p_mode(0.0, nbar)
    scale = nbar / (nbar + 1.0)
    return quad.integrate_plane(
        lambda w: p_mode(np.abs(w) ** 2, nbar) * np.exp(-np.abs(z - w) ** 2), scale
    )


def reconstruct_rho_diag(n_plus: int, n_minus: int, ens: ThermalEnsemble,
                         quad: PhaseQuadrature, eps_p: float = EPS_P) -> float:
    """Diagonal of rho rebuilt from its P-representation.

    Integrates P(|z+|^2, |z-|^2) |(n+, n-|z+, z-)|^2 over C^2; the result must
    agree with ``rho_diag``.
    """
    if not (0 <= n_plus <= 10 and 0 <= n_minus <= 10):
        raise InvalidParameter("reconstruction supports 0 <= n+, n- <= 10")
    p_function(0, 0, ens, eps_p)
    # P times the Poisson weight decays as exp(-u (1 + 1/nbar))
    scales = (ens.nbar / (ens.nbar + 1.0), ens.nbar_star / (ens.nbar_star + 1.0))
    res = quad.integrate_radial2(
        lambda up, um: p_function(np.sqrt(up), np.sqrt(um), ens, eps_p)
        * chiral_overlap(n_plus, n_minus, np.sqrt(up), np.sqrt(um)),
        scales=scales,
    )
    return res.value


def trace_truncated(ens: ThermalEnsemble, N: int) -> float:
    n = np.arange(N)
    return float(geometric_mode(n, ens.nbar).sum() * geometric_mode(n, ens.nbar_star).sum())


def trace_tail_bound(ens: ThermalEnsemble, N: int) -> float:
    """(nbar/(nbar+1))^N + (nbar*/(nbar*+1))^N."""
    return float(np.exp(-N * ens.x_plus) + np.exp(-N * ens.x_minus))


def cutoff_for_trace(ens: ThermalEnsemble, tol: float = 1e-12) -> int:
    """Smallest N whose geometric tail bound is below ``tol``."""
    x = min(ens.x_plus, ens.x_minus)
    N = max(2, math.ceil(math.log(2.0 / tol) / x))
    while trace_tail_bound(ens, N) > tol:
        N += 1
    return N


# --- Wehrl entropy ----------------------------------------------------------

def wehrl_mode_closed(x: float) -> float:
    """1 - ln(1 - e^{-x}) = 1 + ln(nbar + 1) for x = beta hbar omega."""
    return 1.0 - math.log(-math.expm1(-x))


def wehrl_factors(ens: ThermalEnsemble):
    return wehrl_mode_closed(ens.x_plus), wehrl_mode_closed(ens.x_minus)


def wehrl_closed(ens: ThermalEnsemble) -> float:
    """Two-mode Wehrl entropy, defined as the product of the per-mode values."""
    wp, wm = wehrl_factors(ens)
    return wp * wm


def wehrl_mode_numeric(nbar: float, quad: PhaseQuadrature) -> QuadResult:
    """-int d^2z/pi Q ln Q for one thermal mode."""

    def integrand(u):
        q = husimi_mode(u, nbar)
        return -q * np.log(q)

    return quad.integrate_radial(integrand, scale=nbar + 1.0)


def wehrl_numeric(ens: ThermalEnsemble, quad: PhaseQuadrature, tol: float = WEHRL_TOL) -> float:
    parts = [wehrl_mode_numeric(ens.nbar, quad), wehrl_mode_numeric(ens.nbar_star, quad)]
    for r in parts:
        if r.error > tol:
            raise QuadratureDivergence(f"Wehrl quadrature error estimate {r.error:.3g} > {tol:g}")
    return parts[0].value * parts[1].value
