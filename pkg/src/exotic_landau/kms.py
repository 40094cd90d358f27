"""Truncated Hilbert-Schmidt space and coherent states built on the
oscillator thermal (KMS) state.

An element X of B_2(H) is stored as its N x N coefficient grid in the basis
Psi_nl = |n><l|. Operators A on H act on HS space through A v B (X) = A X B*.

Phase-space convention: the Weyl operator U(x, y) = exp(-i(xQ + yP)), with
Q = (a + a+)/sqrt 2 and P = (a - a+)/(i sqrt 2), equals the displacement
D(alpha) = exp(alpha a+ - conj(alpha) a) at alpha = (y - i x)/sqrt 2.
Under this map dx dy / 2 pi = d^2 alpha / pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import CutoffTooSmall, DimMismatch, DomainGuard, InvalidDensity, InvalidParameter
from .quadrature import PhaseQuadrature, PlanarGrid

THERMAL_TAIL = 1e-12
SIDES = ("left", "right", "two-sided")


@dataclass(frozen=True)
class HSMatrix:
    entries: np.ndarray
    truncated: bool = False

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise DimMismatch(f"HS matrix must be square, got shape {e.shape}")
        object.__setattr__(self, "entries", e)

    @classmethod
    def basis(cls, n: int, l: int, N: int) -> "HSMatrix":
        e = np.zeros((N, N), dtype=complex)
        e[n, l] = 1.0
        return cls(e)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def hs_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.entries) ** 2)))


def _same_dim(*dims):
    if len(set(dims)) != 1:
        raise DimMismatch(f"dimension mismatch: {dims}")


def hs_inner(X: HSMatrix, Y: HSMatrix) -> complex:
    """<X|Y>_2 = Tr[X* Y], conjugate-linear in X."""
    _same_dim(X.dim, Y.dim)
    return complex(np.vdot(X.entries, Y.entries))


def vee(A, B, X: HSMatrix) -> HSMatrix:
    """(A v B)(X) = A X B*."""
    A, B = np.asarray(A), np.asarray(B)
    _same_dim(A.shape[0], B.shape[0], X.dim)
    return HSMatrix(A @ X.entries @ B.conj().T)


def left_action(A, X: HSMatrix) -> HSMatrix:
    """A v I: left multiplication."""
    A = np.asarray(A)
    _same_dim(A.shape[0], A.shape[1], X.dim)
    return HSMatrix(A @ X.entries)


def right_action(B, X: HSMatrix) -> HSMatrix:
    """I v B: right multiplication by B*."""
    B = np.asarray(B)
    _same_dim(B.shape[0], B.shape[1], X.dim)
    return HSMatrix(X.entries @ B.conj().T)


def ladder_hs(X: HSMatrix, which: str) -> HSMatrix:
    """A_1 / A_1+ acting on the left index of Psi_nl.

    Raising pushes row N-1 out of the basis; the result is flagged
    ``truncated`` when that row carried weight.
    """
    e = X.entries
    N = X.dim
    out = np.zeros_like(e)
    s = np.sqrt(np.arange(N, dtype=float))
    if which == "lower":
        out[:-1] = s[1:, None] * e[1:]
        return HSMatrix(out)
    if which == "raise":
        out[1:] = s[1:, None] * e[:-1]
        return HSMatrix(out, truncated=bool(np.any(e[-1] != 0)))
    raise InvalidParameter(f"which must be 'raise' or 'lower', got {which!r}")


# --- displacement -----------------------------------------------------------

def weyl_point(x, y):
    """alpha such that exp(-i(xQ + yP)) = D(alpha)."""
    return (np.asarray(y) - 1j * np.asarray(x)) / math.sqrt(2)


def displacement_elements(z, rows: int, cols: int | None = None) -> np.ndarray:
    """<m|D(z)|n> for m < rows, n < cols from the associated-Laguerre closed form.

    These are the exact matrix elements of the untruncated operator, so no
    domain guard applies. ``z`` may be an array; the result then has shape
    z.shape + (rows, cols).
    """
    cols = rows if cols is None else cols
    z = np.asarray(z, dtype=complex)[..., None, None]
    m = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    lo, hi = np.minimum(m, n), np.maximum(m, n)
    k = hi - lo
    u = np.abs(z) ** 2
    phase = np.where(m >= n, z, -np.conj(z))
    log_mag = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) - u / 2
    with np.errstate(invalid="ignore"):
        powk = np.where(k == 0, 1.0 + 0j, phase ** k)
    return np.exp(log_mag) * powk * eval_genlaguerre(lo, k, u)


def displacement(z: complex, N: int) -> np.ndarray:
    """Truncated N x N displacement matrix; requires |z|^2 <= N/4."""
    if abs(z) ** 2 > N / 4:
        raise DomainGuard(f"|z|^2 = {abs(z) ** 2:.4g} > N/4 = {N / 4:g}")
    return displacement_elements(z, N)


def unitarity_defect(z: complex, N: int, block: int | None = None) -> float:
    """max |D D+ - I| on the inner block (default N/4) of the truncated matrix."""
    D = displacement(z, N)
    k = N // 4 if block is None else block
    return float(np.max(np.abs((D @ D.conj().T)[:k, :k] - np.eye(k))))


# --- Wigner transform -------------------------------------------------------

WIGNER_NORM = 1.0 / math.sqrt(2 * math.pi)


def _support(*Xs: HSMatrix) -> int:
    """Smallest K such that every X vanishes outside its leading K x K block."""
    K = 1
    for X in Xs:
        nz = np.nonzero(X.entries)
        if len(nz[0]):
            K = max(K, int(max(nz[0].max(), nz[1].max())) + 1)
    return K


def _wigner_alpha(X: HSMatrix, alpha, K: int | None = None) -> np.ndarray:
    K = _support(X) if K is None else K
    U = displacement_elements(alpha, K)
    # Tr[U* X] = sum_{n,l} conj(U_nl) X_nl
    return WIGNER_NORM * np.einsum("...nl,nl->...", U.conj(), X.entries[:K, :K])


def wigner(X: HSMatrix, x, y):
    """(W X)(x, y) = (2 pi)^{-1/2} Tr[U(x, y)* X]."""
    out = _wigner_alpha(X, weyl_point(x, y))
    return complex(out) if np.ndim(out) == 0 else out


def wigner_inner_quadrature(X: HSMatrix, Y: HSMatrix, quad: PhaseQuadrature) -> complex:
    """int dx dy conj(W X) W Y, evaluated in the alpha plane (dx dy = 2 pi d^2alpha/pi)."""
    _same_dim(X.dim, Y.dim)
    z, w = quad.plane_nodes(scale=1.0)
    K = _support(X, Y)
    wx = _wigner_alpha(X, z, K)
    wy = _wigner_alpha(Y, z, K)
    return complex(2 * math.pi * np.sum(w * np.conj(wx) * wy))


# --- thermal state and KMS coherent states ----------------------------------

@dataclass(frozen=True)
class ThermalStateVector:
    beta: float
    omega: float
    lambdas: np.ndarray
    as_hs: HSMatrix

    @property
    def N(self) -> int:
        return len(self.lambdas)

    @property
    def tail(self) -> float:
        return math.exp(-self.N * self.omega * self.beta)

    def density(self) -> np.ndarray:
        """rho_beta = diag(lambda_n)."""
        return np.diag(self.lambdas).astype(complex)


def thermal_state(beta: float, omega: float, N: int, tail_tol: float = THERMAL_TAIL):
    """Phi_beta with lambda_n = (1 - e^{-w beta}) e^{-n w beta}."""
    wb = omega * beta
    if not wb > 0:
        raise InvalidParameter(f"omega*beta must be > 0, got {wb}")
    tail = math.exp(-N * wb)
    if tail > tail_tol:
        raise CutoffTooSmall(
            f"thermal tail exp(-N w beta) = {tail:.3g} > {tail_tol:g} at N = {N}; "
            f"need N >= {math.ceil(-math.log(tail_tol) / wb)}"
        )
    lam = -math.expm1(-wb) * np.exp(-wb * np.arange(N))
    return ThermalStateVector(beta, omega, lam, HSMatrix(np.diag(np.sqrt(lam))))


def kms_coherent(z: complex, ts: ThermalStateVector) -> HSMatrix:
    """|z, zbar, beta>^KMS = D(z) Phi_beta, i.e. left multiplication by D(z)."""
    return left_action(displacement(z, ts.N), ts.as_hs)


class ResolutionReport(NamedTuple):
    identity_deviation: float
    deviation: float
    left_trace_deviation: float
    grid_tail_bound: float
    thermal_tail: float
    block: int


def resolution_operator(ts: ThermalStateVector, grid: PlanarGrid, block: int) -> np.ndarray:
    """(1/2 pi) int dx dy |z><z| restricted to Psi_ji with j, i < block.

    Rows and columns are indexed by j * block + i.
    """
    z, w = grid.nodes()
    v = displacement_elements(z, block) * np.sqrt(ts.lambdas[:block])[None, None, :]
    v = v.reshape(len(z), block * block)
    return (v.T * w) @ v.conj()


def kms_resolution_check(ts: ThermalStateVector, grid: PlanarGrid,
                         tol: float = 1e-3) -> ResolutionReport:
    """Quadrature of the KMS coherent-state projector sum on the inner block.

    ``identity_deviation`` compares with the HS identity. ``deviation``
    compares with the operator the integral actually converges to,
    X -> X rho_beta (identity on the left index, thermal weights on the right).
    ``left_trace_deviation`` traces out the right index and compares with the
    identity on the left factor.
    """
    if grid.tail_bound > tol:
        raise CutoffTooSmall(f"grid radius {grid.radius} leaves rim weight {grid.tail_bound:.3g} > {tol:g}")
    K = ts.N // 4
    R = resolution_operator(ts, grid, K)
    target = np.kron(np.eye(K), np.diag(ts.lambdas[:K]))
    left = np.einsum("jili->jl", R.reshape(K, K, K, K))
    return ResolutionReport(
        identity_deviation=float(np.max(np.abs(R - np.eye(K * K)))),
        deviation=float(np.max(np.abs(R - target))),
        left_trace_deviation=float(np.max(np.abs(left - np.eye(K) * ts.lambdas[:K].sum()))),
        grid_tail_bound=grid.tail_bound,
        thermal_tail=ts.tail,
        block=K,
    )


def _validate_density(rho: np.ndarray, tol: float = 1e-10) -> None:
    tr = np.trace(rho)
    if abs(tr - 1) > tol:
        raise InvalidDensity(f"trace of rho is {tr.real:.12g}, not 1")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidDensity("rho is not self-adjoint")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise InvalidDensity("rho is not positive semi-definite")


def _psd_sqrt(rho):
    vals, vecs = np.linalg.eigh(rho)
    return (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T


def kms_husimi(z, ts: ThermalStateVector, rho_op, side: str = "left"):
    """<z, zbar, beta| rho |z, zbar, beta>^KMS for one point or an array of points.

    ``side`` selects how rho acts on HS space: ``left`` (rho v I, default),
    ``right`` (I v rho) or ``two-sided`` (rho^{1/2} X rho^{1/2}). The KMS
    vectors are built from exact displacement elements, so the domain guard
    of ``kms_coherent`` does not apply.
    """
    rho = np.asarray(rho_op, dtype=complex)
    _same_dim(rho.shape[0], rho.shape[1], ts.N)
    _validate_density(rho)
    if side not in SIDES:
        raise InvalidParameter(f"side must be one of {SIDES}, got {side!r}")
    z = np.asarray(z, dtype=complex)
    phi = displacement_elements(z, ts.N) * np.sqrt(ts.lambdas)[None, :]
    if side == "left":
        acted = rho @ phi
    elif side == "right":
        acted = phi @ rho.conj().T
    else:
        s = _psd_sqrt(rho)
        acted = s @ phi @ s
    val = np.einsum("...nl,...nl->...", phi.conj(), acted).real
    return float(val) if val.ndim == 0 else val


def kms_husimi_norm(ts: ThermalStateVector, rho_op, grid: PlanarGrid, side: str = "left",
                    chunk: int = 512) -> float:
    """(1/2 pi) int dx dy kms_husimi on the planar grid."""
    z, w = grid.nodes()
    total = 0.0
    for s in range(0, len(z), chunk):
        total += float(np.dot(w[s:s + chunk], kms_husimi(z[s:s + chunk], ts, rho_op, side)))
    return total


def kms_p_weight_check(ts: ThermalStateVector, quad: PhaseQuadrature):
    """Normalization constraint extractable from the KMS P-relation.

    Returns (|int d^2z/pi P - 1|, max_n |lambda_n - geometric(n; nbar)|) with
    nbar = 1/(e^{w beta} - 1) and P(u) = exp(-u/nbar)/nbar.
    """
    wb = ts.omega * ts.beta
    nbar = 1.0 / math.expm1(wb)
    norm = quad.integrate_radial(lambda u: np.exp(-u / nbar) / nbar, scale=nbar).value
    n = np.arange(ts.N)
    geo = (nbar / (nbar + 1)) ** n / (nbar + 1)
    return abs(norm - 1.0), float(np.max(np.abs(ts.lambdas - geo)))
