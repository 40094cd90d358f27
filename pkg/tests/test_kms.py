import math

import numpy as np
import pytest

from exotic_landau import CutoffTooSmall, DimMismatch, DomainGuard, InvalidDensity, InvalidParameter
from exotic_landau import kms
from exotic_landau.kms import HSMatrix
from exotic_landau.quadrature import PhaseQuadrature, PlanarGrid

from oracles import displacement_expm, weyl_expm

LN2 = math.log(2)


def rand_hs(rng, N, K=None, hermitian=False):
    K = N if K is None else K
    e = np.zeros((N, N), complex)
    e[:K, :K] = rng.normal(size=(K, K)) + 1j * rng.normal(size=(K, K))
    if hermitian:
        e = e + e.conj().T
    return HSMatrix(e)


# --- HS space ---------------------------------------------------------------

def test_hs_inner_basis():
    a, b = HSMatrix.basis(0, 1, 5), HSMatrix.basis(1, 0, 5)
    assert kms.hs_inner(a, a) == 1
    assert kms.hs_inner(a, b) == 0


def test_hs_inner_is_trace_and_norm():
    rng = np.random.default_rng(0)
    X, Y = rand_hs(rng, 6), rand_hs(rng, 6)
    assert kms.hs_inner(X, Y) == pytest.approx(np.trace(X.entries.conj().T @ Y.entries), rel=1e-14)
    assert kms.hs_inner(X, X).real == pytest.approx(X.hs_norm ** 2, rel=1e-14)
    assert kms.hs_inner(X, X).real > 0


def test_hs_validation():
    with pytest.raises(DimMismatch):
        HSMatrix(np.zeros((2, 3)))
    with pytest.raises(DimMismatch):
        kms.hs_inner(HSMatrix(np.eye(2)), HSMatrix(np.eye(3)))


def test_vee_actions():
    rng = np.random.default_rng(1)
    X = rand_hs(rng, 5)
    A, B = rand_hs(rng, 5).entries, rand_hs(rng, 5).entries
    np.testing.assert_array_equal(kms.left_action(np.eye(5), X).entries, X.entries)
    lr = kms.left_action(A, kms.right_action(B, X)).entries
    rl = kms.right_action(B, kms.left_action(A, X)).entries
    assert np.max(np.abs(lr - rl)) < 1e-13
    np.testing.assert_allclose(kms.vee(A, B, X).entries, A @ X.entries @ B.conj().T, atol=1e-13)


def test_number_operator_action():
    Nop = np.diag(np.arange(6.0))
    for n, l in [(0, 3), (4, 1), (5, 5)]:
        out = kms.left_action(Nop, HSMatrix.basis(n, l, 6)).entries
        np.testing.assert_array_equal(out, n * HSMatrix.basis(n, l, 6).entries)


def test_ladder_hs():
    assert np.all(kms.ladder_hs(HSMatrix.basis(0, 3, 6), "lower").entries == 0)
    up = kms.ladder_hs(HSMatrix.basis(2, 5, 8), "raise").entries
    np.testing.assert_allclose(up, math.sqrt(3) * HSMatrix.basis(3, 5, 8).entries)
    edge = kms.ladder_hs(HSMatrix.basis(7, 0, 8), "raise")
    assert edge.truncated
    with pytest.raises(InvalidParameter):
        kms.ladder_hs(HSMatrix.basis(0, 0, 3), "sideways")


def test_ladder_commutator():
    N = 20
    rng = np.random.default_rng(2)
    X = rand_hs(rng, N, K=N - 1)
    lr = kms.ladder_hs(kms.ladder_hs(X, "raise"), "lower").entries
    rl = kms.ladder_hs(kms.ladder_hs(X, "lower"), "raise").entries
    comm = lr - rl
    np.testing.assert_allclose(comm[:N - 1], X.entries[:N - 1], atol=1e-12)


# --- displacement -----------------------------------------------------------

def test_displacement_identity_and_vacuum():
    np.testing.assert_allclose(kms.displacement(0, 10), np.eye(10), atol=1e-15)
    for z in (0.3, 1 - 0.5j, 2j):
        assert kms.displacement(z, 40)[0, 0] == pytest.approx(math.exp(-abs(z) ** 2 / 2), rel=1e-14)


@pytest.mark.parametrize("z", [0.5, 0.7 + 0.3j, 1.2j])
def test_displacement_vs_expm(z):
    N = 40
    K = N // 4
    D = kms.displacement(z, N)
    ref = displacement_expm(z, N)
    assert np.max(np.abs(D[:K, :K] - ref[:K, :K])) <= 1e-8


def test_displacement_domain_guard():
    with pytest.raises(DomainGuard):
        kms.displacement(3.5, 40)


@pytest.mark.parametrize("z", [0.5, 0.7 + 0.3j, 1.2j])
def test_unitarity_inner_block(z):
    assert kms.unitarity_defect(z, 40) <= 1e-8


def test_weyl_convention():
    N = 60
    K = 10
    for x, y in [(0.3, -0.4), (1.0, 0.5), (-0.7, 0.0)]:
        D = kms.displacement(kms.weyl_point(x, y), N)
        U = weyl_expm(x, y, N)
        assert np.max(np.abs(D[:K, :K] - U[:K, :K])) < 1e-10


@pytest.mark.parametrize("z,w", [(0.3, 0.4j), (0.5 - 0.2j, -0.3 + 0.6j), (1.0, 0.2 + 0.2j)])
def test_group_law(z, w):
    N = 60
    K = N // 4
    lhs = (kms.displacement(z, N) @ kms.displacement(w, N))[:K, :K]
    rhs = np.exp(1j * np.imag(z * np.conj(w))) * kms.displacement(z + w, N)[:K, :K]
    assert np.max(np.abs(lhs - rhs)) <= 1e-6


# --- Wigner transform -------------------------------------------------------

def test_wigner_of_vacuum_projector_at_origin():
    assert kms.wigner(HSMatrix.basis(0, 0, 8), 0, 0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)


def test_wigner_isometry():
    rng = np.random.default_rng(7)
    q = PhaseQuadrature(64, 64)
    for _ in range(5):
        X, Y = rand_hs(rng, 40, K=10), rand_hs(rng, 40, K=10)
        got = kms.wigner_inner_quadrature(X, Y, q)
        ref = kms.hs_inner(X, Y)
        assert abs(got - ref) <= 1e-6 * abs(ref)


def test_wigner_hermitian_reflection():
    # Tr[U* X] is a characteristic function: real only after pairing (x, y) with (-x, -y)
    rng = np.random.default_rng(8)
    X = rand_hs(rng, 12, K=6, hermitian=True)
    xs, ys = np.meshgrid(np.linspace(-3, 3, 15), np.linspace(-3, 3, 15))
    w, wr = kms.wigner(X, xs, ys), kms.wigner(X, -xs, -ys)
    assert np.max(np.abs(w - np.conj(wr))) < 1e-12
    assert np.max(np.abs(np.imag(w + wr))) < 1e-12


def test_wigner_matches_weyl_trace():
    X = rand_hs(np.random.default_rng(9), 40, K=6)
    U = weyl_expm(0.4, -0.9, 40)
    ref = np.trace(U.conj().T @ X.entries) / math.sqrt(2 * math.pi)
    assert abs(kms.wigner(X, 0.4, -0.9) - ref) < 1e-12


# --- thermal and KMS states -------------------------------------------------

def test_thermal_state():
    ts = kms.thermal_state(1.0, LN2, 50)
    np.testing.assert_allclose(ts.lambdas[:6], 2.0 ** -(np.arange(6) + 1), rtol=1e-14)
    assert abs(ts.lambdas.sum() - 1) < 1e-12
    assert abs(ts.as_hs.hs_norm - 1) < 1e-12
    assert ts.tail <= 1e-12


def test_thermal_state_cutoff_too_small():
    with pytest.raises(CutoffTooSmall):
        kms.thermal_state(1.0, LN2, 8)
    with pytest.raises(InvalidParameter):
        kms.thermal_state(0.0, 1.0, 40)


def test_kms_coherent_origin_and_norm():
    ts = kms.thermal_state(1.0, LN2, 40)
    np.testing.assert_allclose(kms.kms_coherent(0, ts).entries, ts.as_hs.entries, atol=1e-15)
    ts60 = kms.thermal_state(1.0, LN2, 60)
    assert abs(kms.kms_coherent(1.0, ts60).hs_norm - 1) <= 1e-8


def test_kms_coherent_norm_across_domain():
    ts = kms.thermal_state(1.0, LN2, 60)
    for r in np.linspace(0, math.sqrt(60) / 4, 6):
        for ph in (0, 1.1, 2.5):
            assert abs(kms.kms_coherent(r * np.exp(1j * ph), ts).hs_norm - 1) <= 1e-8


@pytest.mark.parametrize("x,y", [(0.0, 0.0), (0.4, -0.3), (-1.0, 0.8)])
def test_kms_components(x, y):
    ts = kms.thermal_state(1.0, LN2, 40)
    v = kms.kms_coherent(kms.weyl_point(x, y), ts).entries
    for j, i in [(0, 0), (1, 0), (0, 2), (3, 1)]:
        psi = kms.wigner(HSMatrix.basis(j, i, 40), x, y)
        ref = math.sqrt(2 * math.pi) * math.sqrt(ts.lambdas[i]) * np.conj(psi)
        assert abs(v[j, i] - ref) < 1e-13


# --- resolution -------------------------------------------------------------

def test_resolution_converges_to_right_thermal_action():
    ts = kms.thermal_state(1.0, LN2, 40)
    r64 = kms.kms_resolution_check(ts, PlanarGrid(6, 64, 64))
    r96 = kms.kms_resolution_check(ts, PlanarGrid(6, 96, 96))
    assert r64.block == 10
    assert r64.deviation <= 1e-3
    assert r96.deviation < r64.deviation
    assert r64.left_trace_deviation <= 1e-3
    # the literal identity target is not the limit
    assert r96.identity_deviation > 0.5


def test_resolution_zero_temperature_limit_is_glauber():
    N = 40
    lam = np.zeros(N)
    lam[0] = 1.0
    ts = kms.ThermalStateVector(math.inf, 1.0, lam, HSMatrix(np.diag(np.sqrt(lam))))
    r = kms.kms_resolution_check(ts, PlanarGrid(6, 64, 64))
    assert r.deviation <= 1e-3


def test_resolution_rejects_small_radius():
    ts = kms.thermal_state(1.0, LN2, 40)
    with pytest.raises(CutoffTooSmall):
        kms.kms_resolution_check(ts, PlanarGrid(2, 32, 32))


# --- Husimi -----------------------------------------------------------------

def test_kms_husimi_origin():
    ts = kms.thermal_state(1.0, LN2, 40)
    rho = ts.density()
    ref = float(np.sum(ts.lambdas * ts.lambdas))
    assert kms.kms_husimi(0, ts, rho) == pytest.approx(ref, rel=1e-13)


def test_kms_husimi_norm_and_positivity():
    ts = kms.thermal_state(1.0, LN2, 40)
    rng = np.random.default_rng(0)
    A = np.zeros((40, 40), complex)
    A[:10, :10] = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10))
    rho = A @ A.conj().T
    rho /= np.trace(rho)
    assert abs(kms.kms_husimi_norm(ts, rho, PlanarGrid(6, 64, 64)) - 1) <= 1e-3
    z = rng.uniform(-3, 3, 100) + 1j * rng.uniform(-3, 3, 100)
    for side in kms.SIDES:
        assert np.all(kms.kms_husimi(z, ts, rho, side) >= 0)


def test_kms_husimi_sides():
    ts = kms.thermal_state(1.0, LN2, 40)
    rho = ts.density()
    z = np.array([0.2, 0.5j, -0.4 + 0.1j])
    vals = {side: kms.kms_husimi(z, ts, rho, side) for side in kms.SIDES}
    for v in vals.values():
        assert np.all(v > 0)
    # rho_beta on the left sees D(z)-shifted weights, on the right only lambda_n
    assert np.max(np.abs(vals["left"] - vals["right"])) > 1e-3
    right_ref = np.sum(ts.lambdas ** 2)
    np.testing.assert_allclose(vals["right"], right_ref, rtol=1e-12)
    with pytest.raises(InvalidParameter):
        kms.kms_husimi(0, ts, rho, "middle")


def test_kms_husimi_invalid_density():
    ts = kms.thermal_state(1.0, LN2, 40)
    with pytest.raises(InvalidDensity):
        kms.kms_husimi(0, ts, 2 * np.eye(40) / 40)
    with pytest.raises(InvalidDensity):
        kms.kms_husimi(0, ts, np.diag([1.5, -0.5] + [0] * 38))
    with pytest.raises(DimMismatch):
        kms.kms_husimi(0, ts, np.eye(3) / 3)


def test_kms_p_weight_constraint():
    ts = kms.thermal_state(1.0, LN2, 40)
    norm_err, weight_err = kms.kms_p_weight_check(ts, PhaseQuadrature())
    assert norm_err < 1e-12
    assert weight_err < 1e-15
