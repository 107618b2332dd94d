import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fieldanneal import otoc
from fieldanneal.algebra import SparseOperator, StateVector
from fieldanneal.errors import DimensionMismatch, DimensionTooLarge, InvalidSpec
from fieldanneal.semiclassical import finite_hamiltonian

X = np.array([[0, 1], [1, 0]], complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def op(m):
    return SparseOperator(np.asarray(m, complex))


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_state(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return StateVector.normalized(v)


def test_single_qubit_conjugation():
    assert otoc.heisenberg_evolve(op(X), op(Z), math.pi / 2).to_dense() == pytest.approx(-X, abs=1e-12)
    assert otoc.heisenberg_evolve(op(X), op(Z), 0.0).to_dense() == pytest.approx(X, abs=1e-12)
    # closed form e^{itZ} X e^{-itZ} = cos(2t) X - sin(2t) Y
    t = 0.37
    want = math.cos(2 * t) * X - math.sin(2 * t) * Y
    assert otoc.heisenberg_evolve(op(X), op(Z), t).to_dense() == pytest.approx(want, abs=1e-12)


def test_commuting_operator_is_static():
    rng = np.random.default_rng(1)
    H = random_hermitian(rng, 8)
    W = H @ H - 0.3 * H
    for t in (0.0, 0.7, 13.0):
        assert otoc.heisenberg_evolve(op(W), op(H), t).to_dense() == pytest.approx(W, abs=1e-10)


def test_dimension_guards():
    big = SparseOperator.identity(512)
    with pytest.raises(DimensionTooLarge):
        otoc.heisenberg_evolve(big, big, 1.0)
    with pytest.raises(DimensionTooLarge):
        otoc.OtocSpec(big, big)
    with pytest.raises(DimensionMismatch):
        otoc.heisenberg_evolve(op(X), SparseOperator.identity(4), 1.0)
    with pytest.raises(InvalidSpec):
        otoc.OtocSpec(op(Z), op([[0, 1], [0, 0]]))


def test_F_constant_for_commuting_involution():
    # V = Z commutes with H = Z and squares to one
    series = otoc.compute_F(otoc.OtocSpec(op(Z), op(Z), t_max=5.0, samples=50))
    assert np.allclose(series.F_values, 1.0, atol=1e-12)
    assert series.F_hat == pytest.approx(1.0, abs=1e-12)


def test_F_constant_when_V_is_function_of_H():
    rng = np.random.default_rng(2)
    H = random_hermitian(rng, 16)
    V = H @ H @ H - 2 * H
    spec = otoc.OtocSpec(op(H), op(V), random_state(rng, 16), t_max=10.0, samples=40)
    F = otoc.compute_F(spec).F_values
    assert np.allclose(F, F[0], atol=1e-9)


def test_F_at_zero_is_fourth_moment():
    rng = np.random.default_rng(3)
    H, V = random_hermitian(rng, 16), random_hermitian(rng, 16)
    psi = random_state(rng, 16)
    spec = otoc.OtocSpec(op(H), op(V), psi, t_max=1.0, samples=3)
    F0 = otoc.compute_F(spec).F_values[0]
    a = psi.amplitudes
    assert F0 == pytest.approx(np.vdot(a, np.linalg.matrix_power(V, 4) @ a), abs=1e-10)
    assert abs(F0) <= np.linalg.norm(V, 2) ** 4 + 1e-10


def test_F_matches_dense_oracle_at_later_time():
    rng = np.random.default_rng(4)
    H, V = random_hermitian(rng, 8), random_hermitian(rng, 8)
    psi = random_state(rng, 8)
    spec = otoc.OtocSpec(op(H), op(V), psi, t_max=2.0, samples=5)
    series = otoc.compute_F(spec)
    a = psi.amplitudes
    from scipy.linalg import expm
    for t, f in zip(series.times, series.F_values):
        U = expm(1j * t * H)
        Vt = U @ V @ U.conj().T
        assert f == pytest.approx(np.vdot(a, Vt @ V @ Vt @ V @ a), abs=1e-10)


def test_F_hat_is_trapezoid_average():
    spec = otoc.OtocSpec(finite_hamiltonian(4, 2, 0.5, 0.5), otoc.default_V(4), t_max=7.0, samples=71)
    s = otoc.compute_F(spec)
    assert s.F_hat == pytest.approx(np.trapezoid(s.F_values, s.times) / 7.0, abs=1e-14)


def test_C_single_qubit_closed_form():
    # [X(t), X] = 2i sin(2t) Z, so C = 4 sin^2(2t) for every normalized psi
    rng = np.random.default_rng(5)
    spec = otoc.OtocSpec(op(Z), op(X), random_state(rng, 2), t_max=3.0, samples=31)
    C = otoc.compute_C(spec, op(X))
    assert C == pytest.approx(4 * np.sin(2 * spec.times) ** 2, abs=1e-12)


def test_C_zero_for_commuting_pair_at_t0():
    spec = otoc.OtocSpec(finite_hamiltonian(3, 1, 0.4, 0.5), otoc.default_V(3), t_max=1.0, samples=2)
    assert otoc.compute_C(spec, otoc.default_V(3), times=[0.0])[0] == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize("N", [3, 4, 6])
def test_C_two_forms_agree(N):
    rng = np.random.default_rng(N)
    H = finite_hamiltonian(N, 2, 0.6, 0.3)
    W = op(random_hermitian(rng, 2 ** N))
    spec = otoc.OtocSpec(H, otoc.default_V(N), t_max=4.0, samples=9)
    a = otoc.compute_C(spec, W)
    b = otoc.compute_C_four_point(spec, W)
    assert np.abs(a - b).max() < 1e-9
    assert (a >= -1e-10).all()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 4), st.floats(0, 20))
def test_C_nonnegative(seed, n, t):
    rng = np.random.default_rng(seed)
    d = 2 ** n
    spec = otoc.OtocSpec(op(random_hermitian(rng, d)), op(random_hermitian(rng, d)), random_state(rng, d))
    W = op(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    assert otoc.compute_C(spec, W, times=[t])[0] >= -1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 4), st.floats(-30, 30))
def test_heisenberg_preserves_spectrum(seed, n, t):
    rng = np.random.default_rng(seed)
    d = 2 ** n
    H, W = random_hermitian(rng, d), random_hermitian(rng, d)
    Wt = otoc.heisenberg_evolve(op(W), op(H), t).to_dense()
    assert np.abs(np.linalg.eigvalsh(Wt) - np.linalg.eigvalsh(W)).max() < 1e-10


def test_fhat_converges_with_samples_at_n8():
    a = otoc.fhat_at(8, 6, 0.5, 1.0, samples=otoc.DEFAULT_SAMPLES).F_hat
    b = otoc.fhat_at(8, 6, 0.5, 1.0, samples=2 * otoc.DEFAULT_SAMPLES).F_hat
    assert abs(a - b) < 1e-4


def test_sweep_threads_and_order():
    s_vals = [0.2, 0.5, 0.8]
    one = otoc.fhat_sweep(4, 2, 0.5, s_vals, t_max=5.0, samples=20)
    two = otoc.fhat_sweep(4, 2, 0.5, s_vals, t_max=5.0, samples=20, threads=2)
    assert [x.F_hat for x in one] == [x.F_hat for x in two]
    assert one[1].F_hat == otoc.fhat_at(4, 2, 0.5, 0.5, t_max=5.0, samples=20).F_hat


def test_steepest_change():
    s = [0.0, 0.1, 0.2, 0.3]
    assert otoc.steepest_change(s, [1.0, 1.0, 0.2, 0.1]) == pytest.approx(0.15)
