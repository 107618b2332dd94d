from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fieldanneal import algebra, models
from fieldanneal.errors import DimensionTooLarge, InvalidSpec

import oracles


def open_cosine_spectrum(W, H):
    kx = -2 * np.cos(np.arange(1, W + 1) * np.pi / (W + 1))
    ky = -2 * np.cos(np.arange(1, H + 1) * np.pi / (H + 1))
    return np.sort((kx[:, None] + ky[None, :]).ravel())


def test_two_site_bond():
    for build in (models.build_hofstadter_single_particle, models.build_xx_driver_single_particle):
        assert np.array_equal(build(models.LatticeSpec(2, 1)).to_dense(), [[0, -1], [-1, 0]])


@pytest.mark.parametrize("W,H,p,q", [(3, 3, 1, 3), (4, 3, 2, 7), (5, 4, 1, 11), (2, 6, 3, 5)])
def test_hofstadter_matches_dense_oracle(W, H, p, q):
    op = models.build_hofstadter_single_particle(models.LatticeSpec(W, H, Fraction(p, q)))
    ref = oracles.hofstadter_dense(W, H, p, q)
    assert np.abs(op.to_dense() - ref).max() < 1e-12
    assert np.allclose(models.spectrum(op), np.linalg.eigvalsh(ref), atol=1e-10)


def test_hopping_matrix_element_convention():
    spec = models.LatticeSpec(3, 3, Fraction(1, 4))
    H = models.build_hofstadter_single_particle(spec).to_dense()
    g = models.landau_gauge(spec)
    for n in range(3):
        for m in range(2):
            assert H[spec.index(m + 1, n), spec.index(m, n)] == pytest.approx(-np.exp(2j * np.pi * g.theta_x[m, n]))
        for m in range(3):
            if n < 2:
                assert H[spec.index(m, n + 1), spec.index(m, n)] == pytest.approx(-np.exp(2j * np.pi * m / 4))


def test_zero_flux_cosine_sum():
    for W, H in [(10, 10), (3, 7), (1, 5)]:
        E = models.spectrum(models.build_hofstadter_single_particle(models.LatticeSpec(W, H)))
        assert np.abs(E - open_cosine_spectrum(W, H)).max() < 1e-10


def test_gauge_phase_periodicity():
    spec = models.LatticeSpec(5, 4, Fraction(3, 7))
    g = models.landau_gauge(spec)
    shifted = models.GaugeField(g.theta_x + 2.0, g.theta_y + 1.0)
    a = models.build_hofstadter_single_particle(spec)
    b = models.build_hofstadter_single_particle(spec, shifted)
    assert a.allclose(b, 1e-12)


def test_butterfly_symmetries_and_order_independence():
    fluxes = [Fraction(k, 13) for k in range(1, 13)]
    res = dict(models.butterfly_sweep(4, 4, fluxes))
    for f in fluxes:
        assert np.abs(res[f] - res[1 - f]).max() < 1e-9
        assert np.abs(res[f] + res[f][::-1]).max() < 1e-9
    rev = models.butterfly_sweep(4, 4, fluxes[::-1], threads=2)
    assert [f for f, _ in rev] == fluxes[::-1]
    for f, E in rev:
        assert np.array_equal(E, res[f])


def test_ground_state_density_is_central_at_20x20():
    spec = models.LatticeSpec(20, 20, Fraction(1, 11))
    _, g = models.ground_state(models.build_hofstadter_single_particle(spec))
    dens = models.site_density(g).reshape(20, 20)
    centre = dens[5:15, 5:15].sum()
    assert centre > 0.9
    assert dens.argmax() in [spec.index(m, n) for m in range(7, 13) for n in range(7, 13)]


def test_xx_driver_ground_state_positive():
    _, g = models.ground_state(models.build_xx_driver_single_particle(models.LatticeSpec(3, 3)))
    g = g * np.sign(g[0].real)
    assert np.all(g.real > 0)


def test_xx_driver_is_projection_of_full_xx():
    spec = models.LatticeSpec(3, 2)
    L = spec.sites
    full = algebra.SparseOperator.zero(2 ** L)
    for i, j in models.nearest_neighbor_bonds(spec):
        full = full - algebra.pauli_string({i: "X", j: "X"}, L)
    proj = models.project_single_excitation(full, L)
    assert proj.allclose(models.build_xx_driver_single_particle(spec))


def test_invalid_specs():
    with pytest.raises(InvalidSpec):
        models.LatticeSpec(0, 3)
    with pytest.raises(InvalidSpec):
        models.LatticeSpec(3, 3, Fraction(1))
    with pytest.raises(InvalidSpec):
        models.MajoranaChainSpec(3, 3)
    with pytest.raises(DimensionTooLarge):
        models.build_transverse_field(15)


def test_transverse_field():
    e, v = np.linalg.eigh(models.build_transverse_field(3).to_dense())
    assert e[0] == pytest.approx(-3)
    assert np.allclose(np.abs(v[:, 0]), 1 / np.sqrt(8))
    assert np.linalg.eigvalsh(models.build_transverse_field(8).to_dense())[0] == pytest.approx(-8)


def test_antiferromagnetic_term():
    assert models.build_antiferromagnetic_term(1) == algebra.identity(1)
    assert np.allclose(np.linalg.eigvalsh(models.build_antiferromagnetic_term(2).to_dense()), [0, 0, 2, 2])
    for N in range(1, 9):
        assert np.linalg.eigvalsh(models.build_antiferromagnetic_term(N).to_dense())[0] >= -1e-12


def test_majorana_chain_small():
    H = models.build_majorana_chain(models.MajoranaChainSpec(2, 1)).to_dense()
    c = {mu: oracles.majorana(mu, 2) for mu in range(1, 5)}
    assert np.abs(H - 1j * (c[3] @ c[2] + c[4] @ c[1])).max() < 1e-14


@pytest.mark.parametrize("N,p", [(8, 6), (6, 1), (5, 2)])
def test_majorana_chain_hermitian(N, p):
    H = models.build_majorana_chain(models.MajoranaChainSpec(N, p))
    assert H.is_hermitian(1e-12)


def test_majorana_chain_particle_hole_symmetric():
    E = np.linalg.eigvalsh(models.build_majorana_chain(models.MajoranaChainSpec(6, 1)).to_dense())
    assert np.abs(E + E[::-1]).max() < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 30), st.integers(1, 31))
def test_hofstadter_hermitian(W, H, p, q):
    p = p % q
    op = models.build_hofstadter_single_particle(models.LatticeSpec(W, H, Fraction(p, q)))
    assert op.is_hermitian(1e-12)
    assert op.dim == W * H
