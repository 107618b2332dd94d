"""Concrete Hamiltonians: Hofstadter lattice, drivers, Majorana p-chain.

Lattice sites (m, n) with m the column (x) and n the row (y) are numbered
``n * width + m`` in the single-excitation sector.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from . import algebra
from .algebra import SparseOperator
from .errors import InvalidSpec


@dataclass(frozen=True)
class LatticeSpec:
    width: int
    height: int
    flux: Fraction = Fraction(0)
    gauge: str = "landau"
    boundary: str = "open"

    def __post_init__(self):
        object.__setattr__(self, "flux", Fraction(self.flux))
        if self.width < 1 or self.height < 1:
            raise InvalidSpec(f"lattice must be at least 1x1, got {self.width}x{self.height}")
        if not 0 <= self.flux < 1:
            raise InvalidSpec(f"flux {self.flux} outside [0, 1)")
        if self.gauge != "landau":
            raise InvalidSpec(f"unsupported gauge {self.gauge!r}")
        if self.boundary != "open":
            raise InvalidSpec(f"unsupported boundary {self.boundary!r}")

    @property
    def sites(self) -> int:
        return self.width * self.height

    def index(self, m: int, n: int) -> int:
        return n * self.width + m

    def coords(self) -> list[tuple[int, int]]:
        """(m, n) for every site index in order."""
        return [(i % self.width, i // self.width) for i in range(self.sites)]


@dataclass(frozen=True)
class GaugeField:
    """Link phases in units of 2*pi: theta_x[m, n] on (m,n)->(m+1,n), theta_y[m, n] on (m,n)->(m,n+1)."""

    theta_x: np.ndarray
    theta_y: np.ndarray


def landau_gauge(spec: LatticeSpec) -> GaugeField:
    """(theta_x, theta_y) = (0, m * flux), reduced mod 1 in exact arithmetic."""
    p, q = spec.flux.numerator, spec.flux.denominator
    tx = np.zeros((max(spec.width - 1, 0), spec.height))
    ty = np.empty((spec.width, max(spec.height - 1, 0)))
    for m in range(spec.width):
        ty[m, :] = ((m * p) % q) / q
    return GaugeField(tx, ty)


def _hopping(spec: LatticeSpec, gauge: GaugeField | None) -> SparseOperator:
    rows, cols, vals = [], [], []
    for n in range(spec.height):
        for m in range(spec.width):
            here = spec.index(m, n)
            if m + 1 < spec.width:
                phase = 1.0 if gauge is None else np.exp(2j * np.pi * gauge.theta_x[m, n])
                rows.append(spec.index(m + 1, n))
                cols.append(here)
                vals.append(-phase)
            if n + 1 < spec.height:
                phase = 1.0 if gauge is None else np.exp(2j * np.pi * gauge.theta_y[m, n])
                rows.append(spec.index(m, n + 1))
                cols.append(here)
                vals.append(-phase)
    dim = spec.sites
    forward = sp.coo_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim, dim)).tocsr()
    return SparseOperator(forward + forward.conj().T, hermitian_hint=True)


def build_hofstadter_single_particle(spec: LatticeSpec, gauge: GaugeField | None = None) -> SparseOperator:
    """Tight-binding hopping with Peierls phases, <m+1,n|H|m,n> = -exp(2 pi i theta_x)."""
    if not isinstance(spec, LatticeSpec):
        raise InvalidSpec("expected a LatticeSpec")
    if gauge is None:
        gauge = landau_gauge(spec)
    if gauge.theta_x.shape != (max(spec.width - 1, 0), spec.height) or \
            gauge.theta_y.shape != (spec.width, max(spec.height - 1, 0)):
        raise InvalidSpec("gauge field shape does not match lattice links")
    return _hopping(spec, gauge)


def build_xx_driver_single_particle(spec: LatticeSpec) -> SparseOperator:
    """Single-excitation projection of -sum_<ij> X_i X_j: unit negative hopping, no phases.

    On one-particle states X_i X_j maps |j> to |i>; the pair-creating part
    leaves the sector and is dropped.
    """
    if not isinstance(spec, LatticeSpec):
        raise InvalidSpec("expected a LatticeSpec")
    return _hopping(spec, None)


def nearest_neighbor_bonds(spec: LatticeSpec) -> list[tuple[int, int]]:
    bonds = []
    for n in range(spec.height):
        for m in range(spec.width):
            if m + 1 < spec.width:
                bonds.append((spec.index(m, n), spec.index(m + 1, n)))
            if n + 1 < spec.height:
                bonds.append((spec.index(m, n), spec.index(m, n + 1)))
    return bonds


def project_single_excitation(op: SparseOperator, L: int) -> SparseOperator:
    """Restrict a full 2^L operator to states with exactly one occupied site."""
    idx = np.array([1 << (L - 1 - s) for s in range(L)])
    return SparseOperator(op.csr[idx][:, idx])


def spectrum(H: SparseOperator) -> np.ndarray:
    return np.linalg.eigvalsh(H.to_dense())


def butterfly_sweep(width: int, height: int, fluxes: Sequence, threads: int = 1
                    ) -> list[tuple[Fraction, np.ndarray]]:
    """Sorted single-particle spectra for each flux, in input order."""
    fluxes = [Fraction(f) for f in fluxes]

    def one(f):
        return f, spectrum(build_hofstadter_single_particle(LatticeSpec(width, height, f)))

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, fluxes))
    return [one(f) for f in fluxes]


def ground_state(H: SparseOperator) -> tuple[float, np.ndarray]:
    e, v = np.linalg.eigh(H.to_dense())
    return float(e[0]), v[:, 0]


def site_density(psi: np.ndarray) -> np.ndarray:
    """|psi_i|^2 per lattice site."""
    return np.abs(np.asarray(psi)) ** 2


def build_transverse_field(N: int) -> SparseOperator:
    """-sum_i X_i on N qubits."""
    algebra._check_size(N)
    out = algebra.SparseOperator.zero(2 ** N)
    for i in range(N):
        out = out - algebra.build_site_operator("X", i, N)
    return SparseOperator(out.csr, hermitian_hint=True)


def total_x(N: int) -> SparseOperator:
    algebra._check_size(N)
    out = algebra.SparseOperator.zero(2 ** N)
    for i in range(N):
        out = out + algebra.build_site_operator("X", i, N)
    return out


def build_antiferromagnetic_term(N: int) -> SparseOperator:
    """+N (sum_i X_i / N)^2 = (sum_i X_i)^2 / N."""
    sx = total_x(N)
    return SparseOperator((sx @ sx).csr / N, hermitian_hint=True)


@dataclass(frozen=True)
class MajoranaChainSpec:
    N: int
    p: int

    def __post_init__(self):
        if not 1 <= self.p < self.N:
            raise InvalidSpec(f"need 1 <= p < N, got p={self.p}, N={self.N}")


def build_majorana_chain(spec: MajoranaChainSpec) -> SparseOperator:
    """i sum_{k=1}^{N-p} (c_{2(k+p)-1} c_{2k} + c_{2(k+p)} c_{2k-1})."""
    if not isinstance(spec, MajoranaChainSpec):
        raise InvalidSpec("expected a MajoranaChainSpec")
    N, p = spec.N, spec.p
    c = {mu: algebra.majorana(mu, N) for mu in range(1, 2 * N + 1)}
    out = SparseOperator.zero(2 ** N)
    for k in range(1, N - p + 1):
        out = out + c[2 * (k + p) - 1] @ c[2 * k] + c[2 * (k + p)] @ c[2 * k - 1]
    return SparseOperator((out * 1j).csr, hermitian_hint=True)


def annealing_hamiltonian(H0: SparseOperator, H_af: SparseOperator, H1: SparseOperator,
                          s: float, lam: float) -> SparseOperator:
    """H(s, lambda) = s (lambda H0 + (1 - lambda) H_AF) + (1 - s) H1."""
    return SparseOperator((s * lam) * H0.csr + (s * (1 - lam)) * H_af.csr + (1 - s) * H1.csr,
                          hermitian_hint=True)
