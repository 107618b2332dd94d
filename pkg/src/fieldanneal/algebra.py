"""Site-local creation/annihilation operators and their tensor embeddings.

Basis convention: occupation bitstrings |n_0 n_1 ... n_{L-1}> with site 0 as
the most significant bit, so the state index of a bitstring is
``sum(n_i << (L - 1 - i))``.  On one site ``a = [[0, 1], [0, 0]]`` in the
ordering (|0>, |1>), hence ``[a, a^dagger] = Z`` and ``a + a^dagger = X``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, DimensionTooLarge, IndexOutOfRange, InvalidSite

MAX_SITES = 14
PRUNE_THRESHOLD = 1e-15

SITE_KINDS = ("a", "a_dagger", "n", "X", "Y", "Z")


class SparseOperator:
    """Complex sparse matrix in canonical form.

    Canonical means: CSR storage with sorted column indices, duplicates
    summed, and entries with modulus <= 1e-15 removed.  Every arithmetic
    operation returns a new canonical operator; instances are never mutated.
    """

    __slots__ = ("_m", "hermitian_hint")

    def __init__(self, matrix, hermitian_hint: bool = False):
        m = sp.csr_matrix(matrix, dtype=np.complex128)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"operator must be square, got {m.shape}")
        m.sum_duplicates()
        small = np.abs(m.data) <= PRUNE_THRESHOLD
        if small.any():
            m.data[small] = 0.0
            m.eliminate_zeros()
        m.sort_indices()
        m.data.setflags(write=False)
        self._m = m
        self.hermitian_hint = bool(hermitian_hint)

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[tuple[int, int, complex]],
                     hermitian_hint: bool = False) -> "SparseOperator":
        entries = list(entries)
        if not entries:
            return cls.zero(dim)
        rows, cols, vals = zip(*entries)
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if rows.min() < 0 or cols.min() < 0 or rows.max() >= dim or cols.max() >= dim:
            raise IndexOutOfRange("entry index outside operator dimension")
        m = sp.coo_matrix((np.asarray(vals, dtype=np.complex128), (rows, cols)), shape=(dim, dim))
        return cls(m, hermitian_hint)

    @classmethod
    def identity(cls, dim: int) -> "SparseOperator":
        return cls(sp.identity(dim, dtype=np.complex128, format="csr"), hermitian_hint=True)

    @classmethod
    def zero(cls, dim: int) -> "SparseOperator":
        return cls(sp.csr_matrix((dim, dim), dtype=np.complex128), hermitian_hint=True)

    # -- views ----------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self._m.shape[0]

    @property
    def csr(self) -> sp.csr_matrix:
        """The underlying CSR matrix (read-only data)."""
        return self._m

    @property
    def nnz(self) -> int:
        return self._m.nnz

    def entries(self) -> list[tuple[int, int, complex]]:
        coo = self._m.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[k]), int(coo.col[k]), complex(coo.data[k])) for k in order]

    def to_dense(self) -> np.ndarray:
        return self._m.toarray()

    def dagger(self) -> "SparseOperator":
        return SparseOperator(self._m.conj().T, self.hermitian_hint)

    def is_zero(self, atol: float = 0.0) -> bool:
        return self.nnz == 0 or float(np.abs(self._m.data).max()) <= atol

    def max_abs_diff(self, other: "SparseOperator") -> float:
        _check_dims(self, other)
        d = (self._m - other._m).tocoo()
        return float(np.abs(d.data).max()) if d.nnz else 0.0

    def allclose(self, other: "SparseOperator", atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return self.allclose(self.dagger(), atol)

    def expectation(self, psi: np.ndarray) -> complex:
        psi = np.asarray(psi, dtype=np.complex128)
        return complex(np.vdot(psi, self._m @ psi))

    # -- arithmetic -----------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, SparseOperator):
            _check_dims(self, other)
            return SparseOperator(self._m @ other._m)
        return self._m @ other

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        _check_dims(self, other)
        return SparseOperator(self._m + other._m, self.hermitian_hint and other.hermitian_hint)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        _check_dims(self, other)
        return SparseOperator(self._m - other._m, self.hermitian_hint and other.hermitian_hint)

    def __neg__(self) -> "SparseOperator":
        return SparseOperator(-self._m, self.hermitian_hint)

    def __mul__(self, scalar) -> "SparseOperator":
        if isinstance(scalar, SparseOperator):
            return NotImplemented
        scalar = complex(scalar)
        return SparseOperator(self._m * scalar, self.hermitian_hint and scalar.imag == 0.0)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "SparseOperator":
        return self * (1.0 / complex(scalar))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return self.dim == other.dim and self.max_abs_diff(other) == 0.0

    __hash__ = None

    def __repr__(self) -> str:
        return f"SparseOperator(dim={self.dim}, nnz={self.nnz}, hermitian_hint={self.hermitian_hint})"

    # -- text format ----------------------------------------------------------
    def to_text(self) -> str:
        """Line-oriented ``row col re im`` dump, preceded by a ``dim`` header."""
        lines = [f"dim {self.dim}"]
        lines += [f"{r} {c} {v.real!r} {v.imag!r}" for r, c, v in self.entries()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseOperator":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not rows or rows[0][0] != "dim":
            raise ValueError("missing 'dim' header")
        dim = int(rows[0][1])
        return cls.from_entries(dim, ((int(r), int(c), complex(float(re), float(im)))
                                      for r, c, re, im in rows[1:]))


def _check_dims(A: SparseOperator, B: SparseOperator) -> None:
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions differ: {A.dim} vs {B.dim}")


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    basis_kind: str = "occupation"
    dim: int = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be a vector")
        if self.basis_kind not in ("occupation", "single_particle_site"):
            raise ValueError(f"unknown basis kind {self.basis_kind!r}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state not normalized (norm={norm})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dim", amps.size)

    @classmethod
    def normalized(cls, amplitudes, basis_kind: str = "occupation") -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        return cls(amps / np.linalg.norm(amps), basis_kind)

    @classmethod
    def vacuum(cls, L: int) -> "StateVector":
        amps = np.zeros(2 ** L, dtype=np.complex128)
        amps[0] = 1.0
        return cls(amps)

    @classmethod
    def basis_state(cls, bits: str) -> "StateVector":
        """``basis_state("101")`` is |1_0 0_1 1_2>."""
        amps = np.zeros(2 ** len(bits), dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(amps)


# -----------------------------------------------------------------------------
# builders
# -----------------------------------------------------------------------------

def _check_size(L: int) -> None:
    if L < 1:
        raise InvalidSite(f"system size must be positive, got {L}")
    if L > MAX_SITES:
        raise DimensionTooLarge(f"L={L} exceeds the full-space cap of {MAX_SITES} sites")


def _check_site(site: int, L: int) -> None:
    if not 0 <= site < L:
        raise InvalidSite(f"site {site} not in [0, {L})")


def _bits(L: int, site: int) -> tuple[np.ndarray, np.ndarray, int]:
    states = np.arange(2 ** L, dtype=np.int64)
    mask = 1 << (L - 1 - site)
    return states, (states & mask) != 0, mask


def build_site_operator(kind: str, site: int, L: int) -> SparseOperator:
    """Embed a one-site operator at ``site`` in the 2^L-dimensional space."""
    _check_size(L)
    _check_site(site, L)
    states, occ, mask = _bits(L, site)
    dim = states.size
    if kind == "a":
        src = states[occ]
        m = sp.coo_matrix((np.ones(src.size), (src ^ mask, src)), shape=(dim, dim))
        return SparseOperator(m)
    if kind == "a_dagger":
        src = states[~occ]
        m = sp.coo_matrix((np.ones(src.size), (src | mask, src)), shape=(dim, dim))
        return SparseOperator(m)
    if kind == "n":
        return SparseOperator(sp.diags(occ.astype(float)), hermitian_hint=True)
    if kind == "Z":
        return SparseOperator(sp.diags(1.0 - 2.0 * occ), hermitian_hint=True)
    if kind == "X":
        m = sp.coo_matrix((np.ones(dim), (states ^ mask, states)), shape=(dim, dim))
        return SparseOperator(m, hermitian_hint=True)
    if kind == "Y":
        # Y|0> = i|1>, Y|1> = -i|0>
        vals = np.where(occ, -1j, 1j)
        m = sp.coo_matrix((vals, (states ^ mask, states)), shape=(dim, dim))
        return SparseOperator(m, hermitian_hint=True)
    raise ValueError(f"unknown site operator kind {kind!r}; expected one of {SITE_KINDS}")


def identity(L: int) -> SparseOperator:
    _check_size(L)
    return SparseOperator.identity(2 ** L)


def commutator(A: SparseOperator, B: SparseOperator) -> SparseOperator:
    _check_dims(A, B)
    return SparseOperator(A.csr @ B.csr - B.csr @ A.csr)


def anticommutator(A: SparseOperator, B: SparseOperator) -> SparseOperator:
    _check_dims(A, B)
    return SparseOperator(A.csr @ B.csr + B.csr @ A.csr)


def z_string(upto: int, L: int) -> SparseOperator:
    """Product Z_0 Z_1 ... Z_{upto-1}; the identity when ``upto == 0``."""
    _check_size(L)
    if not 0 <= upto <= L:
        raise InvalidSite(f"string length {upto} not in [0, {L}]")
    states = np.arange(2 ** L, dtype=np.int64)
    parity = np.zeros_like(states)
    for s in range(upto):
        parity ^= (states >> (L - 1 - s)) & 1
    return SparseOperator(sp.diags(1.0 - 2.0 * parity), hermitian_hint=True)


def jordan_wigner(site: int, L: int, dagger: bool = False) -> SparseOperator:
    """Fermionic b_j (or b_j^dagger) = Z_0 ... Z_{j-1} a_j."""
    _check_size(L)
    _check_site(site, L)
    local = build_site_operator("a_dagger" if dagger else "a", site, L)
    return z_string(site, L) @ local


def majorana(mu: int, L: int) -> SparseOperator:
    """Majorana operator c_mu, 1-based: c_{2k-1} = b_k + b_k^dagger, c_{2k} = -i(b_k - b_k^dagger)."""
    _check_size(L)
    if not 1 <= mu <= 2 * L:
        raise IndexOutOfRange(f"majorana index {mu} not in [1, {2 * L}]")
    site = (mu + 1) // 2 - 1
    b = jordan_wigner(site, L)
    bd = jordan_wigner(site, L, dagger=True)
    if mu % 2:
        out = b + bd
    else:
        out = (b - bd) * (-1j)
    return SparseOperator(out.csr, hermitian_hint=True)


def pauli_string(ops: dict[int, str], L: int) -> SparseOperator:
    """Product of site operators, e.g. ``{0: "X", 2: "Z"}`` -> X_0 Z_2."""
    out = identity(L)
    for site in sorted(ops):
        out = out @ build_site_operator(ops[site], site, L)
    return out


def embed(local: SparseOperator, offset: int, L: int) -> SparseOperator:
    """Place a 2^k-dimensional operator on sites [offset, offset + k) of L sites."""
    _check_size(L)
    k = int(round(np.log2(local.dim)))
    if 2 ** k != local.dim or offset < 0 or offset + k > L:
        raise InvalidSite(f"cannot embed a {local.dim}-dim operator at offset {offset} of {L} sites")
    left = sp.identity(2 ** offset, format="csr")
    right = sp.identity(2 ** (L - offset - k), format="csr")
    return SparseOperator(sp.kron(sp.kron(left, local.csr), right), local.hermitian_hint)
