"""Out-of-time-ordered correlators on small dense systems.

Everything is done in the eigenbasis of H, where the Heisenberg picture is
a phase: W(t)[m, n] = W[m, n] exp(i (E_m - E_n) t).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import models
from .algebra import SparseOperator, StateVector
from .errors import DiagonalizationFailure, DimensionMismatch, DimensionTooLarge, InvalidSpec
from .semiclassical import finite_hamiltonian

MAX_OTOC_DIM = 256
DEFAULT_T_MAX = 50.0
DEFAULT_SAMPLES = 500


def _eigh(H: SparseOperator) -> tuple[np.ndarray, np.ndarray]:
    if H.dim > MAX_OTOC_DIM:
        raise DimensionTooLarge(f"dimension {H.dim} exceeds {MAX_OTOC_DIM} for dense evolution")
    try:
        return np.linalg.eigh(H.to_dense())
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationFailure(str(exc)) from exc


def heisenberg_evolve(op: SparseOperator, H: SparseOperator, t: float) -> SparseOperator:
    """e^{itH} op e^{-itH} through the eigendecomposition of H."""
    if op.dim != H.dim:
        raise DimensionMismatch(f"operator dimension {op.dim} vs Hamiltonian {H.dim}")
    e, U = _eigh(H)
    d = np.exp(1j * e * t)
    We = U.conj().T @ op.to_dense() @ U
    return SparseOperator(U @ (d[:, None] * We * d.conj()[None, :]) @ U.conj().T)


@dataclass
class OtocSpec:
    hamiltonian: SparseOperator
    V_op: SparseOperator
    psi0: StateVector | None = None     # ground state of the Hamiltonian if omitted
    t_max: float = DEFAULT_T_MAX
    samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if self.V_op.dim != self.hamiltonian.dim:
            raise DimensionMismatch("V and H dimensions differ")
        if self.hamiltonian.dim > MAX_OTOC_DIM:
            raise DimensionTooLarge(f"dimension {self.hamiltonian.dim} exceeds {MAX_OTOC_DIM}")
        if not self.V_op.is_hermitian(1e-12):
            raise InvalidSpec("V must be Hermitian")
        if self.t_max <= 0 or self.samples < 2:
            raise InvalidSpec("need t_max > 0 and at least 2 samples")
        self._e, self._U = _eigh(self.hamiltonian)
        if self.psi0 is None:
            self.psi0 = StateVector.normalized(self._U[:, 0])
        elif self.psi0.dim != self.hamiltonian.dim:
            raise DimensionMismatch("psi0 dimension does not match H")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.samples)

    def to_eigenbasis(self, op: SparseOperator) -> np.ndarray:
        return self._U.conj().T @ op.to_dense() @ self._U

    def psi_eigen(self) -> np.ndarray:
        return self._U.conj().T @ self.psi0.amplitudes


@dataclass(frozen=True)
class OtocSeries:
    times: np.ndarray
    F_values: np.ndarray
    F_hat: complex


def time_average(times: np.ndarray, values: np.ndarray) -> complex:
    """Trapezoidal (1/T) int_0^T f dt."""
    return complex(np.trapezoid(values, times) / (times[-1] - times[0]))


def compute_F(spec: OtocSpec) -> OtocSeries:
    """F(t) = <psi0| V(t) V V(t) V |psi0> and its time average."""
    Ve = spec.to_eigenbasis(spec.V_op)
    pe = spec.psi_eigen()
    e = spec._e
    x0 = Ve @ pe
    times = spec.times
    F = np.empty(times.size, dtype=complex)
    for k, t in enumerate(times):
        d = np.exp(1j * e * t)
        x = d * (Ve @ (d.conj() * x0))
        x = Ve @ x
        x = d * (Ve @ (d.conj() * x))
        F[k] = np.vdot(pe, x)
    return OtocSeries(times, F, time_average(times, F))


def compute_C(spec: OtocSpec, W_op: SparseOperator, times=None) -> np.ndarray:
    """C(t) = || [W(t), V] psi ||^2, the nonnegative commutator norm."""
    if W_op.dim != spec.hamiltonian.dim:
        raise DimensionMismatch("W and H dimensions differ")
    We, Ve = spec.to_eigenbasis(W_op), spec.to_eigenbasis(spec.V_op)
    pe = spec.psi_eigen()
    vp = Ve @ pe
    times = spec.times if times is None else np.asarray(times, float)
    out = np.empty(times.size)
    for k, t in enumerate(times):
        d = np.exp(1j * spec._e * t)
        wt = lambda v: d * (We @ (d.conj() * v))  # noqa: E731
        r = wt(vp) - Ve @ wt(pe)
        out[k] = float(np.vdot(r, r).real)
    return out


def compute_C_four_point(spec: OtocSpec, W_op: SparseOperator, times=None) -> np.ndarray:
    """The same C(t) expanded into four-point functions.

    <V W'W V> - <V W'V W> - <W'V W V> + <W'V V W> with W = W(t), W' = W(t)^dagger.
    """
    psi = spec.psi0.amplitudes
    V = spec.V_op.to_dense()
    times = spec.times if times is None else np.asarray(times, float)
    out = np.empty(times.size)
    for k, t in enumerate(times):
        W = heisenberg_evolve(W_op, spec.hamiltonian, t).to_dense()
        Wd = W.conj().T

        def ev(*ops):
            x = psi
            for o in reversed(ops):
                x = o @ x
            return np.vdot(psi, x)

        c = ev(V, Wd, W, V) - ev(V, Wd, V, W) - ev(Wd, V, W, V) + ev(Wd, V, V, W)
        out[k] = float(c.real)
    return out


# -----------------------------------------------------------------------------
# Majorana-chain sweeps
# -----------------------------------------------------------------------------

def default_V(N: int) -> SparseOperator:
    """Total transverse magnetization sum_i X_i / N."""
    return models.total_x(N) / N


def fhat_at(N: int, p: int, s: float, lam: float, V: SparseOperator | None = None,
            t_max: float = DEFAULT_T_MAX, samples: int = DEFAULT_SAMPLES) -> OtocSeries:
    H = finite_hamiltonian(N, p, s, lam)
    return compute_F(OtocSpec(H, default_V(N) if V is None else V, None, t_max, samples))


def fhat_sweep(N: int, p: int, lam: float, s_values: Sequence[float], V: SparseOperator | None = None,
               t_max: float = DEFAULT_T_MAX, samples: int = DEFAULT_SAMPLES,
               threads: int = 1) -> list[OtocSeries]:
    """One OtocSeries per s, in input order."""
    V = default_V(N) if V is None else V

    def one(s):
        return fhat_at(N, p, float(s), lam, V, t_max, samples)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, s_values))
    return [one(s) for s in s_values]


def steepest_change(s_values: Sequence[float], fhat: Sequence[complex]) -> float:
    """Midpoint of the s interval where |dF_hat/ds| is largest."""
    s = np.asarray(s_values, float)
    f = np.asarray(fhat, complex)
    slope = np.abs(np.diff(f)) / np.diff(s)
    i = int(np.argmax(slope))
    return float(0.5 * (s[i] + s[i + 1]))
