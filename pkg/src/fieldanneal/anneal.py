"""Time-dependent evolution under H(t) = (1 - Gamma(t)) H0 + Gamma(t) H1."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as spla

from .algebra import SparseOperator, StateVector, commutator
from .errors import DiagonalizationFailure, DimensionMismatch, InvalidSpec, OutOfDomain, StepFailure
from .kernels import get_backend

MAX_EVOLVE_DIM = 2 ** 14
DEGENERACY_TOL = 1e-9
NORM_TOL = 1e-8
MIN_RTOL = 1e-13

_KIND_CODES = {"exp_decay": 0, "inv_log": 1, "arctan_finite": 2, "constant": 3}


@dataclass(frozen=True)
class Schedule:
    """Mixing weight Gamma(t) of the driver H1.

    ``exp_decay``: exp(-a t).  ``inv_log``: 1 / log(t + e).
    ``arctan_finite``: 1 - (arctan(t - tau/2) / |arctan(-tau/2)| + 1) / 2 on [0, tau].
    ``constant``: fixed ``value``; only meant for checks against closed forms.
    """

    kind: str
    a: float = 1.0
    tau: float | None = None
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.kind == "exp_decay" and not self.a > 0:
            raise ValueError("exp_decay needs a > 0")
        if self.kind == "arctan_finite" and (self.tau is None or not self.tau > 0):
            raise ValueError("arctan_finite needs tau > 0")
        if self.kind == "constant" and not 0.0 <= self.value <= 1.0:
            raise ValueError("constant schedule value must lie in [0, 1]")

    @property
    def horizon(self) -> float | None:
        return self.tau if self.kind == "arctan_finite" else None

    @property
    def kernel_args(self) -> tuple[int, float]:
        param = {"exp_decay": self.a, "inv_log": 0.0, "arctan_finite": self.tau or 0.0,
                 "constant": self.value}[self.kind]
        return _KIND_CODES[self.kind], float(param)

    def __call__(self, t: float) -> float:
        return evaluate_schedule(self, t)

    def stop_time(self, gamma_stop: float) -> float:
        """Earliest t with Gamma(t) = gamma_stop."""
        if not 0 < gamma_stop < 1:
            raise OutOfDomain("gamma_stop must lie in (0, 1)")
        if self.kind == "exp_decay":
            return math.log(1.0 / gamma_stop) / self.a
        if self.kind == "inv_log":
            return math.exp(1.0 / gamma_stop) - math.e
        if self.kind == "arctan_finite":
            half = self.tau / 2
            return half + math.tan((1.0 - 2.0 * gamma_stop) * abs(math.atan(-half)))
        raise OutOfDomain("a constant schedule never reaches a different value")


def evaluate_schedule(s: Schedule, t: float) -> float:
    if t < 0:
        raise OutOfDomain(f"t={t} < 0")
    if s.kind == "exp_decay":
        return math.exp(-s.a * t)
    if s.kind == "inv_log":
        return 1.0 / math.log(t + math.e)
    if s.kind == "arctan_finite":
        if t > s.tau:
            raise OutOfDomain(f"t={t} beyond the finite horizon tau={s.tau}")
        half = s.tau / 2
        return 1.0 - 0.5 * (math.atan(t - half) / abs(math.atan(-half)) + 1.0)
    return s.value


def hamiltonian_at(H0: SparseOperator, H1: SparseOperator, gamma: float) -> SparseOperator:
    """(1 - gamma) H0 + gamma H1."""
    return SparseOperator((1.0 - gamma) * H0.csr + gamma * H1.csr, hermitian_hint=True)


def hamiltonian_at_s(H0: SparseOperator, H1: SparseOperator, s: float) -> SparseOperator:
    """s H0 + (1 - s) H1, i.e. ``hamiltonian_at`` with gamma = 1 - s."""
    return hamiltonian_at(H0, H1, 1.0 - s)


def lowest_eigenpair(H: SparseOperator) -> tuple[float, np.ndarray]:
    if H.dim <= 2048:
        e, v = np.linalg.eigh(H.to_dense())
        return float(e[0]), v[:, 0]
    e, v = spla.eigsh(H.csr, k=1, which="SA", tol=1e-12)
    return float(e[0]), v[:, 0]


@dataclass
class AnnealProblem:
    H0: SparseOperator
    H1: SparseOperator
    schedule: Schedule = field(default_factory=lambda: Schedule("exp_decay", a=1.0))
    initial_state: StateVector | None = None

    def __post_init__(self):
        if self.H0.dim != self.H1.dim:
            raise DimensionMismatch(f"H0 has dimension {self.H0.dim}, H1 has {self.H1.dim}")
        if commutator(self.H0, self.H1).is_zero(1e-12):
            warnings.warn("H0 and H1 commute; the interpolation cannot move the state",
                          RuntimeWarning, stacklevel=3)
        if self.initial_state is None:
            _, v = lowest_eigenpair(self.H1)
            self.initial_state = StateVector.normalized(v)
        elif self.initial_state.dim != self.H0.dim:
            raise DimensionMismatch("initial state dimension does not match the Hamiltonians")

    @property
    def dim(self) -> int:
        return self.H0.dim


@dataclass
class EvolutionTrace:
    times: np.ndarray
    states: np.ndarray          # (n_times, dim)
    gammas: np.ndarray
    accepted_steps: int = 0
    rejected_steps: int = 0
    rtol: float = 0.0
    occupation_probabilities: np.ndarray | None = None

    @property
    def norm_drift(self) -> np.ndarray:
        return np.abs(np.linalg.norm(self.states, axis=1) - 1.0)

    @property
    def state_snapshots(self) -> list[StateVector]:
        return [StateVector.normalized(s) for s in self.states]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def evolve(problem: AnnealProblem, t_end: float, snapshot_times=None, rtol: float = 1e-9,
           atol: float = 1e-14, backend: str | None = None, max_steps: int = 50_000_000,
           norm_tol: float | None = NORM_TOL) -> EvolutionTrace:
    """Integrate i dpsi/dt = H(t) psi from t = 0 with an adaptive Dormand-Prince 5(4) method.

    The state is never renormalized, so ``trace.norm_drift`` measures
    integration quality.  If the drift exceeds ``norm_tol`` the run is
    repeated with rtol divided by 10 (down to 1e-13); pass ``norm_tol=None``
    to accept the first run as is.  Snapshots default to 200 uniform times
    on [0, t_end].
    """
    if not t_end > 0:
        raise OutOfDomain("t_end must be positive")
    if not (rtol > 0 and atol >= 0):
        raise InvalidSpec("need rtol > 0 and atol >= 0")
    if problem.dim > MAX_EVOLVE_DIM:
        raise DimensionMismatch(f"dimension {problem.dim} exceeds {MAX_EVOLVE_DIM}")
    sched = problem.schedule
    if sched.horizon is not None and t_end > sched.horizon:
        raise OutOfDomain(f"t_end={t_end} beyond the schedule horizon {sched.horizon}")
    if snapshot_times is None:
        snapshot_times = np.linspace(0.0, t_end, 200)
    req = np.unique(np.asarray(snapshot_times, dtype=float))
    if req.size == 0 or req[0] < 0 or req[-1] > t_end:
        raise OutOfDomain("snapshot times must lie in [0, t_end]")
    grid = req if req[0] == 0.0 else np.concatenate(([0.0], req))

    H0, H1 = problem.H0.csr, problem.H1.csr
    scale = max(1.0, float(abs(H0).sum(axis=1).max()), float(abs(H1).sum(axis=1).max()))
    kind, param = sched.kernel_args
    kernel = get_backend(backend)
    while True:
        states, acc, rej, status = kernel(H0, H1, problem.initial_state.amplitudes, kind, param,
                                          grid, rtol, atol, 0.01 / scale, max_steps)
        if status == 1:
            raise StepFailure(f"exceeded {max_steps} steps")
        if status == 2:
            raise StepFailure("step size underflow")
        drift = np.abs(np.linalg.norm(states, axis=1) - 1.0).max()
        if norm_tol is None or drift <= norm_tol:
            break
        if rtol <= MIN_RTOL:
            raise StepFailure(f"norm drift {drift:.3g} above {norm_tol:g} even at rtol={rtol:g}")
        rtol = max(rtol / 10, MIN_RTOL)
    if grid.size != req.size:
        states = states[1:]
    gammas = np.array([evaluate_schedule(sched, t) for t in req])
    return EvolutionTrace(req, states, gammas, int(acc), int(rej), rtol=rtol)


def eigenlevels(H: SparseOperator, tol: float = DEGENERACY_TOL) -> list[tuple[float, np.ndarray]]:
    """Eigenvalues grouped into levels (consecutive gaps <= tol) with their eigenvectors."""
    try:
        e, v = np.linalg.eigh(H.to_dense())
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationFailure(str(exc)) from exc
    levels = []
    start = 0
    for i in range(1, e.size + 1):
        if i == e.size or e[i] - e[i - 1] > tol:
            levels.append((float(e[start:i].mean()), v[:, start:i]))
            start = i
    return levels


def occupation_probabilities(trace: EvolutionTrace, target: SparseOperator, k: int) -> np.ndarray:
    """P_j(t) = sum over the j-th lowest level of |<E|psi(t)>|^2, for j < k.

    Degenerate eigenvalues (within 1e-9) form one level.  The result has
    shape (len(trace.times), k); columns past the last level are zero.
    """
    if target.dim != trace.states.shape[1]:
        raise DimensionMismatch("target dimension does not match the trace")
    if not 1 <= k <= target.dim:
        raise ValueError(f"k={k} outside [1, {target.dim}]")
    levels = eigenlevels(target)
    probs = np.zeros((trace.states.shape[0], k))
    for j, (_, vecs) in enumerate(levels[:k]):
        probs[:, j] = (np.abs(trace.states @ vecs.conj()) ** 2).sum(axis=1)
    trace.occupation_probabilities = probs
    return probs


def minimal_gap(problem: AnnealProblem, s_grid) -> tuple[float, float]:
    """min over the grid of E1(s) - E0(s) for s H0 + (1 - s) H1.

    A grid minimum, hence an upper bound on the true infimum.
    """
    s_grid = np.asarray(s_grid, dtype=float)
    if s_grid.size == 0:
        raise ValueError("s grid is empty")
    if problem.dim < 2:
        raise InvalidSpec("a gap needs at least two levels")
    D0, D1 = problem.H0.to_dense(), problem.H1.to_dense()
    gaps = np.empty(s_grid.size)
    for i, s in enumerate(s_grid):
        try:
            e = np.linalg.eigvalsh(s * D0 + (1 - s) * D1)
        except np.linalg.LinAlgError as exc:
            raise DiagonalizationFailure(f"eigvalsh failed at s={s}") from exc
        gaps[i] = e[1] - e[0]
    j = int(np.argmin(gaps))
    return float(gaps[j]), float(s_grid[j])


def pure_state_trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Trace distance between |a><a| and |b><b| for normalized a, b."""
    a = np.asarray(a) / np.linalg.norm(a)
    b = np.asarray(b) / np.linalg.norm(b)
    return float(np.sqrt(max(0.0, 1.0 - abs(np.vdot(a, b)) ** 2)))


def density_trace_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Trace distance between the site-diagonal states with occupations p and q."""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    return 0.5 * float(np.abs(p / p.sum() - q / q.sum()).sum())
