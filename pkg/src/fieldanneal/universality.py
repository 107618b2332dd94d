"""Universality constructions built from the site operators a_i, a_i^dagger.

* normal-ordered decomposition of an arbitrary operator,
* the CNOT identity 1 - n_i + n_i (a_j + a_j^dagger),
* Feynman-clock Hamiltonians with a domain-wall clock register,
* the 2-local spin Hamiltonian in Z and n conventions,
* the travelling-salesman cost Hamiltonian.
"""
from __future__ import annotations

import csv
import itertools
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from . import algebra
from .algebra import SparseOperator, build_site_operator
from .errors import (DimensionMismatch, DimensionTooLarge, InvalidSite, InvalidSpec,
                     NonConvergence, NonUnitaryGate)

MAX_DECOMPOSE_SITES = 4


# -----------------------------------------------------------------------------
# operator decomposition
# -----------------------------------------------------------------------------

@dataclass
class DecompositionResult:
    """Coefficients A_MN keyed by (creators, annihilators) as sorted site tuples.

    The expansion runs over *ordered* tuples of distinct sites, and A is
    symmetric under permutations within each tuple, so a pair of site sets
    of sizes (M, N) contributes M! N! A in total.  Tuples with a repeated
    site carry no weight because a_x a_x = 0.
    """

    L: int
    coefficients: dict[tuple[tuple[int, ...], tuple[int, ...]], complex]
    residual: float = 0.0

    @property
    def max_M(self) -> int:
        return max((len(c) for c, _ in self.coefficients), default=0)

    @property
    def max_N(self) -> int:
        return max((len(a) for _, a in self.coefficients), default=0)

    def coefficient(self, creators, annihilators) -> complex:
        creators, annihilators = tuple(creators), tuple(annihilators)
        if len(set(creators)) < len(creators) or len(set(annihilators)) < len(annihilators):
            return 0.0j
        return self.coefficients.get((tuple(sorted(creators)), tuple(sorted(annihilators))), 0.0j)

    def items(self):
        """Nonzero coefficients ordered by (M, N) then index tuples."""
        return sorted(self.coefficients.items(),
                      key=lambda kv: (len(kv[0][0]), len(kv[0][1]), kv[0][0], kv[0][1]))


def _subsets(L: int) -> list[tuple[int, ...]]:
    return [c for k in range(L + 1) for c in itertools.combinations(range(L), k)]


def _state_index(sites: tuple[int, ...], L: int) -> int:
    return sum(1 << (L - 1 - s) for s in sites)


def decompose_operator(O: SparseOperator, L: int, tol: float = 1e-9) -> DecompositionResult:
    """Expand O in normal-ordered products a^dagger_{x1}..a^dagger_{xM} a_{x'1}..a_{x'N}.

    Matrix elements <psi_T|O|psi_T'> between occupation states fix the
    coefficients in order of increasing (M, N): each element equals
    |T|! |T'|! A(T, T') plus contributions of pairs (T - R, T' - R) for a
    nonempty common subset R, all of which are already known.
    """
    if L > MAX_DECOMPOSE_SITES:
        raise DimensionTooLarge(f"decomposition limited to L <= {MAX_DECOMPOSE_SITES}, got {L}")
    if O.dim != 2 ** L:
        raise DimensionMismatch(f"operator dimension {O.dim} != 2^{L}")
    dense = O.to_dense()
    subsets = _subsets(L)
    pairs = sorted(itertools.product(subsets, subsets),
                   key=lambda pr: (len(pr[0]), len(pr[1]), pr[0], pr[1]))
    total: dict[tuple, complex] = {}
    for T, Tp in pairs:
        value = dense[_state_index(T, L), _state_index(Tp, L)]
        common = sorted(set(T) & set(Tp))
        for r in range(1, len(common) + 1):
            for R in itertools.combinations(common, r):
                key = (tuple(x for x in T if x not in R), tuple(x for x in Tp if x not in R))
                value -= total.get(key, 0.0)
        if abs(value) > algebra.PRUNE_THRESHOLD:
            total[(T, Tp)] = complex(value)
    coeffs = {k: v / (math.factorial(len(k[0])) * math.factorial(len(k[1]))) for k, v in total.items()}
    result = DecompositionResult(L, coeffs)
    result.residual = reconstruct(result).max_abs_diff(O)
    if result.residual > tol:
        raise NonConvergence(f"reconstruction residual {result.residual:.3e} exceeds {tol:.1e}")
    return result


def _normal_product(creators, annihilators, L: int) -> SparseOperator:
    out = algebra.identity(L)
    for x in creators:
        out = out @ build_site_operator("a_dagger", x, L)
    for x in annihilators:
        out = out @ build_site_operator("a", x, L)
    return out


def reconstruct(result: DecompositionResult, expand_permutations: bool = False) -> SparseOperator:
    """Sum the expansion back into an operator.

    With ``expand_permutations`` every ordered tuple is summed separately,
    exactly as the expansion is written; otherwise each set pair is taken
    once with weight M! N! A.
    """
    L = result.L
    acc = sp.csr_matrix((2 ** L, 2 ** L), dtype=complex)
    for (cre, ann), A in result.items():
        if expand_permutations:
            for pc in itertools.permutations(cre):
                for pa in itertools.permutations(ann):
                    acc = acc + A * _normal_product(pc, pa, L).csr
        else:
            weight = math.factorial(len(cre)) * math.factorial(len(ann))
            acc = acc + (weight * A) * _normal_product(cre, ann, L).csr
    return SparseOperator(acc)


# -----------------------------------------------------------------------------
# CNOT
# -----------------------------------------------------------------------------

def _check_pair(control: int, target: int, L: int) -> None:
    algebra._check_size(L)
    if control == target:
        raise InvalidSite("control and target must differ")
    algebra._check_site(control, L)
    algebra._check_site(target, L)


def build_cnot(control: int, target: int, L: int) -> SparseOperator:
    """1 - n_c + n_c (a_t + a_t^dagger)."""
    _check_pair(control, target, L)
    n = build_site_operator("n", control, L)
    flip = build_site_operator("a", target, L) + build_site_operator("a_dagger", target, L)
    return algebra.identity(L) - n + n @ flip


def build_cnot_commutator_form(control: int, target: int, L: int) -> SparseOperator:
    """(1 + [a_c, a_c^dagger])/2 + (1 - [a_c, a_c^dagger])(a_t + a_t^dagger)/2."""
    _check_pair(control, target, L)
    one = algebra.identity(L)
    z = algebra.commutator(build_site_operator("a", control, L),
                           build_site_operator("a_dagger", control, L))
    flip = build_site_operator("a", target, L) + build_site_operator("a_dagger", target, L)
    return (one + z) * 0.5 + ((one - z) @ flip) * 0.5


def cnot_permutation(control: int, target: int, L: int) -> SparseOperator:
    """CNOT from its truth table: flip the target bit when the control bit is set."""
    _check_pair(control, target, L)
    states = np.arange(2 ** L)
    cbit = 1 << (L - 1 - control)
    tbit = 1 << (L - 1 - target)
    image = np.where(states & cbit, states ^ tbit, states)
    return SparseOperator(sp.coo_matrix((np.ones(states.size), (image, states)),
                                        shape=(states.size, states.size)))


# -----------------------------------------------------------------------------
# Feynman clock
# -----------------------------------------------------------------------------

_H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
_SINGLE = {"X": np.array([[0, 1], [1, 0]]), "Z": np.diag([1.0, -1.0]), "H": _H}
GATE_POOL = ("X", "Z", "H", "RX", "CNOT")


def rx(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def gate_operator(name: str, qubits, n: int, angle: float | None = None) -> SparseOperator:
    """Gate from the fixed pool acting on ``n`` logical qubits."""
    qubits = tuple(qubits)
    if name == "CNOT":
        if len(qubits) != 2:
            raise InvalidSpec("CNOT needs two qubits")
        return build_cnot(qubits[0], qubits[1], n)
    if len(qubits) != 1:
        raise InvalidSpec(f"{name} acts on one qubit")
    if name == "RX":
        if angle is None:
            raise InvalidSpec("RX needs an angle")
        local = rx(angle)
    elif name in _SINGLE:
        local = _SINGLE[name]
    else:
        raise InvalidSpec(f"gate {name!r} not in pool {GATE_POOL}")
    algebra._check_site(qubits[0], n)
    return algebra.embed(SparseOperator(local), qubits[0], n)


_GATE_LINE = re.compile(r"^GATE\s+(X|Z|H|CNOT|RX\(\s*([-+0-9.eE]+)\s*\))((?:\s+\d+)+)\s*$")


def parse_gate_list(text: str, n: int | None = None) -> "ClockCircuit":
    """Parse ``GATE <name> <qubit...>`` lines; blank lines and ``#`` comments are skipped."""
    specs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _GATE_LINE.match(line)
        if not m:
            raise InvalidSpec(f"line {lineno}: cannot parse {raw!r}")
        name = "RX" if m.group(1).startswith("RX") else m.group(1)
        angle = float(m.group(2)) if m.group(2) else None
        qubits = tuple(int(q) for q in m.group(3).split())
        specs.append((name, qubits, angle))
    if not specs:
        raise InvalidSpec("empty circuit")
    if n is None:
        n = max(max(q) for _, q, _ in specs) + 1
    return ClockCircuit([gate_operator(name, q, n, angle) for name, q, angle in specs], n)


@dataclass
class ClockCircuit:
    gates: list[SparseOperator]
    n: int
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.gates:
            raise InvalidSpec("circuit needs at least one gate")
        for k, U in enumerate(self.gates):
            if U.dim != 2 ** self.n:
                raise DimensionMismatch(f"gate {k} has dimension {U.dim}, expected {2 ** self.n}")
            if not (U.dagger() @ U).allclose(SparseOperator.identity(U.dim), 1e-12):
                raise NonUnitaryGate(f"gate {k} is not unitary")

    @property
    def L(self) -> int:
        return len(self.gates)

    @property
    def total_qubits(self) -> int:
        return self.n + self.L


def _clock_site(tau: int) -> int:
    """0-based site of 1-based clock qubit tau inside the clock register."""
    return tau - 1


def clock_state_index(tau: int, L: int) -> int:
    """Domain-wall clock |1..1 0..0> with tau ones."""
    return sum(1 << (L - 1 - _clock_site(k)) for k in range(1, tau + 1))


def clock_terms(circuit: ClockCircuit) -> dict[str, SparseOperator]:
    n, L = circuit.n, circuit.L
    if n + L > algebra.MAX_SITES:
        raise DimensionTooLarge(f"{n} logical + {L} clock qubits exceed {algebra.MAX_SITES}")
    one_log = sp.identity(2 ** n, format="csr")
    one_clk = sp.identity(2 ** L, format="csr")

    def num(tau):
        return build_site_operator("n", _clock_site(tau), L).csr

    def lift(log_op, clk_op):
        return sp.kron(log_op, clk_op, format="csr")

    h_clock = sp.csr_matrix((2 ** L, 2 ** L))
    for tau in range(1, L):
        h_clock = h_clock + (one_clk - num(tau)) @ num(tau + 1)
    h_clock_init = num(1)
    h_input = sp.csr_matrix((2 ** n, 2 ** n))
    for i in range(n):
        h_input = h_input + build_site_operator("n", i, n).csr

    h_prop = sp.csr_matrix((2 ** (n + L), 2 ** (n + L)), dtype=complex)
    for tau, U in enumerate(circuit.gates, start=1):
        P = one_clk
        if tau > 1:
            P = P @ num(tau - 1)
        if tau < L:
            P = P @ (one_clk - num(tau + 1))
        site = _clock_site(tau)
        up = build_site_operator("a_dagger", site, L).csr
        down = build_site_operator("a", site, L).csr
        h_tau = (lift(one_log, P @ (one_clk - num(tau)))
                 - lift(U.csr, P @ up)
                 - lift(U.dagger().csr, P @ down)
                 + lift(one_log, P @ num(tau)))
        h_prop = h_prop + 0.5 * h_tau

    return {
        "H_clock": SparseOperator(lift(one_log, h_clock), hermitian_hint=True),
        "H_clock_init": SparseOperator(lift(one_log, h_clock_init), hermitian_hint=True),
        "H_input": SparseOperator(lift(h_input, one_clk - num(1)), hermitian_hint=True),
        "H_prop": SparseOperator(h_prop, hermitian_hint=True),
    }


def build_clock_hamiltonians(circuit: ClockCircuit) -> tuple[SparseOperator, SparseOperator]:
    """(H_init, H_final) on logical (most significant) x clock qubits."""
    t = clock_terms(circuit)
    h_init = t["H_clock_init"] + t["H_input"] + t["H_clock"]
    h_final = t["H_prop"] + t["H_input"] + t["H_clock"]
    return h_init, h_final


def history_state(circuit: ClockCircuit) -> np.ndarray:
    """(L+1)^{-1/2} sum_tau U_tau..U_1 |0..0> (x) |clock tau>."""
    n, L = circuit.n, circuit.L
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = 1.0
    out = np.zeros(2 ** (n + L), dtype=complex)
    for tau in range(L + 1):
        if tau:
            psi = circuit.gates[tau - 1].csr @ psi
        clk = np.zeros(2 ** L)
        clk[clock_state_index(tau, L)] = 1.0
        out += np.kron(psi, clk)
    return out / np.sqrt(L + 1)


def initial_clock_state(circuit: ClockCircuit) -> np.ndarray:
    out = np.zeros(2 ** circuit.total_qubits, dtype=complex)
    out[0] = 1.0
    return out


# -----------------------------------------------------------------------------
# 2-local Hamiltonian
# -----------------------------------------------------------------------------

def n_to_z_coefficients(h_z, h_x, J, Gamma):
    """Rewrite n-convention couplings in the Z convention via n_i = (1 - Z_i)/2.

    Returns ``(offset, h_z', h_x, J', Gamma)``.
    """
    h_z = np.asarray(h_z, float)
    J = np.asarray(J, float)
    hz = -h_z / 2 - (J.sum(axis=1) + J.sum(axis=0)) / 4
    offset = h_z.sum() / 2 + J.sum() / 4
    return offset, hz, np.asarray(h_x, float), J / 4, np.asarray(Gamma, float)


def build_two_local(h_z, h_x, J, Gamma, convention: str = "z", offset: float = 0.0) -> SparseOperator:
    """sum h_z P_i + sum h_x X_i + sum_ij J_ij P_i P_j + sum_ij Gamma_ij X_i X_j (+ offset).

    P is Z in the "z" convention and n = (1 - Z)/2 in the "n" convention.
    The double sums run over all ordered pairs (i, j), diagonal included.
    """
    h_z, h_x = np.asarray(h_z, float), np.asarray(h_x, float)
    J, Gamma = np.asarray(J, float), np.asarray(Gamma, float)
    N = h_z.size
    if h_x.shape != (N,) or J.shape != (N, N) or Gamma.shape != (N, N):
        raise DimensionMismatch("h_z, h_x must have length N and J, Gamma shape (N, N)")
    if convention not in ("z", "n"):
        raise ValueError(f"unknown convention {convention!r}")
    algebra._check_size(N)
    states = np.arange(2 ** N)
    bits = np.array([(states >> (N - 1 - i)) & 1 for i in range(N)], dtype=float)
    P = 1.0 - 2.0 * bits if convention == "z" else bits
    diag = offset + h_z @ P + np.einsum("ij,is,js->s", J, P, P)
    acc = sp.diags(diag.astype(complex), format="csr")
    X = [build_site_operator("X", i, N).csr for i in range(N)]
    for i in range(N):
        if h_x[i]:
            acc = acc + h_x[i] * X[i]
        for j in range(N):
            if Gamma[i, j]:
                acc = acc + Gamma[i, j] * (X[i] @ X[j])
    return SparseOperator(acc, hermitian_hint=True)


# -----------------------------------------------------------------------------
# travelling salesman
# -----------------------------------------------------------------------------

@dataclass
class TspInstance:
    D: np.ndarray
    penalty1: float | None = None
    penalty2: float | None = None

    def __post_init__(self):
        self.D = np.asarray(self.D, dtype=float)
        if self.D.ndim != 2 or self.D.shape[0] != self.D.shape[1]:
            raise InvalidSpec("distance matrix must be square")
        if not np.allclose(self.D, self.D.T, atol=0) or np.any(np.diag(self.D) != 0) or np.any(self.D < 0):
            raise InvalidSpec("distance matrix must be symmetric, nonnegative, zero on the diagonal")
        default = 2 * self.N * float(self.D.max()) + 1.0
        if self.penalty1 is None:
            self.penalty1 = default
        if self.penalty2 is None:
            self.penalty2 = default
        if self.penalty1 <= 0 or self.penalty2 <= 0:
            raise InvalidSpec("penalties must be positive")

    @property
    def N(self) -> int:
        return self.D.shape[0]


def tsp_qubit(city: int, step: int, N: int) -> int:
    """0-based qubit of n_{city, step}: city + N * step."""
    return city + N * step


def tsp_energies(inst: TspInstance) -> np.ndarray:
    """Diagonal of the TSP Hamiltonian over all 2^(N^2) occupation states."""
    N = inst.N
    Q = N * N
    if Q > algebra.MAX_SITES:
        raise DimensionTooLarge(f"N={N} needs {Q} qubits, cap is {algebra.MAX_SITES}")
    states = np.arange(2 ** Q)
    occ = np.array([(states >> (Q - 1 - q)) & 1 for q in range(Q)], dtype=float)
    n = occ.reshape(N, N, -1)  # n[step, city, state]
    cost = np.zeros(states.size)
    for t in range(N - 1):
        cost += np.einsum("ij,is,js->s", inst.D, n[t + 1], n[t])
    per_step = n.sum(axis=1)   # (step, state)
    per_city = n.sum(axis=0)   # (city, state)
    cost += inst.penalty1 * ((per_step - 1) ** 2).sum(axis=0)
    cost += inst.penalty2 * ((per_city - 1) ** 2).sum(axis=0)
    return cost


def build_tsp_hamiltonian(inst: TspInstance) -> SparseOperator:
    """Diagonal cost operator: path length plus squared one-hot penalties."""
    return SparseOperator(sp.diags(tsp_energies(inst).astype(complex), format="csr"),
                          hermitian_hint=True)


def decode_tour(state: int, N: int) -> list[int] | None:
    """City visited at each step, or None if the state violates a constraint."""
    Q = N * N
    occ = [(state >> (Q - 1 - q)) & 1 for q in range(Q)]
    tour = []
    for t in range(N):
        row = [i for i in range(N) if occ[tsp_qubit(i, t, N)]]
        if len(row) != 1:
            return None
        tour.append(row[0])
    return tour if sorted(tour) == list(range(N)) else None


def encode_tour(tour, N: int) -> int:
    return sum(1 << (N * N - 1 - tsp_qubit(city, t, N)) for t, city in enumerate(tour))


def tour_cost(D: np.ndarray, tour) -> float:
    return float(sum(D[tour[t + 1], tour[t]] for t in range(len(tour) - 1)))


def brute_force_tsp(D: np.ndarray) -> tuple[float, list[list[int]]]:
    """Enumerate every visiting order; returns (optimal cost, all optimal tours)."""
    D = np.asarray(D, float)
    costs = {perm: tour_cost(D, perm) for perm in itertools.permutations(range(D.shape[0]))}
    best = min(costs.values())
    return best, [list(p) for p, c in costs.items() if c <= best + 1e-12]


def solve_tsp_hamiltonian(inst: TspInstance) -> tuple[float, int, list[int] | None]:
    """Ground energy, ground state index and its decoded tour."""
    e = tsp_energies(inst)
    k = int(np.argmin(e))
    return float(e[k]), k, decode_tour(k, inst.N)


def random_tsp_instance(N: int, seed: int) -> TspInstance:
    """Euclidean distances between N uniform points in the unit square."""
    pts = np.random.default_rng(seed).random((N, 2))
    D = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    D = (D + D.T) / 2
    np.fill_diagonal(D, 0.0)
    return TspInstance(D)


def read_tsp_csv(path) -> TspInstance:
    """Rows ``i, j, distance`` (0-based cities); missing pairs are mirrored."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].strip().startswith("#"):
                continue
            try:
                rows.append((int(rec[0]), int(rec[1]), float(rec[2])))
            except ValueError:
                if rows:
                    raise InvalidSpec(f"bad TSP row {rec!r}")
                continue  # header line
    if not rows:
        raise InvalidSpec(f"no distances in {path}")
    N = max(max(i, j) for i, j, _ in rows) + 1
    D = np.zeros((N, N))
    for i, j, d in rows:
        D[i, j] = D[j, i] = d
    return TspInstance(D)


def write_tsp_csv(inst: TspInstance, path) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "distance"])
        for i in range(inst.N):
            for j in range(i + 1, inst.N):
                w.writerow([i, j, repr(float(inst.D[i, j]))])
