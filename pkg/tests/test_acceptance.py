"""The twelve acceptance criteria, each at its stated tolerance and time budget."""
import hashlib
import itertools
import math
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import oracles
from fieldanneal import algebra, anneal, cli, models, otoc, semiclassical as sc, universality as U


def test_criterion_01_algebra_identities(criterion):
    t0 = time.perf_counter()
    worst = 0.0

    def check(lib, dense):
        nonlocal worst
        worst = max(worst, float(np.abs(lib.to_dense() - dense).max()))

    for L in range(1, 5):
        dim = 2 ** L
        a = [algebra.build_site_operator("a", i, L) for i in range(L)]
        ad = [algebra.build_site_operator("a_dagger", i, L) for i in range(L)]
        b = [algebra.jordan_wigner(i, L) for i in range(L)]
        bd = [algebra.jordan_wigner(i, L, dagger=True) for i in range(L)]
        c = [algebra.majorana(mu, L) for mu in range(1, 2 * L + 1)]
        for i in range(L):
            check(a[i], oracles.site("a", i, L))
            check(b[i], oracles.fermion(i, L))
            check(a[i] @ a[i], np.zeros((dim, dim)))
            check(ad[i] @ ad[i], np.zeros((dim, dim)))
            for j in range(L):
                zd = oracles.site("Z", i, L) if i == j else np.zeros((dim, dim))
                check(algebra.commutator(a[i], ad[j]), zd)
                check(algebra.anticommutator(b[i], bd[j]), np.eye(dim) * (i == j))
                check(algebra.anticommutator(b[i], b[j]), np.zeros((dim, dim)))
        for mu in range(2 * L):
            check(c[mu], oracles.majorana(mu + 1, L))
            for nu in range(2 * L):
                check(algebra.anticommutator(c[mu], c[nu]), 2 * np.eye(dim) * (mu == nu))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-12 and elapsed < 10
    criterion(1, ok, f"max entry error {worst:.2e} (< 1e-12), {elapsed:.2f} s (< 10 s)")
    assert ok


def test_criterion_02_cnot(criterion):
    worst = 0.0
    pairs = 0
    for L in range(2, 5):
        for ctl, tgt in itertools.permutations(range(L), 2):
            worst = max(worst, float(np.abs(U.build_cnot(ctl, tgt, L).to_dense() - oracles.cnot(ctl, tgt, L)).max()))
            pairs += 1
    ok = worst < 1e-14
    criterion(2, ok, f"{pairs} (control, target) pairs, max entry error {worst:.2e} (< 1e-14)")
    assert ok


def test_criterion_03_decomposition(criterion):
    worst = 0.0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        O = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        res = U.decompose_operator(algebra.SparseOperator(O), 2)
        back = U.reconstruct(res, expand_permutations=True).to_dense()
        worst = max(worst, float(np.abs(back - O).max()))
    ok = worst < 1e-9
    criterion(3, ok, f"20 random L=2 operators, max residual {worst:.2e} (< 1e-9)")
    assert ok


def _circuits():
    angle = 0.7
    for n in (1, 2):
        singles = [(g, (q,)) for q in range(n) for g in ("X", "Z", "H", "RX")]
        pool = singles + ([("CNOT", (0, 1)), ("CNOT", (1, 0))] if n == 2 else [])
        for length in (1, 2, 3):
            for combo in itertools.product(pool, repeat=length):
                yield U.ClockCircuit([U.gate_operator(g, q, n, angle if g == "RX" else None)
                                      for g, q in combo], n)


def _history_oracle(circ):
    n, L = circ.n, circ.L
    psi = np.zeros(2 ** n, complex)
    psi[0] = 1
    out = np.zeros(2 ** (n + L), complex)
    for tau in range(L + 1):
        if tau:
            psi = circ.gates[tau - 1].to_dense() @ psi
        clock = np.zeros(2 ** L)
        clock[int("1" * tau + "0" * (L - tau), 2)] = 1
        out += np.kron(psi, clock)
    return out / math.sqrt(L + 1)


def test_criterion_04_clock(criterion):
    t0 = time.perf_counter()
    count, worst_final, worst_init, worst_state = 0, 0.0, 0.0, 0.0
    for circ in _circuits():
        h_init, h_final = U.build_clock_hamiltonians(circ)
        hist = U.history_state(circ)
        init = U.initial_clock_state(circ)
        worst_state = max(worst_state, float(np.abs(hist - _history_oracle(circ)).max()))
        worst_final = max(worst_final, float(np.linalg.norm(h_final @ hist)))
        worst_init = max(worst_init, float(np.linalg.norm(h_init @ init)))
        assert init[0] == 1 and np.count_nonzero(init) == 1   # |0..0> logical, empty clock
        count += 1
    elapsed = time.perf_counter() - t0
    ok = count == 84 + 1110 and max(worst_final, worst_init) < 1e-9 and worst_state < 1e-12 and elapsed < 60
    criterion(4, ok, f"{count} circuits, |H_final hist| <= {worst_final:.1e}, |H_init init| <= {worst_init:.1e}, "
                     f"{elapsed:.1f} s (< 60 s)")
    assert ok


def test_criterion_05_butterfly(criterion):
    t0 = time.perf_counter()
    W = H = 10
    spectra = dict(models.butterfly_sweep(W, H, [Fraction(k, 101) for k in range(1, 101)]))
    mirror = max(float(np.abs(spectra[f] - spectra[1 - f]).max()) for f in spectra)
    chiral = max(float(np.abs(np.sort(-e) - e).max()) for e in spectra.values())
    zero = models.spectrum(models.build_hofstadter_single_particle(models.LatticeSpec(W, H, 0)))
    cos_sum = np.sort([-2 * math.cos(math.pi * i / (W + 1)) - 2 * math.cos(math.pi * j / (H + 1))
                       for i in range(1, W + 1) for j in range(1, H + 1)])
    zerr = float(np.abs(zero - cos_sum).max())
    elapsed = time.perf_counter() - t0
    ok = mirror < 1e-9 and chiral < 1e-9 and zerr < 1e-10 and elapsed < 120
    criterion(5, ok, f"E(phi) vs E(1-phi) {mirror:.1e}, E vs -E {chiral:.1e} (< 1e-9), "
                     f"zero flux {zerr:.1e} (< 1e-10), {elapsed:.1f} s")
    assert ok


def test_criterion_06_density(criterion):
    t0 = time.perf_counter()
    spec = models.LatticeSpec(20, 20, Fraction(1, 11))
    H0 = models.build_hofstadter_single_particle(spec)
    H1 = models.build_xx_driver_single_particle(spec)
    trace = anneal.evolve(anneal.AnnealProblem(H0, H1, anneal.Schedule("exp_decay", a=1.0)), 20.0, [0.0, 20.0])
    _, g = models.ground_state(H0)
    dist = anneal.density_trace_distance(models.site_density(trace.final_state), models.site_density(g))
    pure = anneal.pure_state_trace_distance(trace.final_state, g)
    elapsed = time.perf_counter() - t0
    ok = dist < 0.1 and elapsed < 300
    criterion(6, ok, f"density trace distance {dist:.4f} (< 0.1), state trace distance {pure:.4f}, "
                     f"{elapsed:.1f} s (< 300 s)")
    assert ok


def _ground_probability(sched, t_end):
    spec = models.LatticeSpec(3, 3, Fraction(1, 11))
    H0 = models.build_hofstadter_single_particle(spec)
    prob = anneal.AnnealProblem(H0, models.build_xx_driver_single_particle(spec), sched)
    trace = anneal.evolve(prob, t_end, [0.0, t_end])
    return float(anneal.occupation_probabilities(trace, H0, 1)[-1, 0])


def test_criterion_07_schedule_trends(criterion):
    gamma_stop = 0.01
    exp = [_ground_probability(s, s.stop_time(gamma_stop))
           for s in (anneal.Schedule("exp_decay", a=0.1), anneal.Schedule("exp_decay", a=0.01))]
    arc = [_ground_probability(anneal.Schedule("arctan_finite", tau=tau), tau) for tau in (10.0, 100.0, 1000.0)]
    steps = [(exp[0], exp[1]), (arc[0], arc[1]), (arc[1], arc[2])]
    monotone = all(b >= a - 1e-6 for a, b in steps)
    strict = sum(b > a for a, b in steps)
    criterion(7, monotone, f"P0 exp a=0.1,0.01: {exp[0]:.6f} -> {exp[1]:.6f}; arctan tau=10,100,1000: "
                           + " -> ".join(f"{x:.6f}" for x in arc) + f"; {strict}/3 strict")
    assert monotone


def test_criterion_08_phase_classification(criterion):
    t0 = time.perf_counter()
    s_grid = sc.default_s_grid(1000)
    found = {lam: sc.transitions(sc.classify_transition(6, lam, s_grid)) for lam in (1.0, 0.4, 0.2)}
    odd = sc.classify_transition(5, 1.0, np.linspace(0, 1, 2000, endpoint=False))
    orders = {lam: [o for o, _ in tr] for lam, tr in found.items()}
    seq_ok = orders == {1.0: ["first"], 0.4: ["second", "first"], 0.2: ["second"]}
    odd_ok = all(pt.order != "first" for pt in odd)
    locus_err = max(abs(s - sc.second_order_locus(6, lam))
                    for lam, tr in found.items() for o, s in tr if o == "second")
    elapsed = time.perf_counter() - t0
    ok = seq_ok and odd_ok and locus_err < 0.01 and elapsed < 120
    summary = "; ".join(f"lambda={lam}: " + ",".join(f"{o}@{s:.4f}" for o, s in tr) for lam, tr in found.items())
    criterion(8, ok, f"{summary}; p=5 first-order free: {odd_ok}; locus error {locus_err:.4f} (< 0.01); "
                     f"{elapsed:.1f} s")
    assert ok


def _coherent(theta, phi, N):
    one = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
    return oracles.kron_all([one] * N).ravel()


def test_criterion_09_coherent_expectations(criterion):
    N = 6
    worst = 0.0
    for p in (1, 2):
        pairs = [oracles.majorana(2 * (k + p) - 1, N) @ oracles.majorana(2 * k, N) for k in range(1, N - p + 1)]
        for th in np.linspace(0, math.pi, 20):
            for ph in np.linspace(0, 2 * math.pi, 20):
                psi = _coherent(th, ph, N)
                want = -1j * math.cos(th) ** (p - 1) * math.sin(th) ** 2 * math.cos(ph) ** 2
                lib = sc.coherent_expectations("majorana_pair_odd", sc.CoherentParams(th, ph % (2 * math.pi)), p)
                worst = max(worst, abs(lib - want))
                for op in pairs:
                    worst = max(worst, abs(np.vdot(psi, op @ psi) - want))
    ok = worst < 1e-10
    criterion(9, ok, f"N=6, p in (1, 2), 20x20 grid, max error {worst:.2e} (< 1e-10)")
    assert ok


def test_criterion_10_otoc(criterion):
    t0 = time.perf_counter()
    N, p, lam = 8, 6, 1.0
    H = sc.finite_hamiltonian(N, p, 0.5, lam)
    Hn = H / float(np.linalg.norm(H.to_dense(), 2))     # a function of H with unit norm
    F = otoc.compute_F(otoc.OtocSpec(H, Hn @ Hn - Hn * 0.5)).F_values
    const = float(np.abs(F - F[0]).max())
    c_min = min(float(otoc.compute_C(otoc.OtocSpec(sc.finite_hamiltonian(N, p, s, lam), otoc.default_V(N)),
                                     algebra.build_site_operator(kind, 0, N)).min())
                for s in (0.3, 0.7653, 0.9) for kind in ("X", "Z"))
    s_values = np.linspace(0.0, 0.99, 100)
    series = otoc.fhat_sweep(N, p, lam, s_values)
    s_peak = otoc.steepest_change(s_values, [x.F_hat for x in series])
    s_first = [s for o, s in sc.transitions(sc.classify_transition(6, lam, sc.default_s_grid(1000)))
               if o == "first"][0]
    elapsed = time.perf_counter() - t0
    ok = const < 1e-10 and c_min >= -1e-10 and abs(s_peak - s_first) <= 0.05 and elapsed < 600
    criterion(10, ok, f"F constant to {const:.1e}; min C {c_min:.2e} (>= -1e-10); steepest dF_hat/ds at "
                      f"s={s_peak:.4f} vs first-order s={s_first:.4f} (|diff| {abs(s_peak - s_first):.4f}, "
                      f"needs <= 0.05); {elapsed:.1f} s")
    assert ok


def test_criterion_11_tsp(criterion):
    matches, floor_ok = 0, True
    for seed in range(20):
        inst = U.random_tsp_instance(3, seed)
        e0, _, tour = U.solve_tsp_hamiltonian(inst)
        best = min(sum(inst.D[t[i + 1], t[i]] for i in range(2)) for t in itertools.permutations(range(3)))
        optimal = [list(t) for t in itertools.permutations(range(3))
                   if abs(sum(inst.D[t[i + 1], t[i]] for i in range(2)) - best) < 1e-12]
        matches += tour in optimal and abs(e0 - best) < 1e-9
        energies = U.tsp_energies(inst)
        infeasible = np.array([U.decode_tour(s, 3) is None for s in range(energies.size)])
        floor = best + min(inst.penalty1, inst.penalty2)
        floor_ok &= bool(energies[infeasible].min() >= floor)
    ok = matches == 20 and floor_ok
    criterion(11, ok, f"{matches}/20 ground states are brute-force optimal; infeasible above penalty floor: {floor_ok}")
    assert ok


REPRO = {
    "butterfly": ["--width", "4", "--height", "4", "--flux-den", "13"],
    "density": ["--width", "4", "--height", "3", "--t-end", "3"],
    "anneal_prob": ["--a", "0.5", "--samples", "30"],
    "gap": ["--width", "3", "--height", "2", "--flux-den", "7", "--s-points", "21"],
    "phase_diagram": ["--lambdas", "1.0,0.4", "--s-points", "200", "--slice-s", "0.5,0.8"],
    "otoc": ["--N", "5", "--p", "2", "--s-points", "8", "--t-max", "10", "--samples", "50"],
    "clock": ["--gates", "GATE H 0; GATE CNOT 0 1; GATE RX(0.3) 1"],
    "decompose": ["--op", "random", "--sites", "3", "--seed", "11"],
    "tsp": ["--cities", "3", "--seed", "5"],
}


def _run_all(root: Path) -> dict[str, str]:
    digests = {}
    for name, args in REPRO.items():
        out = root / name
        assert cli.main([name, *args, "--threads", "1", "--out", str(out)]) == 0
        for f in sorted(out.iterdir()):
            digests[f"{name}/{f.name}"] = hashlib.sha256(f.read_bytes()).hexdigest()
    for name, kind in (("butterfly", "butterfly"), ("anneal_prob", "probability")):
        src = root / name / ("butterfly.csv" if kind == "butterfly" else "anneal.csv")
        assert cli.main(["render", "--csv", str(src), "--kind", kind, "--threads", "1"]) == 0
        svg = src.with_suffix(".svg")
        digests[f"render/{svg.name}"] = hashlib.sha256(svg.read_bytes()).hexdigest()
    return digests


def test_criterion_12_reproducibility(criterion, tmp_path):
    a = _run_all(tmp_path / "first")
    b = _run_all(tmp_path / "second")
    differing = sorted(k for k in a if a[k] != b.get(k))
    ok = a.keys() == b.keys() and not differing
    criterion(12, ok, f"{len(a)} files from {len(REPRO) + 1} subcommands byte-identical across two runs"
              + (f"; differing: {differing}" if differing else ""))
    assert ok
