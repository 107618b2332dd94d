"""Command-line experiments.  Each subcommand writes CSVs plus a manifest.

Parameters come from defaults, then an optional ``key = value`` config file,
then command-line flags, later sources winning.  Exit codes: 2 for bad
configuration or CSV schema, 3 for numerical failures, 4 for I/O errors.
Nothing is written unless the whole computation succeeds.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import os
import sys
import tempfile
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__, algebra, anneal, models, otoc, semiclassical, universality
from .errors import ConfigError, FieldAnnealError, SchemaError

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE, EXIT_IO = 0, 2, 3, 4


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


@dataclass(frozen=True)
class Param:
    type: Callable[[str], Any]
    default: Any = None
    required: bool = False
    help: str = ""


EXPERIMENTS: dict[str, dict[str, Param]] = {
    "butterfly": {
        "width": Param(int, 10), "height": Param(int, 10),
        "flux_den": Param(int, 101, help="fluxes k/flux_den for k = 1 .. flux_den-1"),
    },
    "density": {
        "width": Param(int, 20), "height": Param(int, 20),
        "flux_num": Param(int, 1), "flux_den": Param(int, 11),
        "schedule": Param(str, "exp_decay"), "a": Param(float, 1.0), "tau": Param(float),
        "t_end": Param(float, 20.0), "rtol": Param(float, 1e-9),
    },
    "anneal_prob": {
        "width": Param(int, 3), "height": Param(int, 3),
        "flux_num": Param(int, 1), "flux_den": Param(int, 11),
        "schedule": Param(str, "exp_decay"), "a": Param(float, 0.1), "tau": Param(float),
        "gamma_stop": Param(float, 0.01),
        "t_end": Param(float, help="defaults to the gamma_stop time (tau for arctan_finite)"),
        "samples": Param(int, 200), "rtol": Param(float, 1e-9),
    },
    "gap": {
        "width": Param(int, 3), "height": Param(int, 3), "flux_den": Param(int, 11),
        "s_points": Param(int, 101),
    },
    "phase_diagram": {
        "p": Param(int, 6), "lambdas": Param(_floats, [1.0, 0.4, 0.2]),
        "s_points": Param(int, 1000), "h": Param(float, 1.0), "grid_size": Param(int, 2001),
        "slice_s": Param(_floats, [], help="comma-separated s values for potential slices"),
    },
    "otoc": {
        "N": Param(int, 8), "p": Param(int, 6), "lam": Param(float, 1.0),
        "s_points": Param(int, 100), "s_max": Param(float, 0.99),
        "t_max": Param(float, 50.0), "samples": Param(int, 500),
        "v_op": Param(str, "sum_x", help="sum_x, sum_z, x1 or z1"),
    },
    "clock": {
        "circuit": Param(str, help="gate-list file"),
        "gates": Param(str, "GATE H 0; GATE CNOT 0 1", help="';'-separated gate lines"),
    },
    "decompose": {
        "op": Param(str, "identity", help="identity, number, cnot, random or file"),
        "sites": Param(int, 1), "op_file": Param(str),
    },
    "tsp": {
        "cities": Param(int, 3), "distances": Param(str, help="CSV of i,j,distance"),
    },
    "render": {
        "csv": Param(str, required=True), "kind": Param(str, required=True),
    },
}

GLOBALS = {"seed": Param(int, 0), "threads": Param(int, os.cpu_count() or 1), "out": Param(str)}


# -----------------------------------------------------------------------------
# configuration
# -----------------------------------------------------------------------------

def read_config_file(path) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (x.strip() for x in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def resolve_config(experiment: str, file_values: dict[str, str], cli_values: dict[str, Any]
                   ) -> dict[str, Any]:
    """defaults < file < command line; unknown keys and missing required keys are errors."""
    table = {**EXPERIMENTS[experiment], **GLOBALS}
    file_values = dict(file_values)
    named = file_values.pop("experiment", experiment)
    if named != experiment:
        raise ConfigError(f"config file is for {named!r}, not {experiment!r}")
    unknown = sorted(set(file_values) - set(table))
    if unknown:
        raise ConfigError(f"unknown config keys for {experiment}: {', '.join(unknown)}")
    cfg = {k: p.default for k, p in table.items()}
    for source in (file_values, {k: v for k, v in cli_values.items() if v is not None}):
        for k, v in source.items():
            try:
                cfg[k] = table[k].type(v) if isinstance(v, str) else v
            except ValueError as exc:
                raise ConfigError(f"bad value for {k}: {v!r}") from exc
    missing = [k for k, p in table.items() if p.required and cfg[k] is None]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    return cfg


def config_text(experiment: str, cfg: dict[str, Any]) -> str:
    lines = [f"experiment = {experiment}"]
    for k in sorted(cfg):
        if k in ("out", "threads"):
            continue
        v = cfg[k]
        if isinstance(v, list):
            v = ",".join(repr(float(x)) for x in v)
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def _check(cond, msg):
    if not cond:
        raise ConfigError(msg)


# -----------------------------------------------------------------------------
# CSV helpers
# -----------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _metrics(pairs) -> str:
    return csv_text(["metric", "value"], pairs)


# -----------------------------------------------------------------------------
# experiments; each returns {filename: text or bytes}
# -----------------------------------------------------------------------------

def _lattice(cfg, flux) -> models.LatticeSpec:
    _check(cfg["width"] >= 1 and cfg["height"] >= 1 and cfg["width"] * cfg["height"] >= 2,
           "need width, height >= 1 and at least two sites")
    return models.LatticeSpec(cfg["width"], cfg["height"], flux)


def _flux(cfg) -> Fraction:
    _check(cfg["flux_den"] >= 1 and 0 <= cfg["flux_num"] < cfg["flux_den"],
           "need 0 <= flux_num < flux_den")
    return Fraction(cfg["flux_num"], cfg["flux_den"])


def _schedule(cfg) -> anneal.Schedule:
    kind = cfg["schedule"]
    _check(kind in ("exp_decay", "inv_log", "arctan_finite"), f"unknown schedule {kind!r}")
    if kind == "arctan_finite":
        _check(cfg["tau"] is not None and cfg["tau"] > 0, "arctan_finite needs tau > 0")
    if kind == "exp_decay":
        _check(cfg["a"] > 0, "exp_decay needs a > 0")
    return anneal.Schedule(kind, a=cfg["a"], tau=cfg["tau"])


def run_butterfly(cfg):
    den = cfg["flux_den"]
    _check(den >= 2, "flux_den must be >= 2")
    _check(cfg["width"] * cfg["height"] <= 400, "lattice limited to 400 sites")
    fluxes = [Fraction(k, den) for k in range(1, den)]
    spectra = models.butterfly_sweep(cfg["width"], cfg["height"], fluxes, cfg["threads"])
    rows = [(k, den, i, e) for k, (_, energies) in enumerate(spectra, 1)
            for i, e in enumerate(energies)]
    return {"butterfly.csv": csv_text(["flux_num", "flux_den", "eigenvalue_index", "energy"], rows)}


def _density_rows(spec, dens):
    return [(m, n, dens[spec.index(m, n)]) for n in range(spec.height) for m in range(spec.width)]


def run_density(cfg):
    spec = _lattice(cfg, _flux(cfg))
    _check(spec.sites <= 400, "single-particle sector limited to 400 sites")
    _check(cfg["t_end"] > 0, "t_end must be positive")
    H0 = models.build_hofstadter_single_particle(spec)
    H1 = models.build_xx_driver_single_particle(spec)
    prob = anneal.AnnealProblem(H0, H1, _schedule(cfg))
    trace = anneal.evolve(prob, cfg["t_end"], [0.0, cfg["t_end"]], rtol=cfg["rtol"])
    _, g = models.ground_state(H0)
    final = models.site_density(trace.final_state)
    ground = models.site_density(g)
    header = ["m", "n", "density"]
    return {
        "density.csv": csv_text(header, _density_rows(spec, final)),
        "density_ground.csv": csv_text(header, _density_rows(spec, ground)),
        "density_initial.csv": csv_text(header, _density_rows(spec, models.site_density(trace.states[0]))),
        "density_summary.csv": _metrics([
            ("density_trace_distance", anneal.density_trace_distance(final, ground)),
            ("state_trace_distance", anneal.pure_state_trace_distance(trace.final_state, g)),
            ("max_norm_drift", float(trace.norm_drift.max())),
        ]),
    }


def anneal_end_time(cfg, sched: anneal.Schedule) -> float:
    if cfg["t_end"] is not None:
        return cfg["t_end"]
    if sched.kind == "arctan_finite":
        return sched.tau
    if sched.kind == "inv_log":
        raise ConfigError("inv_log needs an explicit t_end (its gamma_stop time is astronomically long)")
    return sched.stop_time(cfg["gamma_stop"])


def run_anneal_prob(cfg):
    spec = _lattice(cfg, _flux(cfg))
    _check(spec.sites <= 400, "single-particle sector limited to 400 sites")
    _check(0 < cfg["gamma_stop"] < 1, "gamma_stop must lie in (0, 1)")
    _check(cfg["samples"] >= 2, "samples must be >= 2")
    sched = _schedule(cfg)
    t_end = anneal_end_time(cfg, sched)
    _check(t_end > 0, "t_end must be positive")
    H0 = models.build_hofstadter_single_particle(spec)
    H1 = models.build_xx_driver_single_particle(spec)
    trace = anneal.evolve(anneal.AnnealProblem(H0, H1, sched), t_end,
                          np.linspace(0.0, t_end, cfg["samples"]), rtol=cfg["rtol"])
    k = min(4, H0.dim)
    P = np.zeros((trace.times.size, 4))
    P[:, :k] = anneal.occupation_probabilities(trace, H0, k)
    rows = [(t, g, *p, d) for t, g, p, d in zip(trace.times, trace.gammas, P, trace.norm_drift)]
    return {"anneal.csv": csv_text(["t", "gamma", "P0", "P1", "P2", "P3", "norm_drift"], rows)}


def run_gap(cfg):
    den = cfg["flux_den"]
    _check(den >= 1 and cfg["s_points"] >= 2, "need flux_den >= 1 and s_points >= 2")
    _check(cfg["width"] * cfg["height"] <= 400, "lattice limited to 400 sites")
    _lattice(cfg, Fraction(0))
    s_grid = np.linspace(0.0, 1.0, cfg["s_points"])

    def one(k):
        spec = models.LatticeSpec(cfg["width"], cfg["height"], Fraction(k, den))
        prob = anneal.AnnealProblem(models.build_hofstadter_single_particle(spec),
                                    models.build_xx_driver_single_particle(spec))
        return anneal.minimal_gap(prob, s_grid)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        if cfg["threads"] > 1:
            with ThreadPoolExecutor(cfg["threads"]) as pool:
                res = list(pool.map(one, range(den)))
        else:
            res = [one(k) for k in range(den)]
    rows = [(k, den, d, s) for k, (d, s) in enumerate(res)]
    return {"gap.csv": csv_text(["flux_num", "flux_den", "delta", "s_at_min"], rows)}


def run_phase_diagram(cfg):
    _check(cfg["p"] >= 1, "p must be >= 1")
    _check(cfg["lambdas"] and all(0 <= x <= 1 for x in cfg["lambdas"]), "lambdas must lie in [0, 1]")
    _check(cfg["s_points"] >= 2 and cfg["grid_size"] >= 100, "need s_points >= 2, grid_size >= 100")
    _check(all(0 <= s <= 1 for s in cfg["slice_s"]), "slice_s values must lie in [0, 1]")
    pts = semiclassical.phase_diagram(cfg["p"], cfg["lambdas"], semiclassical.default_s_grid(cfg["s_points"]),
                                      cfg["h"], cfg["threads"], cfg["grid_size"])
    out = {"phase.csv": csv_text(["s", "lambda", "theta_min", "order"],
                                 [(pt.s, pt.lam, pt.theta_min, pt.order) for pt in pts])}
    trows = []
    for lam in cfg["lambdas"]:
        locus = semiclassical.second_order_locus(cfg["p"], lam, cfg["h"])
        found = [pt for pt in pts if pt.lam == lam and pt.order != "none"]
        for pt in found:
            trows.append((lam, pt.order, pt.s_critical, "" if locus is None else locus))
        if not found:
            trows.append((lam, "none", "", "" if locus is None else locus))
    out["transitions.csv"] = csv_text(["lambda", "order", "s_critical", "analytic_second_order_s"], trows)
    theta = np.linspace(0.0, np.pi, 361)
    for s in cfg["slice_s"]:
        for lam in cfg["lambdas"]:
            V = semiclassical.potential(semiclassical.PotentialSpec(cfg["p"], s, lam, cfg["h"]), theta=theta)
            out[f"potential_s{s!r}_lambda{lam!r}.csv"] = csv_text(["theta", "V"], zip(theta, V))
    return out


_V_OPS = {
    "sum_x": lambda N: otoc.default_V(N),
    "sum_z": lambda N: sum((algebra.build_site_operator("Z", i, N) for i in range(1, N)),
                           algebra.build_site_operator("Z", 0, N)) / N,
    "x1": lambda N: algebra.build_site_operator("X", 0, N),
    "z1": lambda N: algebra.build_site_operator("Z", 0, N),
}


def run_otoc(cfg):
    N, p = cfg["N"], cfg["p"]
    _check(2 <= N <= 8, "N must lie in [2, 8] for dense evolution")
    _check(1 <= p < N, "need 1 <= p < N")
    _check(0 <= cfg["lam"] <= 1 and 0 < cfg["s_max"] <= 1, "lam in [0, 1] and s_max in (0, 1]")
    _check(cfg["s_points"] >= 2 and cfg["samples"] >= 2 and cfg["t_max"] > 0,
           "need s_points >= 2, samples >= 2, t_max > 0")
    _check(cfg["v_op"] in _V_OPS, f"v_op must be one of {sorted(_V_OPS)}")
    s_vals = np.linspace(0.0, cfg["s_max"], cfg["s_points"])
    V = _V_OPS[cfg["v_op"]](N)
    series = otoc.fhat_sweep(N, p, cfg["lam"], s_vals, V, cfg["t_max"], cfg["samples"], cfg["threads"])
    lam = cfg["lam"]
    rows = [(s, lam, t, f.real, f.imag) for s, ser in zip(s_vals, series)
            for t, f in zip(ser.times, ser.F_values)]
    summary = [(s, lam, ser.F_hat.real, ser.F_hat.imag) for s, ser in zip(s_vals, series)]
    return {
        "otoc.csv": csv_text(["s", "lambda", "t", "Re_F", "Im_F"], rows),
        "otoc_summary.csv": csv_text(["s", "lambda", "Re_Fhat", "Im_Fhat"], summary),
        "otoc_peak.csv": _metrics([("s_max_dFhat_ds",
                                    otoc.steepest_change(s_vals, [x.F_hat for x in series]))]),
    }


def run_clock(cfg):
    if cfg["circuit"]:
        text = Path(cfg["circuit"]).read_text()
    else:
        text = "\n".join(x.strip() for x in cfg["gates"].split(";"))
    circuit = universality.parse_gate_list(text)
    h_init, h_final = universality.build_clock_hamiltonians(circuit)
    hist = universality.history_state(circuit)
    init = universality.initial_clock_state(circuit)
    rows = [
        ("logical_qubits", circuit.n), ("clock_qubits", circuit.L),
        ("norm_H_final_history", float(np.linalg.norm(h_final @ hist))),
        ("norm_H_init_initial", float(np.linalg.norm(h_init @ init))),
    ]
    if h_final.dim <= 4096:
        rows.append(("ground_energy_H_final", float(np.linalg.eigvalsh(h_final.to_dense())[0])))
        rows.append(("ground_energy_H_init", float(np.linalg.eigvalsh(h_init.to_dense())[0])))
    return {"clock.csv": _metrics(rows)}


def _decompose_target(cfg) -> algebra.SparseOperator:
    L, kind = cfg["sites"], cfg["op"]
    _check(1 <= L <= universality.MAX_DECOMPOSE_SITES,
           f"sites must lie in [1, {universality.MAX_DECOMPOSE_SITES}]")
    if kind == "identity":
        return algebra.identity(L)
    if kind == "number":
        return algebra.build_site_operator("n", 0, L)
    if kind == "cnot":
        _check(L >= 2, "cnot needs sites >= 2")
        return universality.build_cnot(0, 1, L)
    if kind == "random":
        rng = np.random.default_rng(cfg["seed"])
        dim = 2 ** L
        return algebra.SparseOperator(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    if kind == "file":
        _check(cfg["op_file"], "op = file needs op_file")
        op = algebra.SparseOperator.from_text(Path(cfg["op_file"]).read_text())
        _check(op.dim == 2 ** L, f"operator in {cfg['op_file']} is not 2^{L} dimensional")
        return op
    raise ConfigError(f"unknown op {kind!r}")


def run_decompose(cfg):
    res = universality.decompose_operator(_decompose_target(cfg), cfg["sites"])
    rows = [(" ".join(map(str, c)), " ".join(map(str, a)), A.real, A.imag) for (c, a), A in res.items()]
    return {
        "coefficients.csv": csv_text(["creators", "annihilators", "re", "im"], rows),
        "decompose_summary.csv": _metrics([("sites", cfg["sites"]), ("residual", res.residual),
                                           ("terms", len(rows))]),
    }


def _tours(tours) -> str:
    return "|".join(" ".join(map(str, t)) for t in tours)


def run_tsp(cfg):
    if cfg["distances"]:
        inst = universality.read_tsp_csv(cfg["distances"])
    else:
        _check(2 <= cfg["cities"] <= 3, "cities must be 2 or 3 (N^2 qubits, cap 14)")
        inst = universality.random_tsp_instance(cfg["cities"], cfg["seed"])
    N = inst.N
    _check(N * N <= algebra.MAX_SITES, f"{N} cities need {N * N} qubits")
    energies = universality.tsp_energies(inst)
    e0, k0, tour = universality.solve_tsp_hamiltonian(inst)
    best, tours = universality.brute_force_tsp(inst.D)
    feasible = np.array([universality.decode_tour(s, N) is not None for s in range(energies.size)])
    floor = best + min(inst.penalty1, inst.penalty2)
    dist_rows = [(i, j, inst.D[i, j]) for i in range(N) for j in range(i + 1, N)]
    verify = [
        ("cities", N), ("penalty1", inst.penalty1), ("penalty2", inst.penalty2),
        ("ground_energy", e0), ("ground_state", k0),
        ("hamiltonian_tour", "" if tour is None else " ".join(map(str, tour))),
        ("hamiltonian_cost", "" if tour is None else universality.tour_cost(inst.D, tour)),
        ("brute_force_cost", best), ("brute_force_tours", _tours(tours)),
        ("match", tour is not None and tour in tours and abs(e0 - best) < 1e-9),
        ("penalty_floor", floor), ("min_infeasible_energy", float(energies[~feasible].min())),
    ]
    return {"distances.csv": csv_text(["i", "j", "distance"], dist_rows), "tsp.csv": _metrics(verify)}


def run_render(cfg):
    from .render import render_svg
    path = Path(cfg["csv"])
    if not path.is_file():
        raise ConfigError(f"no such CSV: {path}")
    return {path.stem + ".svg": render_svg(path, cfg["kind"])}


RUNNERS = {
    "butterfly": run_butterfly, "density": run_density, "anneal_prob": run_anneal_prob,
    "gap": run_gap, "phase_diagram": run_phase_diagram, "otoc": run_otoc, "clock": run_clock,
    "decompose": run_decompose, "tsp": run_tsp, "render": run_render,
}


# -----------------------------------------------------------------------------
# output
# -----------------------------------------------------------------------------

def manifest_text(experiment, cfg, files) -> str:
    ctext = config_text(experiment, cfg)
    lines = [
        f"experiment = {experiment}",
        f"version = {__version__}",
        f"seed = {cfg['seed']}",
        f"config_sha256 = {hashlib.sha256(ctext.encode()).hexdigest()}",
    ]
    for name in sorted(files):
        data = files[name] if isinstance(files[name], bytes) else files[name].encode()
        lines.append(f"file.{name} = sha256:{hashlib.sha256(data).hexdigest()}")
    lines.append("")
    lines.append("# resolved configuration")
    return "\n".join(lines) + "\n" + ctext


def write_outputs(out_dir: Path, files: dict[str, str | bytes]) -> list[Path]:
    """Write every file to a temporary name first, then rename them all into place."""
    out_dir.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, data in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out_dir)
            staged.append((tmp, out_dir / name))
            try:
                fh = os.fdopen(fd, "wb")
            except BaseException:
                os.close(fd)
                raise
            with fh:
                fh.write(data if isinstance(data, bytes) else data.encode())
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, dest in staged:
        os.replace(tmp, dest)
    return [dest for _, dest in staged]


def run(experiment: str, cfg: dict[str, Any]) -> list[Path]:
    """Compute ``experiment`` and write its files; returns the written paths."""
    _check(cfg["threads"] >= 1, "threads must be >= 1")
    _check(cfg.get("rtol", 1.0) > 0, "rtol must be positive")
    files = RUNNERS[experiment](cfg)
    files[f"manifest-{experiment}.txt"] = manifest_text(experiment, cfg, files)
    if cfg["out"] is not None:
        out = Path(cfg["out"])
    elif experiment == "render":
        out = Path(cfg["csv"]).parent
    else:
        out = Path("runs") / experiment
    return write_outputs(out, files)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; command-line flags take precedence")
    common.add_argument("--seed", type=int, help="seed for every random choice (default 0)")
    common.add_argument("--threads", type=int, help="worker pool size (default: all cores)")
    common.add_argument("--out", help="output directory (default runs/<experiment>)")
    parser = argparse.ArgumentParser(prog="fieldanneal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name, params in EXPERIMENTS.items():
        sp = sub.add_parser(name, parents=[common])
        for key, p in params.items():
            default = p.default if not isinstance(p.default, list) else ",".join(map(str, p.default))
            helptext = (p.help + " " if p.help else "") + f"(default {default})"
            sp.add_argument("--" + key.replace("_", "-"), dest=key, type=str, default=None,
                            help=helptext)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    experiment = args.experiment
    cli_values = {k: v for k, v in vars(args).items() if k not in ("experiment", "config")}
    try:
        file_values = read_config_file(args.config) if args.config else {}
        cfg = resolve_config(experiment, file_values, cli_values)
        paths = run(experiment, cfg)
    except (ConfigError, SchemaError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FieldAnnealError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
