"""Static SVG figures drawn from experiment CSVs."""
from __future__ import annotations

import csv
from io import BytesIO
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import SchemaError  # noqa: E402

SCHEMAS = {
    "butterfly": ["flux_num", "flux_den", "eigenvalue_index", "energy"],
    "density": ["m", "n", "density"],
    "probability": ["t", "gamma", "P0", "P1", "P2", "P3", "norm_drift"],
    "phase": ["s", "lambda", "theta_min", "order"],
    "potential": ["theta", "V"],
    "otoc": ["s", "lambda", "t", "Re_F", "Im_F"],
    "otoc_summary": ["s", "lambda", "Re_Fhat", "Im_Fhat"],
    "gap": ["flux_num", "flux_den", "delta", "s_at_min"],
}


def read_columns(path, kind: str) -> dict[str, list[str]]:
    if kind not in SCHEMAS:
        raise SchemaError(f"unknown plot kind {kind!r}; choose from {sorted(SCHEMAS)}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != SCHEMAS[kind]:
        got = rows[0] if rows else []
        raise SchemaError(f"{path}: header {got} does not match {kind} schema {SCHEMAS[kind]}")
    cols = {name: [] for name in rows[0]}
    for r in rows[1:]:
        if len(r) != len(rows[0]):
            raise SchemaError(f"{path}: ragged row {r}")
        for name, val in zip(rows[0], r):
            cols[name].append(val)
    return cols


def _f(cols, name):
    try:
        return np.array([float(x) for x in cols[name]])
    except ValueError as exc:
        raise SchemaError(f"column {name}: {exc}") from exc


def _draw(kind, cols, ax):
    if kind == "butterfly":
        ax.scatter(_f(cols, "flux_num") / _f(cols, "flux_den"), _f(cols, "energy"), s=0.2, c="k",
                   linewidths=0)
        ax.set_xlabel("flux")
        ax.set_ylabel("energy")
    elif kind == "density":
        d = _f(cols, "density")
        ax.scatter(_f(cols, "m"), _f(cols, "n"), s=400 * d / max(d.max(), 1e-300), c="tab:blue")
        ax.set_aspect("equal")
        ax.set_xlabel("m")
        ax.set_ylabel("n")
    elif kind == "probability":
        t = _f(cols, "t")
        for k in range(4):
            ax.plot(t, _f(cols, f"P{k}"), label=f"P{k}")
        ax.set_xlabel("t")
        ax.set_ylabel("probability")
        ax.legend()
    elif kind == "phase":
        s, lam, th = _f(cols, "s"), _f(cols, "lambda"), _f(cols, "theta_min")
        for val in sorted(set(lam)):
            sel = lam == val
            ax.plot(s[sel], th[sel], label=f"lambda={val:g}")
        orders = np.array(cols["order"])
        for o, mk in (("first", "x"), ("second", "o")):
            sel = orders == o
            if sel.any():
                ax.scatter(s[sel], th[sel], marker=mk, c="k", label=o)
        ax.set_xlabel("s")
        ax.set_ylabel("theta_min")
        ax.legend()
    elif kind == "potential":
        ax.plot(_f(cols, "theta"), _f(cols, "V"))
        ax.set_xlabel("theta")
        ax.set_ylabel("V")
    elif kind == "otoc":
        s, t, re = _f(cols, "s"), _f(cols, "t"), _f(cols, "Re_F")
        for val in sorted(set(s)):
            sel = s == val
            ax.plot(t[sel], re[sel], lw=0.5)
        ax.set_xlabel("t")
        ax.set_ylabel("Re F")
    elif kind == "otoc_summary":
        s = _f(cols, "s")
        ax.plot(s, _f(cols, "Re_Fhat"), label="Re")
        ax.plot(s, _f(cols, "Im_Fhat"), label="Im")
        ax.set_xlabel("s")
        ax.set_ylabel("F_hat")
        ax.legend()
    elif kind == "gap":
        ax.plot(_f(cols, "flux_num") / _f(cols, "flux_den"), _f(cols, "delta"), "o-")
        ax.set_xlabel("flux")
        ax.set_ylabel("minimal gap")


def render_svg(csv_path, kind: str) -> bytes:
    """SVG bytes for ``csv_path``; identical input gives identical output."""
    cols = read_columns(csv_path, kind)
    with plt.rc_context({"svg.hashsalt": "fieldanneal", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        try:
            _draw(kind, cols, ax)
            ax.set_title(Path(csv_path).name)
            buf = BytesIO()
            fig.savefig(buf, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buf.getvalue()
