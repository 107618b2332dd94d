"""Spin-coherent potential of the Majorana p-chain with a non-stoquastic driver.

Product states |theta, phi> = (cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>)^N
reduce H(s, lambda) / N in the large-N limit to

    V = s lam cos^{p-1}(theta) sin^2(theta) - (1 - s) sin(theta) cos(phi)
        + s (1 - lam) h sin^2(theta) cos^2(phi)

with h the mean antiferromagnetic coupling.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from . import algebra, models
from .errors import GridTooCoarse, InvalidSpec

ORDERS = ("none", "first", "second")
JUMP_FACTOR = 10.0
BISECTION_STEPS = 40


@dataclass(frozen=True)
class PotentialSpec:
    p: int
    s: float
    lam: float
    h: float = 1.0

    def __post_init__(self):
        if self.p < 1:
            raise InvalidSpec(f"p must be >= 1, got {self.p}")
        if not 0.0 <= self.s <= 1.0:
            raise InvalidSpec(f"s={self.s} outside [0, 1]")
        if not 0.0 <= self.lam <= 1.0:
            raise InvalidSpec(f"lambda={self.lam} outside [0, 1]")


@dataclass(frozen=True)
class CoherentParams:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise InvalidSpec(f"theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise InvalidSpec(f"phi={self.phi} outside [0, 2 pi)")


@dataclass(frozen=True)
class PhasePoint:
    s: float
    lam: float
    theta_min: float
    order: str = "none"
    s_critical: float | None = None   # bisection-refined location when order != "none"


def _pow(coef, c, k):
    # coef * c**k, with the convention that a zero coefficient kills negative powers at c = 0
    if coef == 0:
        return np.zeros_like(c)
    return coef * c ** k


def potential(spec: PotentialSpec, params: CoherentParams | None = None, theta=None, phi=0.0):
    """V at ``params`` or, vectorized, at arrays ``theta`` / ``phi``."""
    if params is not None:
        theta, phi = params.theta, params.phi
    th = np.asarray(theta, dtype=float)
    c, sn, cphi = np.cos(th), np.sin(th), np.cos(phi)
    s, lam, p = spec.s, spec.lam, spec.p
    v = s * lam * c ** (p - 1) * sn ** 2 - (1 - s) * sn * cphi \
        + s * (1 - lam) * spec.h * sn ** 2 * cphi ** 2
    return float(v) if np.ndim(v) == 0 else v


def dV_dtheta(spec: PotentialSpec, theta, phi=0.0):
    th = np.asarray(theta, dtype=float)
    c, sn, cphi = np.cos(th), np.sin(th), np.cos(phi)
    s, lam, p = spec.s, spec.lam, spec.p
    f1 = _pow(-(p - 1), c, p - 2) * sn ** 3 + 2 * c ** p * sn
    out = s * lam * f1 - (1 - s) * c * cphi + s * (1 - lam) * spec.h * 2 * sn * c * cphi ** 2
    return float(out) if np.ndim(out) == 0 else out


def d2V_dtheta2(spec: PotentialSpec, theta, phi=0.0):
    th = np.asarray(theta, dtype=float)
    c, sn, cphi = np.cos(th), np.sin(th), np.cos(phi)
    s, lam, p = spec.s, spec.lam, spec.p
    f1 = (_pow((p - 1) * (p - 2), c, p - 3) * sn ** 4 - 3 * (p - 1) * c ** (p - 1) * sn ** 2
          - 2 * p * c ** (p - 1) * sn ** 2 + 2 * c ** (p + 1))
    out = s * lam * f1 + (1 - s) * sn * cphi + s * (1 - lam) * spec.h * 2 * np.cos(2 * th) * cphi ** 2
    return float(out) if np.ndim(out) == 0 else out


def curvature_at_equator(p: int, s: float, lam: float, h: float = 1.0) -> float:
    """d^2V/dtheta^2 at theta = pi/2, phi = 0."""
    f1 = {1: -2.0, 3: 2.0}.get(p, 0.0)
    return s * lam * f1 + (1 - s) - 2 * s * (1 - lam) * h


def second_order_locus(p: int, lam: float, h: float = 1.0) -> float | None:
    """s in (0, 1] where the equator curvature vanishes, or None.

    For p = 2 and p >= 4 this is (1 - s) - 2 s (1 - lam) h = 0.
    """
    f1 = {1: -2.0, 3: 2.0}.get(p, 0.0)
    denom = 1 + 2 * (1 - lam) * h - lam * f1
    if denom <= 0:
        return None
    s = 1.0 / denom
    return s if 0 < s <= 1 else None


# -----------------------------------------------------------------------------
# coherent states
# -----------------------------------------------------------------------------

def coherent_state(theta: float, phi: float, N: int) -> np.ndarray:
    algebra._check_size(N)
    one = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
    out = np.ones(1, dtype=complex)
    for _ in range(N):
        out = np.kron(out, one)
    return out


def coherent_expectations(op_kind: str, params: CoherentParams, p: int = 1) -> complex:
    """Closed-form single-site or Majorana-pair expectations in |theta, phi>.

    ``majorana_pair_odd`` is c_{2(k+p)-1} c_{2k}; ``majorana_pair_even`` is
    c_{2(k+p)} c_{2k-1}.  Both hold for any bulk k with k + p <= N.
    """
    th, ph = params.theta, params.phi
    if op_kind == "X":
        return math.sin(th) * math.cos(ph)
    if op_kind == "n":
        return math.sin(th / 2) ** 2
    core = math.cos(th) ** (p - 1) * math.sin(th) ** 2
    if op_kind == "majorana_pair_odd":
        return -1j * core * math.cos(ph) ** 2
    if op_kind == "majorana_pair_even":
        return 1j * core * math.sin(ph) ** 2
    raise ValueError(f"unknown operator kind {op_kind!r}")


def coherent_expectation_numeric(op: algebra.SparseOperator, params: CoherentParams, N: int) -> complex:
    return op.expectation(coherent_state(params.theta, params.phi, N))


# -----------------------------------------------------------------------------
# minimization
# -----------------------------------------------------------------------------

def _refine(spec: PotentialSpec, lo: float, hi: float, guess: float) -> float:
    dlo, dhi = dV_dtheta(spec, lo), dV_dtheta(spec, hi)
    if dlo <= 0 <= dhi and dlo < dhi:
        return optimize.brentq(lambda t: dV_dtheta(spec, t), lo, hi, xtol=1e-15, rtol=1e-15)
    res = optimize.minimize_scalar(lambda t: potential(spec, theta=t), bounds=(lo, hi),
                                   method="bounded", options={"xatol": 1e-13})
    return float(res.x) if res.success else guess


def find_theta_min(spec: PotentialSpec, grid_size: int = 2001) -> float:
    """Global minimizer of V(theta, phi=0) on [0, pi].

    Scans a uniform grid, refines every discrete local minimum to a root of
    V', and returns the lowest one; near-ties (1e-12) go to the smaller theta.
    """
    if grid_size < 100:
        raise ValueError("grid_size must be at least 100")
    grid = np.linspace(0.0, math.pi, grid_size)
    v = potential(spec, theta=grid)
    vmin = v.min()
    # discrete local minima that could plausibly hold the global one
    left = np.r_[np.inf, v[:-1]]
    right = np.r_[v[1:], np.inf]
    cand = np.nonzero((v <= left) & (v <= right) & (v <= vmin + 1e-6 + 1e-9 * abs(vmin)))[0]
    best_t, best_v = grid[int(np.argmin(v))], vmin
    found = []
    for i in cand:
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_size - 1)]
        t = _refine(spec, lo, hi, grid[i])
        if abs(t - math.pi / 2) < 1e-9 and abs(dV_dtheta(spec, math.pi / 2)) < 1e-10:
            t = math.pi / 2
        vt = potential(spec, theta=t)
        if vt > v[i]:
            t, vt = grid[i], v[i]
        found.append((t, vt))
    if found:
        best_v = min(vt for _, vt in found)
        best_t = min(t for t, vt in found if vt <= best_v + 1e-12)
    return float(best_t)


# -----------------------------------------------------------------------------
# transitions
# -----------------------------------------------------------------------------

def _theta(p, lam, h, s, grid_size):
    return find_theta_min(PotentialSpec(p, float(s), lam, h), grid_size)


def _confirm_jump(p, lam, h, s_lo, s_hi, t_lo, t_hi, grid_size):
    """Bisect [s_lo, s_hi] toward the larger theta change; return (s_c, final jump)."""
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (s_lo + s_hi)
        t_mid = _theta(p, lam, h, mid, grid_size)
        if abs(t_mid - t_lo) >= abs(t_hi - t_mid):
            s_hi, t_hi = mid, t_mid
        else:
            s_lo, t_lo = mid, t_mid
    return 0.5 * (s_lo + s_hi), abs(t_hi - t_lo)


def classify_transition(p: int, lam: float, s_grid: Sequence[float], h: float = 1.0,
                        grid_size: int = 2001, jump_factor: float = JUMP_FACTOR) -> list[PhasePoint]:
    """theta_min along ``s_grid`` with transition labels.

    A change |dtheta| > jump_factor * ds between neighbours is a candidate
    first-order point.  Because a square-root onset can exceed that slope on
    a finite grid, candidates are confirmed by bisecting the interval: a real
    discontinuity keeps its size while ds shrinks by 2^-40.  A candidate
    whose residual jump is neither clearly finite nor clearly zero raises
    GridTooCoarse.  Second order is flagged where the equator curvature
    changes sign while theta_min leaves pi/2 without a confirmed jump.
    """
    s_grid = np.asarray(s_grid, dtype=float)
    if s_grid.size < 2 or np.any(np.diff(s_grid) <= 0) or s_grid[0] < 0 or s_grid[-1] > 1:
        raise ValueError("s_grid must be strictly increasing inside [0, 1] with >= 2 points")
    thetas = np.array([_theta(p, lam, h, s, grid_size) for s in s_grid])
    orders = ["none"] * s_grid.size
    crit: list[float | None] = [None] * s_grid.size
    first_intervals = set()
    for i in range(s_grid.size - 1):
        ds = s_grid[i + 1] - s_grid[i]
        threshold = jump_factor * ds
        if abs(thetas[i + 1] - thetas[i]) <= threshold:
            continue
        s_c, jump = _confirm_jump(p, lam, h, s_grid[i], s_grid[i + 1], thetas[i], thetas[i + 1],
                                  grid_size)
        if jump > threshold:
            orders[i + 1] = "first"
            crit[i + 1] = float(s_c)
            first_intervals.add(i)
        elif jump > 1e-4:
            raise GridTooCoarse(f"ambiguous jump {jump:.3g} near s={s_c:.6f}")
    on_equator = np.abs(thetas - math.pi / 2) < 1e-8
    curv = np.array([curvature_at_equator(p, s, lam, h) for s in s_grid])
    for i in range(1, s_grid.size):
        if curv[i - 1] > 0 >= curv[i] and on_equator[i - 1] and (i - 1) not in first_intervals:
            ahead = on_equator[i:min(i + 3, s_grid.size)]
            if not ahead.all() and orders[i] == "none":
                orders[i] = "second"
                s_star = second_order_locus(p, lam, h)
                crit[i] = s_star
    return [PhasePoint(float(s), lam, float(t), o, c)
            for s, t, o, c in zip(s_grid, thetas, orders, crit)]


def transitions(points: Sequence[PhasePoint]) -> list[tuple[str, float]]:
    """(order, s_critical) for each labelled point, in s order."""
    return [(pt.order, pt.s_critical if pt.s_critical is not None else pt.s)
            for pt in points if pt.order != "none"]


def default_s_grid(n: int = 1000) -> np.ndarray:
    # s = 1 is left out: with lambda < 1 the two poles become exactly degenerate there
    return np.linspace(0.0, 1.0, n, endpoint=False)


def phase_diagram(p: int, lambdas: Sequence[float], s_grid: Sequence[float] | None = None,
                  h: float = 1.0, threads: int = 1, grid_size: int = 2001) -> list[PhasePoint]:
    """classify_transition for each lambda, concatenated in input order."""
    s_grid = default_s_grid() if s_grid is None else s_grid

    def one(lam):
        return classify_transition(p, float(lam), s_grid, h, grid_size)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(one, lambdas))
    else:
        rows = [one(lam) for lam in lambdas]
    return [pt for row in rows for pt in row]


# -----------------------------------------------------------------------------
# finite-N diagnostic
# -----------------------------------------------------------------------------

def finite_hamiltonian(N: int, p: int, s: float, lam: float) -> algebra.SparseOperator:
    """s (lam H0 + (1 - lam) H_AF) + (1 - s) H1 with H1 = -sum X_i."""
    return models.annealing_hamiltonian(
        models.build_majorana_chain(models.MajoranaChainSpec(N, p)),
        models.build_antiferromagnetic_term(N), models.build_transverse_field(N), s, lam)


def ground_space_distance(N: int, p: int, s: float, lam: float, theta: float | None = None,
                          tol: float = 1e-9) -> float:
    """Trace distance from |theta, 0> to the (possibly degenerate) ground space at finite N.

    Uses theta_min of the large-N potential by default.  Diagnostic only.
    """
    if N > 10:
        raise ValueError("diagnostic limited to N <= 10")
    if theta is None:
        theta = find_theta_min(PotentialSpec(p, s, lam))
    e, vecs = np.linalg.eigh(finite_hamiltonian(N, p, s, lam).to_dense())
    ground = vecs[:, e <= e[0] + tol]
    psi = coherent_state(theta, 0.0, N)
    overlap = float((np.abs(ground.conj().T @ psi) ** 2).sum())
    return math.sqrt(max(0.0, 1.0 - overlap))
