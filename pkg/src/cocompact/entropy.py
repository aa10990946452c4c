"""Entropy estimators.

Bowen (n, eps) counts are numerical (float orbits on a grid); lap-growth and
transition-matrix entropies start from exact integer data; Markov entropies are
closed-form.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numba import njit
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BudgetExceeded, GridTooCoarse, InvalidMeasure, NotPerfect
from .intervals import Interval, pairwise_disjoint
from .plmap import PLMap, image_interval, is_perfect, iterate_lap_counts

METHODS = ("cover", "bowen-spanning", "bowen-separated", "lap-growth", "transition-matrix",
           "markov-measure", "horseshoe")
DIRECTIONS = ("lower-bound", "upper-bound", "estimate", "exact")


@dataclass
class EntropyEstimate:
    value: float
    method: str
    direction: str
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")
        if not self.value >= 0:
            raise ValueError(f"entropy must be nonnegative, got {self.value}")

    def to_json(self, log_base: str = "e") -> dict:
        return {
            "value": convert_log(self.value, log_base),
            "method": self.method,
            "direction": self.direction,
            "params": self.params,
        }


def convert_log(value: float, base: str = "e") -> float:
    if base == "e":
        return value
    return value / math.log(float(base))


def trailing_slope(ns: Sequence[int], logs: Sequence[float]) -> float:
    """Least-squares slope of ``logs`` against ``ns`` over the trailing half."""
    ns, logs = list(ns), list(logs)
    if not ns:
        raise ValueError("empty series")
    start = len(ns) // 2
    xs, ys = ns[start:], logs[start:]
    if len(xs) == 1:
        return ys[0] / xs[0]
    return float(np.polyfit(np.array(xs, float), np.array(ys, float), 1)[0])


def max_increment(logs: Sequence[float]) -> float:
    if len(logs) < 2:
        return logs[0] if logs else 0.0
    return max(b - a for a, b in zip(logs, logs[1:]))


@dataclass
class CountSeries:
    kind: str  # "spanning", "separated" or "laps"
    ns: list[int]
    counts: list[int]
    direction: str  # bound direction of each count w.r.t. the quantity it stands for
    params: dict = field(default_factory=dict)

    @property
    def log_counts(self) -> list[float]:
        return [math.log(c) for c in self.counts]

    @property
    def slope(self) -> float:
        return trailing_slope(self.ns, self.log_counts)

    @property
    def max_increment(self) -> float:
        return max_increment(self.log_counts)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "count", "log_count"])
        for n, c, lc in zip(self.ns, self.counts, self.log_counts):
            w.writerow([n, c, f"{lc:.12g}"])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "direction": self.direction,
            "n": self.ns,
            "count": self.counts,
            "slope": self.slope,
            "max_increment": self.max_increment,
            "params": self.params,
        }


# ---------------------------------------------------------------------------
# Bowen counts


def metric_distance(metric: str, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Pointwise distance; ``circle`` is the chord metric of the one-point compactification."""
    if metric == "euclid":
        with np.errstate(invalid="ignore"):
            d = np.abs(x - y)
        # two orbits at the same infinity are not separated
        return np.where(np.isnan(d), 0.0, d)
    if metric == "circle":
        return 2.0 * np.abs(np.sin(np.arctan(x) - np.arctan(y)))
    raise ValueError(f"unknown metric {metric!r}")


def _grid(K: Interval, step: float) -> np.ndarray:
    lo, hi = float(K.lo), float(K.hi)
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def orbit_table(f: PLMap, xs: np.ndarray, n: int) -> np.ndarray:
    """Row i holds ``x_i, f(x_i), ..., f^{n-1}(x_i)`` in floating point."""
    out = np.empty((len(xs), n))
    cur = np.asarray(xs, float)
    for j in range(n):
        out[:, j] = cur
        if j + 1 < n:
            with np.errstate(over="ignore", invalid="ignore"):
                cur = f.evaluate_float(cur)
    return out


def _first_coordinate(metric: str, x: np.ndarray, eps: float) -> tuple[np.ndarray, float]:
    """Monotone coordinate u(x) and radius r with d(x, y) > eps whenever |u(x) - u(y)| > r."""
    if metric == "euclid":
        return x, eps
    # chord = 2 sin(|dθ| / 2) is increasing in |dθ| up to π
    return 2.0 * np.arctan(x), 2.0 * math.asin(min(eps / 2.0, 1.0))


@njit(cache=True)
def _greedy_kernel(orbits, n, circle, eps, u, r, prune):
    N = orbits.shape[0]
    sel = np.empty(N, np.int64)
    k = 0
    for i in range(N):
        lo = 0
        if prune:
            a, b = 0, k
            while a < b:
                mid = (a + b) // 2
                if u[sel[mid]] < u[i] - r:
                    a = mid + 1
                else:
                    b = mid
            lo = a
        ok = True
        # nearest selected points first: they are the likeliest to reject
        for q in range(k - 1, lo - 1, -1):
            s = sel[q]
            far = False
            for j in range(n):
                x, y = orbits[i, j], orbits[s, j]
                if circle:
                    d = 2.0 * abs(math.sin(math.atan(x) - math.atan(y)))
                else:
                    d = abs(x - y)
                    if d != d:  # both orbits at the same infinity
                        d = 0.0
                if d > eps:
                    far = True
                    break
            if not far:
                ok = False
                break
        if ok:
            sel[k] = i
            k += 1
    return sel[:k]


def greedy_separated(orbits: np.ndarray, metric: str, eps: float) -> list[int]:
    """Left-to-right greedy maximal (n, eps)-separated subset of the grid rows.

    Rows must be sorted by their first column (the grid point itself); rows far
    apart in that coordinate are separated already at time 0 and are skipped.
    """
    if metric not in ("euclid", "circle"):
        raise ValueError(f"unknown metric {metric!r}")
    orbits = np.ascontiguousarray(orbits, dtype=float)
    u, r = _first_coordinate(metric, orbits[:, 0], eps)
    # pruning is only valid while no pair can come close again by wrapping around the circle
    prune = metric == "euclid" or (u[-1] - u[0]) < 2 * math.pi - 2 * r
    idx = _greedy_kernel(orbits, orbits.shape[1], metric == "circle", float(eps),
                         np.ascontiguousarray(u, dtype=float), float(r), bool(prune))
    return idx.tolist()


def bowen_counts(f: PLMap, metric: str, K: Interval, eps: float, n_max: int,
                 grid_step: float, saturation: Optional[float] = None) -> tuple[CountSeries, CountSeries]:
    """Greedy (n, eps)-separated counts on a uniform grid of ``K`` for n = 1..n_max.

    The greedy set is separated (its size is <= s_n) and, being maximal on the
    grid, it is also spanning for the grid (its size is >= r_n of the grid).
    With ``saturation`` set, the series stops after the first n whose count
    reaches that fraction of the grid: beyond it the grid, not the map, limits growth.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not K.bounded:
        raise ValueError("K must be bounded")
    xs = _grid(K, grid_step)
    if len(xs) > 1:
        spacing = float(metric_distance(metric, xs[1:], xs[:-1]).max())
        if spacing > eps / 4:
            raise GridTooCoarse(f"grid spacing {spacing:.3g} exceeds eps/4 = {eps / 4:.3g}")
    orbits = orbit_table(f, xs, n_max)
    counts = []
    for n in range(1, n_max + 1):
        counts.append(len(greedy_separated(orbits[:, :n], metric, eps)))
        if saturation is not None and counts[-1] >= saturation * len(xs):
            break
    params = {"metric": metric, "K": K.to_json(), "eps": eps, "grid_step": grid_step,
              "grid_points": int(len(xs)), "saturated": len(counts) < n_max}
    ns = list(range(1, len(counts) + 1))
    spanning = CountSeries("spanning", ns, list(counts), "upper-bound", dict(params))
    separated = CountSeries("separated", ns, counts, "lower-bound", params)
    return spanning, separated


SATURATION = 1 / 8


def hd_estimate(f: PLMap, metric: str, windows: Sequence[Interval], eps_list: Sequence[float],
                n_max: int, grid_step: float) -> EntropyEstimate:
    """Sup over windows of the separated-count growth rate at the smallest eps.

    Each series stops once it fills an eighth of the grid.
    """
    eps_sorted = sorted(eps_list, reverse=True)
    per_window = []
    best = 0.0
    for K in windows:
        slopes, used = {}, {}
        for eps in eps_sorted:
            _, sep = bowen_counts(f, metric, K, eps, n_max, grid_step, SATURATION)
            slopes[str(eps)] = sep.slope
            used[str(eps)] = len(sep.counts)
        s = slopes[str(eps_sorted[-1])]
        per_window.append({"K": K.to_json(), "slopes": slopes, "n_used": used})
        best = max(best, s)
    return EntropyEstimate(best, "bowen-separated", "estimate", {
        "metric": metric, "eps": list(eps_sorted), "n_max": n_max, "grid_step": grid_step,
        "windows": per_window, "window_limited": True,
    })


# ---------------------------------------------------------------------------
# lap growth


def lap_series(f: PLMap, n_max: int, budget: Optional[int] = None) -> CountSeries:
    """Exact lap counts of ``f^n``; stops early (and says so) once an iterate exceeds the budget."""
    counts = []
    try:
        for c in iterate_lap_counts(f, n_max, budget):
            counts.append(c)
    except BudgetExceeded:
        if len(counts) < 2:
            raise
    ns = list(range(1, len(counts) + 1))
    return CountSeries("laps", ns, counts, "exact",
                       {"n_max": n_max, "budget_truncated": len(counts) < n_max})


def lap_entropy(f: PLMap, n_max: int, budget: Optional[int] = None) -> EntropyEstimate:
    if not is_perfect(f):
        raise NotPerfect("lap entropy needs a perfect map")
    return lap_estimate(lap_series(f, n_max, budget))


def lap_estimate(series: CountSeries) -> EntropyEstimate:
    return EntropyEstimate(max(0.0, series.slope), "lap-growth", "estimate", {
        "n_max": series.params["n_max"],
        "lap_counts": series.counts,
        "budget_truncated": series.params["budget_truncated"],
        "max_increment": series.max_increment,
    })


# ---------------------------------------------------------------------------
# transition matrices


@dataclass
class TransitionMatrix:
    partition: tuple[Interval, ...]
    matrix: np.ndarray  # 0/1 integer matrix

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=np.int64)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1] or self.matrix.size == 0:
            raise ValueError("transition matrix must be square and nonempty")
        if not np.isin(self.matrix, (0, 1)).all():
            raise ValueError("transition matrix entries must be 0 or 1")

    @classmethod
    def from_array(cls, matrix) -> "TransitionMatrix":
        return cls((), np.asarray(matrix))

    def to_json(self) -> dict:
        return {"partition": [iv.to_json() for iv in self.partition],
                "matrix": self.matrix.tolist()}


def transition_matrix(f: PLMap, partition: Sequence[Interval]) -> TransitionMatrix:
    """Entry (i, j) is 1 iff the exact image ``f(J_i)`` contains ``J_j``."""
    partition = tuple(partition)
    if any(J.degenerate or not J.bounded for J in partition):
        raise ValueError("partition intervals must be bounded and nondegenerate")
    if not pairwise_disjoint(partition):
        raise ValueError("overlapping partition")
    images = [image_interval(f, J) for J in partition]
    m = [[int(img.contains_interval(J)) for J in partition] for img in images]
    return TransitionMatrix(partition, np.array(m))


def _perron_bounds(A: np.ndarray, tol: float, max_iter: int) -> tuple[float, float]:
    """Collatz-Wielandt bounds on the Perron root of an irreducible nonnegative block."""
    B = A + np.eye(A.shape[0])  # primitive, same Perron vector, root shifted by 1
    v = np.ones(A.shape[0])
    lo, hi = 0.0, math.inf
    for _ in range(max_iter):
        w = B @ v
        ratios = w / v
        lo, hi = max(lo, ratios.min()), min(hi, ratios.max())
        if hi - lo <= tol * hi:
            break
        v = w / w.max()
    return lo - 1.0, hi - 1.0


def spectral_radius(M, tol: float = 1e-10, max_iter: int = 1_000_000) -> float:
    """Spectral radius of a 0/1 matrix: power iteration on each strongly connected block."""
    A = np.asarray(M, dtype=float)
    n_comp, labels = connected_components(csr_matrix(A), directed=True, connection="strong")
    rho = 0.0
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        block = A[np.ix_(idx, idx)]
        if not block.any():
            continue
        lo, _ = _perron_bounds(block, tol, max_iter)
        rho = max(rho, lo)
    return rho


def spectral_entropy(M: TransitionMatrix | np.ndarray, tol: float = 1e-10,
                     covering: bool = False) -> EntropyEstimate:
    """log of the spectral radius (0 when the radius is below 1).

    ``covering`` marks matrices built from a verified covering partition, for which
    the value is a lower bound for the entropy of the map.
    """
    matrix = M.matrix if isinstance(M, TransitionMatrix) else np.asarray(M)
    rho = spectral_radius(matrix, tol)
    value = math.log(rho) if rho > 1 else 0.0
    return EntropyEstimate(value, "transition-matrix", "lower-bound" if covering else "exact",
                           {"spectral_radius": rho, "dimension": int(matrix.shape[0]), "tol": tol})


# ---------------------------------------------------------------------------
# measure-theoretic entropy of Markov measures


def phi(x: float) -> float:
    """-x log x on (0, 1], 0 at 0."""
    if not 0 <= x <= 1:
        raise ValueError(f"phi is defined on [0, 1], got {x}")
    return 0.0 if x == 0 else -x * math.log(x)


def _phi_array(w: np.ndarray) -> np.ndarray:
    out = np.zeros_like(w)
    pos = w > 0
    out[pos] = -w[pos] * np.log(w[pos])
    return out


@dataclass
class MarkovMeasure:
    p: np.ndarray
    P: np.ndarray
    support: Optional[TransitionMatrix] = None

    def __post_init__(self) -> None:
        self.p = np.asarray(self.p, dtype=float)
        self.P = np.asarray(self.P, dtype=float)
        k = len(self.p)
        if self.P.shape != (k, k):
            raise InvalidMeasure("P must be square and match p")
        if (self.p < 0).any() or (self.P < 0).any():
            raise InvalidMeasure("negative probabilities")
        if abs(self.p.sum() - 1) > 1e-12:
            raise InvalidMeasure("p must sum to 1")
        if np.abs(self.P.sum(axis=1) - 1).max() > 1e-12:
            raise InvalidMeasure("rows of P must sum to 1")
        if np.abs(self.p @ self.P - self.p).max() > 1e-12:
            raise InvalidMeasure("p is not stationary for P")
        if self.support is not None:
            if self.support.matrix.shape != (k, k):
                raise InvalidMeasure("support matrix has the wrong shape")
            if ((self.P > 0) & (self.support.matrix == 0)).any():
                raise InvalidMeasure("P charges transitions outside the support matrix")


def cylinder_entropy(mu: MarkovMeasure, n: int) -> float:
    """H of the partition into n-cylinders: sum of phi over cylinder weights."""
    k = len(mu.p)
    w = mu.p.copy()
    for _ in range(n - 1):
        # cylinders are laid out with the last symbol varying fastest
        w = (w.reshape(-1, k)[:, :, None] * mu.P[None, :, :]).reshape(-1)
    return float(_phi_array(w).sum())


def _rate(mu: MarkovMeasure) -> float:
    return float(sum(mu.p[i] * _phi_array(mu.P[i]).sum() for i in range(len(mu.p))))


def markov_entropy(mu: MarkovMeasure, n_check: int = 12, max_cylinders: int = 1_000_000,
                   tol: float = 1e-9) -> EntropyEstimate:
    """Entropy rate ``-sum_i p_i sum_j P_ij log P_ij``.

    Also checks that cylinder entropies grow by exactly that amount per step, so
    ``H_n / n`` converges to it.
    """
    h = _rate(mu)
    k = len(mu.p)
    n_top = n_check if k == 1 else min(n_check, int(math.log(max_cylinders) / math.log(k)))
    H = [cylinder_entropy(mu, n) for n in range(1, n_top + 1)]
    for a, b in zip(H, H[1:]):
        if abs((b - a) - h) > tol:
            raise InvalidMeasure(f"cylinder entropies do not grow at rate {h}")
    return EntropyEstimate(max(0.0, h), "markov-measure", "exact", {
        "states": k,
        "cylinder_H_over_n": [Hn / n for n, Hn in enumerate(H, start=1)],
    })


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """A stationary vector supported on the first closed communicating class."""
    P = np.asarray(P, float)
    k = P.shape[0]
    n_comp, labels = connected_components(csr_matrix(P > 0), directed=True, connection="strong")
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        outside = np.setdiff1d(np.arange(k), idx)
        if outside.size and (P[np.ix_(idx, outside)] > 0).any():
            continue
        Q = P[np.ix_(idx, idx)]
        m = len(idx)
        A = np.vstack([Q.T - np.eye(m), np.ones((1, m))])
        b = np.zeros(m + 1)
        b[-1] = 1.0
        sol = np.linalg.lstsq(A, b, rcond=None)[0]
        sol = np.clip(sol, 0, None)
        sol /= sol.sum()
        # a few power steps to polish to machine precision
        for _ in range(5):
            sol = sol @ Q
            sol /= sol.sum()
        p = np.zeros(k)
        p[idx] = sol
        return p
    raise InvalidMeasure("no closed class")  # unreachable for stochastic matrices


def random_support(rng: np.random.Generator, k: int, density: float = 0.5) -> np.ndarray:
    M = (rng.random((k, k)) < density).astype(np.int64)
    for i in range(k):
        if not M[i].any():
            M[i, rng.integers(k)] = 1
    return M


def random_markov_measure(rng: np.random.Generator, support: np.ndarray) -> MarkovMeasure:
    W = rng.random(support.shape) * support
    P = W / W.sum(axis=1, keepdims=True)
    p = stationary_distribution(P)
    return MarkovMeasure(p, P, TransitionMatrix.from_array(support))
