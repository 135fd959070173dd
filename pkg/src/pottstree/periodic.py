"""Period-two boundary laws of the antiferromagnetic model on the invariant sets I_m.

On I_m the period-two system reduces to ``x = f(y), y = f(x)`` for the scalar
map ``f`` below.  Period-two points are the roots of
``h(x) = ln f(x) - ln g(x)`` with ``g`` the inverse of ``f``; the roots are
isolated using the critical points of ``h`` (roots of the polynomial ``p(t)``,
``t = x^(1/k)``) as breakpoints on top of a dense log-spaced grid.

The class ``m = q`` is formal: the reduced map is evaluated with ``q - m = 0``.
Its window has no upper pole, so it is closed at ``f(theta_1)``, which bounds
every component of a solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .model import (
    ZERO_TOL,
    DomainError,
    FieldVector,
    InvariantClass,
    ModelParams,
    period_two_residual,
)
from .poly import descartes_positive_bound, numeric_roots
from .ti import DEDUP_TOL, bisect_scalar, dedup_vectors

GRID_POINTS = 4096
INSET = 1e-6


class RegimeError(ValueError):
    """Parameters outside the regime an operation is stated for."""


def theta_bar_cr(q: int, k: int) -> float:
    """Antiferromagnetic threshold ``(k-q+1)/(k+1)``."""
    return (k - q + 1) / (k + 1)


def formal_class_threshold(q: int, k: int) -> float | None:
    """theta below which the formal class m = q has no period-two pair.

    It is where the pole ``(1-theta)/q`` of f overtakes ``theta_1``; the outer
    period-two point runs off to infinity as theta decreases to it.  None if
    the pole never overtakes on (0, 1).
    """
    gap = lambda t: (1 - t) / q - ((t + q - 1) / q) ** k  # noqa: E731
    if gap(0.0) <= 0:
        return None
    return bisect_scalar(gap, 0.0, 1.0)


def _require_af(params: ModelParams, m: int):
    if not params.antiferromagnetic:
        raise RegimeError(f"period-two analysis needs 0 < theta < 1, got theta={params.theta}")
    if not 1 <= m <= params.q:
        raise ValueError(f"class index must lie in [1, q={params.q}], got {m}")


def f_map(params: ModelParams, m: int, x: float) -> float:
    th, q = params.theta, params.q
    num = (th + m - 1) * x + q - m
    den = m * x + th + q - m - 1
    if num <= 0 or den <= 0:
        raise DomainError(f"f undefined at x={x} (base {num}/{den})")
    return (num / den) ** params.k


def f_prime(params: ModelParams, m: int, x: float) -> float:
    th, q, k = params.theta, params.q, params.k
    a = (th + m - 1) * x + q - m
    b = m * x + th + q - m - 1
    return k * (th - 1) * (th + q - 1) * f_map(params, m, x) / (a * b)


def window(params: ModelParams, m: int) -> tuple[float, float]:
    """Open interval holding every solution: ``(theta_1, theta_2)`` where g is positive.

    For m = q the map f has its own pole at ``(1-theta)/q``; solutions need
    x, y above both poles, and y = f(x) then caps x at ``f(theta_1)`` or, when
    the f-pole is the larger one, at ``g((1-theta)/q)``.
    """
    _require_af(params, m)
    th, q, k = params.theta, params.q, params.k
    lo = ((th + m - 1) / m) ** k
    if m == q:
        pole = (1 - th) / q
        if pole < lo:
            return lo, f_map(params, m, lo)
        num, den = _g_parts(params, m, pole)
        return pole, num / den
    return lo, ((q - m) / (th + q - m - 1)) ** k


def _g_parts(params: ModelParams, m: int, x: float) -> tuple[float, float]:
    th, q = params.theta, params.q
    t = x ** (1.0 / params.k)
    return q - m - (th + q - m - 1) * t, m * t - th - m + 1


def g_map(params: ModelParams, m: int, x: float) -> float:
    """Inverse of f: ``(q-m - (theta+q-m-1) t) / (m t - theta - m + 1)``, ``t = x^(1/k)``."""
    _require_af(params, m)
    num, den = _g_parts(params, m, x)
    if x <= 0 or num <= 0 or den <= 0:
        lo, hi = window(params, m)
        raise DomainError(f"g is not positive at x={x}; domain is ({lo}, {hi})")
    return num / den


def h_log_ratio(params: ModelParams, m: int, x: float) -> float:
    """``ln f(x) - ln g(x)``."""
    return math.log(f_map(params, m, x)) - math.log(g_map(params, m, x))


def _h_vec(params: ModelParams, m: int, xs: np.ndarray) -> np.ndarray:
    """h on an array of points already known to lie in the window."""
    th, q, k = params.theta, params.q, params.k
    num = (th + m - 1) * xs + q - m
    den = m * xs + th + q - m - 1
    gn, gd = _g_parts(params, m, xs)
    return k * (np.log(num) - np.log(den)) - (np.log(gn) - np.log(gd))


def p_poly(params: ModelParams, m: int) -> np.ndarray:
    """Numerator polynomial of h' in ``t = x^(1/k)``, highest degree first (needs k >= 2)."""
    th, q, k = params.theta, params.q, params.k
    c = np.zeros(2 * k + 1)
    # index i holds the coefficient of t^(2k - i)
    c[0] += m * (th + m - 1)
    c[k - 1] += k * k * m * (th + q - m - 1)
    c[k] -= (k * k - 1) * (th * th + (q - 2) * th + 2 * m * q - 2 * m * m - q + 1)
    c[k + 1] += k * k * (th + m - 1) * (q - m)
    c[2 * k] += (th + q - m - 1) * (q - m)
    return c


def h_prime(params: ModelParams, m: int, x: float) -> float:
    """h'(x) assembled through ``p(t)``."""
    _require_af(params, m)
    th, q, k = params.theta, params.q, params.k
    t = x ** (1.0 / k)
    a = (th + m - 1) * t ** k + q - m
    b = m * t ** k + th + q - m - 1
    d = m * t - th - m + 1
    n = (th + q - m - 1) * t - q + m
    pt = float(np.polyval(p_poly(params, m), t))
    return (th - 1) * (th + q - 1) * pt / (k * t ** (k - 1) * a * b * d * n)


def h_prime_at_one(params: ModelParams) -> float:
    th, q, k = params.theta, params.q, params.k
    return (th - 1) * (th + q - 1) / k * (k * k / (th + q - 1) ** 2 - 1 / (th - 1) ** 2)


@dataclass(frozen=True)
class BifurcationWindow:
    m: int
    theta_1: float
    theta_2: float
    theta_bar_cr: float
    critical_points: tuple[float, ...]
    descartes_bound: int


def bifurcation_window(params: ModelParams, m: int) -> BifurcationWindow:
    lo, hi = window(params, m)
    k = params.k
    p = p_poly(params, m)
    t_lo, t_hi = lo ** (1.0 / k), hi ** (1.0 / k)
    rep = numeric_roots(p, (t_lo, t_hi))
    crit = tuple(r.value ** k for r in rep.roots)
    return BifurcationWindow(m, lo, hi, theta_bar_cr(params.q, k), crit, descartes_positive_bound(p))


def _inset(lo: float, hi: float) -> tuple[float, float]:
    eps = INSET * (hi - lo)
    return lo + eps, hi - eps


def _search_grid(params: ModelParams, m: int, win: BifurcationWindow, n: int) -> np.ndarray:
    lo, hi = win.theta_1, win.theta_2
    # relative offsets: windows can span many decades, so a width-based inset
    # would skip roots that sit a relative 1e-10 above theta_1
    a, b = lo * (1 + INSET), hi * (1 - INSET)
    near = [lo * (1 + 10.0 ** -j) for j in range(7, 16)] + [hi * (1 - 10.0 ** -j) for j in range(7, 16)]
    near = [x for x in near if lo < x < hi]
    pts = [np.geomspace(a, b, n), [1.0], [c for c in win.critical_points if a < c < b], near]
    return np.unique(np.concatenate(pts))


def _polish(params: ModelParams, m: int, a: float, b: float, ha: float) -> float:
    """Bisection to adjacent doubles, then safeguarded Newton steps."""
    h = lambda x: h_log_ratio(params, m, x)  # noqa: E731
    while True:
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        hm = h(mid)
        if hm == 0.0:
            return mid
        if (hm > 0) == (ha > 0):
            a, ha = mid, hm
        else:
            b = mid
    x = 0.5 * (a + b)
    best, best_val = x, abs(h(x))
    for _ in range(3):
        d = h_prime(params, m, x)
        if d == 0 or not math.isfinite(d):
            break
        x = x - h(x) / d
        if not a - (b - a) <= x <= b + (b - a):
            break
        v = abs(h(x))
        if v < best_val:
            best, best_val = x, v
    return best


@dataclass(frozen=True)
class PeriodicSolution:
    m: int
    x: float
    y: float
    kind: str  # "translation_invariant" | "period_two"
    residuals: tuple[float, float]
    formal: bool = False

    @property
    def max_residual(self) -> float:
        return max(abs(r) for r in self.residuals)


def system_residuals(params: ModelParams, m: int, x: float, y: float) -> tuple[float, float]:
    return x - f_map(params, m, y), y - f_map(params, m, x)


def _root_points(params: ModelParams, m: int, grid_size: int = GRID_POINTS) -> list[float]:
    win = bifurcation_window(params, m)
    xs = _search_grid(params, m, win, grid_size)
    with np.errstate(invalid="ignore", divide="ignore"):
        hs = _h_vec(params, m, xs)
    # near-pole samples of very wide windows can round outside the domain
    keep = np.isfinite(hs)
    xs, hs = xs[keep], hs[keep]
    roots = [float(x) for x, v in zip(xs, hs) if v == 0.0]
    for i in range(len(xs) - 1):
        if hs[i] != 0.0 and hs[i + 1] != 0.0 and (hs[i] > 0) != (hs[i + 1] > 0):
            roots.append(_polish(params, m, float(xs[i]), float(xs[i + 1]), float(hs[i])))
    roots.sort()
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= DEDUP_TOL * max(1.0, r):
            continue
        merged.append(r)
    return [1.0 if abs(r - 1.0) <= 1e-9 else r for r in merged]


def solve_periodic_class(params: ModelParams, m: int) -> list[PeriodicSolution]:
    """All solutions of the period-two system on I_m, sorted by x."""
    _require_af(params, m)
    if params.k < 3 or params.q < 3:
        raise RegimeError(f"period-two class solve needs k >= 3 and q >= 3, got k={params.k}, q={params.q}")
    out = []
    for x in _root_points(params, m):
        y = f_map(params, m, x)
        kind = "period_two" if abs(x - y) > DEDUP_TOL else "translation_invariant"
        out.append(PeriodicSolution(m, x, y, kind, system_residuals(params, m, x, y), m == params.q))
    return out


def predicted_class_count(params: ModelParams) -> int:
    """Roots on I_m predicted below / above the threshold: 3 or 1."""
    return 3 if params.theta < theta_bar_cr(params.q, params.k) else 1


@dataclass
class ClassCheck:
    m: int
    solutions: list[PeriodicSolution]
    predicted: int
    window: BifurcationWindow

    @property
    def found(self) -> int:
        return len(self.solutions)

    @property
    def match(self) -> bool:
        return self.found == self.predicted

    @property
    def period_two(self) -> list[PeriodicSolution]:
        return [s for s in self.solutions if s.kind == "period_two"]


def check_class(params: ModelParams, m: int) -> ClassCheck:
    return ClassCheck(m, solve_periodic_class(params, m), predicted_class_count(params), bifurcation_window(params, m))


@dataclass
class ClassCount:
    m: int
    multiplicity: int
    period_two: list[PeriodicSolution]
    formal: bool

    @property
    def contribution(self) -> int:
        return self.multiplicity * len(self.period_two)


@dataclass
class PeriodicCount:
    params: ModelParams
    breakdown: list[ClassCount]
    distinct_fields: list[tuple[FieldVector, FieldVector]]
    distinct_max_residual: float
    warnings: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(c.contribution for c in self.breakdown)

    @property
    def predicted(self) -> int:
        return 2 * (2 ** self.params.q - 1)

    @property
    def match(self) -> bool:
        return self.total == self.predicted


def check_count_regime(params: ModelParams):
    q, k, th = params.q, params.k, params.theta
    if k < 3:
        raise RegimeError(f"k >= 3 violated (k={k})")
    if q < 3:
        raise RegimeError(f"q >= 3 violated (q={q})")
    if not q < k + 1:
        raise RegimeError(f"q < k+1 violated (q={q}, k+1={k + 1})")
    bar = theta_bar_cr(q, k)
    if not 0 < th < bar:
        raise RegimeError(f"0 < theta < (k-q+1)/(k+1) = {bar} violated (theta={th})")


def count_periodic_measures(params: ModelParams) -> PeriodicCount:
    """Period-two (non translation-invariant) solutions over the classes m = 1..q.

    Class m enters with multiplicity C(q, m), the number of ways to choose its
    free spin labels.  The total is what the counting formula ``2(2^q - 1)``
    refers to.  Mapped to normalized fields, a label set and its complement
    give the same field (with reciprocal value) and the set of all labels gives
    the all-ones field; ``distinct_fields`` holds the genuinely distinct
    normalized pairs (u, v), each checked against the full period-two system.
    """
    check_count_regime(params)
    q = params.q
    breakdown = []
    pairs: list[FieldVector] = []
    warnings = []
    for m in range(1, q + 1):
        sols = [s for s in solve_periodic_class(params, m) if s.kind == "period_two"]
        breakdown.append(ClassCount(m, comb(q, m), sols, m == q))
        cls = InvariantClass(m, q)
        for s in sols:
            for placement in cls.placements():
                u, v = cls.normalized(s.x, placement), cls.normalized(s.y, placement)
                if u == v:
                    continue
                pairs.append(FieldVector(u.z + v.z))
    joined = dedup_vectors(pairs)
    distinct = [(FieldVector(p.z[: q - 1]), FieldVector(p.z[q - 1:])) for p in joined]
    res = [float(np.max(np.abs(period_two_residual(params, u, v)))) for u, v in distinct]
    max_res = max(res) if res else 0.0
    if max_res >= ZERO_TOL:
        warnings.append(f"distinct normalized fields exceed residual tolerance ({max_res:.3g})")
    star = formal_class_threshold(q, params.k)
    if star is not None and params.theta <= star:
        warnings.append(f"theta <= {star:.6g}: the formal class m=q has no period-two pair here")
    warnings.append(
        f"class m=q is formal (its label set normalizes to the all-ones field); "
        f"label sets and their complements give the same normalized field: "
        f"{len(distinct)} distinct normalized period-two fields vs counted total"
    )
    return PeriodicCount(params, breakdown, distinct, max_res, warnings)


@dataclass
class HProfile:
    params: ModelParams
    m: int
    x: np.ndarray
    h: np.ndarray
    epsilon: float
    window: tuple[float, float]

    def sign_changes(self) -> int:
        """Zero crossings, counting an exact zero sample as one crossing."""
        s = np.sign(self.h)
        count = 0
        prev = 0.0
        for v in s:
            if v == 0:
                count += 1
                prev = 0.0
                continue
            if prev != 0 and v != prev:
                count += 1
            prev = v
        return count


def emit_h_profile(params: ModelParams, m: int, grid_size: int = 1000) -> HProfile:
    """``grid_size`` log-spaced samples of h over the inset window."""
    _require_af(params, m)
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    lo, hi = window(params, m)
    a, b = _inset(lo, hi)
    xs = np.geomspace(a, b, grid_size)
    hs = _h_vec(params, m, xs)
    return HProfile(params, m, xs, hs, INSET * (hi - lo), (lo, hi))
