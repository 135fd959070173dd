"""Real polynomial roots: closed-form cubic/quartic solvers and a numeric oracle.

Coefficients are always given highest degree first (``numpy.polyval`` order).
The numeric oracle isolates roots exactly up to rounding: the real critical
points of the polynomial (found recursively from its derivative) split the
domain into monotone pieces, each holding at most one root, and a dense grid
is laid on top for good measure.  Closed forms are checked against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

GRID_PANELS = 4096
BISECT_TOL = 1e-12
CROSS_TOL = 1e-9
_EPS = np.finfo(float).eps


MULTIPLICITY_NAMES = {1: "simple", 2: "double", 3: "triple"}


@dataclass(frozen=True)
class Root:
    value: float
    bracket: tuple[float, float]
    multiplicity: str = "simple"  # "double", "triple", ...: p' (p'', ...) vanishes as well

    @property
    def order(self) -> int:
        inv = {v: k for k, v in MULTIPLICITY_NAMES.items()}
        return inv.get(self.multiplicity) or int(self.multiplicity.split("-")[1])


def _mult_name(order: int) -> str:
    return MULTIPLICITY_NAMES.get(order, f"order-{order}")


@dataclass
class RootReport:
    roots: list[Root]
    method: str  # "closed_form" | "bisection" | "companion"
    cross_checked: bool = False
    flags: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.roots]

    @property
    def count(self) -> int:
        """Number of distinct real roots."""
        return len(self.roots)

    @property
    def count_with_multiplicity(self) -> int:
        return sum(r.order for r in self.roots)

    def positive(self) -> list[Root]:
        return [r for r in self.roots if r.value > 0]


def _strip(coeffs: Sequence[float]) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(c)):
        raise ValueError(f"non-finite coefficients {c}")
    nz = np.flatnonzero(c)
    if nz.size == 0:
        raise ValueError("degenerate polynomial: all coefficients are zero")
    return c[nz[0]:]


def poly_scale(coeffs: Sequence[float], x: float | np.ndarray) -> np.ndarray:
    """Sum of |a_i| |x|^i, the natural magnitude against which p(x) is judged."""
    return np.polyval(np.abs(np.asarray(coeffs, dtype=float)), np.abs(x))


def _noise(coeffs: np.ndarray, x):
    # Horner rounding-error bound, padded.
    return 8 * (len(coeffs) + 1) * _EPS * poly_scale(coeffs, x)


def _cauchy_bound(c: np.ndarray) -> float:
    return 1.0 + float(np.max(np.abs(c[1:] / c[0]))) if c.size > 1 else 1.0


def _bisect(c: np.ndarray, a: float, b: float, fa: float) -> float:
    sa = math.copysign(1.0, fa)
    while True:
        mid = 0.5 * (a + b)
        # run to adjacent floats; BISECT_TOL is the guaranteed width
        if mid in (a, b):
            return mid
        fm = float(np.polyval(c, mid))
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == sa:
            a = mid
        else:
            b = mid


def _grid(lo: float, hi: float) -> np.ndarray:
    if lo > 0:
        return np.geomspace(lo, hi, GRID_PANELS + 1)
    return np.linspace(lo, hi, GRID_PANELS + 1)


def _isolate(c: np.ndarray, lo: float, hi: float, open_lo: bool, open_hi: bool) -> list[Root]:
    """Roots of the stripped polynomial ``c`` in the finite interval [lo, hi]."""
    deg = c.size - 1
    if deg == 0:
        return []
    if deg == 1:
        x = -c[1] / c[0]
        inside = (lo < x or (not open_lo and lo == x)) and (x < hi or (not open_hi and x == hi))
        return [Root(float(x), (float(x), float(x)))] if inside else []

    # a tangency at a critical point of order j (as a root of p') has order j + 1
    crit_order = {r.value: r.order for r in _isolate(np.polyder(c), lo, hi, True, True)}
    crit = list(crit_order)
    pts = np.unique(np.concatenate([_grid(lo, hi), crit]))
    vals = np.polyval(c, pts)
    crit_set = set(crit)
    # Values indistinguishable from zero at critical points are tangencies.
    for i, x in enumerate(pts):
        if x in crit_set and abs(vals[i]) <= _noise(c, x):
            vals[i] = 0.0

    roots: list[Root] = []
    for i, x in enumerate(pts):
        if vals[i] == 0.0:
            if (x == lo and open_lo) or (x == hi and open_hi):
                continue
            order = crit_order[x] + 1 if x in crit_set else 1
            roots.append(Root(float(x), (float(x), float(x)), _mult_name(order)))
    for i in range(len(pts) - 1):
        fa, fb = vals[i], vals[i + 1]
        if fa != 0.0 and fb != 0.0 and (fa > 0) != (fb > 0):
            a, b = float(pts[i]), float(pts[i + 1])
            roots.append(Root(_bisect(c, a, b, fa), (a, b)))
    roots.sort(key=lambda r: r.value)
    return roots


def _companion_count(c: np.ndarray, lo: float, hi: float) -> int:
    if c.size <= 1:
        return 0
    z = np.roots(c)
    # a root of order j splits into eigenvalues ~eps^(1/j) apart; allow up to triple
    tol = 10 * _EPS ** (1 / 3)
    real = z[np.abs(z.imag) <= tol * (1 + np.abs(z.real))].real
    return int(np.sum((real > lo) & (real < hi)))


def numeric_roots(coeffs: Sequence[float], domain: tuple[float, float] = (0.0, math.inf)) -> RootReport:
    """All real roots in the open interval ``domain`` (endpoints may be infinite).

    Roots are refined by bisection down to adjacent doubles (well below the
    guaranteed relative width of 1e-12).  A companion
    matrix eigenvalue count (with multiplicity) is recorded as a cross-check.
    """
    c = _strip(coeffs)
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise ValueError(f"empty domain {domain}")

    # Roots at exactly zero are factored out; they only matter if 0 is interior.
    zero_mult = 0
    while c.size > 1 and c[-1] == 0.0:
        c = c[:-1]
        zero_mult += 1

    bound = 1.5 * _cauchy_bound(c)
    flo, fhi = max(lo, -bound), min(hi, bound)
    if lo >= 0 and c.size > 1:
        # every nonzero root has |x| >= |a_0| / (|a_0| + max|a_i|)
        a0 = abs(c[-1])
        flo = max(lo, 0.5 * a0 / (a0 + float(np.max(np.abs(c[:-1])))))
    open_lo, open_hi = flo == lo, fhi == hi
    roots = _isolate(c, flo, fhi, open_lo, open_hi) if flo < fhi else []
    if zero_mult and lo < 0 < hi:
        roots.append(Root(0.0, (0.0, 0.0), _mult_name(zero_mult)))
        roots.sort(key=lambda r: r.value)

    report = RootReport(roots, "bisection")
    expected = _companion_count(c, lo, hi) + (zero_mult if lo < 0 < hi else 0)
    report.info["companion_count"] = expected
    report.cross_checked = expected == report.count_with_multiplicity
    if not report.cross_checked:
        report.flags.append(
            f"companion-matrix count {expected} differs from isolated count "
            f"{report.count_with_multiplicity}"
        )
    return report


def descartes_positive_bound(coeffs: Sequence[float]) -> int:
    """Sign changes in the coefficient sequence (zeros skipped)."""
    c = _strip(coeffs)
    signs = np.sign(c[c != 0])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


# -- the reduced cubic ------------------------------------------------------

def reduced_cubic(theta: float, q: int, m: int) -> np.ndarray:
    """Coefficients of ``m x^3 - (theta-1) x^2 - (theta-1) x + (q-m)``."""
    a = theta - 1.0
    return np.array([m, -a, -a, q - m], dtype=float)


def depressed_coefficients(theta: float, q: int, m: int) -> tuple[float, float, float]:
    """``(p, r, shift)`` with ``x = y + shift`` turning the reduced cubic into y^3 + p y + r."""
    a = theta - 1.0
    b = c = -a / m
    d = (q - m) / m
    p = c - b * b / 3.0
    r = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    return p, r, -b / 3.0


def _match(closed: Sequence[float], oracle: RootReport) -> float:
    """Largest distance between paired sorted root lists, inf if counts differ."""
    ref = oracle.values
    if len(closed) != len(ref):
        return math.inf
    if not ref:
        return 0.0
    return float(np.max(np.abs(np.sort(closed) - np.asarray(ref))))


def _reference_branch(theta: float, p: float, r: float, case: str) -> list[float] | None:
    """The q=3, m=1 reference branch formulas, taken literally (nonstandard factors included)."""
    shift = (theta - 1.0) / 3.0
    with np.errstate(all="ignore"):
        if case == "one_real":
            s1 = r * r / 4 + p ** 3 / 27
            s2 = r * r / 4 + r ** 3 / 27
            if s1 < 0 or s2 < 0:
                return None
            y = np.cbrt(-r / 2 + math.sqrt(s1)) + np.cbrt(-r / 2 - math.sqrt(s2))
            return [float(y) + shift]
        if case == "double":
            y = 0.5 * (1 + math.sqrt(3) + math.sqrt(9 + 6 * math.sqrt(3)) * (1 - math.sqrt(3)) / 3)
            return [y + shift]
        rad = -r * r / 4 - p ** 3 / 27
        if rad < 0 or r == 0:
            return None
        alpha = math.atan(2 / r * math.sqrt(rad))
        ys = [2 * p / 3 * math.cos((alpha + 2 * math.pi * j) / 3) for j in range(3)]
        return sorted(y + shift for y in ys)


def cubic_cardano(theta: float, q: int, m: int) -> RootReport:
    """Real roots of the reduced cubic by Cardano's formula, checked by the oracle.

    Uses the textbook trigonometric branch ``2 sqrt(-p/3) cos(...)`` with a
    two-argument arctangent.  ``info['trichotomy']`` is ``one_real``,
    ``double`` or ``three_real``; for q=3, m=1 the literal reference formulas
    are also evaluated and their deviation from the oracle is
    recorded under ``info['reference_deviation']``.
    """
    if not 1 <= m <= q - 1:
        raise ValueError(f"m must lie in [1, q-1], got m={m}, q={q}")
    p, r, shift = depressed_coefficients(theta, q, m)
    disc = r * r / 4.0 + p ** 3 / 27.0
    disc_scale = r * r / 4.0 + abs(p) ** 3 / 27.0
    info = {"p": p, "r": r, "shift": shift, "discriminant": disc}

    if abs(disc) <= 64 * _EPS * disc_scale and p != 0.0:
        case = "double"
        ys = [3.0 * r / p, -1.5 * r / p]
        mults = ["simple", "double"]
    elif disc > 0:
        case = "one_real"
        sq = math.sqrt(disc)
        ys = [float(np.cbrt(-r / 2 + sq) + np.cbrt(-r / 2 - sq))]
        mults = ["simple"]
    else:
        case = "three_real"
        rho = 2.0 * math.sqrt(-p / 3.0)
        alpha = math.atan2(math.sqrt(-disc), -r / 2.0)
        ys = [rho * math.cos((alpha + 2 * math.pi * j) / 3.0) for j in range(3)]
        mults = ["simple"] * 3
    info["trichotomy"] = case

    pairs = sorted(zip((y + shift for y in ys), mults))
    roots = [Root(x, (x, x), mu) for x, mu in pairs]
    report = RootReport(roots, "closed_form", info=info)

    oracle = numeric_roots(reduced_cubic(theta, q, m), (-math.inf, math.inf))
    dev = _match([x for x, _ in pairs], oracle)
    info["oracle_deviation"] = dev
    if dev <= CROSS_TOL and [rt.multiplicity for rt in oracle.roots] == [mu for _, mu in pairs]:
        report.cross_checked = True
    elif dev <= CROSS_TOL:
        report.cross_checked = True
        report.flags.append("multiplicity classification differs from oracle")
    else:
        report.flags.append(f"closed form disagrees with oracle (deviation {dev:.3g}); oracle roots returned")
        report.roots = oracle.roots
        report.method = "bisection"

    if q == 3 and m == 1:
        literal = _reference_branch(theta, p, r, case)
        if literal is None:
            info["reference_deviation"] = None
            report.flags.append(f"reference {case} formula is not real-valued here")
        else:
            pdev = max(min(abs(x - v) for v in oracle.values) for x in literal)
            info["reference_deviation"] = pdev
            if pdev > CROSS_TOL:
                report.flags.append(f"reference {case} formula deviates from oracle by {pdev:.3g}")
    return report


# -- the tangency quartic -----------------------------------------------------

def tangency_quartic(q: int, m: int) -> np.ndarray:
    """Coefficients of ``m x^4 + 2m x^3 - 2(q-m) x - (q-m)``."""
    return np.array([m, 2 * m, 0, -2 * (q - m), -(q - m)], dtype=float)


@dataclass(frozen=True)
class FerrariResult:
    value: float
    alpha0: float
    closed_form: float | None
    oracle: float
    branch: str  # "reference" | "other_sign" | "degenerate"
    flags: tuple[str, ...] = ()

    def __float__(self):
        return self.value


def quartic_ferrari(q: int, m: int) -> FerrariResult:
    """Positive root of the tangency quartic by Ferrari's method.

    The resolvent gives ``alpha0``; for ``alpha0 > 0`` the closed form is the
    usual completed-square root.  At ``q/m = 3/2`` the resolvent root makes
    ``alpha0 = 0`` and the square completes with a constant right-hand side.
    """
    if q < 3 or not 1 <= m <= q - 1:
        raise ValueError(f"need q >= 3 and 1 <= m <= q-1, got q={q}, m={m}")
    alpha0 = (float(np.cbrt(m * (8 * m * m - 12 * m * q + 4 * q * q))) + m) / (2 * m)
    oracle_rep = numeric_roots(tangency_quartic(q, m), (0.0, math.inf))
    if oracle_rep.count != 1:
        raise ArithmeticError(f"tangency quartic has {oracle_rep.count} positive roots for q={q}, m={m}")
    oracle = oracle_rep.values[0]

    flags: list[str] = []
    c = (q - m) / m
    if abs(alpha0) <= 1e-12:
        branch = "degenerate"
        closed = (-1.0 + math.sqrt(3.0 + 4.0 * math.sqrt(0.25 + c))) / 2.0
    else:
        two_a = 2.0 * alpha0
        inner = (3.0 - two_a) * math.sqrt(two_a) - 6.0 + 4.0 * q / m
        if inner >= 0:
            branch = "reference"
            closed = ((8.0 * alpha0 ** 3) ** 0.25 + math.sqrt(inner)) / (2.0 * two_a ** 0.25) - 0.5
        else:
            # x^2 + x + s = -sqrt(2 alpha0) (x + (s + c) / (2 alpha0)), s = alpha0 - 1/2
            branch = "other_sign"
            w = math.sqrt(two_a)
            s0 = alpha0 - 0.5
            b1 = 1.0 + w
            c0 = s0 + (s0 + c) / w
            closed = (-b1 + math.sqrt(b1 * b1 - 4.0 * c0)) / 2.0
            flags.append("reference closed form has a negative radicand; other Ferrari branch used")

    if closed is None or abs(closed - oracle) > CROSS_TOL * max(1.0, oracle):
        flags.append(f"closed form {closed} disagrees with oracle {oracle}; oracle returned")
        value = oracle
    else:
        value = closed
    return FerrariResult(value, alpha0, closed, oracle, branch, tuple(flags))
