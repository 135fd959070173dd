"""Translation-invariant boundary laws: critical temperatures and full enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .model import ZERO_TOL, FieldVector, InvariantClass, ModelParams, ti_residual
from .poly import (
    FerrariResult,
    Root,
    cubic_cardano,
    numeric_roots,
    quartic_ferrari,
    reduced_cubic,
)

DEDUP_TOL = 1e-8
THETA_CR_TOL = 1e-8


class CriticalThetaMismatch(ArithmeticError):
    def __init__(self, ferrari: float, tangency: float):
        super().__init__(f"theta_cr disagreement: Ferrari path {ferrari!r}, tangency path {tangency!r}")
        self.ferrari = ferrari
        self.tangency = tangency


def psi(x: float, q: int, m: int) -> float:
    """theta at which the reduced cubic vanishes at x: ``(m x^3 + q - m)/(x^2 + x) + 1``."""
    return (m * x ** 3 + q - m) / (x * x + x) + 1.0


def phi(x: float, theta: float, q: int, m: int) -> float:
    return float(np.polyval(reduced_cubic(theta, q, m), x))


def phi_prime(x: float, theta: float, q: int, m: int) -> float:
    return float(np.polyval(np.polyder(reduced_cubic(theta, q, m)), x))


def x_star(theta: float, m: int) -> float:
    """Positive critical point of the reduced cubic (its minimum on x > 0)."""
    a = theta - 1.0
    return (a + math.sqrt(a * a + 3 * m * a)) / (3 * m)


def bisect_scalar(fn, a: float, b: float, tol: float = 1e-15) -> float:
    fa = fn(a)
    if fa == 0:
        return a
    if (fa > 0) == (fn(b) > 0):
        raise ValueError(f"no sign change on [{a}, {b}]")
    while b - a > tol * max(1.0, abs(a)):
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        fm = fn(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


@dataclass(frozen=True)
class CriticalTheta:
    m: int
    q: int
    theta_cr: float
    x_double_root: float
    theta_cr_tangency: float
    ferrari: FerrariResult

    @property
    def agreement(self) -> float:
        return abs(self.theta_cr - self.theta_cr_tangency)


def critical_theta(q: int, m: int, k: int = 3) -> CriticalTheta:
    """Ferromagnetic critical value where the reduced cubic gains a double positive root.

    Computed from the Ferrari root of the tangency quartic and, independently,
    by solving ``phi(x*(theta), theta) = 0`` in theta.
    """
    if k != 3:
        raise ValueError("the closed-form critical temperature is available for k = 3 only")
    if q < 3 or not 1 <= m <= q - 1:
        raise ValueError(f"need q >= 3 and 1 <= m <= q-1, got q={q}, m={m}")
    fr = quartic_ferrari(q, m)
    theta_f = psi(fr.value, q, m)

    def g(theta):
        return phi(x_star(theta, m), theta, q, m)

    hi = 2.0
    while g(hi) > 0:
        hi *= 2.0
    theta_t = bisect_scalar(g, 1.0, hi)
    if abs(theta_f - theta_t) > THETA_CR_TOL:
        raise CriticalThetaMismatch(theta_f, theta_t)
    return CriticalTheta(m, q, theta_f, fr.value, theta_t, fr)


@dataclass(frozen=True)
class TISolution:
    m: int
    x_root: float
    z_vector: FieldVector
    residual: float
    criticality: str  # "subcritical" | "critical" | "supercritical"
    multiplicity: str = "simple"

    @property
    def z(self) -> float:
        return self.z_vector.z[0]

    @property
    def trivial(self) -> bool:
        return all(v == 1.0 for v in self.z_vector.z)


def class_polynomial(params: ModelParams, m: int) -> np.ndarray:
    """``m x^{k+1} - (theta+m-1) x^k + (q-m-1+theta) x - (q-m)``, from z = f_m(z) with z = x^k."""
    q, k, th = params.q, params.k, params.theta
    c = np.zeros(k + 2)
    c[0] = m
    c[1] = -(th + m - 1)
    c[k] += q - m - 1 + th
    c[k + 1] = -(q - m)
    return c


def f_class(params: ModelParams, m: int, z: float) -> float:
    """The reduced fixed-point map ``f_m`` on the class-m line."""
    th, q = params.theta, params.q
    return (((th + m - 1) * z + q - m) / (m * z + q - m - 1 + th)) ** params.k


def _class_roots(params: ModelParams, m: int) -> tuple[list[Root], list[str]]:
    """Positive roots x of the class polynomial other than x = 1, plus warnings."""
    if params.k == 3 and params.theta > 1:
        rep = cubic_cardano(params.theta, params.q, m)
        return rep.positive(), list(rep.flags)
    rep = numeric_roots(class_polynomial(params, m), (0.0, math.inf))
    return [r for r in rep.roots if abs(r.value - 1.0) > DEDUP_TOL], list(rep.flags)


def solve_class(params: ModelParams, m: int) -> list[TISolution]:
    """All positive solutions of ``z = f_m(z)``, z = 1 first, the rest ascending."""
    return _solve_class(params, m)[0]


def _solve_class(params: ModelParams, m: int) -> tuple[list[TISolution], list[str]]:
    if not 1 <= m <= params.q - 1:
        raise ValueError(f"class index must lie in [1, q-1], got {m}")
    cls = InvariantClass(m, params.q)
    roots, flags = _class_roots(params, m)
    nontrivial = [r for r in roots if abs(r.value - 1.0) > DEDUP_TOL]
    if any(r.order >= 2 for r in nontrivial):
        crit = "critical"
    elif nontrivial:
        crit = "supercritical"
    else:
        crit = "subcritical"

    out = [TISolution(m, 1.0, cls.lift(1.0), 0.0, crit)]
    for r in nontrivial:
        z = r.value ** params.k
        vec = cls.lift(z)
        res = float(np.max(np.abs(ti_residual(params, vec))))
        out.append(TISolution(m, r.value, vec, res, crit, r.multiplicity))
    return out, flags


@dataclass
class TIEnumeration:
    params: ModelParams
    solutions: list[TISolution]
    vectors: list[FieldVector]
    residuals: list[float]
    warnings: list[str] = field(default_factory=list)

    @property
    def total_count_with_permutations(self) -> int:
        return len(self.vectors)

    @property
    def max_residual(self) -> float:
        return max(self.residuals)


def _close(a: FieldVector, b: FieldVector, tol: float = DEDUP_TOL) -> bool:
    x, y = np.asarray(a.z), np.asarray(b.z)
    return bool(np.all(np.abs(x - y) <= tol * np.maximum(1.0, np.abs(x))))


def dedup_vectors(vectors, tol: float = DEDUP_TOL) -> list[FieldVector]:
    out: list[FieldVector] = []
    for v in vectors:
        if not any(_close(v, u, tol) for u in out):
            out.append(v)
    return out


def enumerate_ti(params: ModelParams) -> TIEnumeration:
    """Every translation-invariant solution, lifted to all coordinate placements."""
    q = params.q
    solutions: list[TISolution] = []
    warnings: list[str] = []
    lifted: list[FieldVector] = []
    for m in range(1, q):
        sols, flags = _solve_class(params, m)
        warnings.extend(f"m={m}: {w}" for w in flags)
        for sol in sols:
            solutions.append(sol)
            for placement in combinations(range(q - 1), m):
                z = np.ones(q - 1)
                z[list(placement)] = sol.z
                lifted.append(FieldVector(tuple(z)))
    vectors = dedup_vectors(lifted)
    residuals = [float(np.max(np.abs(ti_residual(params, v)))) for v in vectors]
    bad = [r for r in residuals if r >= ZERO_TOL]
    if bad:
        warnings.append(f"{len(bad)} lifted solutions exceed residual tolerance (max {max(bad):.3g})")
    if params.k != 3 or params.theta < 1:
        warnings.append("numeric enumeration (closed forms cover k = 3, theta > 1 only)")
    return TIEnumeration(params, solutions, vectors, residuals, warnings)


def predicted_ti_count(params: ModelParams) -> int | None:
    """Reference count for q = 3, k = 3, theta > 1 (1, 3 or 7); else None."""
    if (params.q, params.k) != (3, 3) or params.theta <= 1:
        return None
    tc = critical_theta(3, 1).theta_cr
    if abs(params.theta - tc) <= THETA_CR_TOL:
        return 3
    return 1 if params.theta < tc else 7


def stability_threshold(params: ModelParams) -> float | None:
    """theta at which a nontrivial class root passes through z = 1 (``(k+q-1)/(k-1)``)."""
    if params.k < 2:
        return None
    return (params.k + params.q - 1) / (params.k - 1)
