"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test records a PASS/FAIL line; the lines are printed together at the end
of the pytest run (see conftest.py) and by ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import contextlib
import io
import json
import math
import sys
import time

import numpy as np

from pottstree.cli import main
from pottstree.gibbs import FieldAssignment, check_compatibility
from pottstree.model import ZERO_TOL, FieldVector, ModelParams, recursion_map
from pottstree.periodic import (
    emit_h_profile,
    f_map,
    g_map,
    h_log_ratio,
    h_prime,
    p_poly,
    solve_periodic_class,
    window,
)
from pottstree.poly import descartes_positive_bound, numeric_roots, reduced_cubic, tangency_quartic
from pottstree.ti import class_polynomial, critical_theta, enumerate_ti

THETA_CR_REF = 2.403669476
X4_REF = 1.296630263
THETA_BAR_REF = 0.25
PROFILE_SETS = [(3, 3, 1, 0.2), (4, 5, 2, 0.2)]  # (q, k, m, theta)

RESULTS: dict[int, str] = {}


def record(n: int, name: str, passed: bool, detail: str) -> bool:
    RESULTS[n] = f"{'PASS' if passed else 'FAIL'} [{n}] {name}: {detail}"
    print(RESULTS[n])
    return passed


def run_cli(*argv) -> tuple[int, dict, float]:
    buf = io.StringIO()
    start = time.perf_counter()
    with contextlib.redirect_stdout(buf):
        code = main([str(a) for a in argv])
    return code, json.loads(buf.getvalue()), time.perf_counter() - start


def test_criterion_1_critical_temperature():
    _, doc, elapsed = run_cli("ti", "--q", 3, "--k", 3, "--theta-critical-for", 1, "--no-strict")
    row = doc["results"]["critical_theta"][0]
    err = abs(row["theta_cr"] - THETA_CR_REF)
    ok = err < 1e-8 and row["agreement"] < 1e-8 and elapsed < 1.0
    detail = (f"theta_cr={row['theta_cr']!r} (|diff|={err:.2e}), "
              f"tangency path {row['theta_cr_tangency']!r} (agree {row['agreement']:.1e}), {elapsed:.2f}s")
    assert record(1, "critical temperature", ok, detail)


def test_criterion_2_double_root():
    c = critical_theta(3, 1)
    from pottstree.poly import cubic_cardano

    rep = cubic_cardano(c.theta_cr, 3, 1)
    doubles = [r.value for r in rep.positive() if r.multiplicity == "double"]
    x4 = doubles[0] if doubles else math.nan
    ok = abs(x4 - X4_REF) < 1e-8 and abs(c.x_double_root - x4) < 1e-8
    detail = f"x4={x4!r} (|diff|={abs(x4 - X4_REF):.2e}), x**={c.x_double_root!r} (|x**-x4|={abs(c.x_double_root - x4):.1e})"
    assert record(2, "double root location", ok, detail)


def test_criterion_3_trichotomy():
    tc = critical_theta(3, 1).theta_cr
    start = time.perf_counter()
    rows = []
    for theta, expected in [(2.0, 1), (tc, 3), (3.0, 7)]:
        enum = enumerate_ti(ModelParams(3, 3, theta))
        rows.append((theta, enum.total_count_with_permutations, expected, enum.max_residual))
    elapsed = time.perf_counter() - start
    ok = all(n == e and r < ZERO_TOL for _, n, e, r in rows) and elapsed < 1.0
    parts = [f"theta={t:.10g}: {n} (want {e}, res {r:.1e})" for t, n, e, r in rows]
    # the rounded reference value sits 9.6e-10 above theta_cr, on the 7-solution side
    near = enumerate_ti(ModelParams(3, 3, THETA_CR_REF)).total_count_with_permutations
    detail = "; ".join(parts) + f"; theta={THETA_CR_REF}: {near}; {elapsed:.2f}s"
    assert record(3, "TI solution-count trichotomy", ok, detail)


def _ordered_three(q, k, m, theta):
    sols = solve_periodic_class(ModelParams(q, k, theta), m)
    if len(sols) != 3:
        return False, sols
    (x0, y0), (x1, _), (x2, y2) = [(s.x, s.y) for s in sols]
    return x0 < 1 < x2 and x1 == 1.0 and y0 > 1 > y2, sols


def test_criterion_4_periodic_roots():
    checks, parts = [], []
    for q, k, m, theta in PROFILE_SETS:
        ordered, sols = _ordered_three(q, k, m, theta)
        res = max(s.max_residual for s in sols)
        checks.append(ordered and res < ZERO_TOL)
        parts.append(f"(k={k},q={q},m={m},theta={theta}): {len(sols)} roots, ordered={ordered}, res {res:.1e}")
    sols = solve_periodic_class(ModelParams(3, 3, 0.3), 1)
    res = max(s.max_residual for s in sols)
    checks.append(len(sols) == 1 and res < ZERO_TOL)
    parts.append(f"(k=3,q=3,m=1,theta=0.3): {len(sols)} root(s)")
    assert record(4, "period-two roots on I_m", all(checks), "; ".join(parts))


def test_criterion_5_count():
    parts, checks = [], []
    for q, k, expected in [(3, 3, 14), (4, 5, 30)]:
        code, doc, _ = run_cli("periodic", "--q", q, "--k", k, "--theta", 0.2, "--count")
        cnt = doc["results"]["count"]
        summed = sum(b["contribution"] for b in cnt["breakdown"])
        checks.append(code == 0 and cnt["total"] == expected == summed)
        brk = ",".join(f"{b['multiplicity']}x{b['period_two_solutions']}" for b in cnt["breakdown"])
        parts.append(f"q={q},k={k}: {cnt['total']} (want {expected}, breakdown {brk}, exit {code})")
    assert record(5, "period-two measure count", all(checks), "; ".join(parts))


def test_criterion_6_threshold_localization():
    code_f, ferro, _ = run_cli("sweep", "--q", 3, "--k", 3, "--theta-min", 2.0, "--theta-max", 3.0, "--steps", 101)
    code_a, anti, _ = run_cli("sweep", "--q", 3, "--k", 3, "--theta-min", 0.1, "--theta-max", 0.4, "--steps", 31)

    def bracket(trans, value):
        hits = [t for t in trans if t["theta_left"] <= value <= t["theta_right"]]
        return hits[0] if hits else None

    tf = bracket(ferro["results"]["ti_transitions"], THETA_CR_REF)
    ta = bracket(anti["results"]["periodic_transitions"], THETA_BAR_REF)
    step_f, step_a = 0.01, 0.01
    ok = (tf is not None and tf["theta_right"] - tf["theta_left"] <= step_f + 1e-12
          and ta is not None and ta["theta_right"] - ta["theta_left"] <= step_a + 1e-12
          and code_f == 0 and code_a == 0)
    fmt = lambda t: "none" if t is None else f"[{t['theta_left']:.4f}, {t['theta_right']:.4f}] {t['from']}->{t['to']}"  # noqa: E731
    detail = f"theta_cr in {fmt(tf)}; theta_bar_cr in {fmt(ta)}"
    assert record(6, "threshold localization", ok, detail)


def _solution_fields():
    tc = critical_theta(3, 1).theta_cr
    for theta in (2.0, tc, 3.0):
        p = ModelParams(3, 3, theta)
        for v in enumerate_ti(p).vectors:
            yield p, FieldAssignment.constant(v)
    for q, k, m, theta in PROFILE_SETS:
        p = ModelParams(q, k, theta)
        for s in solve_periodic_class(p, m):
            x = FieldVector((s.x,) * m + (1.0,) * (q - 1 - m))
            y = FieldVector((s.y,) * m + (1.0,) * (q - 1 - m))
            yield p, FieldAssignment.parity_alternating(x, y)
    p = ModelParams(3, 3, 0.3)
    for s in solve_periodic_class(p, 1):
        yield p, FieldAssignment.constant(FieldVector((s.x, 1.0)))


def test_criterion_7_oracle_equivalence():
    start = time.perf_counter()
    worst, least_bad, n = 0.0, math.inf, 0
    for p, fields in _solution_fields():
        n += 1
        worst = max(worst, check_compatibility(p, fields, 1))
        bumped = FieldAssignment(
            FieldVector(tuple(np.asarray(fields.even.z) * 1.01)),
            FieldVector(tuple(np.asarray(fields.odd.z) * 1.01)),
            fields.generator,
        )
        least_bad = min(least_bad, check_compatibility(p, bumped, 1))
    elapsed = time.perf_counter() - start
    ok = worst < ZERO_TOL and least_bad > 1e-6 and elapsed < 5.0
    detail = f"{n} solutions, max violation {worst:.1e}; perturbed min violation {least_bad:.1e}; {elapsed:.2f}s"
    assert record(7, "finite-volume oracle equivalence", ok, detail)


PROPERTY_SETS = [(3, 3, 1, 0.2), (3, 3, 2, 0.2), (4, 5, 2, 0.2), (4, 5, 1, 0.1), (5, 6, 3, 0.05), (3, 3, 1, 0.3)]


def _constructed_polynomials():
    for q in range(3, 8):
        for m in range(1, q):
            yield tangency_quartic(q, m)
            for theta in (1.5, 2.4, 3.0, 6.0):
                yield reduced_cubic(theta, q, m)
                for k in (2, 3, 4, 5):
                    yield class_polynomial(ModelParams(q, k, theta), m)
    for q, k, m, theta in PROPERTY_SETS:
        yield p_poly(ModelParams(q, k, theta), m)


def test_criterion_8_property_suites():
    rng = np.random.default_rng(20240101)
    round_trip = fd_rel = 0.0
    for q, k, m, theta in PROPERTY_SETS:
        p = ModelParams(q, k, theta)
        lo, hi = window(p, m)
        for x in np.exp(rng.uniform(math.log(lo), math.log(hi), 100)):
            y = g_map(p, m, x)
            round_trip = max(round_trip, abs(f_map(p, m, y) - x) / max(1.0, x))
        for x in np.exp(rng.uniform(math.log(lo * 1.001), math.log(hi * 0.999), 50)):
            step = 1e-6 * x
            fd = (h_log_ratio(p, m, x + step) - h_log_ratio(p, m, x - step)) / (2 * step)
            an = h_prime(p, m, x)
            fd_rel = max(fd_rel, abs(an - fd) / max(abs(an), 1e-3))

    polys = list(_constructed_polynomials())
    descartes_ok = 0
    for c in polys:
        found = numeric_roots(c).count_with_multiplicity
        bound = descartes_positive_bound(c)
        descartes_ok += bound >= found and (bound - found) % 2 == 0

    exact = True
    for _ in range(200):
        q = int(rng.integers(3, 7))
        p = ModelParams(q, 3, float(rng.uniform(0.05, 6.0)))
        z = FieldVector(tuple(rng.uniform(0.01, 50.0, q - 1)))
        perm = tuple(rng.permutation(q - 1))
        exact &= recursion_map(p, z.permuted(perm)).z == recursion_map(p, z).permuted(perm).z

    ok = round_trip < 1e-10 and fd_rel < 1e-6 and descartes_ok == len(polys) and exact
    detail = (f"g/f round trip {round_trip:.1e}; h' vs FD rel {fd_rel:.1e}; "
              f"Descartes {descartes_ok}/{len(polys)}; permutation equivariance exact={exact}")
    assert record(8, "property suites", ok, detail)


def test_criterion_9_profiles():
    parts, checks = [], []
    for q, k, m, theta in PROFILE_SETS:
        prof = emit_h_profile(ModelParams(q, k, theta), m, 1000)
        sc = prof.sign_changes()
        left, right = float(prof.h[0]), float(prof.h[-1])
        checks.append(sc == 3 and left < -10 and right > 10)
        parts.append(f"(q={q},k={k},m={m}): {sc} sign changes, h(left)={left:.3f}, h(right)={right:.3f}")
    assert record(9, "h profiles", all(checks), "; ".join(parts))


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((n, f) for n, f in globals().items() if n.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
