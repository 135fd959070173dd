import math

import numpy as np
import pytest

from pottstree.gibbs import (
    EnumerationGuardError,
    FieldAssignment,
    FiniteTree,
    check_compatibility,
    finite_measure,
    log_partition,
)
from pottstree.model import FieldVector, ModelParams
from pottstree.periodic import solve_periodic_class
from pottstree.ti import enumerate_ti


def test_tree_shape():
    t = FiniteTree(3, 2)
    assert t.size == 13
    assert len(t.edges) == 12
    assert t.children(0) == [1, 2, 3]
    assert t.level_slice(2) == slice(4, 13)


def test_measure_normalized_and_guarded():
    p = ModelParams(3, 3, 2.0)
    mu = finite_measure(p, FiniteTree(3, 1), FieldAssignment.constant(FieldVector((2.0, 0.5))))
    assert len(mu) == 3 ** 4
    assert math.isclose(sum(mu.values()), 1.0, rel_tol=1e-12)
    with pytest.raises(EnumerationGuardError):
        finite_measure(p, FiniteTree(3, 2), FieldAssignment.constant(FieldVector.ones(3)))


def test_single_edge_partition_function():
    # depth one, one child: Z = sum_{s,t} theta^[s=t] exp(h_t)
    p = ModelParams(2, 1, 3.0)
    z = 0.7
    expected = math.log(3.0 * (z + 1) + (z + 1))
    got = log_partition(p, FiniteTree(1, 1), FieldAssignment.constant(FieldVector((z,))))
    assert abs(got - expected) < 1e-12


def test_ti_solutions_pass_oracle():
    p = ModelParams(3, 3, 3.0)
    for v in enumerate_ti(p).vectors:
        assert check_compatibility(p, FieldAssignment.constant(v)) < 1e-10


def test_periodic_solution_passes_both_parities():
    p = ModelParams(3, 3, 0.2)
    s = [s for s in solve_periodic_class(p, 1) if s.kind == "period_two"][0]
    fields = FieldAssignment.parity_alternating(FieldVector((s.x, 1.0)), FieldVector((s.y, 1.0)))
    assert check_compatibility(p, fields, n=2, max_vertices=13) < 1e-10
    # the constant field x0 is not a boundary law
    assert check_compatibility(p, FieldAssignment.constant(FieldVector((s.x, 1.0)))) > 1e-4


def test_perturbed_field_fails():
    p = ModelParams(3, 3, 3.0)
    v = max(enumerate_ti(p).vectors, key=lambda u: max(u.z))
    bad = FieldVector(tuple(np.asarray(v.z) * 1.01))
    assert check_compatibility(p, FieldAssignment.constant(bad)) > 1e-6


def test_depth_must_be_positive():
    with pytest.raises(ValueError):
        check_compatibility(ModelParams(3, 3, 2.0), FieldAssignment.constant(FieldVector.ones(3)), n=0)
