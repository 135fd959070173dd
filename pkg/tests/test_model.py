import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pottstree.model import (
    Coupling,
    DomainError,
    FieldVector,
    InvariantClass,
    ModelParams,
    period_two_residual,
    recursion_map,
    ti_map,
    ti_residual,
)


def test_coupling_from_theta():
    assert Coupling.of(2.0) is Coupling.FERROMAGNETIC
    assert Coupling.of(0.5) is Coupling.ANTIFERROMAGNETIC
    assert Coupling.of(1.0) is Coupling.FREE


@pytest.mark.parametrize("q, k, theta", [(1, 3, 2.0), (3, 0, 2.0), (3, 3, -1.0), (3, 3, 0.0), (3, 3, math.nan)])
def test_params_rejected(q, k, theta):
    with pytest.raises(ValueError):
        ModelParams(q, k, theta)


def test_theta_one_needs_explicit_free_coupling():
    with pytest.raises(ValueError):
        ModelParams(3, 3, 1.0)
    p = ModelParams.non_interacting(3, 3)
    assert p.coupling is Coupling.FREE
    # with no interaction only the all-ones field is fixed
    assert np.allclose(ti_map(p, FieldVector((2.0, 5.0))).z, (1.0, 1.0))


def test_field_vector_h_round_trip():
    z = FieldVector((0.5, 2.0, 7.0))
    assert np.allclose(FieldVector.from_h(z.h).z, z.z, rtol=1e-15)
    assert z.full().tolist() == [0.5, 2.0, 7.0, 1.0]


def test_field_vector_rejects_nonpositive():
    with pytest.raises(ValueError):
        FieldVector((1.0, 0.0))


def test_ones_is_fixed_for_any_coupling():
    for theta in (0.2, 3.0):
        p = ModelParams(4, 3, theta)
        assert np.max(np.abs(ti_residual(p, FieldVector.ones(4)))) == 0.0


def test_length_mismatch():
    with pytest.raises(ValueError):
        recursion_map(ModelParams(3, 3, 2.0), FieldVector((1.0, 1.0, 1.0)))


@given(
    q=st.integers(3, 6),
    theta=st.floats(0.05, 6.0).filter(lambda t: abs(t - 1) > 1e-3),
    data=st.data(),
)
def test_recursion_is_permutation_equivariant(q, theta, data):
    p = ModelParams(q, 3, theta)
    z = FieldVector(tuple(data.draw(st.lists(st.floats(0.01, 50.0), min_size=q - 1, max_size=q - 1))))
    perm = data.draw(st.permutations(range(q - 1)))
    lhs = recursion_map(p, z.permuted(perm)).z
    rhs = recursion_map(p, z).permuted(perm).z
    assert lhs == rhs


def test_invariant_class_lift_and_placements():
    cls = InvariantClass(2, 4)
    assert cls.lift(3.0).z == (3.0, 3.0, 1.0)
    assert len(list(cls.placements())) == math.comb(4, 2)
    # a label set containing the last label normalizes to the reciprocal on the complement
    assert np.allclose(cls.normalized(3.0, (1, 3)).z, (1 / 3, 1.0, 1 / 3))
    with pytest.raises(DomainError):
        InvariantClass(4, 4).lift(2.0)
    assert InvariantClass(4, 4).formal


def test_period_two_residual_of_fixed_point_is_zero():
    p = ModelParams(3, 3, 0.2)
    one = FieldVector.ones(3)
    assert np.all(period_two_residual(p, one, one) == 0.0)


def test_recursion_in_label_space_agrees_with_normalized_form():
    # fields on all q labels, then normalized by the last one
    p = ModelParams(3, 2, 2.5)
    full = np.array([0.3, 4.0, 1.7])
    out = []
    for i in range(3):
        out.append(sum((p.theta if i == j else 1.0) * full[j] for j in range(3)))
    out = np.array(out)
    expected = out[:-1] / out[-1]
    got = recursion_map(p, FieldVector(tuple(full[:-1] / full[-1]))).z
    assert np.allclose(got, expected, rtol=1e-14)
    for perm in itertools.permutations(range(2)):
        assert recursion_map(p, FieldVector(tuple(full[:-1] / full[-1])).permuted(perm)).z == tuple(
            np.asarray(got)[list(perm)]
        )
