"""Model parameters, boundary-field vectors and the tree recursion map.

All fields are carried in exponentiated coordinates ``z_i = exp(h_i)``,
``i = 1..q-1``, with the q-th component normalized to ``h_q = 0`` (``z_q = 1``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

# A residual counts as zero below this max-norm.
ZERO_TOL = 1e-10


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of a map."""


class Coupling(enum.Enum):
    FERROMAGNETIC = "ferromagnetic"
    ANTIFERROMAGNETIC = "antiferromagnetic"
    # Only reachable through ModelParams.non_interacting (oracle use).
    FREE = "free"

    @classmethod
    def of(cls, theta: float) -> "Coupling":
        if theta > 1:
            return cls.FERROMAGNETIC
        if theta < 1:
            return cls.ANTIFERROMAGNETIC
        return cls.FREE


@dataclass(frozen=True)
class ModelParams:
    """q-state Potts model on the Cayley tree of order k at ``theta = exp(J*beta)``."""

    q: int
    k: int
    theta: float
    coupling: Coupling | None = None

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 2:
            raise ValueError(f"q must be an integer >= 2, got {self.q}")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k}")
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "k", int(self.k))
        theta = float(self.theta)
        if not math.isfinite(theta) or theta <= 0:
            raise ValueError(f"theta must be a finite positive real, got {self.theta}")
        if theta == 1.0 and self.coupling is not Coupling.FREE:
            raise ValueError("theta = 1 (J = 0) is excluded: the recursion degenerates")
        object.__setattr__(self, "theta", theta)
        expected = Coupling.of(theta)
        if self.coupling is None:
            object.__setattr__(self, "coupling", expected)
        elif self.coupling is not expected:
            raise ValueError(f"coupling {self.coupling.value} disagrees with theta={theta}")

    @classmethod
    def non_interacting(cls, q: int, k: int) -> "ModelParams":
        """J = 0 parameters. Only the exhaustive oracle accepts these."""
        return cls(q, k, 1.0, Coupling.FREE)

    @property
    def ferromagnetic(self) -> bool:
        return self.coupling is Coupling.FERROMAGNETIC

    @property
    def antiferromagnetic(self) -> bool:
        return self.coupling is Coupling.ANTIFERROMAGNETIC


@dataclass(frozen=True)
class FieldVector:
    """Exponentiated boundary field ``(z_1, ..., z_{q-1})``, all entries positive."""

    z: tuple[float, ...]

    def __post_init__(self):
        z = tuple(float(v) for v in self.z)
        if len(z) == 0:
            raise ValueError("a field vector needs at least one component (q >= 2)")
        for v in z:
            if not math.isfinite(v) or v <= 0:
                raise DomainError(f"field components must be finite and positive, got {z}")
        object.__setattr__(self, "z", z)

    @classmethod
    def ones(cls, q: int) -> "FieldVector":
        return cls((1.0,) * (q - 1))

    @classmethod
    def from_h(cls, h: Sequence[float]) -> "FieldVector":
        return cls(tuple(math.exp(v) for v in h))

    @property
    def q(self) -> int:
        return len(self.z) + 1

    @property
    def h(self) -> tuple[float, ...]:
        return tuple(math.log(v) for v in self.z)

    def full(self) -> np.ndarray:
        """All q components, the normalized q-th one equal to 1."""
        return np.append(np.asarray(self.z), 1.0)

    def permuted(self, perm: Sequence[int]) -> "FieldVector":
        return FieldVector(tuple(self.z[i] for i in perm))

    def __len__(self):
        return len(self.z)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.z, dtype=dtype)


@dataclass(frozen=True)
class InvariantClass:
    """Field vectors with ``m`` equal free coordinates and the rest pinned to 1.

    The canonical representative frees the first m coordinates.  Classes are
    also indexed by subsets of the q spin labels (``placements``); a subset
    containing label q normalizes to the reciprocal value on its complement,
    and ``m = q`` (every label free) normalizes to the all-ones vector.
    """

    m: int
    q: int
    description: str = field(default="", compare=False)

    def __post_init__(self):
        if not 1 <= self.m <= self.q:
            raise ValueError(f"class index m must lie in [1, q={self.q}], got {self.m}")
        if not self.description:
            text = (
                "all q labels free (normalizes to the all-ones vector)"
                if self.m == self.q
                else f"first {self.m} of {self.q - 1} coordinates free, rest pinned to 1"
            )
            object.__setattr__(self, "description", text)

    @property
    def formal(self) -> bool:
        return self.m == self.q

    def lift(self, value: float) -> FieldVector:
        if self.formal:
            raise DomainError("class m = q has no canonical representative in R^(q-1)")
        return FieldVector((value,) * self.m + (1.0,) * (self.q - 1 - self.m))

    def placements(self) -> Iterator[tuple[int, ...]]:
        """Subsets of spin labels ``0..q-1`` of size m (label q-1 is the normalized one)."""
        return combinations(range(self.q), self.m)

    def normalized(self, value: float, placement: Sequence[int]) -> FieldVector:
        """Normalized field for ``value`` on the labels in ``placement``."""
        full = np.ones(self.q)
        full[list(placement)] = value
        return FieldVector(tuple(full[:-1] / full[-1]))


def _check_length(params: ModelParams, z: FieldVector):
    if len(z) != params.q - 1:
        raise ValueError(f"field vector has length {len(z)}, expected q-1 = {params.q - 1}")


def recursion_map(params: ModelParams, z: FieldVector) -> FieldVector:
    """One step of the boundary-law recursion in exponentiated coordinates.

    ``out_i = ((theta-1) z_i + sum_j z_j + 1) / (theta + sum_j z_j)``
    """
    _check_length(params, z)
    arr = np.asarray(z.z)
    s = math.fsum(z.z)  # correctly rounded, so independent of coordinate order
    out = ((params.theta - 1.0) * arr + s + 1.0) / (params.theta + s)
    if not np.all(np.isfinite(out)):
        raise DomainError(f"non-finite recursion output for z={z.z}")
    return FieldVector(tuple(out))


def ti_map(params: ModelParams, z: FieldVector) -> FieldVector:
    """Translation-invariant update: the recursion output raised to the k-th power."""
    out = np.asarray(recursion_map(params, z).z) ** params.k
    if not np.all(np.isfinite(out)):
        raise DomainError(f"non-finite fixed-point map output for z={z.z}")
    return FieldVector(tuple(out))


def ti_residual(params: ModelParams, z: FieldVector) -> np.ndarray:
    """``z - ti_map(z)``; zero iff z is a translation-invariant fixed point."""
    return np.asarray(z.z) - np.asarray(ti_map(params, z).z)


def period_two_residual(params: ModelParams, x: FieldVector, y: FieldVector) -> np.ndarray:
    """Residuals of the full period-two system (x from y and y from x), concatenated."""
    return np.concatenate(
        [np.asarray(x.z) - np.asarray(ti_map(params, y).z),
         np.asarray(y.z) - np.asarray(ti_map(params, x).z)]
    )
