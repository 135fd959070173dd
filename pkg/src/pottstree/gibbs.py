"""Exhaustive finite-volume oracle for the compatibility of boundary fields.

The oracle tree is the rooted half-tree: the root and every interior vertex
have k direct descendants, matching the sum over direct descendants in the
compatibility condition.  On the full Cayley tree only the root differs (it
has k+1 neighbours); that vertex is not needed to test the recursion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .model import FieldVector, ModelParams

MAX_VERTICES = 12


class EnumerationGuardError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteTree:
    k: int
    depth: int

    def __post_init__(self):
        if self.k < 1 or self.depth < 0:
            raise ValueError(f"need k >= 1 and depth >= 0, got k={self.k}, depth={self.depth}")

    @cached_property
    def levels(self) -> np.ndarray:
        """Level of every vertex, vertices in breadth-first order."""
        return np.concatenate([np.full(self.k ** j, j) for j in range(self.depth + 1)])

    @property
    def size(self) -> int:
        return int(self.levels.size)

    def level_slice(self, j: int) -> slice:
        start = sum(self.k ** i for i in range(j))
        return slice(start, start + self.k ** j)

    @cached_property
    def edges(self) -> np.ndarray:
        """(parent, child) index pairs."""
        pairs = []
        for j in range(1, self.depth + 1):
            parents = range(self.level_slice(j - 1).start, self.level_slice(j - 1).stop)
            child = self.level_slice(j).start
            for p in parents:
                for _ in range(self.k):
                    pairs.append((p, child))
                    child += 1
        return np.array(pairs, dtype=int).reshape(-1, 2)

    def children(self, v: int) -> list[int]:
        return [int(c) for p, c in self.edges if p == v]


@dataclass(frozen=True)
class FieldAssignment:
    """Constant or parity-alternating boundary fields.

    With ``root_parity = 0`` the root sits on an even level; ``even`` is used
    on even levels and ``odd`` on odd ones.
    """

    even: FieldVector
    odd: FieldVector
    generator: str = "parity_alternating"
    root_parity: int = 0

    @classmethod
    def constant(cls, z: FieldVector) -> "FieldAssignment":
        return cls(z, z, "constant")

    @classmethod
    def parity_alternating(cls, even: FieldVector, odd: FieldVector) -> "FieldAssignment":
        return cls(even, odd, "parity_alternating")

    def at_level(self, j: int) -> FieldVector:
        return self.even if (j + self.root_parity) % 2 == 0 else self.odd

    def shifted(self) -> "FieldAssignment":
        """The same law seen from a root one level deeper."""
        return FieldAssignment(self.even, self.odd, self.generator, 1 - self.root_parity)

    def swapped(self) -> "FieldAssignment":
        return FieldAssignment(self.odd, self.even, self.generator, self.root_parity)

    def for_tree(self, tree: FiniteTree) -> list[FieldVector]:
        return [self.at_level(int(j)) for j in tree.levels]


@dataclass
class _Measure:
    configs: np.ndarray
    probs: np.ndarray
    log_z: float = field(default=0.0)


def _guard(q: int, tree: FiniteTree, max_vertices: int):
    if tree.size > max_vertices:
        raise EnumerationGuardError(
            f"{tree.size} vertices exceed the guard of {max_vertices} "
            f"(would enumerate {q}^{tree.size} = {q ** tree.size} configurations)"
        )


def _measure(params: ModelParams, tree: FiniteTree, fields: FieldAssignment,
             max_vertices: int = MAX_VERTICES) -> _Measure:
    q = params.q
    _guard(q, tree, max_vertices)
    nv = tree.size
    configs = np.indices((q,) * nv, dtype=np.int8).reshape(nv, -1).T
    logw = np.zeros(configs.shape[0])
    if tree.edges.size:
        agree = configs[:, tree.edges[:, 0]] == configs[:, tree.edges[:, 1]]
        logw += np.log(params.theta) * agree.sum(axis=1)
    leaves = tree.level_slice(tree.depth)
    lnz = np.append(np.log(np.asarray(fields.at_level(tree.depth).z)), 0.0)
    if lnz.size != q:
        raise ValueError(f"field length {lnz.size - 1} does not match q-1 = {q - 1}")
    logw += lnz[configs[:, leaves]].sum(axis=1)
    top = logw.max()
    w = np.exp(logw - top)
    total = w.sum()
    if not np.isfinite(total) or total <= 0:
        raise ArithmeticError("partition function is not positive and finite")
    return _Measure(configs, w / total, float(top + np.log(total)))


def finite_measure(params: ModelParams, tree: FiniteTree, fields: FieldAssignment,
                   n: int | None = None, max_vertices: int = MAX_VERTICES) -> dict[tuple[int, ...], float]:
    """Finite-volume Gibbs distribution on the depth-n ball with boundary fields on its last level."""
    depth = tree.depth if n is None else n
    mu = _measure(params, FiniteTree(tree.k, depth), fields, max_vertices)
    return {tuple(int(s) for s in c): float(p) for c, p in zip(mu.configs, mu.probs)}


def log_partition(params: ModelParams, tree: FiniteTree, fields: FieldAssignment,
                  max_vertices: int = MAX_VERTICES) -> float:
    return _measure(params, tree, fields, max_vertices).log_z


def _violation(params: ModelParams, fields: FieldAssignment, n: int, max_vertices: int) -> float:
    worst = 0.0
    for j in range(1, n + 1):
        big = _measure(params, FiniteTree(params.k, j), fields, max_vertices)
        small = _measure(params, FiniteTree(params.k, j - 1), fields, max_vertices)
        marginal = big.probs.reshape(small.probs.size, -1).sum(axis=1)
        worst = max(worst, float(np.max(np.abs(marginal - small.probs))))
    return worst


def check_compatibility(params: ModelParams, fields: FieldAssignment, n: int = 1,
                        max_vertices: int = MAX_VERTICES) -> float:
    """Largest gap between the marginal of mu_j and mu_{j-1}, over j = 1..n.

    Parity-alternating fields are checked from both root parities, which
    exercises both halves of the period-two system.
    """
    if n < 1:
        raise ValueError("compatibility needs n >= 1")
    worst = _violation(params, fields, n, max_vertices)
    if fields.generator == "parity_alternating":
        worst = max(worst, _violation(params, fields.shifted(), n, max_vertices))
    return worst
