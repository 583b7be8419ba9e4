"""QUBO model ``Q = -I + beta*A`` of the stable set problem.

Energies use the full symmetric form ``x^T Q x``, so every violated edge is
charged ``2*beta``:  ``energy = -|x| + 2*beta*violations``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .graph import Graph


def _as_beta(beta) -> int | Fraction:
    if isinstance(beta, bool) or not isinstance(beta, Rational):
        if isinstance(beta, float) and beta.is_integer():
            beta = int(beta)
        elif isinstance(beta, float):
            raise ValueError(f"beta must be an integer or Fraction >= 1, got {beta!r}")
        else:
            raise TypeError(f"beta must be an integer or Fraction, got {beta!r}")
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    if isinstance(beta, Fraction) and beta.denominator == 1:
        return int(beta)
    return beta


@dataclass(frozen=True)
class QuboInstance:
    """Sparse ``-I + beta*A``: the diagonal is implicit, off-diagonals are ``edges``."""

    n: int
    beta: int | Fraction
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", _as_beta(self.beta))

    @property
    def graph(self) -> Graph:
        return Graph(self.n, self.edges)

    def matrix(self) -> np.ndarray:
        """Dense symmetric Q (object dtype when beta is a Fraction)."""
        dtype = np.int64 if isinstance(self.beta, int) else object
        q = np.zeros((self.n, self.n), dtype=dtype)
        for i, j in self.edges:
            q[i, j] = q[j, i] = self.beta
        q[np.diag_indices(self.n)] = -1
        return q


@dataclass(frozen=True)
class Sample:
    x: tuple[int, ...]
    cardinality: int
    violations: int
    energy: int | Fraction

    @property
    def stable(self) -> bool:
        return self.violations == 0

    def selected(self) -> list[int]:
        return [i for i, b in enumerate(self.x) if b]


def build_qubo(g: Graph, beta) -> QuboInstance:
    return QuboInstance(g.n, _as_beta(beta), g.edges)


def _bits(x: Sequence[int], n: int) -> int:
    if len(x) != n:
        raise ValueError(f"vector has length {len(x)}, expected {n}")
    mask = 0
    for i, b in enumerate(x):
        if b not in (0, 1):
            raise ValueError(f"entry {i} is {b!r}, expected 0 or 1")
        if b:
            mask |= 1 << i
    return mask


def violations(g: Graph, x: Sequence[int]) -> int:
    """Number of edges with both endpoints selected (``x^T A x / 2``)."""
    mask = _bits(x, g.n)
    return sum(1 for i, j in g.edges if mask >> i & 1 and mask >> j & 1)


def is_stable(g: Graph, x: Sequence[int]) -> bool:
    return violations(g, x) == 0


def energy(q: QuboInstance, x: Sequence[int]) -> int | Fraction:
    mask = _bits(x, q.n)
    card = mask.bit_count()
    hits = sum(1 for i, j in q.edges if mask >> i & 1 and mask >> j & 1)
    return -card + 2 * q.beta * hits


def make_sample(q: QuboInstance, x: Sequence[int]) -> Sample:
    x = tuple(int(b) for b in x)
    mask = _bits(x, q.n)
    card = mask.bit_count()
    hits = sum(1 for i, j in q.edges if mask >> i & 1 and mask >> j & 1)
    return Sample(x, card, hits, -card + 2 * q.beta * hits)


def paper_feasibility_diagnostic(q: QuboInstance, x: Sequence[int]) -> bool:
    """``|e^T x| == |x^T Q x|``: the absolute-value screen for stable sets.

    A ``False`` result proves ``x`` is not a stable set. ``True`` does not
    prove the converse: on the 4-cycle with beta=1 the all-ones vector has
    cardinality 4 and energy ``-4 + 8 = 4`` yet selects every edge.
    Use :func:`is_stable` for an exact answer.
    """
    card = _bits(x, q.n).bit_count()
    return abs(card) == abs(energy(q, x))
