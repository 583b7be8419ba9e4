"""Simple undirected graphs: DIMACS I/O and generators for the benchmark families."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, TextIO

from sympy import isprime


class GraphError(ValueError):
    """Structural problem with a graph (self-loop, duplicate edge, bad count)."""


class DimacsParseError(GraphError):
    """Malformed DIMACS input. Carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class EndpointRangeError(DimacsParseError):
    """Edge endpoint outside ``[1, n]``."""


def _norm(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``adj[v]`` is an int bitmask of the neighbours of ``v``. Edges are kept
    as sorted ``(i, j)`` pairs with ``i < j``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""
    adj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError(f"vertex count must be non-negative, got {self.n}")
        adj = [0] * self.n
        seen: set[tuple[int, int]] = set()
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise GraphError(f"edge ({i}, {j}) out of range for n={self.n}")
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            e = _norm(i, j)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        object.__setattr__(self, "adj", tuple(adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "") -> "Graph":
        return cls(n, tuple(edges), name)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adj]

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def complement(self, name: str | None = None) -> "Graph":
        full = (1 << self.n) - 1
        edges = [
            (i, j)
            for i in range(self.n)
            for j in iter_bits(full & ~self.adj[i] & ~((1 << (i + 1)) - 1))
        ]
        return Graph(self.n, tuple(edges), self.name if name is None else name)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph induced by ``vertices``, relabelled ``0..k-1`` in the given order."""
        index = {v: k for k, v in enumerate(vertices)}
        edges = [(index[i], index[j]) for i, j in self.edges if i in index and j in index]
        return Graph(len(vertices), tuple(edges), self.name)

    def adjacency_matrix(self):
        import numpy as np

        a = np.zeros((self.n, self.n), dtype=np.int64)
        if self.edges:
            ij = np.array(self.edges)
            a[ij[:, 0], ij[:, 1]] = 1
            a[ij[:, 1], ij[:, 0]] = 1
        return a


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# DIMACS I/O


def parse_dimacs(source: str | TextIO, *, complement: bool = False, name: str = "") -> Graph:
    """Parse DIMACS ``p edge`` text (1-based endpoints) into a 0-based Graph.

    With ``complement=True`` the file is read in clique form and the
    complement graph is returned; the declared edge count refers to the file.
    """
    lines = source.splitlines() if isinstance(source, str) else source.read().splitlines()
    n = declared_m = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise DimacsParseError(lineno, "second problem line")
            if len(tok) != 4 or tok[1] != "edge":
                raise DimacsParseError(lineno, f"expected 'p edge <n> <m>', got {line!r}")
            try:
                n, declared_m = int(tok[2]), int(tok[3])
            except ValueError:
                raise DimacsParseError(lineno, f"non-integer counts in {line!r}") from None
            if n < 1 or declared_m < 0:
                raise DimacsParseError(lineno, f"invalid counts in {line!r}")
        elif tok[0] == "e":
            if n is None:
                raise DimacsParseError(lineno, "edge line before problem line")
            if len(tok) != 3:
                raise DimacsParseError(lineno, f"expected 'e <i> <j>', got {line!r}")
            try:
                i, j = int(tok[1]), int(tok[2])
            except ValueError:
                raise DimacsParseError(lineno, f"non-integer endpoint in {line!r}") from None
            for v in (i, j):
                if not 1 <= v <= n:
                    raise EndpointRangeError(lineno, f"endpoint {v} outside [1, {n}]")
            if i == j:
                raise GraphError(f"line {lineno}: self-loop at vertex {i}")
            e = _norm(i - 1, j - 1)
            if e in edges:
                raise GraphError(f"line {lineno}: duplicate edge {i} {j}")
            edges.add(e)
        else:
            raise DimacsParseError(lineno, f"unrecognised line {line!r}")
    if n is None:
        raise DimacsParseError(len(lines), "missing problem line")
    if declared_m != len(edges):
        raise GraphError(f"problem line declares {declared_m} edges, found {len(edges)}")
    g = Graph(n, tuple(edges), name)
    return g.complement() if complement else g


def read_dimacs(path, *, complement: bool = False, name: str = "") -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_dimacs(fh, complement=complement, name=name)


def format_dimacs(g: Graph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"c {line}" for line in comment.splitlines())
    out.append(f"p edge {g.n} {g.m}")
    out.extend(f"e {i + 1} {j + 1}" for i, j in g.edges)
    return "\n".join(out) + "\n"


# generators


def gen_paley(q: int) -> Graph:
    """Paley graph: ``i ~ j`` iff ``i - j`` is a nonzero square mod ``q``."""
    if not isprime(q) or q % 4 != 1:
        raise ValueError(f"Paley graph needs a prime q = 1 mod 4, got {q}")
    squares = {(k * k) % q for k in range(1, q)}
    edges = [(i, j) for i in range(q) for j in range(i + 1, q) if (j - i) % q in squares]
    return Graph(q, tuple(edges), f"paley{q}")


def gen_torus(dims: Sequence[int]) -> Graph:
    """Cartesian product of cycles ``C_d1 x C_d2 x ...``.

    Vertex ``(c1, c2, ...)`` is numbered in row-major order.
    """
    dims = list(dims)
    if not dims:
        raise ValueError("torus needs at least one dimension")
    if any(d < 3 for d in dims):
        raise ValueError(f"every cycle length must be >= 3, got {dims}")
    coords = list(itertools.product(*(range(d) for d in dims)))
    index = {c: k for k, c in enumerate(coords)}
    edges = set()
    for c in coords:
        for axis, d in enumerate(dims):
            nb = list(c)
            nb[axis] = (nb[axis] + 1) % d
            edges.add(_norm(index[c], index[tuple(nb)]))
    return Graph(len(coords), tuple(edges), "torus" + "x".join(map(str, dims)))


def gen_random(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p); deterministic in ``(n, p, seed)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph(n, tuple(edges), f"G({n},{p},{seed})")


def gen_hamming(bits: int, distance: int) -> Graph:
    """Conflict form of the DIMACS ``hammingB-D`` clique graph.

    Words of length ``bits`` are adjacent iff their Hamming distance is
    below ``distance`` (the clique file joins words at distance >= D).
    """
    if bits < 1 or distance < 1:
        raise ValueError("bits and distance must be positive")
    n = 1 << bits
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if (u ^ v).bit_count() < distance
    ]
    return Graph(n, tuple(edges), f"hamming{bits}_{distance}")


def gen_johnson(length: int, weight: int, distance: int) -> Graph:
    """Conflict form of the DIMACS ``johnsonN-W-D`` clique graph.

    Vertices are the ``weight``-subsets of ``range(length)``; two are adjacent
    iff the Hamming distance of their indicator words is below ``distance``.
    """
    if not 0 < weight <= length:
        raise ValueError("need 0 < weight <= length")
    words = [sum(1 << b for b in c) for c in itertools.combinations(range(length), weight)]
    edges = [
        (a, b)
        for a, b in itertools.combinations(range(len(words)), 2)
        if (words[a] ^ words[b]).bit_count() < distance
    ]
    return Graph(len(words), tuple(edges), f"johnson{length}_{weight}_{distance}")


def steiner_triples_ag23() -> list[tuple[int, int, int]]:
    """The 12 lines of the affine plane AG(2, 3): the Steiner triple system on 9 points."""
    pts = [(x, y) for x in range(3) for y in range(3)]
    lines = set()
    for a, b in itertools.combinations(pts, 2):
        c = ((-a[0] - b[0]) % 3, (-a[1] - b[1]) % 3)
        lines.add(tuple(sorted(3 * p[0] + p[1] for p in (a, b, c))))
    return sorted(lines)


def gen_mann(points: int, triples: Sequence[tuple[int, int, int]]) -> Graph:
    """Conflict form of the MANN clique formulation of a Steiner triple covering problem.

    One vertex per point, then one vertex per (triple, member) incidence.
    The three incidence vertices of a triple form a triangle, and each
    incidence vertex is joined to its point vertex.
    """
    n = points + 3 * len(triples)
    edges = []
    for t, triple in enumerate(triples):
        base = points + 3 * t
        edges += [(base, base + 1), (base, base + 2), (base + 1, base + 2)]
        edges += [(p, base + k) for k, p in enumerate(triple)]
    return Graph(n, tuple(edges), f"MANN_a{points}")
