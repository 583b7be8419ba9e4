"""Exact stability numbers: subset enumeration and branch and bound."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .graph import Graph, iter_bits

BRUTE_FORCE_MAX_N = 26
DEFAULT_TIME_LIMIT = 600.0
EXTENDED_TIME_LIMIT = 7200.0
# instances whose proof may need the extended budget
EXTENDED_BUDGET = frozenset({"C125.9", "DSJC125.9"})

_CLOCK_EVERY = 1024


class EnumerationBudgetError(ValueError):
    """Graph too large for exhaustive enumeration."""


@dataclass(frozen=True)
class ExactResult:
    alpha: int
    witness: tuple[int, ...]
    nodes_explored: int
    elapsed: float
    proven: bool = True
    upper_bound: int | None = None

    def __post_init__(self) -> None:
        if self.upper_bound is None:
            object.__setattr__(self, "upper_bound", self.alpha)


def _indicator(n: int, mask: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def brute_force_alpha(g: Graph, max_n: int = BRUTE_FORCE_MAX_N) -> ExactResult:
    """Enumerate stable sets in lexicographic order, pruning hopeless prefixes.

    Uses plain neighbour sets so it shares no machinery with
    :func:`branch_and_bound`.
    """
    if g.n > max_n:
        raise EnumerationBudgetError(
            f"{g.n} vertices exceeds enumeration budget {max_n}; use branch_and_bound"
        )
    t0 = time.perf_counter()
    nbrs = [set(g.neighbors(v)) for v in range(g.n)]
    best: list[int] = []
    nodes = 0

    def extend(chosen: list[int], candidates: list[int]) -> None:
        nonlocal best, nodes
        nodes += 1
        if len(chosen) > len(best):
            best = chosen.copy()
        for k, v in enumerate(candidates):
            if len(chosen) + len(candidates) - k <= len(best):
                return
            rest = [u for u in candidates[k + 1 :] if u not in nbrs[v]]
            chosen.append(v)
            extend(chosen, rest)
            chosen.pop()

    extend([], list(range(g.n)))
    mask = sum(1 << v for v in best)
    return ExactResult(len(best), _indicator(g.n, mask), nodes, time.perf_counter() - t0)


def clique_cover_bound(adj: list[int] | tuple[int, ...], pool: int) -> int:
    """Number of cliques in a greedy partition of ``pool`` (a vertex bitmask).

    Each clique grows from the lowest remaining vertex, restricted to common
    neighbours. A stable set meets every clique at most once.
    """
    cliques = 0
    left = pool
    while left:
        cliques += 1
        cand = left
        while cand:
            low = cand & -cand
            left ^= low
            cand ^= low
            cand &= adj[low.bit_length() - 1]
    return cliques


def branch_and_bound(g: Graph, time_limit: float | None = DEFAULT_TIME_LIMIT) -> ExactResult:
    """Depth-first include/exclude search for a maximum stable set.

    Each node branches on the pool vertex with the most neighbours inside
    the pool (ties to the lowest index), exploring "include" first. A node
    is cut when ``|chosen| + clique_cover_bound(pool) <= incumbent``.

    If ``time_limit`` (seconds) runs out the incumbent is returned with
    ``proven=False`` and ``upper_bound`` set to the largest bound among the
    unexplored nodes. Single-threaded and fully deterministic.
    """
    n = g.n
    adj = g.adj
    full = (1 << n) - 1
    keep = [full & ~adj[v] & ~(1 << v) for v in range(n)]
    t0 = time.perf_counter()
    deadline = None if time_limit is None else t0 + time_limit

    best_size, best_mask = 0, 0
    nodes = 0
    stack: list[tuple[int, int, int]] = [(full, 0, 0)]
    while stack:
        if deadline is not None and nodes % _CLOCK_EVERY == 0 and time.perf_counter() > deadline:
            open_bound = max(s + clique_cover_bound(adj, p) for p, s, _ in stack)
            return ExactResult(
                best_size,
                _indicator(n, best_mask),
                nodes,
                time.perf_counter() - t0,
                proven=False,
                upper_bound=max(best_size, open_bound),
            )
        pool, size, chosen = stack.pop()
        nodes += 1
        if size + clique_cover_bound(adj, pool) <= best_size:
            continue
        pick, pick_deg = -1, -1
        for v in iter_bits(pool):
            d = (adj[v] & pool).bit_count()
            if d > pick_deg:
                pick, pick_deg = v, d
        if pick_deg <= 0:
            # pool is edgeless: take all of it
            best_size, best_mask = size + pool.bit_count(), chosen | pool
            continue
        bit = 1 << pick
        stack.append((pool & ~bit, size, chosen))
        stack.append((pool & keep[pick], size + 1, chosen | bit))
    return ExactResult(best_size, _indicator(n, best_mask), nodes, time.perf_counter() - t0)


def time_limit_for(name: str, extended: bool = False) -> float:
    if extended and name in EXTENDED_BUDGET:
        return EXTENDED_TIME_LIMIT
    return DEFAULT_TIME_LIMIT
