"""Classical stand-ins for the two annealer solver classes.

``sa_sample`` is a multi-read simulated annealer over the QUBO (the
"QPU" role). ``hybrid_solve`` anneals, repairs the best read into a stable
set and polishes it with (1,2)-swap local search (the "hybrid" role).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from numba import njit
from scipy.optimize import brentq

from .graph import Graph, iter_bits
from .qubo import QuboInstance, Sample, build_qubo, is_stable, make_sample

DEFAULT_READS = 1000
DEFAULT_SWEEPS = 1000
DEFAULT_T_FINAL = 0.05
TARGET_ACCEPTANCE = 0.8
PROBE_FLIPS = 100
DEFAULT_RESTARTS = 10
DEFAULT_BUDGET = 100_000

# spawn-key prefixes keeping the derived streams disjoint
_READ_STREAM, _PROBE_STREAM, _RESTART_STREAM = 0, 1, 2


def derive_seed(master_seed: int, *keys: int) -> int:
    """Counter-style 64-bit seed for stream ``keys`` under ``master_seed``."""
    if master_seed < 0:
        raise ValueError(f"master_seed must be non-negative, got {master_seed}")
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(keys))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class AnnealSchedule:
    sweeps: int = DEFAULT_SWEEPS
    t_initial: float = 2.0
    t_final: float = DEFAULT_T_FINAL

    def __post_init__(self) -> None:
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if not self.t_initial >= self.t_final > 0:
            raise ValueError(
                f"need t_initial >= t_final > 0, got {self.t_initial}, {self.t_final}"
            )

    @property
    def decay(self) -> float:
        if self.sweeps == 1:
            return 1.0
        return (self.t_final / self.t_initial) ** (1.0 / (self.sweeps - 1))

    def temperatures(self) -> np.ndarray:
        return self.t_initial * self.decay ** np.arange(self.sweeps, dtype=np.float64)


@dataclass(frozen=True)
class SampleSet:
    samples: tuple[Sample, ...]
    master_seed: int
    schedule: AnnealSchedule
    instance_id: str = ""
    beta: int | Fraction = 1
    timing: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.samples)

    def best_index(self) -> int:
        return min(range(len(self.samples)), key=lambda i: (self.samples[i].energy, i))

    def best(self) -> Sample:
        return self.samples[self.best_index()]


# annealing kernel


@njit(cache=True)
def _next(state):
    # splitmix64
    state[0] += np.uint64(0x9E3779B97F4A7C15)
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _uniform(state):
    return (_next(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


DENSE_MAX_N = 2048


@njit(cache=True)
def _flip_delta(x, nsel, penalty, i):
    if x[i]:
        return 1.0 - penalty * nsel[i]
    return -1.0 + penalty * nsel[i]


@njit(cache=True)
def _apply_flip(x, nsel, dense, indptr, indices, i):
    step = np.int32(-1) if x[i] else np.int32(1)
    x[i] = 1 - x[i]
    if dense.shape[0]:
        row = dense[i]
        for j in range(nsel.shape[0]):
            nsel[j] += step * row[j]
    else:
        for k in range(indptr[i], indptr[i + 1]):
            nsel[indices[k]] += step


@njit(cache=True)
def _init_state(x, nsel, indptr, indices, penalty):
    n = x.shape[0]
    nsel[:] = 0
    card = 0
    for i in range(n):
        if x[i]:
            card += 1
            for k in range(indptr[i], indptr[i + 1]):
                nsel[indices[k]] += 1
    twice_viol = 0
    for i in range(n):
        if x[i]:
            twice_viol += nsel[i]
    return -card + penalty * (twice_viol // 2)


@njit(cache=True)
def _anneal_reads(dense, indptr, indices, n, penalty, seeds, temps, out_x, out_e):
    nsel = np.zeros(n, dtype=np.int32)
    state = np.zeros(1, dtype=np.uint64)
    use_rows = dense.shape[0] > 0
    maxdeg = 0
    for i in range(n):
        maxdeg = max(maxdeg, indptr[i + 1] - indptr[i])
    # accept[t, 0]: drop an unconflicted vertex (+1); accept[t, k]: add next to k selected
    accept = np.empty((temps.shape[0], maxdeg + 1), dtype=np.float64)
    for t in range(temps.shape[0]):
        accept[t, 0] = math.exp(-1.0 / temps[t])
        for k in range(1, maxdeg + 1):
            accept[t, k] = math.exp(-(penalty * k - 1.0) / temps[t])
    for r in range(seeds.shape[0]):
        state[0] = seeds[r]
        x = out_x[r]
        for i in range(n):
            x[i] = _next(state) >> np.uint64(63)
        e = _init_state(x, nsel, indptr, indices, penalty)
        for t in range(temps.shape[0]):
            row = accept[t]
            for _ in range(n):
                i = np.int64(_uniform(state) * n)
                k = nsel[i]
                if x[i]:
                    d = 1.0 - penalty * k
                    p = row[0]
                    step = np.int32(-1)
                else:
                    d = penalty * k - 1.0
                    p = row[k]
                    step = np.int32(1)
                if d <= 0.0 or _uniform(state) < p:
                    x[i] = 1 - x[i]
                    e += d
                    if use_rows:
                        adj = dense[i]
                        for j in range(n):
                            nsel[j] += step * adj[j]
                    else:
                        for j in range(indptr[i], indptr[i + 1]):
                            nsel[indices[j]] += step
        out_e[r] = e


@njit(cache=True)
def _track_flips(dense, indptr, indices, penalty, x, flips):
    nsel = np.zeros(x.shape[0], dtype=np.int32)
    e = _init_state(x, nsel, indptr, indices, penalty)
    for i in flips:
        e += _flip_delta(x, nsel, penalty, i)
        _apply_flip(x, nsel, dense, indptr, indices, i)
    return e


def _csr(n: int, edges: Sequence[tuple[int, int]]) -> tuple[np.ndarray, np.ndarray]:
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(a) for a in nbrs])
    indices = np.array([v for a in nbrs for v in sorted(a)], dtype=np.int64)
    return indptr, indices


def _kernel_graph(q: QuboInstance, dense: bool | None = None):
    indptr, indices = _csr(q.n, q.edges)
    if dense is None:
        # row updates pay off once neighbour lists are long
        dense = q.n <= DENSE_MAX_N and int(np.diff(indptr).max(initial=0)) * 8 >= q.n
    rows = np.zeros((q.n, q.n) if dense else (0, 0), dtype=np.int32)
    for i, j in q.edges if dense else ():
        rows[i, j] = rows[j, i] = 1
    return rows, indptr, indices


def anneal_reads(
    q: QuboInstance, seeds: Sequence[int], temperatures: np.ndarray, dense: bool | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Run one anneal per seed. Returns final states and kernel-tracked energies.

    ``dense`` picks adjacency-row counter updates over neighbour-list
    updates (default: rows for small graphs with long neighbour lists).
    Both give identical trajectories.
    """
    rows, indptr, indices = _kernel_graph(q, dense)
    seeds = np.asarray(seeds, dtype=np.uint64)
    out_x = np.zeros((len(seeds), q.n), dtype=np.int8)
    out_e = np.zeros(len(seeds), dtype=np.float64)
    _anneal_reads(
        rows, indptr, indices, q.n, float(2 * q.beta), seeds,
        np.ascontiguousarray(temperatures, dtype=np.float64), out_x, out_e,
    )
    return out_x, out_e


def tracked_energy(
    q: QuboInstance, x: Sequence[int], flips: Sequence[int], dense: bool | None = None
) -> float:
    """Energy after applying ``flips`` to ``x`` using only incremental deltas."""
    rows, indptr, indices = _kernel_graph(q, dense)
    state = np.array(x, dtype=np.int8)
    return float(
        _track_flips(rows, indptr, indices, float(2 * q.beta), state,
                     np.asarray(flips, dtype=np.int64))
    )


def probe_deltas(q: QuboInstance, seed: int, flips: int = PROBE_FLIPS) -> np.ndarray:
    """Energy changes of ``flips`` random single-bit flips from a random state."""
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 2, q.n)
    indptr, indices = _csr(q.n, q.edges)
    nsel = np.array([x[indices[indptr[i]:indptr[i + 1]]].sum() for i in range(q.n)])
    pen = float(2 * q.beta)
    idx = rng.integers(0, q.n, flips)
    return np.where(x[idx] == 1, 1.0 - pen * nsel[idx], -1.0 + pen * nsel[idx])


def default_schedule(
    q: QuboInstance,
    master_seed: int = 0,
    sweeps: int = DEFAULT_SWEEPS,
    t_final: float = DEFAULT_T_FINAL,
    acceptance: float = TARGET_ACCEPTANCE,
) -> AnnealSchedule:
    """Geometric schedule whose starting temperature accepts ``acceptance`` of probe flips."""
    deltas = probe_deltas(q, derive_seed(master_seed, _PROBE_STREAM))

    def rate(log_t: float) -> float:
        return float(np.mean(np.minimum(1.0, np.exp(-np.maximum(deltas, 0.0) / math.exp(log_t)))))

    lo, hi = math.log(t_final), math.log(1e6)
    if rate(lo) >= acceptance:
        t0 = t_final
    else:
        t0 = math.exp(brentq(lambda s: rate(s) - acceptance, lo, hi, xtol=1e-9))
    return AnnealSchedule(sweeps=sweeps, t_initial=max(t0, t_final), t_final=t_final)


def samples_from_states(q: QuboInstance, states: np.ndarray) -> tuple[Sample, ...]:
    states = np.asarray(states, dtype=np.int64)
    card = states.sum(axis=1)
    if q.edges:
        e = np.asarray(q.edges)
        viol = (states[:, e[:, 0]] & states[:, e[:, 1]]).sum(axis=1)
    else:
        viol = np.zeros(len(states), dtype=np.int64)
    return tuple(
        Sample(tuple(row.tolist()), int(c), int(v), -int(c) + 2 * q.beta * int(v))
        for row, c, v in zip(states, card, viol)
    )


def sa_sample(
    q: QuboInstance,
    reads: int = DEFAULT_READS,
    schedule: AnnealSchedule | None = None,
    master_seed: int = 0,
    instance_id: str = "",
) -> SampleSet:
    """Independent single-flip Metropolis anneals, one per read.

    Read ``i`` starts from a uniformly random state drawn from its own
    stream ``derive_seed(master_seed, 0, i)``, so the result does not depend
    on the order reads are executed in.
    """
    if reads < 1:
        raise ValueError(f"reads must be >= 1, got {reads}")
    if schedule is None:
        schedule = default_schedule(q, master_seed)
    t0 = time.perf_counter()
    seeds = [derive_seed(master_seed, _READ_STREAM, i) for i in range(reads)]
    states, _ = anneal_reads(q, seeds, schedule.temperatures())
    samples = samples_from_states(q, states)
    return SampleSet(
        samples, master_seed, schedule, instance_id, q.beta,
        timing={"anneal_s": time.perf_counter() - t0},
    )


def feasible_fraction(s: SampleSet, g: Graph) -> float:
    """Share of samples whose selected vertices form a stable set."""
    if not s.samples:
        raise ValueError("empty sample set")
    ok = 0
    for smp in s.samples:
        if len(smp.x) != g.n:
            raise ValueError(f"sample length {len(smp.x)} does not match graph order {g.n}")
        ok += is_stable(g, smp.x)
    return ok / len(s.samples)


# repair and local search


def _mask(x: Sequence[int], n: int) -> int:
    if len(x) != n:
        raise ValueError(f"vector has length {len(x)}, expected {n}")
    return sum(1 << i for i, b in enumerate(x) if b)


def _vector(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def repair(g: Graph, x: Sequence[int]) -> tuple[int, ...]:
    """Drop selected vertices until no edge is violated.

    Each step drops the selected vertex with the most selected neighbours,
    then the higher degree in ``g``, then the lower index.
    """
    adj = g.adj
    mask = _mask(x, g.n)
    while True:
        drop, key = -1, None
        for v in iter_bits(mask):
            clash = (adj[v] & mask).bit_count()
            if clash and (key is None or (clash, adj[v].bit_count(), -v) > key):
                drop, key = v, (clash, adj[v].bit_count(), -v)
        if drop < 0:
            return _vector(mask, g.n)
        mask &= ~(1 << drop)


def local_improve(g: Graph, x: Sequence[int], budget: int = DEFAULT_BUDGET) -> tuple[int, ...]:
    """Grow a stable set by free insertions and (1,2)-swaps.

    An insertion adds the lowest free vertex with no selected neighbour.
    A (1,2)-swap drops a selected ``v`` and adds two non-adjacent vertices
    whose only selected neighbour was ``v``. Stops when neither move applies
    or after ``budget`` moves.
    """
    if not is_stable(g, x):
        raise ValueError("local_improve needs a stable set as input")
    n, adj = g.n, g.adj
    mask = _mask(x, n)
    full = (1 << n) - 1
    for _ in range(budget):
        covered = mask
        for v in iter_bits(mask):
            covered |= adj[v]
        free = full & ~covered
        if free:
            mask |= free & -free
            continue
        tight: dict[int, int] = {}
        for u in iter_bits(full & ~mask):
            hit = adj[u] & mask
            if hit & (hit - 1) == 0:
                owner = hit.bit_length() - 1
                tight[owner] = tight.get(owner, 0) | (1 << u)
        for v in sorted(tight):
            cand = tight[v]
            pair = None
            for u in iter_bits(cand):
                rest = cand & ~adj[u] & ~(1 << u)
                if rest:
                    pair = (u, (rest & -rest).bit_length() - 1)
                    break
            if pair:
                mask = (mask & ~(1 << v)) | (1 << pair[0]) | (1 << pair[1])
                break
        else:
            break
    return _vector(mask, n)


def hybrid_solve(
    g: Graph,
    beta=1,
    reads: int = DEFAULT_READS,
    restarts: int = DEFAULT_RESTARTS,
    master_seed: int = 0,
    schedule: AnnealSchedule | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Sample:
    """Best stable set over ``restarts`` rounds of anneal, repair, local search.

    Restart ``r`` anneals under its own derived master seed.
    Ties in cardinality go to the earliest restart.
    """
    if reads < 1 or restarts < 1:
        raise ValueError("reads and restarts must be >= 1")
    q = build_qubo(g, beta)
    best: Sample | None = None
    for r in range(restarts):
        ss = sa_sample(q, reads, schedule, derive_seed(master_seed, _RESTART_STREAM, r))
        y = local_improve(g, repair(g, ss.best().x), budget)
        cand = make_sample(q, y)
        if best is None or cand.cardinality > best.cardinality:
            best = cand
    return best
