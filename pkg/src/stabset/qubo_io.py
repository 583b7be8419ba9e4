"""Text export of ``Q`` for external QUBO tools, and the matching import.

Coordinate text::

    <n> <nnz>
    <i> <i> -1          one line per vertex, i = 0..n-1
    <i> <j> <2*beta>    one line per edge, i < j

Entries are upper-triangular and 0-indexed. Off-diagonal weights carry
``2*beta`` so that ``sum(w * x_i * x_j)`` over the listed entries equals the
symmetric ``x^T Q x``. JSON lines holds the same entries, one object per
line, after a header object ``{"n": .., "nnz": ..}``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .qubo import QuboInstance

FORMATS = ("coordinate", "jsonl")


def _fmt(w) -> str:
    return str(w) if isinstance(w, int) else f"{w.numerator}/{w.denominator}"


def _num(text: str):
    w = Fraction(text)
    return int(w) if w.denominator == 1 else w


def _entries(q: QuboInstance):
    for i in range(q.n):
        yield i, i, -1
    w = 2 * q.beta
    for i, j in q.edges:
        yield i, j, w


def export_qubo(q: QuboInstance, format: str = "coordinate") -> str:
    nnz = q.n + len(q.edges)
    if format == "coordinate":
        lines = [f"{q.n} {nnz}"]
        lines += [f"{i} {j} {_fmt(w)}" for i, j, w in _entries(q)]
        return "\n".join(lines)
    if format == "jsonl":
        lines = [json.dumps({"n": q.n, "nnz": nnz})]
        lines += [json.dumps({"i": i, "j": j, "w": _fmt(w) if not isinstance(w, int) else w})
                  for i, j, w in _entries(q)]
        return "\n".join(lines)
    raise ValueError(f"unknown export format {format!r}; expected one of {FORMATS}")


def _assemble(n: int, nnz: int, entries) -> QuboInstance:
    edges = []
    weights = set()
    count = 0
    for i, j, w in entries:
        count += 1
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"entry ({i}, {j}) outside 0..{n - 1}")
        if i == j:
            if w != -1:
                raise ValueError(f"diagonal entry ({i}, {i}) is {w}, expected -1")
            continue
        if i > j:
            raise ValueError(f"entry ({i}, {j}) is below the diagonal")
        edges.append((i, j))
        weights.add(w)
    if count != nnz:
        raise ValueError(f"header declares {nnz} entries, found {count}")
    if len(weights) > 1:
        raise ValueError(f"off-diagonal weights differ: {sorted(weights)}")
    beta = Fraction(weights.pop()) / 2 if weights else 1
    return QuboInstance(n, beta, tuple(edges))


def import_qubo(text: str, format: str = "coordinate") -> QuboInstance:
    """Rebuild a :class:`QuboInstance` from :func:`export_qubo` output.

    An edgeless export carries no penalty weight; beta comes back as 1.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty QUBO text")
    if format == "coordinate":
        n, nnz = (int(t) for t in lines[0].split())
        rows = (ln.split() for ln in lines[1:])
        entries = ((int(i), int(j), _num(w)) for i, j, w in rows)
    elif format == "jsonl":
        head = json.loads(lines[0])
        n, nnz = head["n"], head["nnz"]
        objs = (json.loads(ln) for ln in lines[1:])
        entries = ((o["i"], o["j"], _num(str(o["w"]))) for o in objs)
    else:
        raise ValueError(f"unknown import format {format!r}; expected one of {FORMATS}")
    return _assemble(n, nnz, entries)
