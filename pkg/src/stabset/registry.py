"""The sixteen benchmark instances and how to obtain each one.

Thirteen are rebuilt from their combinatorial definitions. ``C125.9``,
``DSJC125.5`` and ``DSJC125.9`` are random graphs that only exist as
DIMACS files; drop them into a data directory (``$STABSET_DATA``,
``./data`` or an explicit ``data_dirs`` entry) under their usual names,
e.g. ``C125.9.clq`` or ``DSJC125.5.col``. Files may be in clique form or
conflict form: the manifest edge count decides which, and a clique-form
file is complemented on load.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .graph import (
    Graph,
    gen_hamming,
    gen_johnson,
    gen_mann,
    gen_paley,
    gen_random,
    gen_torus,
    read_dimacs,
    steiner_triples_ag23,
)

DATA_ENV = "STABSET_DATA"


class UnknownInstanceError(LookupError):
    pass


class InstanceIntegrityError(ValueError):
    """Loaded graph disagrees with the manifest."""


class InstanceFileMissing(FileNotFoundError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    n: int
    m: int
    alpha: int
    build: Callable[[], Graph] | None = None  # None: DIMACS file only


def _mann_a9() -> Graph:
    return gen_mann(9, steiner_triples_ag23())


MANIFEST: dict[str, ManifestEntry] = {
    e.name: e
    for e in (
        ManifestEntry("C125.9", 125, 787, 34),
        ManifestEntry("DSJC125.5", 125, 3859, 10),
        ManifestEntry("DSJC125.9", 125, 789, 34),
        ManifestEntry("hamming6_2", 64, 192, 32, lambda: gen_hamming(6, 2)),
        ManifestEntry("hamming6_4", 64, 1312, 4, lambda: gen_hamming(6, 4)),
        ManifestEntry("johnson8_2_4", 28, 168, 4, lambda: gen_johnson(8, 2, 4)),
        ManifestEntry("johnson8_4_4", 70, 560, 14, lambda: gen_johnson(8, 4, 4)),
        ManifestEntry("johnson16_2_4", 120, 1680, 8, lambda: gen_johnson(16, 2, 4)),
        ManifestEntry("MANN_a9", 45, 72, 16, _mann_a9),
        ManifestEntry("paley61", 61, 915, 5, lambda: gen_paley(61)),
        ManifestEntry("paley73", 73, 1314, 5, lambda: gen_paley(73)),
        ManifestEntry("paley89", 89, 1958, 5, lambda: gen_paley(89)),
        ManifestEntry("paley97", 97, 2328, 6, lambda: gen_paley(97)),
        ManifestEntry("paley101", 101, 2525, 5, lambda: gen_paley(101)),
        ManifestEntry("spin5", 125, 375, 50, lambda: gen_torus([5, 5, 5])),
        ManifestEntry("torus11", 121, 242, 55, lambda: gen_torus([11, 11])),
    )
}

_registered: dict[str, tuple[Path, bool | None]] = {}


def register_file(name: str, path: str | os.PathLike, complement: bool | None = None) -> None:
    """Make ``name`` resolve to a DIMACS file. ``complement=None`` infers polarity."""
    _registered[name] = (Path(path), complement)


def unregister_file(name: str) -> None:
    _registered.pop(name, None)


def data_dirs(extra: Iterable[str | os.PathLike] = ()) -> list[Path]:
    dirs = [Path(d) for d in extra]
    env = os.environ.get(DATA_ENV)
    if env:
        dirs += [Path(d) for d in env.split(os.pathsep) if d]
    dirs.append(Path.cwd() / "data")
    return dirs


def find_instance_file(name: str, dirs: Iterable[Path]) -> Path | None:
    """First file named ``<name>`` or ``<name>.<ext...>`` (case-insensitive)."""
    key = name.lower()
    for d in dirs:
        if not d.is_dir():
            continue
        for p in sorted(d.iterdir()):
            low = p.name.lower()
            if p.is_file() and (low == key or low.startswith(key + ".")):
                return p
    return None


def load_with_polarity(path: Path, name: str, m_expected: int | None, complement: bool | None) -> Graph:
    g = read_dimacs(path, name=name)
    if complement is None:
        complement = (
            m_expected is not None
            and g.m != m_expected
            and g.n * (g.n - 1) // 2 - g.m == m_expected
        )
    return g.complement(name) if complement else g


def _check(g: Graph, entry: ManifestEntry) -> Graph:
    if (g.n, g.m) != (entry.n, entry.m):
        raise InstanceIntegrityError(
            f"{entry.name}: got n={g.n}, m={g.m}; manifest says n={entry.n}, m={entry.m}"
        )
    return g


def instance_registry(name: str, dirs: Iterable[str | os.PathLike] = ()) -> Graph:
    """Graph for a manifest instance or a registered file.

    Manifest instances are checked against their ``(n, m)`` before return.
    """
    entry = MANIFEST.get(name)
    if name in _registered:
        path, complement = _registered[name]
        g = load_with_polarity(path, name, entry.m if entry else None, complement)
        return _check(g, entry) if entry else g
    if entry is None:
        raise UnknownInstanceError(f"unknown instance {name!r}")
    if entry.build is not None:
        g = entry.build()
        return _check(Graph(g.n, g.edges, name), entry)
    path = find_instance_file(name, data_dirs(dirs))
    if path is None:
        searched = ", ".join(str(d) for d in data_dirs(dirs))
        raise InstanceFileMissing(
            f"{name} is only available as a DIMACS file; none found in: {searched}"
        )
    return _check(load_with_polarity(path, name, entry.m, None), entry)


def resolve_instance(
    spec: str, dirs: Iterable[str | os.PathLike] = (), complement: bool | None = None
) -> Graph:
    """Graph for a harness instance spec.

    Accepts manifest names, generator specs (``paley:13``, ``torus:3x3``,
    ``random:20:0.3:7``, ``empty:4``, ``complete:5``, ``hamming:6:2``,
    ``johnson:8:2:4``) or a path to a DIMACS file.
    """
    if spec in MANIFEST or spec in _registered:
        return instance_registry(spec, dirs)
    kind, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "paley" and len(args) == 1:
            return _named(gen_paley(int(args[0])), spec)
        if kind == "torus" and len(args) == 1:
            return _named(gen_torus([int(d) for d in args[0].split("x")]), spec)
        if kind == "random" and len(args) == 3:
            return _named(gen_random(int(args[0]), float(args[1]), int(args[2])), spec)
        if kind == "empty" and len(args) == 1:
            return Graph(int(args[0]), (), spec)
        if kind == "complete" and len(args) == 1:
            return _named(gen_random(int(args[0]), 1.0, 0), spec)
        if kind == "hamming" and len(args) == 2:
            return _named(gen_hamming(int(args[0]), int(args[1])), spec)
        if kind == "johnson" and len(args) == 3:
            return _named(gen_johnson(*(int(a) for a in args)), spec)
    except ValueError as exc:
        raise UnknownInstanceError(f"bad generator spec {spec!r}: {exc}") from exc
    path = Path(spec)
    if path.is_file():
        return read_dimacs(path, complement=bool(complement), name=path.name)
    raise UnknownInstanceError(f"unknown instance {spec!r}")


def _named(g: Graph, name: str) -> Graph:
    return Graph(g.n, g.edges, name)
