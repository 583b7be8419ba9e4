import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stabset.graph import Graph, gen_paley
from stabset.qubo import build_qubo, energy
from stabset.qubo_io import export_qubo, import_qubo

from .conftest import graphs


def test_single_edge_coordinate_text():
    q = build_qubo(Graph(2, ((0, 1),)), 1)
    assert export_qubo(q) == "2 3\n0 0 -1\n1 1 -1\n0 1 2"


def test_jsonl_layout():
    lines = export_qubo(build_qubo(Graph(2, ((0, 1),)), 10), "jsonl").splitlines()
    assert json.loads(lines[0]) == {"n": 2, "nnz": 3}
    assert json.loads(lines[-1]) == {"i": 0, "j": 1, "w": 20}


def test_paley61_nnz():
    text = export_qubo(build_qubo(gen_paley(61), 10))
    assert text.splitlines()[0] == f"61 {61 + 915}"
    assert len(text.splitlines()) == 1 + 61 + 915


def upper_triangular_energy(text, x):
    rows = [ln.split() for ln in text.splitlines()[1:]]
    return sum(Fraction(w) * x[int(i)] * x[int(j)] for i, j, w in rows)


@given(graphs(max_n=10), st.sampled_from([1, 10, 100, Fraction(5, 2)]), st.data())
def test_external_evaluator_sees_same_energy(g, beta, data):
    q = build_qubo(g, beta)
    x = data.draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
    assert upper_triangular_energy(export_qubo(q), x) == energy(q, x)


@pytest.mark.parametrize("fmt", ["coordinate", "jsonl"])
@pytest.mark.parametrize("beta", [1, 10, Fraction(3, 2)])
def test_round_trip_instance_identity(fmt, beta):
    rng = random.Random(3)
    g = Graph.from_edges(9, {(i, j) for i in range(9) for j in range(i + 1, 9) if rng.random() < 0.4})
    q = build_qubo(g, beta)
    assert import_qubo(export_qubo(q, fmt), fmt) == q


def test_edgeless_round_trip():
    q = build_qubo(Graph(3, ()), 1)
    assert import_qubo(export_qubo(q)) == q


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2 3\n0 0 -1\n1 1 -1",             # nnz mismatch
        "2 3\n0 0 -2\n1 1 -1\n0 1 2",      # wrong diagonal
        "2 3\n0 0 -1\n1 1 -1\n1 0 2",      # lower triangle
        "2 3\n0 0 -1\n1 1 -1\n0 2 2",      # out of range
        "3 5\n0 0 -1\n1 1 -1\n2 2 -1\n0 1 2\n1 2 4",   # mixed weights
    ],
)
def test_import_rejects(text):
    with pytest.raises(ValueError):
        import_qubo(text)


def test_unknown_format():
    q = build_qubo(Graph(1, ()), 1)
    with pytest.raises(ValueError):
        export_qubo(q, "xml")
    with pytest.raises(ValueError):
        import_qubo("1 1\n0 0 -1", "xml")
