from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stabset.graph import Graph, gen_paley
from stabset.qubo import (
    build_qubo,
    energy,
    is_stable,
    make_sample,
    paper_feasibility_diagnostic,
    violations,
)

from .conftest import cycle4, graph_and_vector, triangle

EDGE = Graph(2, ((0, 1),))


def dense_energy(q, x):
    v = np.asarray(x, dtype=object)
    return int(v @ q.matrix().astype(object) @ v) if isinstance(q.beta, int) else v @ q.matrix() @ v


def test_matrix_examples():
    assert build_qubo(Graph(2, ()), 1).matrix().tolist() == [[-1, 0], [0, -1]]
    assert build_qubo(EDGE, 10).matrix().tolist() == [[-1, 10], [10, -1]]


def test_paley61_matrix():
    m = build_qubo(gen_paley(61), 100).matrix()
    off = m[~np.eye(61, dtype=bool)]
    assert m.shape == (61, 61)
    assert (off == 100).sum() == 2 * 915
    assert set(np.unique(off)) == {0, 100}
    assert (m == m.T).all() and (np.diag(m) == -1).all()


@pytest.mark.parametrize("beta", [0, Fraction(1, 2), 0.5, -3])
def test_beta_below_one_rejected(beta):
    with pytest.raises(ValueError):
        build_qubo(EDGE, beta)


def test_beta_types():
    assert build_qubo(EDGE, 10.0).beta == 10
    assert type(build_qubo(EDGE, Fraction(4, 2)).beta) is int
    assert build_qubo(EDGE, Fraction(3, 2)).beta == Fraction(3, 2)
    with pytest.raises(TypeError):
        build_qubo(EDGE, "2")


def test_energy_examples():
    assert energy(build_qubo(EDGE, 1), (1, 1)) == 0
    assert energy(build_qubo(EDGE, 10), (1, 0)) == -1
    assert energy(build_qubo(EDGE, Fraction(3, 2)), (1, 1)) == 1


def test_violation_and_stability_examples():
    t = triangle()
    assert violations(t, (1, 1, 1)) == 3
    assert violations(t, (0, 1, 0)) == 0
    assert not is_stable(t, (1, 1, 0))
    assert all(is_stable(t, x) for x in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0)])


@pytest.mark.parametrize("fn", [violations, is_stable])
def test_length_mismatch(fn):
    with pytest.raises(ValueError):
        fn(triangle(), (1, 0))


def test_non_binary_entry():
    with pytest.raises(ValueError):
        energy(build_qubo(EDGE, 1), (2, 0))


@given(graph_and_vector(), st.sampled_from([1, 10, 100, Fraction(7, 3)]))
def test_energy_matches_dense_form(gx, beta):
    g, x = gx
    q = build_qubo(g, beta)
    assert energy(q, x) == dense_energy(q, x)
    s = make_sample(q, x)
    assert s.energy == -s.cardinality + 2 * q.beta * s.violations
    assert s.stable == is_stable(g, x)


@given(graph_and_vector())
def test_energy_scale_in_beta(gx):
    g, x = gx
    e1, e10 = energy(build_qubo(g, 1), x), energy(build_qubo(g, 10), x)
    if is_stable(g, x):
        assert e1 == e10 == -sum(x)
    else:
        assert e1 < e10


def test_diagnostic_examples():
    assert not paper_feasibility_diagnostic(build_qubo(triangle(), 1), (1, 1, 0))
    assert paper_feasibility_diagnostic(build_qubo(triangle(), 1), (0, 1, 0))


def test_diagnostic_4cycle_false_negative():
    g = cycle4()
    q = build_qubo(g, 1)
    x = (1, 1, 1, 1)
    assert energy(q, x) == 4
    assert paper_feasibility_diagnostic(q, x)
    assert not is_stable(g, x)


@given(graph_and_vector(), st.sampled_from([1, 10, 100]))
def test_diagnostic_accepts_every_stable_set(gx, beta):
    g, x = gx
    if is_stable(g, x):
        assert paper_feasibility_diagnostic(build_qubo(g, beta), x)


def test_sample_selected():
    s = make_sample(build_qubo(triangle(), 1), [0, 1, 1])
    assert s.selected() == [1, 2]
    assert (s.cardinality, s.violations, s.energy) == (2, 1, 0)
