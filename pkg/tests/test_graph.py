import io

import pytest
from hypothesis import given, settings

from stabset.graph import (
    DimacsParseError,
    EndpointRangeError,
    Graph,
    GraphError,
    format_dimacs,
    gen_hamming,
    gen_johnson,
    gen_mann,
    gen_paley,
    gen_random,
    gen_torus,
    iter_bits,
    parse_dimacs,
    read_dimacs,
    steiner_triples_ag23,
)

from .conftest import graphs


def test_parse_minimal():
    g = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3")
    assert (g.n, g.m) == (3, 2)
    assert g.edges == ((0, 1), (1, 2))


def test_parse_comments_blank_lines_and_stream():
    text = "c hello\n\np edge 4 1\nc mid\ne 4 1\n"
    g = parse_dimacs(io.StringIO(text))
    assert g.edges == ((0, 3),)


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("p edge 3 1\nx 1 2", 2),
        ("p edge 3 1\ne 1", 2),
        ("p edge 3 1\ne a 2", 2),
        ("e 1 2\np edge 3 1", 1),
        ("p col 3 1\ne 1 2", 1),
        ("p edge 3\ne 1 2", 1),
        ("p edge 3 1\np edge 3 1\ne 1 2", 2),
    ],
)
def test_parse_malformed_reports_line(text, lineno):
    with pytest.raises(DimacsParseError) as info:
        parse_dimacs(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_parse_missing_problem_line():
    with pytest.raises(DimacsParseError):
        parse_dimacs("c nothing here\n")


@pytest.mark.parametrize("edge", ["e 0 1", "e 1 4"])
def test_parse_endpoint_range(edge):
    with pytest.raises(EndpointRangeError):
        parse_dimacs(f"p edge 3 1\n{edge}")


@pytest.mark.parametrize(
    "text",
    [
        "p edge 3 1\ne 2 2",            # self-loop
        "p edge 3 2\ne 1 2\ne 2 1",     # duplicate, either orientation
        "p edge 3 2\ne 1 2",            # declared m too large
        "p edge 3 0\ne 1 2",            # declared m too small
    ],
)
def test_parse_validation_errors(text):
    with pytest.raises(GraphError):
        parse_dimacs(text)


def test_parse_complement_flag():
    g = parse_dimacs("p edge 4 1\ne 1 2", complement=True)
    assert g.m == 5
    assert not g.has_edge(0, 1)


def test_read_dimacs_file(tmp_path):
    p = tmp_path / "tiny.col"
    p.write_text("p edge 3 1\ne 3 1\n")
    assert read_dimacs(p).edges == ((0, 2),)


@given(graphs(max_n=15))
def test_dimacs_round_trip(g):
    back = parse_dimacs(format_dimacs(g, comment="two\nlines"))
    assert back.n == g.n
    assert set(back.edges) == set(g.edges)


def test_graph_rejects_bad_edges():
    with pytest.raises(GraphError):
        Graph(3, ((0, 0),))
    with pytest.raises(GraphError):
        Graph(3, ((0, 1), (1, 0)))
    with pytest.raises(GraphError):
        Graph(3, ((0, 3),))


def test_graph_queries():
    g = Graph.from_edges(4, [(2, 0), (1, 2)])
    assert g.edges == ((0, 2), (1, 2))
    assert g.degrees() == [1, 1, 2, 0]
    assert g.neighbors(2) == [0, 1]
    assert g.has_edge(2, 0) and not g.has_edge(0, 1)
    assert g.complement().m == 6 - 2
    h = g.induced([0, 2, 3])
    assert (h.n, h.edges) == (3, ((0, 1),))
    a = g.adjacency_matrix()
    assert (a == a.T).all() and a.sum() == 2 * g.m


def test_iter_bits():
    assert list(iter_bits(0b101001)) == [0, 3, 5]
    assert list(iter_bits(0)) == []


def test_paley5_is_the_5_cycle():
    g = gen_paley(5)
    assert g.m == 5
    assert all(d == 2 for d in g.degrees())


@pytest.mark.parametrize("q, m", [(61, 915), (73, 1314), (89, 1958), (97, 2328), (101, 2525)])
def test_paley_sizes(q, m):
    g = gen_paley(q)
    assert (g.n, g.m) == (q, m)
    assert set(g.degrees()) == {(q - 1) // 2}
    assert g.m == q * (q - 1) // 4


@pytest.mark.parametrize("q", [7, 15, 21, 2, 1])
def test_paley_rejects(q):
    with pytest.raises(ValueError):
        gen_paley(q)


@pytest.mark.parametrize("dims, n, m", [([11, 11], 121, 242), ([5, 5, 5], 125, 375), ([3, 3], 9, 18)])
def test_torus_sizes(dims, n, m):
    g = gen_torus(dims)
    assert (g.n, g.m) == (n, m)
    assert set(g.degrees()) == {2 * len(dims)}


@pytest.mark.parametrize("dims", [[], [2, 5], [3, 0]])
def test_torus_rejects(dims):
    with pytest.raises(ValueError):
        gen_torus(dims)


def test_random_graph_edges():
    assert gen_random(5, 0, 1).m == 0
    assert gen_random(5, 1, 1).m == 10
    assert gen_random(15, 0.3, 7).edges == gen_random(15, 0.3, 7).edges
    assert gen_random(15, 0.3, 7).edges != gen_random(15, 0.3, 8).edges
    with pytest.raises(ValueError):
        gen_random(5, 1.5, 0)


@pytest.mark.parametrize(
    "g, n, m",
    [
        (gen_hamming(6, 2), 64, 192),
        (gen_hamming(6, 4), 64, 1312),
        (gen_johnson(8, 2, 4), 28, 168),
        (gen_johnson(8, 4, 4), 70, 560),
        (gen_johnson(16, 2, 4), 120, 1680),
        (gen_mann(9, steiner_triples_ag23()), 45, 72),
    ],
)
def test_reconstructed_families(g, n, m):
    assert (g.n, g.m) == (n, m)


def test_steiner_system_covers_each_pair_once():
    triples = steiner_triples_ag23()
    assert len(triples) == 12
    seen = set()
    for t in triples:
        for a in t:
            for b in t:
                if a < b:
                    assert (a, b) not in seen
                    seen.add((a, b))
    assert len(seen) == 36


@settings(max_examples=50)
@given(graphs(max_n=15))
def test_graph_invariants(g):
    assert len(set(g.edges)) == g.m
    assert all(i < j for i, j in g.edges)
    assert sum(g.degrees()) == 2 * g.m
