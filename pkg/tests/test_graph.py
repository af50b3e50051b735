import pytest
from hypothesis import given, settings, strategies as st

from eqconsensus.generators import counterexample_sequence, CounterexampleSpec
from eqconsensus.graph import (
    Graph,
    GraphError,
    GraphSequence,
    SequenceFormatError,
    check_class_membership,
    complete_graph,
    cycle_graph,
    empty_graph,
    format_sequence,
    is_b_connected,
    is_connected,
    parse_sequence,
    path_graph,
    read_sequence,
    union_graph,
    validate_graph,
    write_sequence,
)


def test_validate_single_node():
    assert validate_graph(Graph(1, ((0,),))) == []


def test_validate_k2():
    assert validate_graph(complete_graph(2)) == []


def test_validate_missing_self_loop():
    g = Graph(2, ((0, 1), (0,)))
    assert validate_graph(g) == ["missing self-loop at 1"]


def test_validate_asymmetric():
    assert validate_graph(Graph(2, ((0, 1), (1,)))) == ["asymmetric edge 0->1"]


def test_validate_duplicates():
    assert "duplicate neighbor at 0" in validate_graph(Graph(1, ((0, 0),)))


def test_degree_counts_self_loop():
    assert empty_graph(3).degrees() == (1, 1, 1)
    assert path_graph(3).degrees() == (2, 3, 2)


def test_connectivity_examples():
    assert is_connected(path_graph(3))
    assert not is_connected(empty_graph(2))
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    assert is_connected(two_triangles)
    assert not is_connected(Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]))


def test_union_examples():
    g = cycle_graph(5)
    assert union_graph([g, g]) == g
    u = union_graph([Graph.from_edges(3, [(0, 1)]), Graph.from_edges(3, [(1, 2)])])
    assert u == path_graph(3)
    with pytest.raises(GraphError, match="inconsistent node count"):
        union_graph([path_graph(2), path_graph(3)])


def test_union_of_counterexample_period_connected():
    seq = counterexample_sequence(CounterexampleSpec(8))
    u = union_graph(list(seq))
    assert is_connected(u)
    # stars centred at 0..3 cover every pair inside each half, bridges s -- 4+s
    expected = {(i, j) for i in range(4) for j in range(i + 1, 4)}
    expected |= {(4 + i, 4 + j) for i in range(4) for j in range(i + 1, 4)}
    expected |= {(s, 4 + s) for s in range(4)}
    assert set(u.edges()) == expected


def test_b_connected_examples():
    seq = GraphSequence(4, [cycle_graph(4)] * 3)
    assert is_b_connected(seq, 1)
    alt = GraphSequence(4, [cycle_graph(4), empty_graph(4)] * 3, B=2)
    assert is_b_connected(alt)
    assert not is_b_connected(alt, 1)
    # windows are aligned at multiples of B, not sliding
    shifted = GraphSequence(4, [empty_graph(4), cycle_graph(4), cycle_graph(4), empty_graph(4)], B=2)
    assert is_b_connected(shifted)
    bad = GraphSequence(4, [empty_graph(4), empty_graph(4), cycle_graph(4), empty_graph(4)], B=2)
    assert not is_b_connected(bad)
    assert not is_b_connected(GraphSequence(3, [empty_graph(3)] * 6), 3)


def test_ragged_window():
    with pytest.raises(GraphError, match="ragged window"):
        is_b_connected(GraphSequence(3, [path_graph(3)] * 3), 2)


def test_class_membership():
    ring = GraphSequence(5, [cycle_graph(5)] * 4)
    assert check_class_membership(ring, [3] * 5) == []
    alt = GraphSequence(5, [cycle_graph(5), empty_graph(5)] * 2)
    assert check_class_membership(alt, [3] * 5) == []
    ce = counterexample_sequence(CounterexampleSpec(8))
    d0 = ce[0].degrees()
    bad = check_class_membership(ce, d0)
    assert bad
    # the centre of G(0) has degree 2 at t=1
    assert (1, 0, 2) in bad
    assert all(check_class_membership(ce, [k] * 8) for k in range(1, 7))


def test_degree_profile_checked():
    with pytest.raises(GraphError):
        GraphSequence(3, [path_graph(3)], degree_profile=(2, 3))
    with pytest.raises(GraphError, match="inconsistent node count"):
        GraphSequence(3, [path_graph(3), path_graph(4)])


def test_file_roundtrip_byte_exact(tmp_path):
    text = "n=4 B=2\n0: 0-1,0-2,2-3\n1:\n2: 1-3\n3: 0-1,1-3,2-3\n"
    seq = parse_sequence(text)
    assert seq.n == 4 and seq.B == 2 and len(seq) == 4
    assert seq[1] == empty_graph(4)
    assert format_sequence(seq) == text
    path = tmp_path / "s.txt"
    write_sequence(seq, path)
    assert path.read_bytes() == text.encode()
    assert read_sequence(path) == seq


@pytest.mark.parametrize("text, lineno", [
    ("", 1),
    ("n=x B=1\n", 1),
    ("n=3 B=1\n0: 0-1\n1 0-1\n", 3),
    ("n=3 B=1\n0: 0-1\n2: 0-1\n", 3),
    ("n=3 B=1\n0: 0-7\n", 2),
    ("n=3 B=1\n0: 0-0\n", 2),
    ("n=3 B=1\n0: 0+1\n", 2),
])
def test_malformed_file_names_line(text, lineno):
    with pytest.raises(SequenceFormatError) as info:
        parse_sequence(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


@st.composite
def graphs(draw, n=None):
    n = n or draw(st.integers(1, 7))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@given(graphs())
def test_degree_sum(g):
    assert validate_graph(g) == []
    assert sum(g.degrees()) == 2 * len(g.edges()) + g.n


@settings(max_examples=60)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(graphs(n), graphs(n), graphs(n))))
def test_union_laws(gs):
    a, b, c = gs
    assert union_graph([a, b]) == union_graph([b, a])
    assert union_graph([union_graph([a, b]), c]) == union_graph([a, union_graph([b, c])])
    assert union_graph([a, a]) == a


@settings(max_examples=60)
@given(st.lists(graphs(5), min_size=1, max_size=6))
def test_b1_means_every_graph_connected(gs):
    assert is_b_connected(GraphSequence(5, gs), 1) == all(is_connected(g) for g in gs)
