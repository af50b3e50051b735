import random

import pytest

from eqconsensus.generators import (
    CounterexampleSpec,
    counterexample_sequence,
    double_edge_swap,
    fixed_degree_sequence,
    random_connected_graph,
    reverse_sequence,
    two_star_graph,
)
from eqconsensus.graph import (
    Graph,
    GraphError,
    GraphSequence,
    check_class_membership,
    complete_graph,
    cycle_graph,
    is_b_connected,
    is_connected,
    path_graph,
    union_graph,
)


def test_two_star_n4():
    g0 = two_star_graph(4, 0)
    assert g0.edges() == [(0, 1), (0, 2), (2, 3)]
    assert g0.degrees() == (3, 2, 3, 2)
    g1 = two_star_graph(4, 1)
    assert g1.edges() == [(0, 1), (1, 3), (2, 3)]
    assert g1.degrees() == (2, 3, 2, 3)


@pytest.mark.parametrize("s", range(4))
def test_two_star_n8_degrees(s):
    g = two_star_graph(8, s)
    assert sorted(g.degrees(), reverse=True) == [5, 5, 2, 2, 2, 2, 2, 2]
    assert g.degree(s) == g.degree(4 + s) == 5
    assert is_connected(g)
    # mirror symmetry i <-> i + n/2
    mirror = {i: (i + 4) % 8 for i in range(8)}
    assert {tuple(sorted((mirror[i], mirror[j]))) for i, j in g.edges()} == set(g.edges())


def test_two_star_errors():
    with pytest.raises(GraphError):
        two_star_graph(5, 0)
    with pytest.raises(GraphError):
        two_star_graph(6, 3)
    with pytest.raises(GraphError):
        CounterexampleSpec(7)


def test_counterexample_orders():
    fwd = counterexample_sequence(CounterexampleSpec(4, 1, "forward"))
    assert list(fwd) == [two_star_graph(4, 0), two_star_graph(4, 1)]
    rev = counterexample_sequence(CounterexampleSpec(4, 1, "reversed"))
    assert list(rev) == [two_star_graph(4, 1), two_star_graph(4, 0)]
    long = counterexample_sequence(8, 3, "reversed")
    assert len(long) == 12
    assert [g.degrees().index(5) for g in long] == [3, 2, 1, 0] * 3
    assert is_b_connected(long, 1)


def test_counterexample_degrees_swap_but_sorted_sequence_constant():
    seq = counterexample_sequence(CounterexampleSpec(10, 2))
    sorted_seqs = {tuple(sorted(g.degrees())) for g in seq}
    assert len(sorted_seqs) == 1
    assert len({g.degrees() for g in seq}) == 5
    assert all(check_class_membership(seq, d) for d in [(6,) * 10, seq[0].degrees()])


def test_reverse_sequence():
    seq = counterexample_sequence(CounterexampleSpec(8, 2))
    assert reverse_sequence(reverse_sequence(seq)) == seq
    one = GraphSequence(3, [path_graph(3)], 1, (2, 3, 2))
    assert reverse_sequence(one) == one
    rev = reverse_sequence(counterexample_sequence(CounterexampleSpec(8, 1)))
    assert list(rev) == list(counterexample_sequence(CounterexampleSpec(8, 1, "reversed")))


def test_double_edge_swap_preserves_degrees():
    rng = random.Random(4)
    g = random_connected_graph(9, 0.4, rng)
    edges = set(g.edges())
    before = g.degrees()
    swapped = 0
    for _ in range(50):
        swapped += double_edge_swap(edges, rng)
        deg = [1] * 9
        for i, j in edges:
            assert i != j
            deg[i] += 1
            deg[j] += 1
        assert tuple(deg) == before
    assert swapped > 10
    assert not double_edge_swap(set(complete_graph(4).edges()), rng)


def test_fixed_degree_no_swaps_is_constant():
    base = random_connected_graph(6, 0.3, random.Random(0))
    seq = fixed_degree_sequence(base, 5, 1, swaps_per_step=0, seed=1)
    assert all(g == base for g in seq)
    assert seq.degree_profile == base.degrees()


@pytest.mark.parametrize("seed", range(5))
def test_fixed_degree_ring(seed):
    seq = fixed_degree_sequence(cycle_graph(8), 12, 3, swaps_per_step=2, isolation_rate=0.5, seed=seed)
    assert seq.degree_profile == (3,) * 8
    for g in seq:
        assert set(g.degrees()) <= {1, 3}
    assert is_b_connected(seq)
    assert check_class_membership(seq) == []


@pytest.mark.parametrize("seed", range(10))
def test_fixed_degree_random_n8_valid(seed):
    rng = random.Random(seed)
    base = random_connected_graph(8, 0.3, rng)
    B = rng.randint(1, 3)
    seq = fixed_degree_sequence(base, 6 * B, B, swaps_per_step=2, isolation_rate=0.4, seed=seed)
    assert check_class_membership(seq) == []
    assert is_b_connected(seq)


def test_fixed_degree_deterministic_and_lazy():
    base = random_connected_graph(7, 0.3, random.Random(9))
    a = fixed_degree_sequence(base, 20, 2, swaps_per_step=1, isolation_rate=0.3, seed=42)
    b = fixed_degree_sequence(base, 20, 2, swaps_per_step=1, isolation_rate=0.3, seed=42)
    lazy = fixed_degree_sequence(base, 20, 2, swaps_per_step=1, isolation_rate=0.3, seed=42, lazy=True)
    assert list(a) == list(b) == list(lazy)
    huge = fixed_degree_sequence(base, 10**9, 2, seed=1, lazy=True)
    assert len(huge) == 10**9
    assert is_connected(union_graph([huge[0], huge[1]]))


def test_fixed_degree_errors():
    with pytest.raises(GraphError, match="ragged"):
        fixed_degree_sequence(cycle_graph(5), 5, 2)
    with pytest.raises(GraphError, match="connected"):
        fixed_degree_sequence(Graph.from_edges(4, [(0, 1)]), 2)
    with pytest.raises(GraphError, match="could not draw"):
        fixed_degree_sequence(cycle_graph(4), 4, 1, seed=0, max_retries=0)
