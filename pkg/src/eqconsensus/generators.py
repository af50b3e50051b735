"""Graph-sequence generators.

* :func:`counterexample_sequence` -- two bridged stars whose centres rotate
  by one position per step.  The sorted degree sequence never changes but
  individual nodes trade degrees, and consensus takes exponentially long.
* :func:`fixed_degree_sequence` -- random sequences in which every node
  keeps its degree except at steps where it is isolated.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .graph import (
    Graph,
    GraphError,
    GraphSequence,
    check_class_membership,
    components,
    is_b_connected,
    is_connected,
    union_graph,
)

FORWARD = "forward"
REVERSED = "reversed"


@dataclass(frozen=True)
class CounterexampleSpec:
    n: int
    repetitions: int = 1
    orientation: str = FORWARD

    def __post_init__(self):
        if self.n < 4 or self.n % 2:
            raise GraphError("counterexample needs an even n >= 4")
        if self.repetitions < 0:
            raise GraphError("repetitions must be nonnegative")
        if self.orientation not in (FORWARD, REVERSED):
            raise GraphError(f"orientation must be {FORWARD!r} or {REVERSED!r}")

    @property
    def period(self) -> int:
        return self.n // 2

    @property
    def length(self) -> int:
        return self.repetitions * self.period


def two_star_graph(n: int, s: int) -> Graph:
    """Left star on ``0..n/2-1`` centred at ``s``, right star on ``n/2..n-1``
    centred at ``n/2+s``, plus an edge joining the two centres."""
    if n < 2 or n % 2:
        raise GraphError("two-star graph needs an even n")
    m = n // 2
    if not 0 <= s < m:
        raise GraphError(f"shift must lie in [0, {m})")
    edges = [(s, i) for i in range(m) if i != s]
    edges += [(m + s, m + i) for i in range(m) if i != s]
    edges.append((s, m + s))
    return Graph.from_edges(n, edges)


def counterexample_shift(spec: CounterexampleSpec, tau: int) -> int:
    m = spec.period
    return tau % m if spec.orientation == FORWARD else (m - 1 - tau) % m


def counterexample_sequence(spec: CounterexampleSpec | int, repetitions: int | None = None,
                            orientation: str = FORWARD) -> GraphSequence:
    """``k * n/2`` graphs cycling through the shifts in the requested direction.

    Forward order is shift 0, 1, ..., n/2-1, 0, ...; reversed order is
    n/2-1, ..., 1, 0, n/2-1, ...  Every graph is connected, so B = 1.
    """
    if not isinstance(spec, CounterexampleSpec):
        spec = CounterexampleSpec(spec, 1 if repetitions is None else repetitions, orientation)
    period = [two_star_graph(spec.n, s) for s in range(spec.period)]
    graphs = [period[counterexample_shift(spec, tau)] for tau in range(spec.length)]
    return GraphSequence(spec.n, graphs, 1, meta={"generator": "counterexample", "n": spec.n,
                                                  "repetitions": spec.repetitions,
                                                  "orientation": spec.orientation})


def reverse_sequence(seq: GraphSequence) -> GraphSequence:
    return GraphSequence(seq.n, [seq[t] for t in range(len(seq) - 1, -1, -1)], seq.B,
                         seq.degree_profile, dict(seq.meta))


# -- fixed-degree sequences -------------------------------------------------------

def random_connected_graph(n: int, extra_edge_prob: float = 0.3, rng: random.Random | None = None) -> Graph:
    """Random spanning tree plus each remaining edge independently with ``extra_edge_prob``."""
    rng = rng or random.Random()
    order = list(range(n))
    rng.shuffle(order)
    edges = {tuple(sorted((order[k], order[rng.randrange(k)]))) for k in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < extra_edge_prob:
                edges.add((i, j))
    return Graph.from_edges(n, edges)


def double_edge_swap(edges: set[tuple[int, int]], rng: random.Random, tries: int = 20) -> bool:
    """Rewire two disjoint edges (a,b),(c,d) into (a,c),(b,d) in place.

    Degrees are preserved exactly.  Returns False if no admissible swap was
    found within ``tries`` attempts.
    """
    if len(edges) < 2:
        return False
    pool = sorted(edges)
    for _ in range(tries):
        (a, b), (c, d) = rng.sample(pool, 2)
        if rng.random() < 0.5:
            a, b = b, a
        if len({a, b, c, d}) < 4:
            continue
        e1, e2 = tuple(sorted((a, c))), tuple(sorted((b, d)))
        if e1 in edges or e2 in edges:
            continue
        edges.difference_update({tuple(sorted((a, b))), tuple(sorted((c, d)))})
        edges.update({e1, e2})
        return True
    return False


def _isolate_components(g: Graph, rng: random.Random) -> Graph:
    # Only whole components can be isolated without changing anyone else's degree.
    keep = [c for c in components(g) if rng.random() >= 0.5]
    kept = {v for c in keep for v in c}
    return Graph.from_edges(g.n, [(i, j) for i, j in g.edges() if i in kept])


class _LazyGraphs(Sequence):
    """Sequence whose windows are produced on first access, in order."""

    def __init__(self, length: int, B: int, make_window: Callable[[], list[Graph]]):
        self._length, self._B, self._make = length, B, make_window
        self._graphs: list[Graph] = []

    def __len__(self) -> int:
        return self._length

    def __getitem__(self, t):
        if isinstance(t, slice):
            return [self[k] for k in range(*t.indices(self._length))]
        if t < 0:
            t += self._length
        if not 0 <= t < self._length:
            raise IndexError(t)
        while len(self._graphs) <= t:
            self._graphs.extend(self._make())
        return self._graphs[t]


def fixed_degree_sequence(base: Graph, steps: int, B: int = 1, *, swaps_per_step: int = 1,
                          isolation_rate: float = 0.0, seed: int | None = None,
                          max_retries: int = 100, lazy: bool = False) -> GraphSequence:
    """Random B-connected sequence in which node i always has degree ``d_i`` or 1.

    ``d`` is the degree vector of ``base``.  Each step applies
    ``swaps_per_step`` degree-preserving double edge swaps to a running edge
    set; with probability ``isolation_rate`` the step's graph additionally
    has a random subset of its connected components isolated.  Each window
    of B graphs is redrawn (up to ``max_retries`` times) until its union is
    connected.

    With ``lazy=True`` windows are generated on demand, which keeps very
    long horizons cheap when only a prefix is consumed.  Otherwise the
    whole sequence is built and validated before it is returned.
    """
    if not is_connected(base):
        raise GraphError("base graph must be connected")
    d = base.degrees()
    if base.n > 1 and min(d) < 2:
        raise GraphError("every node of the base graph needs a non-loop edge")
    if steps % B:
        raise GraphError(f"ragged window: steps={steps} is not a multiple of B={B}")
    rng = random.Random(seed)
    current = set(base.edges())

    def make_window() -> list[Graph]:
        nonlocal current
        for _ in range(max_retries):
            edges = set(current)
            window = []
            for _ in range(B):
                for _ in range(swaps_per_step):
                    double_edge_swap(edges, rng)
                g = Graph.from_edges(base.n, edges)
                if isolation_rate and rng.random() < isolation_rate:
                    g = _isolate_components(g, rng)
                window.append(g)
            if is_connected(union_graph(window)):
                current = edges
                return window
        raise GraphError(f"could not draw a connected window of length B={B} in {max_retries} tries "
                         f"(n={base.n}, degrees={d}, swaps_per_step={swaps_per_step}, "
                         f"isolation_rate={isolation_rate})")

    graphs = _LazyGraphs(steps, B, make_window)
    meta = {"generator": "fixed_degree", "seed": seed, "swaps_per_step": swaps_per_step,
            "isolation_rate": isolation_rate}
    if lazy:
        return GraphSequence(base.n, graphs, B, d, meta)
    seq = GraphSequence(base.n, list(graphs), B, d, meta)
    if not is_b_connected(seq) or check_class_membership(seq):
        raise GraphError("generated sequence failed validation")
    return seq
