"""Undirected graphs with self-loops, graph sequences, and the sequence file format.

Nodes are the integers ``0..n-1``.  Every node is its own neighbour, so the
degree of a node counts the node itself and an isolated node has degree 1.
"""
from __future__ import annotations

import io
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    pass


class SequenceFormatError(ValueError):
    """Malformed graph-sequence file; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    """Immutable graph stored as sorted neighbour tuples (self included)."""

    n: int
    neighbors: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] = ()) -> "Graph":
        """Build a valid graph; self-loops are always added, edges are symmetrised."""
        if n < 1:
            raise GraphError("graph needs at least one node")
        adj: list[set[int]] = [{i} for i in range(n)]
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i},{j}) out of range for n={n}")
            adj[i].add(j)
            adj[j].add(i)
        return cls(n, tuple(tuple(sorted(s)) for s in adj))

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nb) for nb in self.neighbors)

    def edges(self) -> list[tuple[int, int]]:
        """Non-loop edges as sorted ``(i, j)`` pairs with ``i < j``."""
        return [(i, j) for i, nb in enumerate(self.neighbors) for j in nb if j > i]

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.neighbors[i]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 nodes")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def empty_graph(n: int) -> Graph:
    """All nodes isolated (self-loops only)."""
    return Graph.from_edges(n)


def validate_graph(g: Graph) -> list[str]:
    """Return a list of violations; empty means the graph is well formed."""
    problems = []
    if len(g.neighbors) != g.n:
        return [f"adjacency has {len(g.neighbors)} rows, expected {g.n}"]
    for i, nb in enumerate(g.neighbors):
        if len(set(nb)) != len(nb):
            problems.append(f"duplicate neighbor at {i}")
        if i not in nb:
            problems.append(f"missing self-loop at {i}")
        for j in nb:
            if not 0 <= j < g.n:
                problems.append(f"neighbor {j} of {i} out of range")
            elif i not in g.neighbors[j]:
                problems.append(f"asymmetric edge {i}->{j}")
    return problems


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in g.neighbors[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


def union_graph(graphs: Sequence[Graph]) -> Graph:
    if not graphs:
        raise GraphError("union of no graphs")
    n = graphs[0].n
    if any(h.n != n for h in graphs):
        raise GraphError("inconsistent node count")
    adj = [set(nb) for nb in graphs[0].neighbors]
    for h in graphs[1:]:
        for i, nb in enumerate(h.neighbors):
            adj[i].update(nb)
    return Graph(n, tuple(tuple(sorted(s)) for s in adj))


@dataclass(frozen=True)
class GraphSequence:
    """A finite sequence of graphs on a common node set.

    ``graphs`` may be any ``Sequence`` (a lazily generated one is fine).
    ``B`` is the claimed connectivity window and ``degree_profile`` the
    nominal degrees ``d_i`` if the sequence is meant to live in the class
    where each ``d_i(t)`` is either 1 or ``d_i``.
    """

    n: int
    graphs: Sequence[Graph]
    B: int = 1
    degree_profile: tuple[int, ...] | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.B < 1:
            raise GraphError("B must be a positive integer")
        if isinstance(self.graphs, (list, tuple)):
            if any(g.n != self.n for g in self.graphs):
                raise GraphError("inconsistent node count")
            object.__setattr__(self, "graphs", tuple(self.graphs))
        if self.degree_profile is not None:
            d = tuple(int(v) for v in self.degree_profile)
            if len(d) != self.n:
                raise GraphError("degree profile length differs from n")
            object.__setattr__(self, "degree_profile", d)

    def __len__(self) -> int:
        return len(self.graphs)

    def __getitem__(self, t):
        return self.graphs[t]

    def __iter__(self) -> Iterator[Graph]:
        for t in range(len(self.graphs)):
            yield self.graphs[t]

    def nominal_degrees(self) -> tuple[int, ...]:
        """The degree profile if set, else the largest degree seen per node."""
        if self.degree_profile is not None:
            return self.degree_profile
        d = [1] * self.n
        for g in self:
            for i, k in enumerate(g.degrees()):
                d[i] = max(d[i], k)
        return tuple(d)

    def truncated(self, length: int) -> "GraphSequence":
        return GraphSequence(self.n, [self.graphs[t] for t in range(length)], self.B,
                             self.degree_profile, dict(self.meta))


def is_b_connected(seq: GraphSequence, B: int | None = None) -> bool:
    """Aligned windows ``[kB, (k+1)B)`` must each have a connected union."""
    B = seq.B if B is None else B
    if B < 1:
        raise GraphError("B must be a positive integer")
    if len(seq) % B:
        raise GraphError(f"ragged window: length {len(seq)} is not a multiple of B={B}")
    return all(is_connected(union_graph([seq[t] for t in range(k, k + B)]))
               for k in range(0, len(seq), B))


def check_class_membership(seq: GraphSequence, d: Sequence[int] | None = None) -> list[tuple[int, int, int]]:
    """Violations ``(t, i, observed degree)`` of ``d_i(t) in {1, d_i}``."""
    d = seq.degree_profile if d is None else tuple(d)
    if d is None:
        raise GraphError("no degree vector given and sequence has no degree profile")
    if len(d) != seq.n:
        raise GraphError("degree vector length differs from n")
    bad = []
    for t, g in enumerate(seq):
        for i, k in enumerate(g.degrees()):
            if k != 1 and k != d[i]:
                bad.append((t, i, k))
    return bad


# -- file format ---------------------------------------------------------------
#
#   n=<n> B=<B>
#   0: 0-1,1-2
#   1:
#
# Self-loops are implicit.  An empty edge list means every node is isolated.

def format_sequence(seq: GraphSequence) -> str:
    lines = [f"n={seq.n} B={seq.B}"]
    for t, g in enumerate(seq):
        edges = ",".join(f"{i}-{j}" for i, j in g.edges())
        lines.append(f"{t}: {edges}" if edges else f"{t}:")
    return "\n".join(lines) + "\n"


def write_sequence(seq: GraphSequence, path: str | os.PathLike) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_sequence(seq))


def parse_sequence(text: str | io.TextIOBase) -> GraphSequence:
    lines = text.splitlines() if isinstance(text, str) else text.read().splitlines()
    if not lines:
        raise SequenceFormatError("empty file, expected header 'n=<n> B=<B>'", 1)
    header = {}
    for tok in lines[0].split():
        key, sep, val = tok.partition("=")
        if not sep or key not in ("n", "B"):
            raise SequenceFormatError(f"bad header token {tok!r}", 1)
        try:
            header[key] = int(val)
        except ValueError:
            raise SequenceFormatError(f"non-integer value in {tok!r}", 1) from None
    if "n" not in header:
        raise SequenceFormatError("header lacks n=<n>", 1)
    n, B = header["n"], header.get("B", 1)
    if n < 1 or B < 1:
        raise SequenceFormatError("n and B must be positive", 1)

    graphs = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        stamp, sep, rest = line.partition(":")
        if not sep:
            raise SequenceFormatError("expected '<t>: i-j,...'", lineno)
        try:
            t = int(stamp)
        except ValueError:
            raise SequenceFormatError(f"bad time stamp {stamp!r}", lineno) from None
        if t != len(graphs):
            raise SequenceFormatError(f"time stamp {t} out of order, expected {len(graphs)}", lineno)
        edges = []
        for item in filter(None, (s.strip() for s in rest.split(","))):
            a, dash, b = item.partition("-")
            try:
                i, j = int(a), int(b)
            except ValueError:
                raise SequenceFormatError(f"bad edge {item!r}", lineno) from None
            if not dash or not (0 <= i < n and 0 <= j < n) or i == j:
                raise SequenceFormatError(f"bad edge {item!r}", lineno)
            edges.append((i, j))
        graphs.append(Graph.from_edges(n, edges))
    return GraphSequence(n, graphs, B)


def read_sequence(path: str | os.PathLike) -> GraphSequence:
    with open(path) as fh:
        return parse_sequence(fh.read())
