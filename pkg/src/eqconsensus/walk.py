"""Random walks on time-varying graphs.

At time t the walker moves to a uniformly chosen neighbour of its current
node in ``G(t)`` (staying put is one of the choices, via the self-loop).
Its t-step law is the forward product ``A(0) A(1) ... A(t-1)``.

Randomness comes from numpy's ``PCG64`` bit generator seeded through
``numpy.random.SeedSequence``; independent samples use spawned child
sequences, so results are reproducible bit for bit for a given seed.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist

import numpy as np

from .dynamics import as_vector, build_update_matrix, check_backend
from .generators import CounterexampleSpec, two_star_graph
from .graph import Graph, GraphSequence


def make_rng(seed) -> np.random.Generator:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class WalkState:
    position: int
    time: int = 0
    rng: np.random.Generator = field(default_factory=lambda: make_rng(None), repr=False)


def walk_step(state: WalkState, g: Graph) -> WalkState:
    if not 0 <= state.position < g.n:
        raise ValueError(f"position {state.position} outside [0, {g.n})")
    nb = g.neighbors[state.position]
    nxt = nb[int(state.rng.integers(len(nb)))]
    return WalkState(nxt, state.time + 1, state.rng)


def evolve_distribution(mu, seq: GraphSequence, t: int, backend: str = "exact") -> np.ndarray:
    """Push a probability row vector forward: ``mu A(0) A(1) ... A(t-1)``."""
    check_backend(backend)
    mu = as_vector(mu, backend)
    if len(mu) != seq.n:
        raise ValueError("distribution length differs from n")
    total = sum(mu)
    if any(v < 0 for v in mu) or (total != 1 if backend == "exact" else not math.isclose(total, 1.0, abs_tol=1e-12)):
        raise ValueError("mu is not a probability vector")
    if t > len(seq):
        raise ValueError(f"t={t} exceeds sequence length {len(seq)}")
    for k in range(t):
        mu = mu @ build_update_matrix(seq[k], backend).entries
    return mu


def point_mass(n: int, i: int, backend: str = "exact") -> np.ndarray:
    return as_vector([1 if k == i else 0 for k in range(n)], backend)


def simulate_positions(seq: GraphSequence, start: int, t: int, num_walks: int, seed=None) -> np.ndarray:
    """Positions at time t of ``num_walks`` independent walkers started at ``start``.

    Walkers are advanced together; one ``PCG64`` stream supplies a uniform
    per walker per step and the neighbour index is ``floor(u * degree)``.
    """
    rng = make_rng(seed)
    pos = np.full(num_walks, start, dtype=np.int64)
    for k in range(t):
        g = seq[k]
        width = max(g.degrees())
        table = np.array([list(nb) + [nb[0]] * (width - len(nb)) for nb in g.neighbors])
        deg = np.array(g.degrees())
        pick = (rng.random(num_walks) * deg[pos]).astype(np.int64)
        pos = table[pos, pick]
    return pos


def empirical_distribution(positions: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(positions, minlength=n) / len(positions)


def total_variation(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)).sum())


# -- crossing times in the two-star counterexample --------------------------------

@dataclass
class CrossingStats:
    """First-passage times from the left half into the right half R.

    ``samples`` holds the completed crossings only; runs that had not
    crossed after ``max_steps`` steps are counted in ``censored``.  With
    censoring the mean is biased low.
    """

    n: int
    samples: list[int]
    censored: int
    max_steps: int
    seed: int | None
    start: int

    @property
    def mean(self) -> float:
        return sum(self.samples) / len(self.samples) if self.samples else math.nan

    @property
    def min(self) -> int | None:
        return min(self.samples, default=None)

    @property
    def max(self) -> int | None:
        return max(self.samples, default=None)

    @property
    def std(self) -> float:
        k = len(self.samples)
        if k < 2:
            return math.nan
        m = self.mean
        return math.sqrt(sum((s - m) ** 2 for s in self.samples) / (k - 1))

    @property
    def lower_bias(self) -> bool:
        return self.censored > 0

    def confidence_interval(self, level: float = 0.99) -> tuple[float, float]:
        """One-sided normal bounds ``(mean - z*se, mean + z*se)`` at ``level``."""
        z = NormalDist().inv_cdf(level)
        se = self.std / math.sqrt(len(self.samples))
        return self.mean - z * se, self.mean + z * se

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "samples": self.samples, "mean": self.mean, "min": self.min,
                           "max": self.max, "censored": self.censored, "seed": self.seed},
                          sort_keys=True)


def _one_crossing(nbrs: list[list[tuple[int, ...]]], m: int, start: int, max_steps: int,
                  rng: np.random.Generator, chunk: int = 512) -> int | None:
    pos, t = start, 0
    while t < max_steps:
        for u in rng.random(min(chunk, max_steps - t)).tolist():
            nb = nbrs[t % m][pos]
            pos = nb[int(u * len(nb))]
            t += 1
            if pos >= m:
                return t
    return None


def crossing_time_experiment(n: int, max_steps: int, num_samples: int, seed: int | None = None,
                             start: int | None = None) -> CrossingStats:
    """Sample the time T for a walk on the forward periodic two-star sequence to reach R.

    The default start is node ``n/2 - 1``: at time 0 it is the node that was
    the left centre one step earlier, so it must idle on its self-loop for
    ``n/2 - 1`` steps before it is the centre again and can take the bridge.
    """
    spec = CounterexampleSpec(n)
    m = spec.period
    start = m - 1 if start is None else start
    if not 0 <= start < m:
        raise ValueError("start must be a left-half node")
    nbrs = [list(two_star_graph(n, s).neighbors) for s in range(m)]
    children = np.random.SeedSequence(seed).spawn(num_samples)
    samples, censored = [], 0
    for child in children:
        t = _one_crossing(nbrs, m, start, max_steps, make_rng(child))
        if t is None:
            censored += 1
        else:
            samples.append(t)
    return CrossingStats(n, samples, censored, max_steps, seed, start)


def crossing_lower_bound(n: int) -> int:
    """``2**(n/2 - 1)``, the lower bound on the expected crossing time."""
    return 2 ** (n // 2 - 1)


def exact_crossing_probability(n: int, t: int, start: int | None = None) -> Fraction:
    """P(T <= t) computed exactly by evolving the walk killed on entering R."""
    m = n // 2
    start = m - 1 if start is None else start
    mass = [Fraction(0)] * m
    mass[start] = Fraction(1)
    crossed = Fraction(0)
    for tau in range(t):
        g = two_star_graph(n, tau % m)
        nxt = [Fraction(0)] * m
        for i, p in enumerate(mass):
            if not p:
                continue
            nb = g.neighbors[i]
            share = p / len(nb)
            for j in nb:
                if j >= m:
                    crossed += share
                else:
                    nxt[j] += share
        mass = nxt
    return crossed
