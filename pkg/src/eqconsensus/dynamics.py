"""Equal-neighbour consensus: update matrices, state evolution and Lyapunov functions.

Every routine works with two scalar backends:

``"exact"``
    numpy object arrays of :class:`fractions.Fraction`; all arithmetic exact.
``"float"``
    ordinary float64 arrays.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import Graph, GraphError, GraphSequence, validate_graph

BACKENDS = ("exact", "float")


def check_backend(backend: str) -> str:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}, expected one of {BACKENDS}")
    return backend


def as_vector(values, backend: str = "exact") -> np.ndarray:
    """Convert to a 1-d array in the given backend.

    Floats handed to the exact backend are converted exactly (binary value),
    so prefer ints, Fractions or strings such as ``"1/3"`` there.
    """
    check_backend(backend)
    if backend == "float":
        arr = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite value in float vector")
        return arr
    return np.array([Fraction(v) for v in np.ravel(np.asarray(values, dtype=object))], dtype=object)


def as_matrix(values, backend: str = "exact") -> np.ndarray:
    check_backend(backend)
    if backend == "float":
        return np.asarray(values, dtype=float)
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = Fraction(v)
    return out


def identity(n: int, backend: str = "exact") -> np.ndarray:
    if check_backend(backend) == "float":
        return np.eye(n)
    return as_matrix(np.eye(n, dtype=int), "exact")


def backend_of(arr: np.ndarray) -> str:
    return "exact" if arr.dtype == object else "float"


@dataclass(frozen=True)
class UpdateMatrix:
    """``A(G)``: row i puts weight ``1/d_i(G)`` on each neighbour of i."""

    entries: np.ndarray
    source_graph: Graph

    @property
    def n(self) -> int:
        return self.source_graph.n

    @property
    def backend(self) -> str:
        return backend_of(self.entries)


def build_update_matrix(g: Graph, backend: str = "exact") -> UpdateMatrix:
    problems = validate_graph(g)
    if problems:
        raise GraphError("invalid graph: " + "; ".join(problems))
    a = np.zeros((g.n, g.n), dtype=object if check_backend(backend) == "exact" else float)
    if backend == "exact":
        a[:] = Fraction(0)
    for i, nb in enumerate(g.neighbors):
        w = Fraction(1, len(nb)) if backend == "exact" else 1.0 / len(nb)
        for j in nb:
            a[i, j] = w
    return UpdateMatrix(a, g)


def _step_array(x: np.ndarray, g: Graph) -> np.ndarray:
    if len(x) != g.n:
        raise ValueError(f"dimension mismatch: state has {len(x)} entries, graph has {g.n} nodes")
    if x.dtype == object:
        return np.array([sum((x[j] for j in nb), Fraction(0)) / len(nb) for nb in g.neighbors],
                        dtype=object)
    return np.array([x[list(nb)].sum() / len(nb) for nb in g.neighbors])


def spread(x) -> object:
    """``max_i x_i - min_i x_i``."""
    x = np.asarray(x)
    if x.dtype == object:
        return max(x) - min(x)
    return float(x.max() - x.min())


def weighted_average(x, d) -> object:
    """The d-weighted average ``sum(d*x) / sum(d)``, conserved by class updates."""
    x = np.asarray(x)
    if x.dtype == object:
        return sum((Fraction(int(di)) * xi for di, xi in zip(d, x)), Fraction(0)) / sum(int(di) for di in d)
    d = np.asarray(d, dtype=float)
    return float(d @ x / d.sum())


def lyapunov_v(x, d) -> object:
    """``V(x) = sum_i d_i x_i**2``."""
    x = np.asarray(x)
    if x.dtype == object:
        return sum((int(di) * xi * xi for di, xi in zip(d, x)), Fraction(0))
    return float(np.asarray(d, dtype=float) @ (x * x))


def lyapunov_v_prime(x, d) -> object:
    """``V'(x) = sum_i d_i (x_i - xbar)**2`` with ``xbar`` the weighted average."""
    x = np.asarray(x)
    xbar = weighted_average(x, d)
    if x.dtype == object:
        return sum((int(di) * (xi - xbar) ** 2 for di, xi in zip(d, x)), Fraction(0))
    r = x - xbar
    return float(np.asarray(d, dtype=float) @ (r * r))


@dataclass(frozen=True)
class StateVector:
    """Agent values together with the weighting vector ``d``."""

    x: np.ndarray
    d: tuple[int, ...]

    def __post_init__(self):
        if len(self.x) != len(self.d):
            raise ValueError("state and degree vector lengths differ")

    @classmethod
    def of(cls, x, d, backend: str = "exact") -> "StateVector":
        return cls(as_vector(x, backend), tuple(int(v) for v in d))

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def spread(self):
        return spread(self.x)

    @property
    def weighted_average(self):
        return weighted_average(self.x, self.d)

    @property
    def v(self):
        return lyapunov_v(self.x, self.d)

    @property
    def v_prime(self):
        return lyapunov_v_prime(self.x, self.d)


def step(x: StateVector, g: Graph) -> StateVector:
    """One synchronous round: every node replaces its value by its neighbourhood mean."""
    return StateVector(_step_array(x.x, g), x.d)


@dataclass(frozen=True)
class StepRecord:
    t: int
    spread: object
    v: object
    v_prime: object
    weighted_avg: object


@dataclass
class Trajectory:
    """Result of :func:`run`.  ``states`` is ``None`` in streaming mode."""

    states: list[StateVector] | None
    final: StateVector
    log: list[StepRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.log)


def _record(t: int, s: StateVector) -> StepRecord:
    return StepRecord(t, s.spread, s.v, s.v_prime, s.weighted_average)


def run(seq: GraphSequence, x0, *, d: Sequence[int] | None = None, horizon: int | None = None,
        backend: str | None = None, keep_states: bool = True, instrument: bool = True) -> Trajectory:
    """Iterate ``x(t+1) = A(t) x(t)`` over ``seq``.

    The weighting vector is, in order of preference: ``d``, the degree
    profile of ``seq``, the nominal (largest observed) degrees.  It stays
    fixed along the run, also at steps where nodes are isolated.
    """
    if isinstance(x0, StateVector):
        state = x0
        if backend is not None:
            state = StateVector.of(state.x, state.d, backend)
    else:
        weights = d if d is not None else seq.nominal_degrees()
        state = StateVector.of(x0, weights, backend or "exact")
    if d is not None:
        state = StateVector(state.x, tuple(int(v) for v in d))
    if state.n != seq.n:
        raise ValueError(f"dimension mismatch: state has {state.n} entries, sequence has n={seq.n}")
    horizon = len(seq) if horizon is None else horizon
    if horizon > len(seq):
        raise ValueError(f"horizon {horizon} exceeds sequence length {len(seq)}")

    states = [state] if keep_states else None
    log = [_record(0, state)] if instrument else []
    for t in range(horizon):
        state = step(state, seq[t])
        if keep_states:
            states.append(state)
        if instrument:
            log.append(_record(t + 1, state))
    return Trajectory(states, state, log)


def format_scalar(v) -> str:
    """Rationals as ``num/den``; floats with 17 significant digits."""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return format(float(v), ".17g")


def trajectory_csv(traj: Trajectory, meta: dict | None = None) -> str:
    """CSV with columns ``t, x_0..x_{n-1}, spread, V, V_prime, weighted_avg``.

    ``meta`` is written as a leading ``#`` comment line of ``key=value`` pairs.
    """
    if traj.states is None:
        raise ValueError("trajectory was run in streaming mode; no states to export")
    if len(traj.log) != len(traj.states):
        raise ValueError("trajectory was run without instrumentation")
    buf = io.StringIO()
    if meta:
        buf.write("# " + " ".join(f"{k}={meta[k]}" for k in sorted(meta)) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    n = traj.final.n
    w.writerow(["t"] + [f"x_{i}" for i in range(n)] + ["spread", "V", "V_prime", "weighted_avg"])
    for s, rec in zip(traj.states, traj.log):
        w.writerow([rec.t] + [format_scalar(v) for v in s.x]
                   + [format_scalar(v) for v in (rec.spread, rec.v, rec.v_prime, rec.weighted_avg)])
    return buf.getvalue()
