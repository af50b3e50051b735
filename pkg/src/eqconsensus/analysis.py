"""Matrix products, the coefficient of ergodicity, the convergence-time bound,
and executable checks of the Lyapunov inequalities behind it.

The ``check_*`` functions return a *margin* (right-hand side minus
left-hand side of an inequality) or a *deviation* (largest entrywise error
of an identity).  A nonnegative margin, or a zero deviation, means the
statement holds on that input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dynamics import (
    UpdateMatrix,
    _step_array,
    as_vector,
    backend_of,
    build_update_matrix,
    check_backend,
    identity,
    lyapunov_v,
    lyapunov_v_prime,
    spread,
)
from .graph import Graph, GraphSequence, is_connected, union_graph

FLOAT_STOCHASTIC_TOL = 1e-9


class PreconditionError(ValueError):
    """Input does not satisfy the hypotheses of the statement being checked."""


class ConsensusNotReached(RuntimeError):
    def __init__(self, horizon: int, epsilon):
        super().__init__(f"not reached at horizon {horizon} (epsilon={epsilon})")
        self.horizon = horizon
        self.epsilon = epsilon


# -- the bound ---------------------------------------------------------------

def theoretical_bound(n: int, B: int, epsilon: float, *, check: bool = True) -> float:
    """``B + 4 n^3 B ln(2n/epsilon)`` steps suffice for epsilon-consensus."""
    if check:
        if n < 2 or B < 1:
            raise ValueError("need n >= 2 and B >= 1")
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
    return B + 4 * n**3 * B * math.log(2 * n / epsilon)


@dataclass(frozen=True)
class BoundReport:
    n: int
    B: int
    epsilon: float
    bound: float
    measured_time: int | None = None

    @property
    def slack(self) -> float | None:
        return None if self.measured_time is None else self.bound - self.measured_time

    def as_dict(self) -> dict:
        return {"n": self.n, "B": self.B, "epsilon": self.epsilon, "bound": self.bound,
                "measured_time": self.measured_time, "slack": self.slack}


# -- products and coefficients -------------------------------------------------

def _matrices(seq: GraphSequence, t: int, backend: str) -> list[np.ndarray]:
    cache: dict[Graph, np.ndarray] = {}
    out = []
    for k in range(t):
        g = seq[k]
        if g not in cache:
            cache[g] = build_update_matrix(g, backend).entries
        out.append(cache[g])
    return out


def matrix_product(seq: GraphSequence, t: int, order: str = "forward", backend: str = "exact") -> np.ndarray:
    """``forward``: ``A(0) A(1) ... A(t-1)`` (t-step transition matrix of the walk).

    ``reversed``: ``A(t-1) ... A(1) A(0)``, the matrix the consensus iteration
    applies to ``x(0)``.
    """
    if order not in ("forward", "reversed"):
        raise ValueError("order must be 'forward' or 'reversed'")
    check_backend(backend)
    if t > len(seq):
        raise ValueError(f"t={t} exceeds sequence length {len(seq)}")
    p = identity(seq.n, backend)
    for a in _matrices(seq, t, backend):
        p = p @ a if order == "forward" else a @ p
    return p


def _check_stochastic(p: np.ndarray) -> None:
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValueError("expected a square matrix")
    if backend_of(p) == "exact":
        ok = all(v >= 0 for v in p.flat) and all(sum(row) == 1 for row in p)
    else:
        ok = bool(np.all(p >= -FLOAT_STOCHASTIC_TOL)
                  and np.allclose(p.sum(axis=1), 1.0, rtol=0, atol=FLOAT_STOCHASTIC_TOL))
    if not ok:
        raise ValueError("matrix is not row-stochastic")


def ergodicity_coefficient(p: np.ndarray, return_pair: bool = False):
    """Half the largest L1 distance between two rows of ``p``."""
    _check_stochastic(p)
    n = p.shape[0]
    best, pair = (Fraction(0) if backend_of(p) == "exact" else 0.0), (0, 0)
    if backend_of(p) == "exact":
        for i in range(n):
            for j in range(i + 1, n):
                v = sum(abs(a - b) for a, b in zip(p[i], p[j])) / 2
                if v > best:
                    best, pair = v, (i, j)
    elif n > 1:
        dist = 0.5 * np.abs(p[:, None, :] - p[None, :, :]).sum(axis=2)
        i, j = np.unravel_index(np.argmax(np.triu(dist, 1)), dist.shape)
        best, pair = float(dist[i, j]), (int(min(i, j)), int(max(i, j)))
    return (best, pair) if return_pair else best


def contraction_factor(p: np.ndarray):
    """Worst-case spread reduction ``max S(Px)/S(x)`` of ``p``.

    For each pair of rows (i, j) the vector with entries +1/2 where
    ``p_ik >= p_jk`` and -1/2 elsewhere (spread 1) is pushed through ``p``;
    the largest resulting gap ``[Px]_i - [Px]_j`` is returned.
    """
    _check_stochastic(p)
    n = p.shape[0]
    if n == 1:
        return Fraction(0) if backend_of(p) == "exact" else 0.0
    if backend_of(p) == "exact":
        half = Fraction(1, 2)
        best = Fraction(0)
        for i in range(n):
            for j in range(i + 1, n):
                x = np.array([half if p[i, k] >= p[j, k] else -half for k in range(n)], dtype=object)
                px = p @ x
                best = max(best, px[i] - px[j])
        return best
    x = np.where(p[:, None, :] >= p[None, :, :], 0.5, -0.5)
    px = np.einsum("ijk,ak->ija", x, p)
    idx = np.arange(n)
    gaps = px[idx[:, None], idx[None, :], idx[:, None]] - px[idx[:, None], idx[None, :], idx[None, :]]
    return float(gaps.max())


@dataclass(frozen=True)
class ErgodicityReport:
    t: int
    product: np.ndarray
    coefficient: object
    argmax_pair: tuple[int, int]


def ergodicity_report(seq: GraphSequence, t: int, backend: str = "exact") -> ErgodicityReport:
    p = matrix_product(seq, t, "forward", backend)
    coef, pair = ergodicity_coefficient(p, return_pair=True)
    return ErgodicityReport(t, p, coef, pair)


def contraction_series(seq: GraphSequence, *, stride: int = 1, horizon: int | None = None,
                       backend: str = "float", stop_at=None):
    """Yield ``(t, contraction factor of A(t-1)...A(0))`` for t = 0, stride, 2*stride, ...

    Stops after the first value ``<= stop_at`` when given.
    """
    horizon = len(seq) if horizon is None else min(horizon, len(seq))
    q = identity(seq.n, backend)
    cache: dict[Graph, np.ndarray] = {}
    for t in range(horizon + 1):
        if t:
            g = seq[t - 1]
            if g not in cache:
                cache[g] = build_update_matrix(g, backend).entries
            q = cache[g] @ q
        if t % stride == 0:
            c = contraction_factor(q)
            yield t, c
            if stop_at is not None and c <= stop_at:
                return


def epsilon_consensus_time(seq: GraphSequence, epsilon, *, backend: str = "float",
                           stride: int = 1, horizon: int | None = None) -> int:
    """Smallest t (a multiple of ``stride``) whose applied product shrinks every spread by ``epsilon``.

    Certifies the worst case over all initial vectors.  The scan goes
    upward and does not assume the factor is monotone in t.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    last = 0
    for t, c in contraction_series(seq, stride=stride, horizon=horizon, backend=backend, stop_at=epsilon):
        last = t
        if c <= epsilon:
            return t
    raise ConsensusNotReached(last, epsilon)


# -- lemma checks ----------------------------------------------------------------

def sorted_gap_squares(x) -> object:
    """Sum of squared gaps between consecutive entries of ``x`` in sorted order.

    Ties are broken by node index (stable), which does not change the value.
    """
    order = sorted(range(len(x)), key=lambda i: (x[i], i))
    zero = Fraction(0) if isinstance(x[0], Fraction) else 0.0
    return sum(((x[order[l + 1]] - x[order[l]]) ** 2 for l in range(len(x) - 1)), zero)


def _half(x):
    return Fraction(1, 2) if isinstance(x, Fraction) else 0.5


def _class_degrees(g: Graph, d: Sequence[int] | None) -> tuple[int, ...]:
    deg = g.degrees()
    if d is None:
        return deg
    d = tuple(int(v) for v in d)
    bad = [i for i in range(g.n) if deg[i] not in (1, d[i])]
    if bad:
        raise PreconditionError(f"graph degrees {deg} not in class for d={d} at nodes {bad}")
    return d


def check_lemma_decomp(a: UpdateMatrix, d: Sequence[int] | None = None):
    """Largest entrywise deviation of ``A^T D A`` from ``D - sum_{i<j} w_ij (e_i-e_j)(e_i-e_j)^T``.

    Here ``w_ij`` is the (i, j) entry of ``A^T D A``.  Requires ``G(A)`` connected.
    """
    g = a.source_graph
    if not is_connected(g):
        raise PreconditionError("G(A) is not connected")
    d = _class_degrees(g, d)
    if g.degrees() != d:
        raise PreconditionError("connected graph must have every node at its nominal degree")
    exact = a.backend == "exact"
    D = np.diag([Fraction(v) if exact else float(v) for v in d])
    if exact:
        D[D == 0] = Fraction(0)
    lhs = a.entries.T @ D @ a.entries
    n = g.n
    rhs = D.copy()
    for i in range(n):
        for j in range(i + 1, n):
            w = lhs[i, j]
            rhs[i, i] -= w
            rhs[j, j] -= w
            rhs[i, j] += w
            rhs[j, i] += w
    return max(abs(v) for v in (lhs - rhs).flat)


def check_lemma_vdecrease(x, a: UpdateMatrix, d: Sequence[int] | None = None):
    """``V(x) - (1/2) sum of sorted gaps^2 - V(Ax)``; nonnegative when ``G(A)`` is connected."""
    g = a.source_graph
    if not is_connected(g):
        raise PreconditionError("G(A) is not connected")
    d = _class_degrees(g, d)
    x = as_vector(x, a.backend)
    ax = a.entries @ x
    return lyapunov_v(x, d) - _half(x[0]) * sorted_gap_squares(x) - lyapunov_v(ax, d)


def _run_window(window: Sequence[Graph], x: np.ndarray, d) -> np.ndarray:
    if not window:
        raise PreconditionError("empty window")
    if not is_connected(union_graph(list(window))):
        raise PreconditionError("window union is disconnected")
    for g in window:
        _class_degrees(g, d)
        x = _step_array(x, g)
    return x


def check_lemma_bconndec(window: Sequence[Graph], x, d: Sequence[int], backend: str = "exact"):
    """``V(x(kB)) - (1/2) sum of sorted gaps^2 at kB - V(x((k+1)B))`` over one aligned window."""
    x = as_vector(x, backend)
    end = _run_window(window, x, d)
    return lyapunov_v(x, d) - _half(x[0]) * sorted_gap_squares(x) - lyapunov_v(end, d)


def check_corollary_vprime(window: Sequence[Graph], x, d: Sequence[int], backend: str = "exact"):
    """As :func:`check_lemma_bconndec` with ``V'`` in place of ``V``.

    The sum runs over the n-1 consecutive sorted gaps.
    """
    x = as_vector(x, backend)
    end = _run_window(window, x, d)
    return lyapunov_v_prime(x, d) - _half(x[0]) * sorted_gap_squares(x) - lyapunov_v_prime(end, d)


def zchange_values(u, w, d: Sequence[int], zs, backend: str = "exact") -> list:
    """``sum d_i (u_i - z)^2 - sum d_i (w_i - z)^2`` for each z in ``zs``."""
    u, w = as_vector(u, backend), as_vector(w, backend)
    lhs = sum(int(di) * ui for di, ui in zip(d, u))
    rhs = sum(int(di) * wi for di, wi in zip(d, w))
    if backend == "exact" and lhs != rhs:
        raise PreconditionError("weighted sums of u and w differ")
    if backend == "float" and not math.isclose(lhs, rhs, rel_tol=1e-12, abs_tol=1e-12):
        raise PreconditionError("weighted sums of u and w differ")
    out = []
    for z in as_vector(list(zs), backend):
        out.append(lyapunov_v(u - z, d) - lyapunov_v(w - z, d))
    return out


def check_lemma_zchange(u, w, d: Sequence[int], zs=(0, 1, -7, Fraction(27, 2)), backend: str = "exact"):
    """Largest difference between the z-dependent quantities; zero when the lemma holds."""
    vals = zchange_values(u, w, d, zs, backend)
    return max(abs(v - vals[0]) for v in vals)


def check_lemma_diff(x, d: Sequence[int]):
    """Return ``(ratio, bound)`` with ratio = sorted gaps^2 / V'(x) and bound = 1/(n^2 d_max)."""
    v = lyapunov_v_prime(x, d)
    if v == 0:
        raise ValueError("undefined ratio: x is constant")
    n = len(x)
    exact = isinstance(v, Fraction)
    bound = Fraction(1, n * n * max(d)) if exact else 1.0 / (n * n * max(d))
    return sorted_gap_squares(x) / v, bound


# -- per-block contraction ---------------------------------------------------------

@dataclass
class BlockContraction:
    """V' ratios over consecutive aligned B-blocks."""

    ratios: list
    threshold: object
    tolerance: float
    reached_zero: bool = False
    violations: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def per_block_contraction(seq: GraphSequence, x0, d: Sequence[int] | None = None, *,
                          blocks: int | None = None, backend: str = "float") -> BlockContraction:
    """Ratios ``V'((k+1)B) / V'(kB)`` along a run, compared with ``1 - 1/(2 n^3)``.

    The series ends once V' is zero: exactly zero for the exact backend,
    below the float round-off floor otherwise.  Each window is checked to be
    connected and class-conforming as it is consumed.
    """
    n, B = seq.n, seq.B
    d = tuple(seq.nominal_degrees() if d is None else d)
    x = as_vector(x0, backend)
    exact = backend == "exact"
    threshold = 1 - Fraction(1, 2 * n**3) if exact else 1 - 1 / (2 * n**3)
    tol = 0.0 if exact else 1e-9
    floor = 0 if exact else (64 * np.finfo(float).eps * float(np.max(np.abs(x)))) ** 2 * sum(d)
    nblocks = len(seq) // B if blocks is None else blocks
    if nblocks * B > len(seq):
        raise ValueError("not enough graphs for the requested number of blocks")
    out = BlockContraction([], threshold, tol)
    vp = lyapunov_v_prime(x, d)
    for k in range(nblocks):
        if vp <= floor:
            out.reached_zero = True
            break
        x = _run_window([seq[t] for t in range(k * B, (k + 1) * B)], x, d)
        new = lyapunov_v_prime(x, d)
        ratio = new / vp
        out.ratios.append(ratio)
        if ratio > threshold + tol:
            out.violations.append(k)
        vp = new
    else:
        out.reached_zero = vp <= floor
    return out


# -- forgetting vs consensus --------------------------------------------------------

@dataclass(frozen=True)
class DualityReport:
    t: int
    coefficient: object
    contraction: object

    @property
    def deviation(self):
        return abs(self.coefficient - self.contraction)

    @property
    def equal(self) -> bool:
        return self.coefficient == self.contraction


def check_forgetfulness_duality(seq: GraphSequence, t: int, backend: str = "exact") -> DualityReport:
    """Compare the two routes to the same number.

    Route one: coefficient of ergodicity of the walk's t-step matrix
    ``A(0)...A(t-1)``.  Route two: run the *reversed* graph sequence as a
    consensus iteration on the unit vectors to obtain the matrix it applies,
    then take its worst-case spread contraction.
    """
    if t > len(seq):
        raise ValueError(f"t={t} exceeds sequence length {len(seq)}")
    p = matrix_product(seq, t, "forward", backend)
    rev = [seq[t - 1 - k] for k in range(t)]
    cols = []
    for c in range(seq.n):
        e = as_vector([1 if k == c else 0 for k in range(seq.n)], backend)
        for g in rev:
            e = _step_array(e, g)
        cols.append(e)
    applied = np.column_stack(cols) if backend == "float" else np.array(cols, dtype=object).T
    return DualityReport(t, ergodicity_coefficient(p), contraction_factor(applied))


def spread_ratio(p: np.ndarray, x) -> object:
    """``S(Px) / S(x)`` for a single vector (a sampled lower bound on the contraction factor)."""
    x = as_vector(x, backend_of(p))
    s = spread(x)
    if s == 0:
        raise ValueError("x is constant")
    return spread(p @ x) / s
