"""Verification suites: batches of random or exhaustive instances fed to the
``check_*`` routines, each summarised as one JSON-ready record::

    {"check": ..., "params": {...}, "instances": N, "failures": F,
     "margin" | "deviation": worst value, "pass": bool}

All randomness flows from ``random.Random(seed)`` so records are reproducible.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable

from .analysis import (
    check_corollary_vprime,
    check_forgetfulness_duality,
    check_lemma_bconndec,
    check_lemma_decomp,
    check_lemma_diff,
    check_lemma_vdecrease,
    check_lemma_zchange,
    epsilon_consensus_time,
    per_block_contraction,
    theoretical_bound,
)
from .dynamics import build_update_matrix, lyapunov_v, lyapunov_v_prime, run, spread, step, StateVector
from .generators import (
    CounterexampleSpec,
    counterexample_sequence,
    fixed_degree_sequence,
    random_connected_graph,
)
from .graph import Graph, GraphSequence, is_connected

FLOAT_REL_SLACK = 1e-9


def jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return v
    if hasattr(v, "item"):
        return v.item()
    return v


def _record(check: str, params: dict, instances: int, failures: int, key: str, worst) -> dict:
    return {"check": check, "params": params, "instances": instances, "failures": failures,
            key: jsonable(worst), "pass": failures == 0 and instances > 0}


def random_rational(rng: random.Random, lo: int = -20, hi: int = 20, den: int = 7) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def random_vector(rng: random.Random, n: int) -> list[Fraction]:
    return [random_rational(rng) for _ in range(n)]


def connected_graphs(n: int):
    """Every connected labelled graph on ``n`` nodes (self-loops implied)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        g = Graph.from_edges(n, [p for k, p in enumerate(pairs) if mask >> k & 1])
        if is_connected(g):
            yield g


def random_class_sequence(rng: random.Random, n: int, length: int, B: int = 1,
                          isolation_rate: float = 0.3) -> GraphSequence:
    """B-connected sequence with fixed nominal degrees, truncated to ``length``."""
    base = random_connected_graph(n, rng.choice([0.0, 0.3, 0.6]), rng)
    steps = B * -(-max(length, 1) // B)
    seq = fixed_degree_sequence(base, steps, B, swaps_per_step=rng.randint(0, 2),
                                isolation_rate=isolation_rate if B > 1 else 0.0,
                                seed=rng.getrandbits(32))
    return seq if steps == length else seq.truncated(length)


def suite_lemma_decomp(max_n: int = 5, **_) -> dict:
    worst, count, bad = Fraction(0), 0, 0
    for n in range(1, max_n + 1):
        for g in connected_graphs(n):
            dev = check_lemma_decomp(build_update_matrix(g))
            worst = max(worst, dev)
            count += 1
            bad += dev != 0
    return _record("lemma-decomp", {"max_n": max_n}, count, bad, "deviation", worst)


def _min_margin_suite(name: str, params: dict, trials: int, draw: Callable[[], object]) -> dict:
    worst, bad = None, 0
    for _ in range(trials):
        m = draw()
        worst = m if worst is None else min(worst, m)
        bad += m < 0
    return _record(name, params, trials, bad, "margin", worst)


def suite_vdecrease(trials: int = 500, max_n: int = 8, seed: int = 0, **_) -> dict:
    rng = random.Random(seed)

    def draw():
        n = rng.randint(2, max_n)
        g = random_connected_graph(n, rng.random(), rng)
        return check_lemma_vdecrease(random_vector(rng, n), build_update_matrix(g))

    return _min_margin_suite("vdecrease", {"trials": trials, "max_n": max_n, "seed": seed}, trials, draw)


def _window_suite(name: str, checker, trials: int, max_n: int, max_B: int, seed: int) -> dict:
    rng = random.Random(seed)

    def draw():
        n, B = rng.randint(2, max_n), rng.randint(1, max_B)
        seq = random_class_sequence(rng, n, B, B)
        x = random_vector(rng, n)
        if rng.random() < 0.2:
            x[rng.randrange(n)] = x[rng.randrange(n)]
        return checker(list(seq), x, seq.degree_profile)

    return _min_margin_suite(name, {"trials": trials, "max_n": max_n, "max_B": max_B, "seed": seed},
                             trials, draw)


def suite_bconndec(trials: int = 500, max_n: int = 8, max_B: int = 3, seed: int = 0, **_) -> dict:
    return _window_suite("bconndec", check_lemma_bconndec, trials, max_n, max_B, seed)


def suite_vprime(trials: int = 500, max_n: int = 8, max_B: int = 3, seed: int = 0, **_) -> dict:
    return _window_suite("vprime", check_corollary_vprime, trials, max_n, max_B, seed)


def suite_diff(trials: int = 500, max_n: int = 8, seed: int = 0, **_) -> dict:
    rng = random.Random(seed)

    def draw():
        n = rng.randint(2, max_n)
        d = [rng.randint(2, n) for _ in range(n)]
        while True:
            x = random_vector(rng, n)
            if rng.random() < 0.3:
                x = [Fraction(0)] * n
                x[rng.randrange(n)] = random_rational(rng) or Fraction(1)
            if len(set(x)) > 1:
                break
        ratio, bound = check_lemma_diff(x, d)
        return ratio - bound

    return _min_margin_suite("diff", {"trials": trials, "max_n": max_n, "seed": seed}, trials, draw)


def suite_zchange(trials: int = 500, max_n: int = 8, seed: int = 0, **_) -> dict:
    rng = random.Random(seed)
    worst, bad = Fraction(0), 0
    for _ in range(trials):
        n = rng.randint(1, max_n)
        d = [rng.randint(1, n + 1) for _ in range(n)]
        u, w = random_vector(rng, n), random_vector(rng, n)
        w[-1] += (sum(a * b for a, b in zip(d, u)) - sum(a * b for a, b in zip(d, w))) / d[-1]
        dev = check_lemma_zchange(u, w, d, zs=(0, 1, -7, Fraction(27, 2), random_rational(rng)))
        worst = max(worst, dev)
        bad += dev != 0
    return _record("zchange", {"trials": trials, "max_n": max_n, "seed": seed}, trials, bad, "deviation", worst)


def suite_duality(trials: int = 100, max_n: int = 6, max_t: int = 8, seed: int = 0, **_) -> dict:
    rng = random.Random(seed)
    worst, bad, count = Fraction(0), 0, 0
    cases = []
    for _ in range(trials):
        n, t, B = rng.randint(2, max_n), rng.randint(1, max_t), rng.randint(1, 3)
        cases.append((random_class_sequence(rng, n, t, B), t))
    cases.append((counterexample_sequence(CounterexampleSpec(8, 2)), 8))
    for seq, t in cases:
        rep = check_forgetfulness_duality(seq, t)
        worst = max(worst, rep.deviation)
        bad += not rep.equal
        count += 1
    return _record("duality", {"trials": trials, "max_n": max_n, "max_t": max_t, "seed": seed,
                               "counterexample": {"n": 8, "t": 8}}, count, bad, "deviation", worst)


def conservation_violations(seq: GraphSequence, x0, backend: str = "exact") -> list[str]:
    """Problems with conservation of the weighted average and monotonicity of S and V' along a run."""
    traj = run(seq, x0, backend=backend, keep_states=False)
    log = traj.log
    out = []
    xbar0 = log[0].weighted_avg
    for prev, cur in zip(log, log[1:]):
        if backend == "exact":
            if cur.weighted_avg != xbar0:
                out.append(f"t={cur.t}: weighted average moved")
            if cur.spread > prev.spread:
                out.append(f"t={cur.t}: spread increased")
            if cur.v_prime > prev.v_prime:
                out.append(f"t={cur.t}: V' increased")
        else:
            if abs(cur.weighted_avg - xbar0) > 1e-10 * max(1.0, abs(xbar0)):
                out.append(f"t={cur.t}: weighted average moved")
            if cur.spread > prev.spread + FLOAT_REL_SLACK * max(1.0, prev.spread):
                out.append(f"t={cur.t}: spread increased")
            if cur.v_prime > prev.v_prime + FLOAT_REL_SLACK * max(1.0, prev.v_prime):
                out.append(f"t={cur.t}: V' increased")
    return out


def suite_conservation(trials: int = 50, max_n: int = 8, horizon: int = 24, seed: int = 0,
                       backend: str = "exact", **_) -> dict:
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        n, B = rng.randint(2, max_n), rng.randint(1, 3)
        seq = random_class_sequence(rng, n, horizon - horizon % B, B)
        x0 = random_vector(rng, n) if backend == "exact" else [float(v) for v in random_vector(rng, n)]
        bad += bool(conservation_violations(seq, x0, backend))
    return _record("conservation", {"trials": trials, "max_n": max_n, "horizon": horizon, "seed": seed,
                                    "backend": backend}, trials, bad, "violating_runs", bad)


def suite_nonincrease(trials: int = 500, max_n: int = 8, seed: int = 0, **_) -> dict:
    """V and V' never increase under one class update, connected or not."""
    rng = random.Random(seed)

    def draw():
        n, B = rng.randint(2, max_n), rng.randint(2, 3)
        seq = random_class_sequence(rng, n, B, B, isolation_rate=0.6)
        g, d = seq[rng.randrange(B)], seq.degree_profile
        s = StateVector.of(random_vector(rng, n), d)
        nxt = step(s, g)
        return min(lyapunov_v(s.x, d) - lyapunov_v(nxt.x, d),
                   lyapunov_v_prime(s.x, d) - lyapunov_v_prime(nxt.x, d),
                   spread(s.x) - spread(nxt.x))

    return _min_margin_suite("nonincrease", {"trials": trials, "max_n": max_n, "seed": seed}, trials, draw)


def theorem_instances(ns=(4, 6, 8), Bs=(1, 2), per_case: int = 20, epsilon: float = 1e-3, seed: int = 0):
    """Yield ``(n, B, sequence)`` drawn from fixed-degree generators, lazily long enough for the bound."""
    rng = random.Random(seed)
    for n in ns:
        for B in Bs:
            horizon = int(theoretical_bound(n, B, epsilon)) + 1
            horizon += -horizon % B
            for _ in range(per_case):
                base = random_connected_graph(n, rng.choice([0.0, 0.2, 0.5]), rng)
                seq = fixed_degree_sequence(base, horizon, B, swaps_per_step=rng.randint(0, 2),
                                            isolation_rate=0.4 if B > 1 else 0.0,
                                            seed=rng.getrandbits(32), lazy=True)
                yield n, B, seq


def suite_theorem(per_case: int = 20, epsilon: float = 1e-3, seed: int = 0, **_) -> dict:
    bad, worst, count = 0, None, 0
    for n, B, seq in theorem_instances(per_case=per_case, epsilon=epsilon, seed=seed):
        bound = theoretical_bound(n, B, epsilon)
        t = epsilon_consensus_time(seq, epsilon, backend="float")
        slack = bound - t
        worst = slack if worst is None else min(worst, slack)
        bad += t > bound
        count += 1
    return _record("theorem-bound", {"per_case": per_case, "epsilon": epsilon, "seed": seed,
                                     "n": [4, 6, 8], "B": [1, 2]}, count, bad, "margin", worst)


def suite_per_block(per_case: int = 20, epsilon: float = 1e-3, seed: int = 0, **_) -> dict:
    rng = random.Random(seed + 1)
    bad, worst, count = 0, None, 0
    for n, B, seq in theorem_instances(per_case=per_case, epsilon=epsilon, seed=seed):
        x0 = [rng.uniform(-1, 1) for _ in range(n)]
        res = per_block_contraction(seq, x0, blocks=min(len(seq) // B, 400))
        count += 1
        bad += not res.passed
        if res.ratios:
            m = float(res.threshold) - max(res.ratios)
            worst = m if worst is None else min(worst, m)
    return _record("per-block", {"per_case": per_case, "epsilon": epsilon, "seed": seed}, count, bad,
                   "margin", worst)


def counterexample_first_time(n: int, epsilon=0.25, max_t: int = 10**6, backend: str = "float") -> int:
    m = n // 2
    seq = counterexample_sequence(CounterexampleSpec(n, -(-max_t // m), "reversed"))
    return epsilon_consensus_time(seq, epsilon, backend=backend, stride=m)


def suite_counterexample(ns=(8, 10, 12), epsilon=0.25, **_) -> dict:
    times = {n: counterexample_first_time(n, epsilon) for n in ns}
    bad = sum(times[n] < 2 ** (n // 2) / 8 for n in ns)
    bad += sum(times[a] >= times[b] for a, b in zip(ns, ns[1:]))
    worst = min(times[n] - 2 ** (n // 2) / 8 for n in ns)
    rec = _record("counterexample", {"n": list(ns), "epsilon": epsilon}, len(ns), bad, "margin", worst)
    rec["first_times"] = {str(n): times[n] for n in ns}
    return rec


SUITES: dict[str, Callable[..., dict]] = {
    "lemma-decomp": suite_lemma_decomp,
    "vdecrease": suite_vdecrease,
    "bconndec": suite_bconndec,
    "vprime": suite_vprime,
    "diff": suite_diff,
    "zchange": suite_zchange,
    "nonincrease": suite_nonincrease,
    "duality": suite_duality,
    "conservation": suite_conservation,
    "theorem-bound": suite_theorem,
    "per-block": suite_per_block,
    "counterexample": suite_counterexample,
}
