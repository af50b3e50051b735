"""Exit criteria.  Each test prints one PASS/FAIL line; the lines are repeated
in the pytest terminal summary under "acceptance criteria"."""
import random
import time
from fractions import Fraction

import pytest

from eqconsensus.analysis import epsilon_consensus_time, per_block_contraction, theoretical_bound
from eqconsensus.generators import CounterexampleSpec, counterexample_sequence
from eqconsensus.suites import (
    conservation_violations,
    counterexample_first_time,
    random_class_sequence,
    random_vector,
    suite_bconndec,
    suite_diff,
    suite_duality,
    suite_lemma_decomp,
    suite_vdecrease,
    suite_vprime,
    suite_zchange,
    theorem_instances,
)
from eqconsensus.walk import (
    crossing_lower_bound,
    crossing_time_experiment,
    empirical_distribution,
    evolve_distribution,
    point_mass,
    simulate_positions,
    total_variation,
)

EPSILON = 1e-3


@pytest.fixture(scope="module")
def instances():
    return list(theorem_instances(ns=(4, 6, 8), Bs=(1, 2), per_case=20, epsilon=EPSILON, seed=2024))


def test_c1_theorem_bound(instances, report):
    start = time.perf_counter()
    violations, worst_ratio, isolated = [], 0.0, 0
    for n, B, seq in instances:
        bound = theoretical_bound(n, B, EPSILON)
        t = epsilon_consensus_time(seq, EPSILON, backend="float")
        worst_ratio = max(worst_ratio, t / bound)
        if t > bound:
            violations.append((n, B, t, bound))
        isolated += any(1 in seq[k].degrees() for k in range(t))
    elapsed = time.perf_counter() - start
    ok = len(instances) == 120 and not violations and elapsed < 300
    report(1, ok, f"{len(instances)} instances, {len(violations)} violations, "
                  f"max t/bound {worst_ratio:.2e}, {isolated} runs with isolated nodes, {elapsed:.1f}s")
    assert ok, violations


def test_c2_per_block_contraction(instances, report):
    rng = random.Random(7)
    failures, blocks, worst = 0, 0, 0.0
    for n, B, seq in instances:
        x0 = [rng.uniform(-1, 1) for _ in range(n)]
        res = per_block_contraction(seq, x0, backend="float")
        assert res.reached_zero
        failures += len(res.violations)
        blocks += len(res.ratios)
        if res.ratios:
            worst = max(worst, max(r / float(res.threshold) for r in res.ratios))
    ok = failures == 0
    report(2, ok, f"{blocks} blocks checked against 1 - 1/(2n^3) (+1e-9 rel), {failures} violations, "
                  f"max ratio/threshold {worst:.6f}")
    assert ok


def test_c3_lemma_decomp_exhaustive(report):
    start = time.perf_counter()
    rec = suite_lemma_decomp(max_n=5)
    elapsed = time.perf_counter() - start
    ok = rec["pass"] and rec["deviation"] == "0/1" and rec["instances"] == 772 and elapsed < 120
    report(3, ok, f"{rec['instances']} connected graphs (n<=5), max deviation {rec['deviation']}, {elapsed:.1f}s")
    assert ok


def test_c4_lemma_property_suites(report):
    recs = [suite_vdecrease(trials=500, max_n=8, seed=1),
            suite_bconndec(trials=500, max_n=8, max_B=3, seed=2),
            suite_vprime(trials=500, max_n=8, max_B=3, seed=3),
            suite_diff(trials=500, max_n=8, seed=4),
            suite_zchange(trials=500, max_n=8, seed=5)]
    ok = all(r["pass"] and r["instances"] >= 500 for r in recs)
    summary = ", ".join(f"{r['check']} {r['instances']}/{r['failures']} fail" for r in recs)
    report(4, ok, f"exact suites: {summary}")
    assert ok, recs


def test_c5_forgetfulness_duality(report):
    rec = suite_duality(trials=100, max_n=6, max_t=8, seed=5)
    ok = rec["pass"] and rec["deviation"] == "0/1" and rec["instances"] == 101
    report(5, ok, f"{rec['instances']} exact comparisons (100 random + counterexample n=8 t=8), "
                  f"{rec['failures']} deviations")
    assert ok


def test_c6_exponential_lower_bound(report):
    start = time.perf_counter()
    ns = (8, 10, 12)
    times = {n: counterexample_first_time(n, 0.25, backend="float") for n in ns}
    elapsed = time.perf_counter() - start
    above = all(times[n] >= 2 ** (n // 2) / 8 for n in ns)
    growing = all(times[a] < times[b] for a, b in zip(ns, ns[1:]))
    ok = above and growing and elapsed < 600
    detail = ", ".join(f"n={n}: t={times[n]} >= {2 ** (n // 2) / 8:g}" for n in ns)
    report(6, ok, f"{detail}; increasing={growing}; {elapsed:.1f}s")
    assert ok


def test_c6_exact_cross_check():
    # the first-hitting time for n=8 is the same with exact products
    assert counterexample_first_time(8, Fraction(1, 4), max_t=200, backend="exact") == \
        counterexample_first_time(8, 0.25)


def test_c7_crossing_time(report):
    lines, ok = [], True
    for n in (6, 8, 10):
        st = crossing_time_experiment(n, max_steps=10**7, num_samples=10_000, seed=100 + n)
        lo, hi = st.confidence_interval(0.99)
        bound = crossing_lower_bound(n)
        good = st.censored == 0 and hi >= bound
        ok &= good
        lines.append(f"n={n}: mean {st.mean:.1f} (99% one-sided [{lo:.1f}, {hi:.1f}]) vs 2^(n/2-1)={bound}")
    report(7, ok, "; ".join(lines))
    assert ok


def test_c8_conservation(report):
    rng = random.Random(8)
    bad_exact = bad_float = 0
    for _ in range(40):
        n, B = rng.randint(2, 8), rng.randint(1, 3)
        seq = random_class_sequence(rng, n, 30 - 30 % B, B)
        bad_exact += bool(conservation_violations(seq, random_vector(rng, n), "exact"))
    for _ in range(40):
        n, B = rng.randint(2, 8), rng.randint(1, 3)
        seq = random_class_sequence(rng, n, 600 - 600 % B, B)
        x0 = [rng.uniform(-10, 10) for _ in range(n)]
        bad_float += bool(conservation_violations(seq, x0, "float"))
    ok = bad_exact == 0 and bad_float == 0
    report(8, ok, f"40 exact runs ({bad_exact} violating), 40 float runs of 600 steps ({bad_float} violating)")
    assert ok


def test_c9_walk_law(report):
    n, t = 8, 8
    seq = counterexample_sequence(CounterexampleSpec(n, 2))
    worst = 0.0
    for start in (0, n // 2 - 1):
        exact = evolve_distribution(point_mass(n, start, "float"), seq, t, backend="float")
        emp = empirical_distribution(simulate_positions(seq, start, t, 100_000, seed=start), n)
        worst = max(worst, total_variation(emp, exact))
    ok = worst < 0.02
    report(9, ok, f"10^5 walks, n=8, t=8, max TV distance {worst:.4f} < 0.02")
    assert ok
