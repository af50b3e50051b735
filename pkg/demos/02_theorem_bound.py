"""
Polynomial convergence time on fixed-degree sequences
=====================================================

For each (n, B) we draw random fixed-degree sequences, certify the first
time the applied matrix product shrinks *every* initial spread by
epsilon, and set it against B + 4 n^3 B ln(2n/epsilon).
"""
from eqconsensus.analysis import epsilon_consensus_time, theoretical_bound
from eqconsensus.suites import theorem_instances

EPS = 1e-3
rows = {}
for n, B, seq in theorem_instances(ns=(4, 6, 8, 10), Bs=(1, 2, 3), per_case=10, epsilon=EPS, seed=1):
    rows.setdefault((n, B), []).append(epsilon_consensus_time(seq, EPS))

print(f"{'n':>3} {'B':>3} {'worst t':>8} {'bound':>12}")
for (n, B), times in sorted(rows.items()):
    print(f"{n:3d} {B:3d} {max(times):8d} {theoretical_bound(n, B, EPS):12.1f}")

###############################################################################
# The bound is far from tight on random instances; what matters is that it
# is polynomial.  The next demo shows what happens once nodes may trade degrees.
