"""
The random-walk side: forgetting and crossing times
===================================================

A walker on G(0), G(1), ... moves to a uniform neighbour.  Its law after t
steps is a row of A(0)...A(t-1); the coefficient of ergodicity of that
product equals the worst-case spread contraction of the reversed consensus
iteration.
"""
from eqconsensus.analysis import check_forgetfulness_duality
from eqconsensus.generators import CounterexampleSpec, counterexample_sequence
from eqconsensus.walk import (
    crossing_lower_bound,
    crossing_time_experiment,
    empirical_distribution,
    evolve_distribution,
    point_mass,
    simulate_positions,
    total_variation,
)

seq = counterexample_sequence(CounterexampleSpec(8, 4))
for t in (1, 4, 8, 16):
    rep = check_forgetfulness_duality(seq, t)
    print(t, rep.coefficient, rep.equal)

###############################################################################
# Exact law versus 10^5 simulated walkers.
exact = evolve_distribution(point_mass(8, 3, "float"), seq, 8, backend="float")
emp = empirical_distribution(simulate_positions(seq, 3, 8, 100_000, seed=0), 8)
print("TV distance:", total_variation(emp, exact))

###############################################################################
# Time to cross from the freshly emerged node into the right half.
for n in (4, 6, 8, 10, 12):
    st = crossing_time_experiment(n, max_steps=10**7, num_samples=5000, seed=n)
    print(f"n={n:2d}  mean T = {st.mean:8.1f}  lower bound {crossing_lower_bound(n)}")
