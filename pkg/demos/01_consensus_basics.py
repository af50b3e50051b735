"""
Equal-neighbour consensus in a few lines
========================================

Every node replaces its value by the plain average over its neighbourhood
(itself included).  On a fixed-degree sequence the degree-weighted average
never moves, and the two quadratic Lyapunov functions only go down.
"""
from eqconsensus.dynamics import build_update_matrix, run
from eqconsensus.generators import fixed_degree_sequence
from eqconsensus.graph import cycle_graph, path_graph

###############################################################################
# The update matrix of a path on three nodes.  Row i spreads weight 1/d_i
# over the neighbours of i.
print(build_update_matrix(path_graph(3)).entries)

###############################################################################
# A random sequence on a ring of 6 nodes: double edge swaps keep every
# degree at 3, and with B=2 some steps isolate whole components.
seq = fixed_degree_sequence(cycle_graph(6), 12, B=2, swaps_per_step=1, isolation_rate=0.5, seed=3)
for t, g in enumerate(seq):
    print(t, g.degrees(), g.edges())

###############################################################################
# Run it with exact rational arithmetic and look at the instrumentation.
traj = run(seq, [0, 0, 0, 1, 1, 1])
print(f"{'t':>3} {'spread':>10} {'V':>10} {'V prime':>10} {'avg':>6}")
for rec in traj.log:
    print(f"{rec.t:3d} {float(rec.spread):10.6f} {float(rec.v):10.6f} {float(rec.v_prime):10.6f} {str(rec.weighted_avg):>6}")
