"""
The Lyapunov inequalities as executable checks
==============================================

Each suite draws random (or, for the matrix identity, all) small instances
and reports the worst margin.  Margins are exact rationals; a negative
value would be a counterexample.
"""
import json

from eqconsensus.analysis import check_lemma_diff, check_lemma_vdecrease
from eqconsensus.dynamics import as_vector, build_update_matrix
from eqconsensus.graph import complete_graph
from eqconsensus.suites import SUITES

###############################################################################
# One instance by hand: x = (0, 1) on two linked nodes.
print(check_lemma_vdecrease([0, 1], build_update_matrix(complete_graph(2))))   # 1/2
print(check_lemma_diff(as_vector([0, 1]), (2, 2)))                               # (1, 1/8)

###############################################################################
# Whole suites.
for name in ("lemma-decomp", "vdecrease", "bconndec", "vprime", "diff", "zchange", "nonincrease", "duality"):
    print(json.dumps(SUITES[name](seed=7), sort_keys=True))
