"""
Swapping degrees makes consensus exponentially slow
===================================================

Two stars joined centre to centre; each step the centres move one place
along their halves.  The sorted degree sequence is constant, yet the time
to reach 1/4-consensus roughly doubles with every two extra nodes.
"""
from eqconsensus.generators import CounterexampleSpec, counterexample_sequence, two_star_graph
from eqconsensus.suites import counterexample_first_time

print(two_star_graph(8, 0).edges())
print(two_star_graph(8, 1).edges())

print(f"{'n':>3} {'first t':>8} {'2^(n/2)/8':>10} {'ratio to previous':>18}")
prev = None
for n in range(4, 21, 2):
    t = counterexample_first_time(n, 0.25)
    print(f"{n:3d} {t:8d} {2 ** (n // 2) / 8:10g} {'' if prev is None else f'{t / prev:18.2f}'}")
    prev = t
