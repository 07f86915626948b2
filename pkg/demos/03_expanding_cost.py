"""The expanding-cost sweep: pairs of stops, priced by the trips they enable.

First its tight family: a slightly cheap stop pair captures three of four
agents a hair before the fair pair would, pinning the factor at 1+sqrt(2).
Then the complete-graph family where pair-myopia has no core guarantee at
all: the sweep spends the whole budget on on-edge pairs at cost 2 while the
graph vertices would have served most agents for free.
"""

import math

import fairstops as fs

inst = fs.generate("eca-jr-tight", eps=0.01)
solution, trace = fs.eca(inst)
print("tight family: selected", " ".join(inst.candidate_labels[c] for c in solution))
for ev in trace.events:
    opened = ",".join(inst.candidate_labels[c] for c in ev.opened) or "-"
    print(f"  r={ev.radius:8.5f}  opened={opened:6s}  agents={list(ev.agents)}")
factor = fs.jr_ratio(inst, solution).factor
print(f"pair-representation factor {factor:.5f} vs bound 1+sqrt2 = {1 + math.sqrt(2):.5f}")

kz = fs.generate("kz", gamma=1, r=2)
sol, _ = fs.eca(kz)
print("\ncomplete-graph family: selected", " ".join(kz.candidate_labels[c] for c in sol))
print("every agent pays:", [round(fs.agent_cost(kz, i, sol), 3) for i in range(kz.n)])
report = fs.core_ratio(kz, sol, alpha=1)
print("core factor at alpha=1:", report.factor)
print("blocking coalition", report.witness.coalition, "deviates to the vertices",
      tuple(kz.candidate_labels[c] for c in report.witness.deviation), "and rides for free")
