"""Exact core testing with witnesses, two backends, and a boundary case.

The wide-stop family is engineered so greedy capture sits exactly on its
(2, 1+sqrt2) core guarantee: shrink either parameter and a blocking
coalition of the two big groups appears, pointing at the tight stops.
"""

from fractions import Fraction
import math

import fairstops as fs

inst = fs.generate("gc-core-tight", eps=0.01, h=10)
sol, _ = fs.gc_trsp(inst)
print("selection:", " ".join(inst.candidate_labels[c] for c in sol))

beta = 1 + math.sqrt(2)
print(f"\nat (alpha=2, beta=1+sqrt2): witness =",
      fs.core_violation(inst, sol, 2, beta))

alpha = Fraction(59, 30)  # just under 2
witness = fs.core_violation(inst, sol, alpha, beta - 0.01)
print(f"at (alpha={alpha}, beta=1+sqrt2-0.01): coalition of {len(witness.coalition)} agents"
      f" -> {tuple(inst.candidate_labels[c] for c in witness.deviation)}")

report = fs.core_ratio(inst, sol, 2)
print(f"\ntight factor at alpha=2: {report.factor:.6f} (guarantee {beta:.6f})")

# The integer-program backend reproduces the enumeration exactly.
milp = fs.core_ratio(inst, sol, 2, backend="milp")
print("branch-and-bound backend agrees:", abs(milp.factor - report.factor) < 1e-9)
