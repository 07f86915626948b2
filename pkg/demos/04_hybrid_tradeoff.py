"""The mixing weight trades pair representation against core stability.

The hybrid sweep grows one radius; single-stop balls grow at ``lam`` times
the rate of pair cost balls.  We print the worst-case factors as functions
of the weight, then measure both on a random corpus.
"""

import fairstops as fs

print("weight   jr bound   core beta (alpha=2)")
for lam in (0.1, 0.25, 0.5, 0.75, 1.0):
    print(f"  {lam:4.2f}   {fs.hybrid_jr_factor(lam):7.4f}   {fs.hybrid_core_beta(lam):7.4f}")

print("\nempirical factors over 30 random instances (n<=16, m<=8):")
for lam in (0.25, 0.5, 1.0):
    worst_jr = worst_pf = 1.0
    for seed in range(30):
        inst = fs.random_euclidean(4 + seed % 12, 4 + seed % 5, 2 + seed % 3, seed)
        sol, _ = fs.hybrid(inst, lam)
        worst_jr = max(worst_jr, fs.jr_ratio(inst, sol).factor)
        worst_pf = max(worst_pf, fs.pf_ratio(fs.induce_clustering(inst), sol.stops).factor)
    print(f"  lam={lam}: worst jr {worst_jr:.4f} (bound {fs.hybrid_jr_factor(lam):.4f}), "
          f"worst induced pf {worst_pf:.4f} (bound {fs.hybrid_core_beta(lam):.4f})")

print("\nat full weight the sweep behaves like greedy capture on symmetric inputs:")
inst = fs.generate("gc-core-tight", eps=0.01, h=5)
print("  same selection:", fs.hybrid(inst, 1.0)[0].stops == fs.gc_trsp(inst)[0].stops)
