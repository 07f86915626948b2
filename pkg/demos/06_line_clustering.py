"""Center selection on a line: block sweeps versus block dictators.

With four datapoints (1, 3, 8, 10) and centers (2, 6, 9, 13), grouping
left-to-right and taking the nearest center to the right of each block picks
6 and 13 - and the left pair of points would be three times happier at the
skipped center 2.  Letting each block's first member pick its nearest center
gives 2 and 9, which no proportional group can improve on at all.
"""

import fairstops as fs

line = fs.generate("line-pf")
clustering = fs.line_to_clustering(line)
print("datapoints:", line.datapoints)
print("centers:   ", line.centers)

baseline = fs.line_sweep_baseline(line)
report = fs.pf_ratio(clustering, baseline)
print("\nblock sweep picks:", [line.centers[i] for i in baseline])
print(f"  proportional fairness factor {report.factor:.1f}: points "
      f"{report.witness.coalition} prefer center {line.centers[report.witness.deviation[0]]}")

dictator = fs.l_dictator_partition(line)
print("block dictators pick:", [line.centers[i] for i in dictator])
print("  proportional fairness factor", fs.pf_ratio(clustering, dictator).factor)

# The dictator rule stays exactly fair on random lines.
import numpy as np

rng = np.random.default_rng(7)
worst = 1.0
for _ in range(100):
    n, k = int(rng.integers(4, 12)), int(rng.integers(1, 4))
    inst = fs.LineClusteringInstance(
        datapoints=tuple(rng.uniform(0, 10, n).tolist()),
        centers=tuple(rng.uniform(0, 10, int(rng.integers(k, 8))).tolist()),
        k=k,
        ell=int(rng.integers(1, n // k + 1)),
    )
    worst = max(worst, fs.pf_ratio(fs.line_to_clustering(inst), fs.l_dictator_partition(inst)).factor)
print("\nworst dictator factor over 100 random lines:", worst)
