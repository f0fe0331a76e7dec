#!/usr/bin/env python3
"""How the walk-based confidence holds up as training data thins out.

Training interactions are removed per user (the test split stays fixed)
and the PMI pipeline is compared with factorizing the raw interactions.
The sparser the data, the more of the remaining signal lives in
transitive paths that only the walks can reach.
"""

import numpy as np

from walkrec import ExperimentGrid, PipelineSettings, generate_synthetic, run_experiment, split

pairs = generate_synthetic(seed=0)
ds = split(pairs, (0.8, 0.1, 0.1), seed=0)

keeps = (1.0, 0.8, 0.6, 0.4, 0.2)
seeds = tuple(range(5))
grid = ExperimentGrid(measures=("pmi", "mf"), sigmas=(3,),
                      keep_fractions=keeps, seeds=seeds)
rows = run_experiment(ds, PipelineSettings(), grid)

f1 = {}
for r in rows:
    f1.setdefault((r.config["measure"], r.config["keep_fraction"]), []).append(r.f1[10])

print(f"{'kept':>6s} {'PMI F1@10':>10s} {'MF F1@10':>10s} {'gain':>8s}")
for keep in keeps:
    pmi = np.mean(f1[("pmi", keep)])
    mf = np.mean(f1[("mf", keep)])
    gain = 100 * (pmi - mf) / mf if mf > 0 else float("nan")
    print(f"{100 * keep:5.0f}% {100 * pmi:9.3f}% {100 * mf:9.3f}% {gain:+7.1f}%")
