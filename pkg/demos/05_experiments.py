"""Walkthrough: the seeded Monte Carlo harness.

Each experiment draws polynomials from a model (trial i uses the stream
(seed, i), so runs are reproducible and parallelisable), computes a
statistic with one of the deterministic engines, and compares the empirical
aggregate against the matching closed-form bound with 3-sigma slack.
CSV reports use the schema trial,seed,stat_name,value,bound,pass.
"""

import math

from cubecond import experiments as exps
from cubecond import random as models

gauss = models.Gaussian()

print("tail experiment: survival of kappa(f, 0) vs the local tail bound")
cfg = exps.ExperimentConfig(
    kind="tail",
    model=models.RandomModel(n=1, support=((0,), (1,), (5,)), dist=gauss),
    trials=2000,
    seed=42,
    t_grid=(math.e, 10.0, 100.0),
)
report = exps.run_tail_experiment(cfg)
for name, row in report.summary.items():
    print(f"  {name:22s} value {row['value']:.4f}  bound {row['bound']:.4f}  pass {row['pass']}")
exps.emit_csv(report, "tail_experiment.csv")
print("  wrote tail_experiment.csv")

print("\nbox-count experiment: mean final boxes vs the closed-form bound")
cfg = exps.ExperimentConfig(
    kind="pv",
    model=models.RandomModel(n=1, support=((0,), (1,), (2,)), dist=gauss),
    trials=500,
    seed=42,
    max_depth=25,
)
report = exps.run_pv_experiment(cfg)
row = report.summary["mean_final_boxes"]
print(f"  mean {row['value']:.2f} (+- {row['stderr']:.2f})  bound {row['bound']:.0f}"
      f"  excluded {report.excluded}")

print("\nisolation-tree experiment: moments of the tree size")
cfg = exps.ExperimentConfig(
    kind="descartes",
    model=models.RandomModel(n=1, support=((0,), (1,), (13,), (64,)), dist=gauss),
    trials=300,
    seed=42,
    k_list=(1, 2),
    max_depth=60,
)
report = exps.run_descartes_experiment(cfg)
for name, row in report.summary.items():
    print(f"  {name:22s} value {row['value']:10.2f}  bound {row['bound']:.3e}  pass {row['pass']}")

print("\nseparation experiment: oracle separations vs their lower bounds")
cfg = exps.ExperimentConfig(
    kind="separation",
    model=models.RandomModel(
        n=1, support=((0,), (1,), (5,), (17,), (33,)), dist=gauss
    ),
    trials=200,
    seed=42,
    grid_eps=1e-4,
)
report = exps.run_separation_experiment(cfg)
print(f"  violations: {report.violations}  oracle failures: {report.excluded}"
      f"  passed: {report.passed}  ({report.wallclock:.1f}s)")
