"""Walkthrough: the 1-norm condition number on the cube.

For f = 2x^2 - 1 the quantity kappa(f, x) = norm1(f) / max(|f(x)|, |f'(x)|/d)
balances "how small is the value" against "how small is the gradient".  Its
maximum over [-1, 1] sits where the two terms tie, at x = (sqrt(3) - 1) / 2.
"""

import math

import numpy as np

from cubecond.condition import (
    dist1_to_sigma_x,
    global_condition,
    kappa_batch,
    local_condition,
    local_size_bound,
)
from cubecond.poly import new_sparse, norm1

quad = new_sparse(1, [((0,), -1.0), ((1,), 0.0), ((2,), 2.0)])
print("f = 2x^2 - 1 on [-1, 1],  norm1 =", norm1(quad), " degree =", quad.degree)

for x in (0.0, 0.5, 1.0 / math.sqrt(2.0)):
    print(f"  kappa(f, {x:+.4f}) = {local_condition(quad, [x]):.4f}")

tie = (math.sqrt(3.0) - 1.0) / 2.0
print(f"  kappa(f, x*) at the tie point x* = {tie:.6f}:",
      f"{local_condition(quad, [tie]):.6f}")

# a certified enclosure of the global maximum from a grid plus the
# d-Lipschitz padding of x -> 1/kappa(f, x)
enclosure = global_condition(quad, grid_eps=1e-4)
print(f"global kappa in [{enclosure.lower:.6f}, {enclosure.upper:.6f}]",
      f"(grid covering radius {enclosure.grid_eps})")
print("analytic value 3/(sqrt(3)-1) =", 3.0 / (math.sqrt(3.0) - 1.0))

# a singular zero inside the cube blows the condition number up
double_root = new_sparse(1, [((0,), 0.25), ((1,), -1.0), ((2,), 1.0)])
print("\nf = (x - 1/2)^2: kappa at the double root =",
      local_condition(double_root, [0.5]))
print("certified upper bound over the cube:",
      global_condition(double_root, 1e-2).upper)

# the condition number measures distance to singularity in coefficient space:
# norm1 / dist <= kappa, with dist the minimal 1-norm perturbation on the
# support that makes x a singular zero
x = 0.0
dist = dist1_to_sigma_x(quad, [x])
print(f"\nminimal singular perturbation at x = {x}: dist = {dist}")
print(f"sandwich check: {norm1(quad)/dist:.3f} <= kappa = {local_condition(quad, [x]):.3f}")

# kappa also limits how small a subdivision box must get near x before the
# exclusion test can fire
rng = np.random.default_rng(1)
xs = rng.uniform(-1, 1, (5, 1))
print("\nlocal size bounds (volume thresholds for the subdivision test):")
for x, kappa in zip(xs[:, 0], kappa_batch(quad, xs)):
    print(f"  x = {x:+.3f}: kappa = {kappa:8.3f}, bound = {local_size_bound(quad, [x]):.3e}")
