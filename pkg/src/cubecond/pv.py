"""Breadth-first box subdivision of the unit cube with the exclusion predicate.

The worklist starts from [-1, 1]^n; a box passing the predicate moves to the
output, otherwise its 2^n children are enqueued.  The worklist is FIFO and
children are enqueued in lexicographic coordinate order, so reports are
bit-for-bit reproducible.  Singular inputs never terminate, which the
max-depth guard converts into a flagged partial report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .condition import kappa_batch
from .interval import predicate_clause_batch, standard_subdivision, unit_box
from .poly import SparsePolynomial, evaluate_batch, gradient_batch, norm1

__all__ = [
    "SubdivisionReport",
    "pv_subdivide",
    "verify_output_boxes",
    "amortization_bound",
]


@dataclass
class SubdivisionReport:
    """Final subdivision plus worklist statistics.

    ``final_clauses[i]`` records which predicate clause ("value" or
    "gradient") accepted ``final_boxes[i]``.  ``per_depth_counts[k]`` counts
    the boxes processed at depth k.  ``terminated`` is False when the
    max-depth guard fired; the report then holds the partial state.
    """

    final_boxes: list = field(default_factory=list)
    final_clauses: list = field(default_factory=list)
    processed_count: int = 0
    max_depth_reached: int = 0
    per_depth_counts: list = field(default_factory=list)
    terminated: bool = True

    @property
    def final_count(self) -> int:
        return len(self.final_boxes)

    def total_volume(self) -> float:
        return float(sum(b.volume for b in self.final_boxes))


def pv_subdivide(f: SparsePolynomial, max_depth: int = 30) -> SubdivisionReport:
    """Subdivide the unit cube until every box passes the exclusion predicate.

    Stops early with ``terminated=False`` as soon as a failing box at depth
    ``max_depth`` would have to be split further.
    """
    if norm1(f) == 0.0:
        raise ValueError("cannot subdivide for the zero polynomial")
    if not 1 <= max_depth <= 50:
        raise ValueError(f"max_depth must lie in [1, 50], got {max_depth}")
    report = SubdivisionReport()
    # the FIFO worklist is processed level by level, which lets each level's
    # predicate evaluations run as a single vectorised batch
    level = [unit_box(f.n)]
    depth = 0
    while level:
        report.processed_count += len(level)
        report.max_depth_reached = depth
        report.per_depth_counts.append(len(level))
        failing = []
        for box, clause in zip(level, predicate_clause_batch(f, level)):
            if clause is not None:
                report.final_boxes.append(box)
                report.final_clauses.append(clause)
            else:
                failing.append(box)
        if not failing:
            break
        if depth == max_depth:
            report.terminated = False
            break
        level = [child for box in failing for child in standard_subdivision(box)]
        depth += 1
    return report


def verify_output_boxes(
    f: SparsePolynomial,
    report: SubdivisionReport,
    samples_per_box: int = 64,
    seed: int = 0,
) -> bool:
    """Sampling check of the semantic exclusion condition on every final box.

    A box verifies when the sampled values of f all share one strict sign, or
    when every pair of sampled gradient covectors has positive dot product.
    Returns the conjunction over boxes; a False return on a terminated report
    is a soundness violation.
    """
    rng = np.random.default_rng(seed)
    for box in report.final_boxes:
        points = box.sample(rng, samples_per_box)
        values = evaluate_batch(f, points)
        if np.all(values > 0.0) or np.all(values < 0.0):
            continue
        grads = gradient_batch(f, points)
        if np.min(grads @ grads.T) > 0.0:
            continue
        return False
    return True


def amortization_bound(f: SparsePolynomial, n_samples: int, seed: int = 0) -> float:
    """Monte Carlo estimate of 4^n * E[(d * sqrt(2n) * kappa(f, x))^n].

    The expectation is over x uniform on the cube; the quantity bounds the
    number of final boxes of ``pv_subdivide`` whenever it terminates.  The
    estimate diverges with n_samples when f has a singular zero in the cube.
    """
    if norm1(f) == 0.0:
        raise ValueError("bound undefined for the zero polynomial")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    points = rng.uniform(-1.0, 1.0, size=(n_samples, f.n))
    kappas = kappa_batch(f, points)
    scale = f.degree * math.sqrt(2 * f.n)
    with np.errstate(over="ignore"):
        integrand = (scale * kappas) ** f.n
    return float(4 ** f.n * np.mean(integrand))
