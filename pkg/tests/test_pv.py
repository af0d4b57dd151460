import math

import numpy as np
import pytest

from cubecond.interval import unit_box
from cubecond.poly import new_sparse
from cubecond.pv import (
    SubdivisionReport,
    amortization_bound,
    pv_subdivide,
    verify_output_boxes,
)
from helpers import random_poly

X = new_sparse(1, [((1,), 1.0)])
LINE2 = new_sparse(2, [((1, 0), 1.0), ((0, 1), 1.0)])
DOUBLE_ROOT = new_sparse(1, [((0,), 0.25), ((1,), -1.0), ((2,), 1.0)])
CIRCLE = new_sparse(2, [((2, 0), 1.0), ((0, 2), 1.0), ((0, 0), -0.25)])


def test_pv_linear_univariate():
    report = pv_subdivide(X, 10)
    assert report.terminated
    assert report.final_count == 2
    assert sorted(b.midpoint[0] for b in report.final_boxes) == [-0.5, 0.5]
    assert all(b.width == 1.0 for b in report.final_boxes)
    assert report.per_depth_counts == [1, 2]
    assert report.processed_count == 3


def test_pv_linear_bivariate():
    report = pv_subdivide(LINE2, 10)
    assert report.terminated
    assert report.final_count == 16
    assert all(b.width == 0.5 for b in report.final_boxes)
    assert report.max_depth_reached == 2
    assert report.per_depth_counts == [1, 4, 16]


def test_pv_singular_input_flagged():
    report = pv_subdivide(DOUBLE_ROOT, 12)
    assert not report.terminated


def test_pv_input_validation():
    with pytest.raises(ValueError):
        pv_subdivide(new_sparse(1, []), 10)
    with pytest.raises(ValueError):
        pv_subdivide(X, 0)
    with pytest.raises(ValueError):
        pv_subdivide(X, 51)


def test_pv_partition_of_unity_volume():
    for f in (X, LINE2, CIRCLE):
        report = pv_subdivide(f, 20)
        assert report.terminated
        assert report.total_volume() == pytest.approx(2.0 ** f.n, rel=1e-9)


def test_pv_determinism():
    a = pv_subdivide(CIRCLE, 20)
    b = pv_subdivide(CIRCLE, 20)
    assert [box.midpoint for box in a.final_boxes] == [box.midpoint for box in b.final_boxes]
    assert a.final_clauses == b.final_clauses
    assert a.per_depth_counts == b.per_depth_counts


def test_verify_output_boxes_accepts_sound_reports():
    for f in (X, LINE2, CIRCLE):
        report = pv_subdivide(f, 20)
        assert verify_output_boxes(f, report, 64) is True


def test_verify_output_boxes_rejects_corrupted_report():
    # the whole cube spans the circle's sign change and has opposing gradients
    corrupted = SubdivisionReport(
        final_boxes=[unit_box(2)],
        final_clauses=["value"],
        processed_count=1,
        max_depth_reached=0,
        per_depth_counts=[1],
        terminated=True,
    )
    assert verify_output_boxes(CIRCLE, corrupted, 128) is False


def test_verify_on_random_well_conditioned_draws():
    rng = np.random.default_rng(40)
    terminated = 0
    for _ in range(30):
        n = int(rng.integers(1, 3))
        f = random_poly(rng, n, 3 + n, 5, include_simplex=True)
        report = pv_subdivide(f, 10)
        if not report.terminated:
            continue
        terminated += 1
        assert verify_output_boxes(f, report, 48)
    assert terminated >= 20


def test_amortization_linear_value():
    # kappa(X, .) = 1 on the cube, so the estimate is exactly 4 * sqrt(2)
    estimate = amortization_bound(X, 100000, 1)
    assert 5.6 <= estimate <= 12.0
    assert estimate == pytest.approx(4.0 * math.sqrt(2.0), rel=1e-12)


def test_amortization_matches_kappa_moment_form():
    # 4^n E[(d sqrt(2n) kappa)^n] equals 2^(5n/2) n^(n/2) d^n E[kappa^n]
    rng = np.random.default_rng(41)
    from cubecond.condition import kappa_batch

    for _ in range(10):
        n = int(rng.integers(1, 3))
        f = random_poly(rng, n, 4, 5, include_simplex=True)
        seed = int(rng.integers(0, 2**31))
        est = amortization_bound(f, 20000, seed)
        pts = np.random.default_rng(seed).uniform(-1, 1, (20000, n))
        moment = float(np.mean(kappa_batch(f, pts) ** n))
        closed = 2.0 ** (2.5 * n) * n ** (n / 2.0) * f.degree ** n * moment
        assert est == pytest.approx(closed, rel=1e-9)


def test_amortization_diverges_for_singular_input():
    # the integrand is non-integrable at the singular zero; the seeded
    # estimate is far above any well-conditioned value at this sample size
    assert amortization_bound(DOUBLE_ROOT, 100000, 2) > 100.0


def test_box_count_below_amortization_estimate():
    n_samples = 40000
    estimate = amortization_bound(LINE2, n_samples, 3)
    report = pv_subdivide(LINE2, 20)
    assert report.final_count <= estimate * (1 + 3.0 / math.sqrt(n_samples))
