import math

import numpy as np
import pytest

from cubecond import random as models
from cubecond.poly import new_sparse, norm1

SUP_D5 = ((0,), (1,), (5,))
GAUSS = models.Gaussian(0.0, 1.0)
UNIF = models.Uniform(-1.0, 1.0)


def gaussian_model(support=SUP_D5, p=2.0):
    return models.RandomModel(n=1, support=support, dist=GAUSS, p=p)


def uniform_model(support=SUP_D5, p=2.0):
    return models.RandomModel(n=1, support=support, dist=UNIF, p=p)


def test_model_requires_simplex_support():
    with pytest.raises(ValueError):
        models.RandomModel(n=1, support=((1,), (5,)), dist=GAUSS)
    with pytest.raises(ValueError):
        models.RandomModel(n=2, support=((0, 0), (1, 0), (2, 2)), dist=GAUSS)
    with pytest.raises(ValueError):
        models.RandomModel(n=1, support=((0,), (0,), (1,)), dist=GAUSS)


def test_sampling_is_deterministic_and_keeps_support():
    m = gaussian_model()
    a = models.sample(m, (123, 0))
    b = models.sample(m, (123, 0))
    c = models.sample(m, (123, 1))
    assert np.array_equal(a.coefficients, b.coefficients)
    assert not np.array_equal(a.coefficients, c.coefficients)
    assert a.terms()[0][0] == (0,) and a.support_size == 3


def test_uniform_draws_are_bounded():
    m = uniform_model()
    for i in range(50):
        f = models.sample(m, (5, i))
        assert np.all(np.abs(f.coefficients) <= 1.0)


def test_gaussian_empirical_variance():
    m = gaussian_model()
    draws = np.array(
        [models.sample(m, (777, i)).coefficients for i in range(100000)]
    )
    variance = float(np.var(draws))
    n_samples = draws.size
    three_sigma = 3.0 * math.sqrt(2.0 / (n_samples - 1))
    assert abs(variance - 1.0) <= three_sigma


def test_gaussian_tail_constant_is_sqrt2():
    # the smallest K with P(|x| > t) <= 2 exp(-t^2/K^2) for all t >= K is
    # sqrt(2) for a standard normal: the constraint at t -> inf forces
    # K^2 >= 2, and K = sqrt(2) satisfies the two-sided Chernoff bound
    assert GAUSS.tail_constant(2.0) == pytest.approx(math.sqrt(2.0), rel=1e-6)
    assert math.isinf(GAUSS.tail_constant(3.0))


def test_uniform_model_constants_match_example():
    c = models.model_constants(uniform_model())
    assert c.K == 3.0
    assert c.rho == 0.5
    assert c.K * c.rho == 1.5  # equals |M|/2 exactly
    assert c.K * c.rho <= len(SUP_D5) / 2


def test_gaussian_model_constants():
    c = models.model_constants(gaussian_model())
    assert c.K == pytest.approx(3.0 * math.sqrt(2.0), rel=1e-6)
    assert c.rho == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-12)
    # the product is |M|/sqrt(pi) ~ 0.5642 |M|, above the universal floor
    assert c.K * c.rho == pytest.approx(3.0 / math.sqrt(math.pi), rel=1e-6)
    assert c.K * c.rho > (1 + 1) / 4


def test_constant_floors_hold_for_the_model_zoo():
    zoo = [
        gaussian_model(),
        uniform_model(),
        gaussian_model(p=1.0),
        uniform_model(p=64.0),
        models.RandomModel(
            n=1, support=SUP_D5, dist=models.WeibullSymmetric(p=1.0), p=1.0
        ),
        models.RandomModel(
            n=2,
            support=((0, 0), (1, 0), (0, 1), (2, 1)),
            dist=GAUSS,
            p=2.0,
        ),
    ]
    for m in zoo:
        c = models.model_constants(m)
        if math.isfinite(c.K):
            assert c.K * c.rho > (m.n + 1) / 4.0
        assert c.L * c.rho > 9.0 * (m.n + 1) / 50.0


def test_weibull_constants_and_sampling():
    w = models.WeibullSymmetric(p=1.0, scale=2.0)
    assert w.tail_constant(1.0) == 2.0
    assert w.density_bound() == 0.25
    rng = np.random.default_rng(0)
    draws = w.draw(rng, 200000)
    # survival of |x| at t: exp(-t/2)
    assert np.mean(np.abs(draws) > 2.0) == pytest.approx(math.exp(-1.0), abs=5e-3)
    assert abs(np.mean(np.sign(draws))) < 5e-3
    with pytest.raises(ValueError):
        models.WeibullSymmetric(p=0.5)


def test_smoothed_model_constants_and_draws():
    base = gaussian_model()
    f0 = new_sparse(1, [((0,), 1.0), ((1,), -2.0)])
    cb = models.model_constants(base)
    for sigma in (0.5, 1.0, 2.0):
        sm = models.smoothed_model(f0, sigma, base)
        cs = models.model_constants(sm)
        assert cs.K == pytest.approx(norm1(f0) * (1 + sigma * cb.K), rel=1e-12)
        assert cs.rho == pytest.approx(cb.rho / (sigma * norm1(f0)), rel=1e-12)
        assert cs.K * cs.rho == pytest.approx((cb.K + 1.0 / sigma) * cb.rho, rel=1e-12)
    # large-sigma limit recovers the base product
    huge = models.model_constants(models.smoothed_model(f0, 1e9, base))
    assert huge.K * huge.rho == pytest.approx(cb.K * cb.rho, rel=1e-8)
    # draws decompose as offset + scale * base draw
    sm = models.smoothed_model(f0, 1.0, base)
    ds = models.sample(sm, (3, 14))
    db = models.sample(base, (3, 14))
    assert np.allclose(
        ds.coefficients, np.array([1.0, -2.0, 0.0]) + 3.0 * db.coefficients
    )
    with pytest.raises(ValueError):
        models.smoothed_model(f0, 0.0, base)
    with pytest.raises(ValueError):
        models.smoothed_model(new_sparse(1, [((7,), 1.0)]), 1.0, base)


def test_tail_bound_local_value_and_clamp():
    m = uniform_model()
    raw = models.tail_bound_local(m, math.e, clamp=False)
    assert raw == pytest.approx(15.0 * 72.0 / math.e ** 2, rel=1e-12)
    assert models.tail_bound_local(m, math.e) == 1.0
    with pytest.raises(ValueError):
        models.tail_bound_local(m, 2.0)


def test_tail_bound_local_monotone_decreasing():
    m = uniform_model()
    grid = np.linspace(math.e, 500.0, 200)
    values = [models.tail_bound_local(m, float(t), clamp=False) for t in grid]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_tail_bound_p_variants():
    mg = gaussian_model()
    # at p = 2 with L = K the p-form coincides with the subgaussian form
    for t in (math.e, 10.0, 100.0):
        assert models.tail_bound_local_p(mg, t, clamp=False) == pytest.approx(
            models.tail_bound_local(mg, t, clamp=False), rel=1e-9
        )
    m1 = uniform_model(p=1.0)
    m2 = uniform_model(p=2.0)
    m64 = uniform_model(p=64.0)
    for t in (math.e, 10.0, 1000.0):
        v1 = models.tail_bound_local_p(m1, t, clamp=False)
        v2 = models.tail_bound_local_p(m2, t, clamp=False)
        v64 = models.tail_bound_local_p(m64, t, clamp=False)
        assert v1 >= v2 >= v64  # heavier declared tails give weaker bounds


def test_tail_bound_global():
    m = uniform_model()
    sharp, simplified = models.tail_bound_global(m, 100.0)
    assert sharp == pytest.approx(150.0 * (24.0 / math.sqrt(2.0)) ** 2 * math.log(100.0) / 100.0, rel=1e-12)
    assert simplified == pytest.approx(150.0 * 15.0 ** 2 / 10.0, rel=1e-12)
    assert sharp <= simplified
    for t in np.linspace(2 * math.e + 1e-6, 1e4, 100):
        s, q = models.tail_bound_global(m, float(t))
        assert s <= q
    with pytest.raises(ValueError):
        models.tail_bound_global(m, 2 * math.e)


def test_expected_boxes_bounds():
    sup = ((0,), (1,), (2,))
    bg = models.expected_boxes_bound(models.RandomModel(n=1, support=sup, dist=GAUSS))
    bu = models.expected_boxes_bound(models.RandomModel(n=1, support=sup, dist=UNIF))
    assert bg.specialized == 86400.0
    assert bu.specialized == 221184.0
    assert bg.general > 0 and bu.general > 0
    # for uniform models K*rho = |M|/2, and the general constant then
    # dominates the gaussian specialisation
    for m_size in range(3, 9):
        support = tuple((k,) for k in range(m_size - 1)) + ((12,),)
        mu = models.RandomModel(n=1, support=support, dist=UNIF)
        general = models.expected_boxes_bound(mu).general
        mg = models.RandomModel(n=1, support=support, dist=GAUSS)
        assert general >= models.expected_boxes_bound(mg).specialized * (1 - 1e-12)


def test_moment_bound_values():
    m = uniform_model()
    expected = 2.0 * 1 * 5 * 3 * (7.0 * math.sqrt(2.0) * 1.5) ** 2
    assert models.moment_bound_kappa_n(m) == pytest.approx(expected, rel=1e-12)
    bigger = uniform_model(support=((0,), (1,), (5,), (7,)))
    assert models.moment_bound_kappa_n(bigger) > models.moment_bound_kappa_n(m)
    # p-variant at p = 2 stays within a factor two of the subgaussian form
    mg = gaussian_model()
    ratio = models.moment_bound_kappa_n_p(mg) / models.moment_bound_kappa_n(mg)
    assert 1.0 <= ratio <= 2.0


def test_descartes_moment_bound_values():
    m = gaussian_model()
    c = models.model_constants(m)
    base = 16.0 * 1 * 3 * (math.log2(5) + abs(math.log2(c.L * c.rho)) + 1.0)
    assert models.descartes_moment_bound(m, 1) == pytest.approx(base, rel=1e-12)
    assert models.descartes_moment_bound(m, 2) == pytest.approx(
        (2 * base) ** 2, rel=1e-12
    )
    with pytest.raises(ValueError):
        models.descartes_moment_bound(m, 0)


def test_model_json_round_trip():
    m = models.load_model(
        {
            "n": 1,
            "support": [[0], [1], [5]],
            "dist": {"kind": "gaussian", "mean": 0.0, "sd": 1.0},
            "p": 2,
        }
    )
    assert m.support == SUP_D5 and m.dist == GAUSS and m.p == 2.0
    again = models.load_model(models.model_to_dict(m))
    assert again == m


@pytest.mark.parametrize(
    "payload, needle",
    [
        ({"support": [[0]], "dist": {"kind": "gaussian"}}, "'n'"),
        ({"n": 1, "dist": {"kind": "gaussian"}}, "'support'"),
        ({"n": 1, "support": [[0], [1]]}, "'dist'"),
        ({"n": 1, "support": [[0], [1]], "dist": {"kind": "cauchy"}}, "kind"),
        ({"n": 1, "support": [[0], [1]], "dist": {"kind": "gaussian"}, "extra": 1}, "extra"),
        ({"n": 1, "support": [[0], [-1]], "dist": {"kind": "gaussian"}}, "support"),
    ],
)
def test_model_loader_names_offending_field(payload, needle):
    with pytest.raises(ValueError, match=needle):
        models.load_model(payload)
