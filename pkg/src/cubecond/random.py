"""Random sparse polynomial models and their closed-form probabilistic bounds.

A model fixes a support M in N^n that contains 0 and every unit vector e_i,
an i.i.d. coefficient distribution and a tail exponent p.  Three constants
drive all bounds:

    K : sum over M of per-coefficient subgaussian constants
        (smallest K_a with P(|x| > t) <= 2 exp(-t^2 / K_a^2) for all t >= K_a)
    L : same with exp(-t^p / L_a^p), the p-tail constant
    rho : geometric mean of the anti-concentration constants (density bounds)
        of the coefficients at 0, e_1, ..., e_n

Subgaussian/tail constants with no convenient closed form are computed
numerically as sup_t t / ln(2 / P(|x| > t))^(1/p) over a wide log grid of t
(the definition is algorithmic) and cached per distribution.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr

from .poly import SparsePolynomial, new_sparse, norm1

__all__ = [
    "Gaussian",
    "Uniform",
    "WeibullSymmetric",
    "RandomModel",
    "ModelConstants",
    "BoxCountBound",
    "sample",
    "trial_rng",
    "model_constants",
    "smoothed_model",
    "tail_bound_local",
    "tail_bound_local_p",
    "tail_bound_global",
    "expected_boxes_bound",
    "moment_bound_kappa_n",
    "moment_bound_kappa_n_p",
    "descartes_moment_bound",
    "load_model",
    "model_to_dict",
]


# ---------------------------------------------------------------------------
# coefficient distributions
# ---------------------------------------------------------------------------

def _tail_constant_numeric(log2_over_survival, p: float, t_max: float) -> float:
    """sup over t of t / ln(2 / P(|x| > t))^(1/p) on a dense log grid."""
    t = np.geomspace(1e-4, t_max, 4096)
    denom = log2_over_survival(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = t / denom ** (1.0 / p)
    g = g[np.isfinite(g)]
    return float(np.max(g))


@functools.lru_cache(maxsize=None)
def _gaussian_tail_constant(p: float) -> float:
    """Tail constant of the standard normal for exponent p (infinite for p > 2)."""
    if p > 2.0:
        return math.inf
    # ln(2 / P(|x| > t)) = -log(Phi(-t)) for the standard normal
    return _tail_constant_numeric(lambda t: -log_ndtr(-t), p, t_max=1e5)


@functools.lru_cache(maxsize=None)
def _weibull_tail_constant(shape: float, p: float) -> float:
    """Tail constant of a unit-scale symmetric Weibull(shape) for exponent p."""
    if p > shape:
        return math.inf
    if p == shape:
        return 1.0
    return _tail_constant_numeric(lambda t: math.log(2.0) + t ** shape, p, t_max=1e6)


@dataclass(frozen=True)
class Gaussian:
    mean: float = 0.0
    sd: float = 1.0

    def __post_init__(self):
        if self.sd <= 0:
            raise ValueError("gaussian sd must be positive")

    kind = "gaussian"

    def draw(self, rng, size):
        return rng.normal(self.mean, self.sd, size)

    def density_bound(self) -> float:
        return 1.0 / (math.sqrt(2.0 * math.pi) * self.sd)

    def tail_constant(self, p: float) -> float:
        base = self.sd * _gaussian_tail_constant(p)
        # a shift adds at most |mean| to any valid tail constant
        return abs(self.mean) + base


@dataclass(frozen=True)
class Uniform:
    lo: float = -1.0
    hi: float = 1.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("uniform bounds must satisfy lo < hi")

    kind = "uniform"

    def draw(self, rng, size):
        return rng.uniform(self.lo, self.hi, size)

    def density_bound(self) -> float:
        return 1.0 / (self.hi - self.lo)

    def tail_constant(self, p: float) -> float:
        # bounded support: the magnitude bound is a valid constant for every p
        return max(abs(self.lo), abs(self.hi))


@dataclass(frozen=True)
class WeibullSymmetric:
    """Symmetric variable with survival P(|x| > t) = exp(-(t/scale)^p)."""

    p: float
    scale: float = 1.0

    def __post_init__(self):
        if self.p < 1.0:
            raise ValueError("weibull shape must be >= 1 (bounded density)")
        if self.scale <= 0:
            raise ValueError("weibull scale must be positive")

    kind = "weibull_symmetric"

    def draw(self, rng, size):
        # inverse CDF of the magnitude, then an independent random sign
        u = rng.random(size)
        magnitude = self.scale * (-np.log1p(-u)) ** (1.0 / self.p)
        signs = rng.integers(0, 2, size) * 2 - 1
        return signs * magnitude

    def density_bound(self) -> float:
        if self.p == 1.0:
            return 1.0 / (2.0 * self.scale)
        q = (self.p - 1.0) / self.p
        return (self.p / (2.0 * self.scale)) * q ** q * math.exp(-q)

    def tail_constant(self, p: float) -> float:
        return self.scale * _weibull_tail_constant(self.p, p)


_DIST_KINDS = {"gaussian": Gaussian, "uniform": Uniform, "weibull_symmetric": WeibullSymmetric}


# ---------------------------------------------------------------------------
# random models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RandomModel:
    """Coefficient model on a fixed support; optionally shifted and rescaled.

    A plain model draws i.i.d. coefficients from ``dist``.  A smoothed model
    (built by ``smoothed_model``) draws offset_a + scale * dist per
    coefficient.  The support must contain the zero exponent and all unit
    exponents, which guarantees the constraint rows used in the tail
    arguments stay nondegenerate.
    """

    n: int
    support: tuple
    dist: object
    p: float = 2.0
    offsets: tuple | None = None
    scale: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        seen = set()
        for alpha in self.support:
            if len(alpha) != self.n or any(a < 0 for a in alpha):
                raise ValueError(f"bad support exponent {alpha}")
            if alpha in seen:
                raise ValueError(f"duplicate support exponent {alpha}")
            seen.add(alpha)
        required = [(0,) * self.n] + [
            tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n)
        ]
        for alpha in required:
            if alpha not in seen:
                raise ValueError(f"support must contain {alpha}")
        if self.p < 1.0:
            raise ValueError("tail exponent p must be >= 1")
        if self.scale <= 0.0:
            raise ValueError("scale must be positive")
        if self.offsets is not None and len(self.offsets) != len(self.support):
            raise ValueError("offsets must align with the support")

    @property
    def support_size(self) -> int:
        return len(self.support)

    @property
    def degree(self) -> int:
        return max(1, max(sum(alpha) for alpha in self.support))

    def is_plain(self, dist_type=None) -> bool:
        plain = self.offsets is None and self.scale == 1.0
        if dist_type is None:
            return plain
        return plain and isinstance(self.dist, dist_type)


@dataclass(frozen=True)
class ModelConstants:
    K: float
    rho: float
    L: float


def trial_rng(seed, trial: int | None = None) -> np.random.Generator:
    """Counter-based stream: trial i of base seed s is the stream (s, i).

    Streams for distinct trials are independent and order-free, so parallel
    experiment workers reproduce the single-worker draws exactly.
    """
    entropy = seed if trial is None else (seed, trial)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def sample(model: RandomModel, seed) -> SparsePolynomial:
    """One draw from the model; deterministic in ``seed``.

    ``seed`` may be an int or a tuple such as (base_seed, trial_index).  The
    returned polynomial keeps the full support, including any coefficients
    that happen to be zero.
    """
    rng = trial_rng(seed)
    coeffs = np.asarray(model.dist.draw(rng, model.support_size), dtype=np.float64)
    coeffs = coeffs * model.scale
    if model.offsets is not None:
        coeffs = coeffs + np.asarray(model.offsets)
    return new_sparse(model.n, zip(model.support, coeffs))


def model_constants(model: RandomModel) -> ModelConstants:
    """Aggregate (K, rho, L) for the model, checking the universal lower bounds.

    Per coefficient: K_a = |offset_a| + scale * K(dist) and likewise for L_a;
    rho_a = density_bound(dist) / scale (shifts do not change density
    bounds).  K aggregates by summation, rho by the geometric mean over the
    coefficients of 1, X_1, ..., X_n.
    """
    k_dist = model.dist.tail_constant(2.0)
    l_dist = model.dist.tail_constant(model.p)
    offsets = model.offsets if model.offsets is not None else (0.0,) * model.support_size
    abs_offsets = [abs(o) for o in offsets]
    K = sum(abs_offsets) + model.support_size * model.scale * k_dist
    L = sum(abs_offsets) + model.support_size * model.scale * l_dist
    rho = model.dist.density_bound() / model.scale

    floor_k = (model.n + 1) / 4.0
    if math.isfinite(K) and not K * rho > floor_k:
        raise ValueError(
            f"inconsistent constants: K*rho = {K * rho:.6g} <= {floor_k:.6g}"
        )
    floor_l = 9.0 * (model.n + 1) / 50.0
    if math.isfinite(L) and not L * rho > floor_l:
        raise ValueError(
            f"inconsistent constants: L*rho = {L * rho:.6g} <= {floor_l:.6g}"
        )
    return ModelConstants(K=K, rho=rho, L=L)


def smoothed_model(f0: SparsePolynomial, sigma: float, base: RandomModel) -> RandomModel:
    """Model drawing f0 + sigma * norm1(f0) * (base draw).

    The constants transform exactly: K -> norm1(f0) * (1 + sigma * K_base)
    and rho -> rho_base / (sigma * norm1(f0)), so K*rho = (K_base + 1/sigma)
    * rho_base, which recovers the plain model as sigma -> inf.
    """
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    if not base.is_plain():
        raise ValueError("base model must be unshifted and unscaled")
    if f0.n != base.n:
        raise ValueError("dimension mismatch between f0 and the base model")
    scale = sigma * norm1(f0)
    if scale == 0.0:
        raise ValueError("f0 must be nonzero")
    coeff_by_alpha = {alpha: c for alpha, c in f0.terms()}
    for alpha in coeff_by_alpha:
        if alpha not in set(base.support):
            raise ValueError(f"f0 exponent {alpha} outside the base support")
    offsets = tuple(coeff_by_alpha.get(alpha, 0.0) for alpha in base.support)
    return RandomModel(
        n=base.n,
        support=base.support,
        dist=base.dist,
        p=base.p,
        offsets=offsets,
        scale=scale,
    )


# ---------------------------------------------------------------------------
# closed-form bound formulas
# ---------------------------------------------------------------------------

def _check_t(t: float, floor: float, name: str) -> None:
    if not t >= floor:
        raise ValueError(f"{name} requires t >= {floor:.6g}, got {t}")


def tail_bound_local(model: RandomModel, t: float, clamp: bool = True) -> float:
    """Survival bound for the local condition number at a fixed cube point.

    For t >= e,
        P(kappa >= t) <= sqrt(n) d^n |M| (8 K rho / sqrt(n+1))^(n+1)
                          * ln(t)^((n+1)/2) / t^(n+1).
    With ``clamp`` the value is cut at 1 for reporting.
    """
    _check_t(t, math.e, "the local tail bound")
    c = model_constants(model)
    n, d, m = model.n, model.degree, model.support_size
    value = (
        math.sqrt(n)
        * d ** n
        * m
        * (8.0 * c.K * c.rho / math.sqrt(n + 1)) ** (n + 1)
        * math.log(t) ** ((n + 1) / 2)
        / t ** (n + 1)
    )
    return min(1.0, value) if clamp else value


def tail_bound_local_p(model: RandomModel, t: float, clamp: bool = True) -> float:
    """p-tail variant: (8 L rho / (n+1)^(1-1/p))^(n+1) * ln(t)^((n+1)/p) / t^(n+1)."""
    _check_t(t, math.e, "the local tail bound")
    c = model_constants(model)
    n, d, m, p = model.n, model.degree, model.support_size, model.p
    value = (
        math.sqrt(n)
        * d ** n
        * m
        * (8.0 * c.L * c.rho / (n + 1) ** (1.0 - 1.0 / p)) ** (n + 1)
        * math.log(t) ** ((n + 1) / p)
        / t ** (n + 1)
    )
    return min(1.0, value) if clamp else value


def tail_bound_global(model: RandomModel, t: float) -> tuple[float, float]:
    """Survival bounds for the global condition number, for t > 2e.

    Returns (sharp, simplified):
        sharp      = 2 sqrt(n) d^(2n) |M| (16 K rho / sqrt(n+1))^(n+1)
                     * ln(t)^((n+1)/2) / t
        simplified = 2 sqrt(n) d^(2n) |M| (10 K rho)^(n+1) / sqrt(t)
    The sharp form never exceeds the simplified one on the valid range.
    """
    if not t > 2.0 * math.e:
        raise ValueError(f"the global tail bound requires t > 2e, got {t}")
    c = model_constants(model)
    n, d, m = model.n, model.degree, model.support_size
    common = 2.0 * math.sqrt(n) * d ** (2 * n) * m
    sharp = (
        common
        * (16.0 * c.K * c.rho / math.sqrt(n + 1)) ** (n + 1)
        * math.log(t) ** ((n + 1) / 2)
        / t
    )
    simplified = common * (10.0 * c.K * c.rho) ** (n + 1) / math.sqrt(t)
    if sharp > simplified * (1 + 1e-12):
        raise AssertionError("sharp global bound exceeded the simplified form")
    return sharp, simplified


@dataclass(frozen=True)
class BoxCountBound:
    """General bound plus the sharper constant available for the two named models."""

    general: float
    specialized: float | None = None

    @property
    def value(self) -> float:
        return self.general if self.specialized is None else self.specialized


def expected_boxes_bound(model: RandomModel) -> BoxCountBound:
    """Bound on the expected number of final subdivision boxes.

    General form: 2 n^(3/2) d^(2n) |M| (20 (n+1) K rho)^(n+1).  Models that
    are exactly standard gaussian or uniform on [-1, 1] also get their
    specialised constants:
        gaussian: 2 n^(3/2) (10 (n+1))^(n+1) d^(2n) |M|^(n+2)
        uniform:  2 n 32^(n+1) d^(2n) |M|^(n+2)
    """
    c = model_constants(model)
    n, d, m = model.n, model.degree, model.support_size
    general = (
        2.0 * n ** 1.5 * d ** (2 * n) * m * (20.0 * (n + 1) * c.K * c.rho) ** (n + 1)
    )
    specialized = None
    if model.is_plain(Gaussian) and model.dist == Gaussian(0.0, 1.0):
        specialized = 2.0 * n ** 1.5 * (10.0 * (n + 1)) ** (n + 1) * d ** (2 * n) * m ** (n + 2)
    elif model.is_plain(Uniform) and model.dist == Uniform(-1.0, 1.0):
        specialized = 2.0 * n * 32.0 ** (n + 1) * d ** (2 * n) * m ** (n + 2)
    return BoxCountBound(general=general, specialized=specialized)


def moment_bound_kappa_n(model: RandomModel) -> float:
    """Bound 2 n^2 d^n |M| (7 sqrt(n+1) K rho)^(n+1) on E[kappa(f, x)^n]."""
    c = model_constants(model)
    n, d, m = model.n, model.degree, model.support_size
    return 2.0 * n ** 2 * d ** n * m * (7.0 * math.sqrt(n + 1) * c.K * c.rho) ** (n + 1)


def moment_bound_kappa_n_p(model: RandomModel) -> float:
    """p-tail variant of the n-th moment bound."""
    c = model_constants(model)
    n, d, m, p = model.n, model.degree, model.support_size, model.p
    factor = (
        8.0
        * math.e ** (1.0 - 1.0 / p)
        / p ** (1.0 / p)
        * n ** (1.0 / p - 0.5)
        * (n + 1) ** (1.0 / p)
        * c.L
        * c.rho
    )
    return 2.0 * n ** 2 * (n + 1) ** (1.0 / p - 0.5) * d ** n * m * factor ** (n + 1)


def descartes_moment_bound(model: RandomModel, k: int) -> float:
    """Bound (C k |M| (log2 d + |log2(L rho)| + 1))^k on the k-th tree-size moment.

    C = 16 is an artifact constant validated by experiment, not proven.
    """
    if k < 1:
        raise ValueError("moment order k must be >= 1")
    c = model_constants(model)
    m, d = model.support_size, model.degree
    base = 16.0 * k * m * (math.log2(d) + abs(math.log2(c.L * c.rho)) + 1.0)
    return base ** k


# ---------------------------------------------------------------------------
# JSON model files:
#   {"n": 1, "support": [[0], [1], [5]], "dist": {"kind": "gaussian",
#    "mean": 0.0, "sd": 1.0}, "p": 2}
# ---------------------------------------------------------------------------

def load_model(source) -> RandomModel:
    """Read a model from a JSON file path, file object or parsed dict."""
    if isinstance(source, dict):
        obj = source
    elif hasattr(source, "read"):
        obj = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError("model file: top-level value must be an object")
    for fieldname in ("n", "support", "dist"):
        if fieldname not in obj:
            raise ValueError(f"model file: missing field '{fieldname}'")
    n = obj["n"]
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"model file: field 'n' must be a positive integer, got {n!r}")
    if not isinstance(obj["support"], list) or not obj["support"]:
        raise ValueError("model file: field 'support' must be a nonempty list")
    support = []
    for idx, alpha in enumerate(obj["support"]):
        if (
            not isinstance(alpha, list)
            or len(alpha) != n
            or any((not isinstance(a, int)) or a < 0 for a in alpha)
        ):
            raise ValueError(
                f"model file: support[{idx}] must be a list of {n} nonnegative integers"
            )
        support.append(tuple(alpha))
    dist_obj = obj["dist"]
    if not isinstance(dist_obj, dict) or "kind" not in dist_obj:
        raise ValueError("model file: field 'dist' must be an object with a 'kind'")
    kind = dist_obj["kind"]
    if kind not in _DIST_KINDS:
        raise ValueError(f"model file: dist.kind must be one of {sorted(_DIST_KINDS)}")
    params = {k: v for k, v in dist_obj.items() if k != "kind"}
    try:
        dist = _DIST_KINDS[kind](**params)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"model file: bad dist parameters: {exc}") from None
    p = obj.get("p", 2)
    if not isinstance(p, (int, float)) or p < 1:
        raise ValueError(f"model file: field 'p' must be a number >= 1, got {p!r}")
    extras = set(obj) - {"n", "support", "dist", "p"}
    if extras:
        raise ValueError(f"model file: unknown field '{sorted(extras)[0]}'")
    return RandomModel(n=n, support=tuple(support), dist=dist, p=float(p))


def model_to_dict(model: RandomModel) -> dict:
    dist = {"kind": model.dist.kind}
    for key, value in vars(model.dist).items():
        dist[key] = value
    out = {
        "n": model.n,
        "support": [list(a) for a in model.support],
        "dist": dist,
        "p": model.p,
    }
    return out
