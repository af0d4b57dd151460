"""The 1-norm local condition number on the cube and derived quantities.

For a nonzero polynomial f and a point x of [-1, 1]^n,

    kappa(f, x) = norm1(f) / max(|f(x)|, norm1(d_x f) / d),

with d the (clamped) degree.  kappa is scale invariant, at least 1 on the
cube, and infinite exactly at singular zeros of f.  The global condition
number is the maximum of kappa over the cube; here it is enclosed by
evaluating on a finite grid and padding with the Lipschitz constant of
x -> 1/kappa(f, x).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .poly import (
    SparsePolynomial,
    evaluate,
    evaluate_batch,
    gradient,
    gradient_batch,
    new_sparse,
    norm1,
    partial_derivative,
    to_dense,
)

__all__ = [
    "GlobalConditionEnclosure",
    "EstimateInapplicableError",
    "SupportTooSmallError",
    "local_condition",
    "kappa_batch",
    "global_condition",
    "gamma_bound",
    "gamma_exact_univariate",
    "dist1_to_sigma_x",
    "local_size_bound",
]


class EstimateInapplicableError(ValueError):
    """The hypothesis of the derivative estimate does not hold at this point."""


class SupportTooSmallError(ValueError):
    """The support cannot realise a singularity at the requested point."""


@dataclass(frozen=True)
class GlobalConditionEnclosure:
    """Certified two-sided enclosure of the global condition number.

    ``lower`` is the maximum of kappa over the evaluation grid, ``upper`` the
    Lipschitz-padded certificate (math.inf when the padding swallows the
    whole range), ``grid_eps`` the covering radius of the grid used.
    """

    lower: float
    upper: float
    grid_eps: float


def _check_nonzero(f: SparsePolynomial) -> float:
    nf = norm1(f)
    if nf == 0.0:
        raise ValueError("condition number of the zero polynomial is undefined")
    return nf


def local_condition(f: SparsePolynomial, x) -> float:
    """kappa(f, x); math.inf iff x is a singular zero of f."""
    nf = _check_nonzero(f)
    fx = abs(evaluate(f, x))
    gx = float(np.abs(gradient(f, x)).sum())
    denom = max(fx, gx / f.degree)
    if denom == 0.0:
        return math.inf
    return nf / denom


def kappa_batch(f: SparsePolynomial, points) -> np.ndarray:
    """Vectorised kappa(f, x) over rows of ``points``."""
    nf = _check_nonzero(f)
    values = np.abs(evaluate_batch(f, points))
    grad_norms = np.abs(gradient_batch(f, points)).sum(axis=1)
    denom = np.maximum(values, grad_norms / f.degree)
    with np.errstate(divide="ignore"):
        return np.where(denom > 0.0, nf / denom, np.inf)


def _grid_axes(grid_eps: float) -> np.ndarray:
    # ceil(1/eps)+1 evenly spaced points give covering radius <= eps on [-1, 1]
    points_per_axis = math.ceil(1.0 / grid_eps) + 1
    return np.linspace(-1.0, 1.0, points_per_axis)


def global_condition(f: SparsePolynomial, grid_eps: float) -> GlobalConditionEnclosure:
    """Enclose max kappa(f, x) over the cube using a grid of covering radius grid_eps.

    The lower end is the grid maximum.  Since x -> 1/kappa(f, x) is
    d-Lipschitz for the infinity norm, 1/kappa(f) >= 1/lower - d*grid_eps;
    when that is positive its reciprocal is a certified upper bound,
    otherwise the upper end is reported as math.inf.
    """
    _check_nonzero(f)
    if not 0.0 < grid_eps < 1.0:
        raise ValueError(f"grid_eps must lie in (0, 1), got {grid_eps}")
    if f.n > 3:
        raise ValueError("certified global enclosure supports n <= 3")
    axes = _grid_axes(grid_eps)
    if f.n == 1:
        dense = to_dense(f)
        values = np.polynomial.polynomial.polyval(axes, dense)
        deriv = np.polynomial.polynomial.polyval(
            axes, np.polynomial.polynomial.polyder(dense)
        )
        denom = np.maximum(np.abs(values), np.abs(deriv) / f.degree)
        with np.errstate(divide="ignore"):
            kappas = np.where(denom > 0.0, norm1(f) / denom, np.inf)
    else:
        mesh = np.meshgrid(*([axes] * f.n), indexing="ij")
        points = np.stack([m.ravel() for m in mesh], axis=1)
        kappas = kappa_batch(f, points)
    lower = float(np.max(kappas))
    if math.isinf(lower):
        return GlobalConditionEnclosure(math.inf, math.inf, grid_eps)
    slack = 1.0 / lower - f.degree * grid_eps
    upper = 1.0 / slack if slack > 0.0 else math.inf
    return GlobalConditionEnclosure(lower, upper, grid_eps)


def gamma_bound(f: SparsePolynomial, x) -> float:
    """Condition-based bound sqrt(n) * (d - 1) * kappa(f, x) / 2 on Smale's gamma.

    Valid when kappa(f, x) * |f(x)| / norm1(f) < 1, i.e. when the gradient
    term realises the denominator of kappa; otherwise raises
    EstimateInapplicableError.
    """
    nf = _check_nonzero(f)
    fx = abs(evaluate(f, x))
    gx = float(np.abs(gradient(f, x)).sum())
    if not fx < gx / f.degree:
        raise EstimateInapplicableError(
            "derivative estimate needs kappa(f,x) * |f(x)| / norm1(f) < 1"
        )
    kappa = nf / (gx / f.degree)
    return math.sqrt(f.n) * (f.degree - 1) * kappa / 2


def gamma_exact_univariate(f: SparsePolynomial, x: float) -> float:
    """Smale's gamma for univariate f at x with f'(x) != 0.

    gamma = max over k >= 2 of (|f^(k)(x)| / (k! |f'(x)|))^(1/(k-1)).  The
    normalised derivatives f^(k)/k! are built by repeated formal
    differentiation divided by k, which keeps magnitudes at binomial scale.
    """
    if f.n != 1:
        raise ValueError("exact gamma is implemented for univariate polynomials only")
    _check_nonzero(f)
    deriv = partial_derivative(f, 0)
    f1 = evaluate(deriv, x)
    if f1 == 0.0:
        raise ValueError("gamma requires f'(x) != 0")
    best = 0.0
    taylor = deriv  # holds f^(k) / k! for the current k
    for k in range(2, f.degree + 1):
        raw = partial_derivative(taylor, 0)
        taylor = new_sparse(1, [(alpha, c / k) for alpha, c in raw.terms()])
        tk = abs(evaluate(taylor, x))
        if tk > 0.0:
            best = max(best, (tk / abs(f1)) ** (1.0 / (k - 1)))
    return best


def _constraint_matrix(f: SparsePolynomial, x) -> tuple[np.ndarray, np.ndarray]:
    """Rows: evaluation and the n partial derivatives, one column per support exponent."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    m = f.support_size
    A = np.zeros((f.n + 1, m))
    for j, alpha in enumerate(f.exponents):
        A[0, j] = float(np.prod(x ** alpha))
        for i in range(f.n):
            if alpha[i] > 0:
                beta = alpha.copy()
                beta[i] -= 1
                A[1 + i, j] = alpha[i] * float(np.prod(x ** beta))
    b = np.empty(f.n + 1)
    b[0] = evaluate(f, x)
    b[1:] = gradient(f, x)
    return A, b


def dist1_to_sigma_x(f: SparsePolynomial, x) -> float:
    """1-norm distance from f to the polynomials (on the same support) singular at x.

    Minimises norm1(delta) subject to (f - delta)(x) = 0 and
    grad (f - delta)(x) = 0, with delta supported on the support of f.  The
    minimum of this linear program is attained at a basic solution whose
    support has at most n+1 exponents with independent constraint columns,
    so all column subsets of size <= n+1 are enumerated and solved by least
    squares with a consistency check; no external solver is involved
    (support sizes here are small).
    """
    _check_nonzero(f)
    A, b = _constraint_matrix(f, x)
    b_norm = float(np.abs(b).sum())
    if b_norm == 0.0:
        return 0.0
    rows, m = A.shape
    scale = float(np.abs(A).max()) + b_norm
    best = math.inf
    for size in range(1, min(rows, m) + 1):
        for subset in itertools.combinations(range(m), size):
            sub = A[:, subset]
            delta = np.linalg.lstsq(sub, b, rcond=None)[0]
            residual = float(np.abs(sub @ delta - b).max())
            if residual > 1e-9 * scale * (1.0 + float(np.abs(delta).max())):
                continue
            best = min(best, float(np.abs(delta).sum()))
    if math.isinf(best):
        raise SupportTooSmallError(
            "support too small: no perturbation on the support is singular at x"
        )
    return best


def local_size_bound(f: SparsePolynomial, x) -> float:
    """Volume threshold (d * sqrt(2n) * kappa(f, x))^(-n); 0 at singular points.

    Any box through x small enough to beat this volume already satisfies the
    exclusion predicate, which is what drives the subdivision complexity
    accounting.
    """
    kappa = local_condition(f, x)
    if math.isinf(kappa):
        return 0.0
    return (f.degree * math.sqrt(2 * f.n) * kappa) ** (-f.n)
