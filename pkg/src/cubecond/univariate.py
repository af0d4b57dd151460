"""Univariate real root isolation on [-1, 1] and separation machinery.

The isolator is a bisection solver driven by coefficient sign variations:
each interval [a, b] is mapped onto [0, inf) by the Moebius substitution
(reverse the [a, b]-normalised coefficients, then shift by one) and the sign
variation count v of the result bounds the number of roots in the open
interval.  v = 0 discards the interval, v = 1 certifies exactly one simple
root, v >= 2 bisects.  The root oracle finds all complex roots by
simultaneous Aberth-Ehrlich iteration on the dense coefficient vector.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npp

from .poly import SparsePolynomial, norm1, to_dense

__all__ = [
    "TreeStats",
    "IsolationResult",
    "SeparationEstimate",
    "HypothesisViolatedError",
    "OracleFailedError",
    "sign_variations",
    "taylor_shift",
    "descartes_isolate",
    "separation_oracle",
    "oracle_roots",
    "aberth_roots",
    "tree_size_bound",
    "separation_lower_bound",
    "eps_separation_lower_bound",
    "js_runtime_bound",
    "js_condition_bound",
]

MAX_DENSE_DEGREE = 512


class HypothesisViolatedError(ValueError):
    """A bound was requested outside the regime where it is proved."""


class OracleFailedError(RuntimeError):
    """The simultaneous root iteration did not converge."""


@dataclass
class TreeStats:
    nodes: int = 0
    depth: int = 0
    per_depth: list = field(default_factory=list)

    def count(self, depth: int) -> None:
        self.nodes += 1
        self.depth = max(self.depth, depth)
        while len(self.per_depth) <= depth:
            self.per_depth.append(0)
        self.per_depth[depth] += 1


@dataclass
class IsolationResult:
    """Isolating intervals, exact bisection-point roots and tree statistics.

    Every reported (lo, hi) carries exactly one simple root and satisfies
    f(lo) * f(hi) < 0.  Roots hit exactly by a bisection point (or by an
    endpoint of [-1, 1]) are listed in ``exact_roots`` instead.  ``complete``
    is False when the depth guard left some interval unresolved; those
    intervals are listed in ``unresolved``.
    """

    intervals: list
    exact_roots: list
    tree: TreeStats
    complete: bool = True
    unresolved: list = field(default_factory=list)

    @property
    def root_count(self) -> int:
        return len(self.intervals) + len(self.exact_roots)


@dataclass(frozen=True)
class SeparationEstimate:
    """Pairwise root distances: delta over real roots in [-1, 1], delta_eps
    over all complex roots within distance eps of the interval."""

    delta: float
    delta_eps: float
    eps: float


def sign_variations(coeffs) -> int:
    """Number of sign changes in a coefficient sequence, zeros deleted."""
    count = 0
    previous = 0
    for c in coeffs:
        if c == 0:
            continue
        sign = 1 if c > 0 else -1
        if previous != 0 and sign != previous:
            count += 1
        previous = sign
    return count


# ---------------------------------------------------------------------------
# dense coefficient transforms (ascending order throughout)
# ---------------------------------------------------------------------------

_PASCAL_CACHE: dict[int, np.ndarray] = {}


def _pascal(size: int) -> np.ndarray:
    """Matrix P[k, j] = C(k, j) for 0 <= j, k < size."""
    if size not in _PASCAL_CACHE:
        P = np.zeros((size, size))
        P[:, 0] = 1.0
        for k in range(1, size):
            P[k, 1:] = P[k - 1, 1:] + P[k - 1, :-1]
        _PASCAL_CACHE[size] = P
    return _PASCAL_CACHE[size]


def taylor_shift(c, a: float) -> np.ndarray:
    """Coefficients of p(x + a) from ascending coefficients of p."""
    c = np.asarray(c, dtype=np.float64)
    size = len(c)
    if size == 1:
        return c.copy()
    P = _pascal(size)
    # b_j = sum_{k >= j} c_k C(k, j) a^(k - j)
    pow_vec = a ** np.arange(size)
    powers = np.zeros((size, size))
    for j in range(size):
        powers[j:, j] = pow_vec[: size - j]
    return c @ (P * powers)


# The bisection solver transforms coefficients in exact integer arithmetic.
# Binary floating-point coefficients are dyadic rationals, so a common
# power-of-two scaling turns them into integers; all node operations below
# (scalings by powers of two and shifts by one) stay integral.  Variation
# counts are then exact for the represented polynomial -- in doubles, the
# coefficients of the restriction of a degree-64 polynomial to a wide
# interval span more orders of magnitude than the mantissa holds, and
# rounded signs routinely corrupt the count.

def _dyadic_ints(dense) -> list[int]:
    """Scale float coefficients by a common power of two into exact integers."""
    parts = [float(c).as_integer_ratio() for c in dense]
    shift = max(den.bit_length() - 1 for _, den in parts)
    return [num << (shift - (den.bit_length() - 1)) for num, den in parts]


def _int_shift_by_one(c: list[int]) -> list[int]:
    """Coefficients of p(x + 1), integer synthetic additions."""
    c = list(c)
    size = len(c)
    for i in range(size - 1):
        for j in range(size - 2, i - 1, -1):
            c[j] += c[j + 1]
    return c


def _int_mirror(c: list[int]) -> list[int]:
    """Coefficients of p(-x)."""
    return [-v if k & 1 else v for k, v in enumerate(c)]


def _int_strip_content(c: list[int]) -> list[int]:
    """Divide out the largest common power of two (keeps sizes bounded)."""
    twos = min(
        ((v & -v).bit_length() - 1 for v in c if v != 0),
        default=0,
    )
    if twos <= 0:
        return c
    return [v >> twos for v in c]


def _int_variation_count(c: list[int]) -> int:
    """Exact sign variations of the [0, 1] -> [0, inf) Moebius image of p."""
    return sign_variations(_int_shift_by_one(c[::-1]))


def _sign_change_endpoints(dense, lo, hi):
    """Endpoints (possibly nudged inward past exact roots) with f(lo)f(hi) < 0.

    A single simple root in the open interval keeps a fixed sign just inside
    each endpoint, so a geometric shrink finds valid endpoints quickly.
    Returns None when no strict sign change can be exhibited (the caller
    treats the variation count as noise and keeps bisecting).
    """
    width = hi - lo
    lo_candidates = [lo] + [lo + width * 2.0 ** -j for j in (20, 14, 8, 4, 2)]
    hi_candidates = [hi] + [hi - width * 2.0 ** -j for j in (20, 14, 8, 4, 2)]
    for a in lo_candidates:
        fa = npp.polyval(a, dense)
        if fa == 0.0:
            continue
        for b in hi_candidates:
            fb = npp.polyval(b, dense)
            if fb == 0.0:
                continue
            if fa * fb < 0.0:
                return a, b
            break  # same sign persists toward hi; shrink lo further instead
    return None


def descartes_isolate(f: SparsePolynomial, max_depth: int = 40) -> IsolationResult:
    """Isolate the real roots of a univariate polynomial in [-1, 1].

    Parameters
    ----------
    f : univariate SparsePolynomial, not identically zero, degree <= 512,
        square-free on [-1, 1] (otherwise the depth guard fires and the
        result is flagged incomplete)
    max_depth : bisection depth guard, 1 <= max_depth <= 100

    The traversal is breadth-first with left children first, so tree
    statistics and output order are deterministic.
    """
    if f.n != 1:
        raise ValueError("isolation requires a univariate polynomial")
    if norm1(f) == 0.0:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if not 1 <= max_depth <= 100:
        raise ValueError(f"max_depth must lie in [1, 100], got {max_depth}")
    dense = to_dense(f)
    if len(dense) - 1 > MAX_DENSE_DEGREE:
        raise ValueError(f"degree {len(dense) - 1} exceeds the dense cap {MAX_DENSE_DEGREE}")

    result = IsolationResult(intervals=[], exact_roots=[], tree=TreeStats())
    if len(dense) == 1:
        result.tree.count(0)
        return result

    # exact integer image of f, then of f(-1 + 2t): shift by -1 (mirror /
    # shift-by-one / mirror), then scale the argument by two
    ints = _dyadic_ints(dense)
    shifted = _int_mirror(_int_shift_by_one(_int_mirror(ints)))
    root_coeffs = _int_strip_content([v << k for k, v in enumerate(shifted)])
    if root_coeffs[0] == 0:
        result.exact_roots.append(-1.0)
    if sum(root_coeffs) == 0:
        result.exact_roots.append(1.0)

    degree_index = len(root_coeffs) - 1
    queue = deque([(root_coeffs, -1.0, 1.0, 0)])
    while queue:
        coeffs, lo, hi, depth = queue.popleft()
        result.tree.count(depth)
        v = _int_variation_count(coeffs)
        if v == 0:
            continue
        if v == 1:
            endpoints = _sign_change_endpoints(dense, lo, hi)
            if endpoints is not None:
                result.intervals.append(endpoints)
                continue
            # the unique root hugs an endpoint closer than the nudge scale;
            # keep bisecting until the relative gap is exhibitable
        mid = (lo + hi) / 2
        if depth == max_depth or mid == lo or mid == hi:
            result.complete = False
            result.unresolved.append((lo, hi))
            continue
        left = _int_strip_content(
            [v_ << (degree_index - k) for k, v_ in enumerate(coeffs)]
        )
        right = _int_strip_content(_int_shift_by_one(left))
        if right[0] == 0:
            # the right child's constant term is (a power of two times) f(mid)
            result.exact_roots.append(mid)
        queue.append((left, lo, mid, depth + 1))
        queue.append((right, mid, hi, depth + 1))
    result.intervals.sort()
    result.exact_roots.sort()
    return result


# ---------------------------------------------------------------------------
# all-roots oracle (Aberth-Ehrlich simultaneous iteration)
# ---------------------------------------------------------------------------

def aberth_roots(
    dense,
    max_sweeps: int = 1000,
    tol: float = 1e-12,
) -> np.ndarray:
    """All complex roots of an ascending dense coefficient vector.

    Starts on a circle of radius 1 + max|c_k| / |c_D| with deterministic
    angular jitter (fixed seed) and iterates the Aberth-Ehrlich correction
    until every residual satisfies |p(z)| <= tol * sum|c| * max(1, |z|)^D;
    the max(1, |z|)^D factor keeps the target achievable in double precision
    for roots outside the unit disk.  Raises OracleFailedError after
    ``max_sweeps`` sweeps without convergence.
    """
    c = np.asarray(dense, dtype=np.float64)
    scale_norm = float(np.abs(c).sum())
    if scale_norm == 0.0:
        raise ValueError("zero polynomial has no root set")
    while len(c) > 1 and c[-1] == 0.0:
        c = c[:-1]
    zeros_at_origin = 0
    while len(c) > 1 and c[0] == 0.0:
        c = c[1:]
        zeros_at_origin += 1
    degree = len(c) - 1
    origin = np.zeros(zeros_at_origin, dtype=np.complex128)
    if degree == 0:
        return origin
    if degree == 1:
        return np.concatenate([origin, np.array([-c[0] / c[1]], dtype=np.complex128)])

    radius = 1.0 + float(np.max(np.abs(c[:-1]))) / abs(c[-1])
    rng = np.random.default_rng(123456789)
    angles = 2.0 * np.pi * (np.arange(degree) + rng.uniform(0.25, 0.75, degree)) / degree
    z = radius * np.exp(1j * angles)

    deriv = npp.polyder(c)
    for _ in range(max_sweeps):
        pz = npp.polyval(z, c)
        target = tol * scale_norm * np.maximum(1.0, np.abs(z)) ** degree
        if np.all(np.abs(pz) <= target):
            return np.concatenate([origin, z])
        pdz = npp.polyval(z, deriv)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = pz / pdz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = (1.0 / diff).sum(axis=1)
            w = newton / (1.0 - newton * repulsion)
        bad = ~np.isfinite(w)
        if bad.any():
            w = np.where(bad, 0.01 * radius * np.exp(1j * rng.uniform(0, 2 * np.pi, degree)), w)
        oversize = np.abs(w) > 1.0 + np.abs(z)
        if oversize.any():
            w = np.where(oversize, w * (1.0 + np.abs(z)) / np.abs(w), w)
        z = z - w
    raise OracleFailedError("oracle failed: root iteration did not converge")


def _classify_real(dense, roots):
    """Split the oracle output into polished real roots and complex roots."""
    deriv = npp.polyder(dense)
    reals = []
    complexes = []
    for z in roots:
        if abs(z.imag) <= 1e-8 * max(1.0, abs(z)):
            x = z.real
            for _ in range(5):  # Newton polish; harmless for simple roots
                px = npp.polyval(x, dense)
                dpx = npp.polyval(x, deriv)
                if dpx == 0.0 or not math.isfinite(px):
                    break
                step = px / dpx
                if abs(step) > 0.1 * (1.0 + abs(x)):
                    break
                x = x - step
            if abs(npp.polyval(x, dense)) <= abs(npp.polyval(z.real, dense)):
                reals.append(x)
            else:
                reals.append(z.real)
        else:
            complexes.append(z)
    return np.array(reals), np.array(complexes, dtype=np.complex128)


def _min_pairwise(values) -> float:
    if len(values) < 2:
        return math.inf
    best = math.inf
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            best = min(best, abs(values[i] - values[j]))
    return best


def _distance_to_interval(z: complex) -> float:
    return math.hypot(max(0.0, abs(z.real) - 1.0), z.imag)


def oracle_roots(f: SparsePolynomial) -> tuple[np.ndarray, np.ndarray]:
    """All roots of f as (real roots, strictly complex roots).

    Real roots are identified by a relative imaginary-part threshold and
    polished by a few Newton steps.
    """
    if f.n != 1:
        raise ValueError("the root oracle requires a univariate polynomial")
    if norm1(f) == 0.0:
        raise ValueError("the zero polynomial has no root set")
    dense = to_dense(f)
    if len(dense) - 1 > MAX_DENSE_DEGREE:
        raise ValueError(f"degree {len(dense) - 1} exceeds the dense cap {MAX_DENSE_DEGREE}")
    if len(dense) == 1:
        return np.zeros(0), np.zeros(0, dtype=np.complex128)
    return _classify_real(dense, aberth_roots(dense))


def separation_oracle(f: SparsePolynomial, eps: float) -> SeparationEstimate:
    """Numerically computed separations of the roots of f near [-1, 1].

    ``delta`` is the minimum distance between real roots inside [-1, 1];
    ``delta_eps`` the minimum distance between any two complex roots within
    distance ``eps`` of the interval.  Either is math.inf when fewer than two
    qualifying roots exist.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    reals, complexes = oracle_roots(f)
    reals_in_cube = reals[np.abs(reals) <= 1.0] if len(reals) else reals
    delta = _min_pairwise(list(reals_in_cube))
    near = [complex(r, 0.0) for r in reals if _distance_to_interval(complex(r, 0.0)) <= eps]
    near.extend(z for z in complexes if _distance_to_interval(z) <= eps)
    delta_eps = _min_pairwise(near)
    return SeparationEstimate(delta=delta, delta_eps=delta_eps, eps=eps)


# ---------------------------------------------------------------------------
# evaluable complexity / separation bound formulas
# ---------------------------------------------------------------------------

TREE_SIZE_CONSTANT = 8.0  # validated empirically, not proven


def tree_size_bound(f: SparsePolynomial, kappa_upper: float) -> float:
    """Bound C * |M| * (log2(kappa_upper) + log2(d) + 1) on the tree size.

    ``kappa_upper`` must dominate the global condition number of f; an
    infinite value yields an infinite (vacuous) bound.
    """
    if kappa_upper < 1.0:
        raise ValueError("kappa_upper must be >= 1")
    if math.isinf(kappa_upper):
        return math.inf
    return TREE_SIZE_CONSTANT * f.support_size * (
        math.log2(kappa_upper) + math.log2(f.degree) + 1.0
    )


def separation_lower_bound(f: SparsePolynomial, kappa_upper: float) -> float:
    """Lower bound 2*sqrt(2) / (d * sqrt(kappa_upper)) on the real separation."""
    if kappa_upper < 1.0:
        raise ValueError("kappa_upper must be >= 1")
    if math.isinf(kappa_upper):
        return 0.0
    return 2.0 * math.sqrt(2.0) / (f.degree * math.sqrt(kappa_upper))


def eps_separation_lower_bound(f: SparsePolynomial, kappa_upper: float, eps: float) -> float:
    """Lower bound 1 / (12 * d * kappa_upper) on the eps-neighbourhood separation.

    Requires 0 < eps < 1 / (e * d * kappa_upper); outside that range the
    bound is not established and HypothesisViolatedError is raised.
    """
    if kappa_upper < 1.0:
        raise ValueError("kappa_upper must be >= 1")
    limit = 1.0 / (math.e * f.degree * kappa_upper)
    if not 0.0 < eps < limit:
        raise HypothesisViolatedError(
            f"hypothesis violated: eps must lie in (0, {limit:.3e}), got {eps:.3e}"
        )
    return 1.0 / (12.0 * f.degree * kappa_upper)


def js_runtime_bound(M_size: int, d: int, norm1_f: float, L: int) -> float:
    """Bit-operation bound shape |M|^12 * log2(d)^3 * max(log2(norm1)^2, L^2).

    This evaluates the bound formula with constant 1; it is a shape, not a
    calibrated runtime.
    """
    if M_size <= 0 or d <= 0 or norm1_f <= 0 or L <= 0:
        raise ValueError("all arguments must be positive")
    return (
        float(M_size) ** 12
        * math.log2(d) ** 3
        * max(math.log2(norm1_f) ** 2, float(L) ** 2)
    )


def js_condition_bound(M_size: int, d: int, norm1_f: float, kappa: float) -> float:
    """Condition-based variant |M|^12 * log2(d)^3 * max(log2(norm1)^2, log2(kappa)^3)."""
    if M_size <= 0 or d <= 0 or norm1_f <= 0:
        raise ValueError("all arguments must be positive")
    if kappa < 1.0:
        raise ValueError("kappa must be >= 1")
    if math.isinf(kappa):
        return math.inf
    return (
        float(M_size) ** 12
        * math.log2(d) ** 3
        * max(math.log2(norm1_f) ** 2, math.log2(kappa) ** 3)
    )
