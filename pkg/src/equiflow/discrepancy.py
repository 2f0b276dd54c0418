"""Kronecker point sets and exact discrepancy machinery.

Kronecker points are generated in exact integer arithmetic over a common
denominator (the slope is an exact rational, natively or as a fixed-point
approximant), so sorting, gap spectra, and collision detection are decided
exactly. Star and L^p discrepancies use the sorted-points closed forms:
the empirical CDF deviation F(x) = i/N - x is affine on every gap, so
|F|^p integrates in closed form per gap via the signed power antiderivative,
with no quadrature anywhere on the exact path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import EquiflowError
from .slope import Slope

__all__ = [
    "PointSet1D",
    "DiscrepancyValue",
    "kronecker_points",
    "star_discrepancy",
    "lp_discrepancy",
    "fourier_coefficient",
    "kh_bound",
    "lp_variation_1d",
    "gap_spectrum",
]

_NUMPY_CUTOVER = 4096  # below this, pure-python fsum paths keep full accuracy


def _ratio_to_float(num: int, den: int) -> float:
    if num == 0:
        return 0.0
    return (num << 64) // den / 18446744073709551616.0


@dataclass(frozen=True)
class PointSet1D:
    """Finite point set in [0,1), with optional exact rational values.

    exact_num[i] / exact_den == points[i] when the exact representation is
    present (Kronecker constructions always carry it); gap analysis then
    compares integers, never floats.
    """

    points: tuple[float, ...]
    exact_num: tuple[int, ...] | None = None
    exact_den: int | None = None
    provenance: str = "generic"  # "kronecker" enables closed-form cross-checks
    alpha: Slope | None = None
    x0: Fraction | None = None

    def __post_init__(self) -> None:
        if len(self.points) < 1:
            raise ValueError("point set must be nonempty")
        if not all(0.0 <= x < 1.0 for x in self.points):
            raise ValueError("points must lie in [0, 1)")
        if (self.exact_num is None) != (self.exact_den is None):
            raise ValueError("exact_num and exact_den must be given together")
        if self.exact_num is not None and len(self.exact_num) != len(self.points):
            raise ValueError("exact_num length must match points")

    @property
    def N(self) -> int:
        return len(self.points)

    @cached_property
    def sorted_points(self) -> np.ndarray:
        return np.sort(np.asarray(self.points, dtype=float))

    @cached_property
    def sorted_exact(self) -> tuple[int, ...] | None:
        if self.exact_num is None:
            return None
        return tuple(sorted(self.exact_num))

    def prefix(self, n: int) -> "PointSet1D":
        """The point set of the first n points (same exact denominators)."""
        if not 1 <= n <= self.N:
            raise ValueError(f"prefix length {n} out of range 1..{self.N}")
        return PointSet1D(
            points=self.points[:n],
            exact_num=None if self.exact_num is None else self.exact_num[:n],
            exact_den=self.exact_den,
            provenance=self.provenance,
            alpha=self.alpha,
            x0=self.x0,
        )


@dataclass(frozen=True)
class DiscrepancyValue:
    p: float  # math.inf for the star discrepancy
    value: float
    method: str  # "exact-closed-form" | "numeric-quadrature"


def kronecker_points(alpha, x0, N: int) -> PointSet1D:
    """The shifted Kronecker set {k*alpha + x0}, k = 1..N, exact."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    a = alpha.rational() if isinstance(alpha, Slope) else Fraction(alpha)
    x0f = Fraction(x0) if not isinstance(x0, Fraction) else x0
    na, da = a.numerator, a.denominator
    c0, d0 = (x0f % 1).numerator, (x0f % 1).denominator
    den = da * d0
    step = na * d0 % den
    acc = c0 * da
    nums = []
    for _ in range(N):
        acc = (acc + step) % den
        nums.append(acc)
    pts = tuple(_ratio_to_float(u, den) for u in nums)
    return PointSet1D(
        points=pts,
        exact_num=tuple(nums),
        exact_den=den,
        provenance="kronecker",
        alpha=alpha if isinstance(alpha, Slope) else None,
        x0=x0f % 1,
    )


def star_discrepancy(P: PointSet1D) -> DiscrepancyValue:
    """Exact D*: max over sorted points of max(i/N - x_(i), x_(i) - (i-1)/N)."""
    xs = P.sorted_points
    n = P.N
    i = np.arange(1, n + 1, dtype=float)
    d = float(np.max(np.maximum(i / n - xs, xs - (i - 1.0) / n)))
    return DiscrepancyValue(p=math.inf, value=d, method="exact-closed-form")


def _psi(v: float, p: float) -> float:
    # antiderivative of |v|^p with sign, vanishing at 0
    return math.copysign(abs(v) ** (p + 1.0) / (p + 1.0), v)


def lp_discrepancy(P: PointSet1D, p: float) -> DiscrepancyValue:
    """Exact L^p discrepancy of the empirical CDF against x, p in [1, inf).

    F(x) = i/N - x on the i-th gap of the sorted points (bounded by 0 and
    1); the integral of |F|^p over the gap is psi(F(left)) - psi(F(right)),
    which handles the interior sign change of F exactly.
    """
    if not (p >= 1.0 and math.isfinite(p)):
        raise ValueError(f"p must lie in [1, inf), got {p}")
    n = P.N
    if n >= _NUMPY_CUTOVER:
        xs = np.concatenate(([0.0], P.sorted_points, [1.0]))
        i = np.arange(0, n + 1, dtype=float)
        v0 = i / n - xs[:-1]
        v1 = i / n - xs[1:]
        psi0 = np.sign(v0) * np.abs(v0) ** (p + 1.0)
        psi1 = np.sign(v1) * np.abs(v1) ** (p + 1.0)
        total = float(np.sum(psi0 - psi1)) / (p + 1.0)
    else:
        xs = [0.0, *map(float, P.sorted_points), 1.0]
        total = math.fsum(
            _psi(i / n - xs[i], p) - _psi(i / n - xs[i + 1], p) for i in range(n + 1)
        )
    return DiscrepancyValue(p=p, value=total ** (1.0 / p), method="exact-closed-form")


def _cis_frac(t: Fraction) -> complex:
    # e^{-2 pi i t} from the exact fractional part of t
    tf = _ratio_to_float((t % 1).numerator, (t % 1).denominator)
    return cmath.exp(-2j * math.pi * tf)


def fourier_coefficient(P: PointSet1D, k: int) -> complex:
    """Empirical-measure Fourier coefficient (1/N) sum_j e^{-2 pi i k x_j}.

    Direct compensated summation; for Kronecker sets the exact geometric
    closed form is evaluated as well (away from the resonance |1-z| ~ 0)
    and the two must agree to 1e-12.
    """
    if k == 0:
        raise ValueError("k must be nonzero (the 0th coefficient is always 1)")
    re = math.fsum(math.cos(-2.0 * math.pi * k * x) for x in P.points)
    im = math.fsum(math.sin(-2.0 * math.pi * k * x) for x in P.points)
    direct = complex(re / P.N, im / P.N)
    if P.provenance == "kronecker" and P.alpha is not None and P.x0 is not None:
        a = P.alpha.rational()
        z = _cis_frac(k * a)
        if abs(1.0 - z) > 1e-3:
            n = P.N
            # sum_{j=1..N} z^j = (z - z^{N+1}) / (1 - z), z^{N+1} from exact phase
            zn1 = _cis_frac(k * a * (n + 1))
            geo = _cis_frac(k * P.x0) * (z - zn1) / (1.0 - z) / n
            if abs(geo - direct) > 1e-12:
                raise EquiflowError(
                    f"fourier coefficient cross-check failed at k={k}: "
                    f"direct {direct} vs closed form {geo}"
                )
    return direct


def kh_bound(D: DiscrepancyValue, V: float) -> float:
    """The Koksma-Hlawka product bound D_p * ||f'||_{p'} on |int f - mean f|."""
    if V < 0:
        raise ValueError(f"variation must be nonnegative, got {V}")
    return D.value * V


def lp_variation_1d(f_prime_samples, p_prime: float) -> float:
    """||f'||_{L^{p'}} from uniform samples of f' on [0,1] (endpoints
    included), by composite trapezoid; max for p' = inf."""
    v = np.asarray(f_prime_samples, dtype=float)
    if v.ndim != 1 or v.size < 2:
        raise ValueError("need at least two samples of f' on a uniform grid")
    if math.isinf(p_prime):
        return float(np.max(np.abs(v)))
    if p_prime < 1.0:
        raise ValueError(f"p' must lie in [1, inf], got {p_prime}")
    w = np.abs(v) ** p_prime
    h = 1.0 / (v.size - 1)
    return float((np.sum(w) - 0.5 * (w[0] + w[-1])) * h) ** (1.0 / p_prime)


def gap_spectrum(P: PointSet1D) -> list[Fraction]:
    """Sorted distinct circular gaps of the point set, exactly.

    Uses the exact integer representation when present (Kronecker sets),
    else the exact rational values of the floats. The three-distance
    theorem says a Kronecker set has at most 3 distinct values here.
    """
    if P.exact_num is not None:
        nums = sorted(P.exact_num)
        den = P.exact_den
        gaps = {b - a for a, b in zip(nums, nums[1:])}
        gaps.add(den - nums[-1] + nums[0])  # wraparound gap
        return [Fraction(g, den) for g in sorted(gaps)]
    xs = sorted(Fraction(x) for x in P.points)
    gaps_f = {b - a for a, b in zip(xs, xs[1:])}
    gaps_f.add(1 - xs[-1] + xs[0])
    return sorted(gaps_f)
