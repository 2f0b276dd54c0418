"""The section function tau on the right edge of the square, its Fubini
and discretization identities, and Sobolev-regularity diagnostics.

tau(h) is the time the flow spends in E during one unit of backward time
ending at the point (1, h). Unwinding the wrap, that equals the forward
occupation over one time unit started at (0, {h - alpha}), which is how it
is computed: one decomposition code path serves both tau and occupation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .flow import occupation_time, weighted_occupation
from .geometry import SetExpr, area
from .slope import Slope

__all__ = [
    "TauSamples",
    "SobolevReport",
    "tau",
    "tau_samples",
    "fubini_check",
    "discretization_identity",
    "sobolev_seminorm",
    "tau_density",
]


def _slope_rational(alpha) -> Fraction:
    if isinstance(alpha, Slope):
        return alpha.rational()
    return Fraction(alpha)


@dataclass(frozen=True)
class TauSamples:
    """tau on the uniform grid h_i = i/n, i = 0..n-1 (periodic in h)."""

    grid: tuple[float, ...]
    values: tuple[float, ...]
    spacing: float

    def mean(self) -> float:
        # trapezoidal rule on the torus: every node has weight 1/n
        return math.fsum(self.values) / len(self.values)


@dataclass(frozen=True)
class SobolevReport:
    exponent: float
    levels: tuple[tuple[float, float], ...]  # (spacing, seminorm proxy), coarse first
    verdict: str  # convergent | divergent | inconclusive
    growth_threshold: float
    agreement_threshold: float


def tau(E: SetExpr, alpha, h) -> float:
    """Time in E during one unit of backward flow ending at height h on
    the right edge."""
    hf = Fraction(h) if not isinstance(h, Fraction) else h
    if not 0 <= hf <= 1:
        raise ValueError(f"h must lie in [0,1], got {h}")
    x2 = hf - _slope_rational(alpha)
    return occupation_time(E, (0, x2 % 1), alpha, 1)


def tau_samples(E: SetExpr, alpha, n: int) -> TauSamples:
    if n < 2:
        raise ValueError(f"need n >= 2 grid points, got {n}")
    a = _slope_rational(alpha)
    values = []
    for i in range(n):
        x2 = (Fraction(i, n) - a) % 1
        values.append(occupation_time(E, (0, x2), alpha, 1))
    return TauSamples(
        grid=tuple(i / n for i in range(n)),
        values=tuple(values),
        spacing=1.0 / n,
    )


def fubini_check(E: SetExpr, alpha, n: int) -> tuple[float, float, float]:
    """(mean of tau samples, area(E), difference); Fubini says the
    difference vanishes under refinement."""
    if n < 16:
        raise ValueError(f"need n >= 16 for a meaningful check, got {n}")
    m = tau_samples(E, alpha, n).mean()
    a = area(E)
    return (m, a, m - a)


def discretization_identity(E: SetExpr, alpha, x0, N: int) -> tuple[float, float]:
    """(continuous, discrete): occupation up to integer time N started at
    (0, x0) versus the sum of tau over the shifted Kronecker heights
    {k*alpha + x0}, k = 1..N. The two sides share no code beyond clipping."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    a = _slope_rational(alpha)
    x0f = Fraction(x0) if not isinstance(x0, Fraction) else x0
    continuous = occupation_time(E, (0, x0f), alpha, N)
    acc = x0f % 1
    terms = []
    for _ in range(N):
        acc = (acc + a) % 1
        # tau(h) with h = {k alpha + x0}: start height {h - alpha}
        terms.append(occupation_time(E, (0, (acc - a) % 1), alpha, 1))
    return (continuous, math.fsum(terms))


def sobolev_seminorm(
    E: SetExpr,
    alpha,
    s: float,
    levels: int = 6,
    n0: int = 256,
    growth: float = 1.3,
    agree: float = 0.10,
) -> SobolevReport:
    """Discrete W^{1,s} seminorm proxy of tau across dyadic refinements.

    Per level with spacing dh = 1/(n0 * 2^k) the proxy is
    sum |tau(h_{i+1}) - tau(h_i)|^s * dh^(1-s) over the periodic grid,
    a Riemann sum for the s-th power of the derivative norm. Convergent
    when the last two refinement ratios stay within `agree` of 1;
    otherwise divergent when the per-level growth factor averaged over
    the whole run, (S_last / S_first)^(1/(levels-1)), reaches `growth`.

    An absolutely continuous tau' in L^s gives a stabilizing proxy; a jump
    (Dirac in tau') or an |h-h0|^(-1/2) singularity with s above the
    integrability threshold makes it grow like a power of 2 per level
    (sqrt(2) for a jump at s = 1.5), which `growth` = 1.3 detects. The
    cell containing a kink contributes an amount that oscillates with the
    kink's position inside the cell, so step ratios over a short window
    are noisy; averaging the growth factor across all levels damps the
    oscillation to a few percent.
    """
    if not 0.0 < s <= 4.0:
        raise ValueError(f"s must lie in (0, 4], got {s}")
    if not 1 <= levels <= 8:
        raise ValueError(f"levels must lie in 1..8, got {levels}")
    n_max = n0 * 2 ** (levels - 1)
    fine = tau_samples(E, alpha, n_max).values
    out = []
    for k in range(levels):
        n = n0 * 2**k
        stride = n_max // n
        vals = fine[::stride]
        dh = 1.0 / n
        acc = math.fsum(
            abs(vals[(i + 1) % n] - vals[i]) ** s for i in range(n)
        )
        out.append((dh, acc * dh ** (1.0 - s)))
    verdict = "inconclusive"
    if levels >= 3:
        sups = [v for _, v in out]
        tail = sups[-3:]
        if all(v == 0.0 for v in tail):
            verdict = "convergent"
        elif all(v > 0.0 for v in tail) and sups[0] > 0.0:
            r1 = tail[1] / tail[0]
            r2 = tail[2] / tail[1]
            if abs(r1 - 1.0) <= agree and abs(r2 - 1.0) <= agree:
                verdict = "convergent"
            elif (sups[-1] / sups[0]) ** (1.0 / (levels - 1)) >= growth:
                verdict = "divergent"
    return SobolevReport(
        exponent=s,
        levels=tuple(out),
        verdict=verdict,
        growth_threshold=growth,
        agreement_threshold=agree,
    )


def tau_density(f, alpha, h, tol: float = 1e-6) -> float:
    """Section function of the density f: integral of f over one unit of
    backward flow ending at (1, h)."""
    if not 0.0 < tol <= 1e-6:
        raise ValueError(f"tol must lie in (0, 1e-6], got {tol}")
    hf = Fraction(h) if not isinstance(h, Fraction) else h
    x2 = (hf - _slope_rational(alpha)) % 1
    return weighted_occupation(f, (0, x2), alpha, 1, tol=tol)
