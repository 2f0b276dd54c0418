"""Arbitrary-precision slope arithmetic.

A flow direction alpha is stored as a fixed-point integer with a configurable
number of fractional bits (default 256, override with EQUIFLOW_PRECISION_BITS),
together with the continued-fraction expansion [a0; a1, a2, ...] of its
magnitude and the convergents p_i/q_i. Slopes constructed from partial
quotients additionally carry their exact rational value, so downstream
consumers (Kronecker points, wrap times of the torus flow) can work in exact
integer arithmetic.

Continued fractions of approximate values are only trusted while the
convergent denominators stay inside the precision budget: the digits of an
approximation accurate to 2^-B agree with the digits of the underlying real
roughly while q_i^2 stays below 2^B. Crossing that line raises
PrecisionExhausted rather than returning garbage digits.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import mpmath

from .errors import InsufficientConvergents, PrecisionExhausted

__all__ = [
    "DEFAULT_BITS",
    "Direction",
    "Slope",
    "continued_fraction",
    "default_bits",
    "from_partial_quotients",
    "is_badly_approximable",
    "ostrowski_digits",
    "resolve_slope",
]

DEFAULT_BITS = 256

RealLike = Union[int, float, Fraction, str, "Slope", mpmath.mpf]


def default_bits() -> int:
    """Fractional-bit budget: EQUIFLOW_PRECISION_BITS or 256."""
    raw = os.environ.get("EQUIFLOW_PRECISION_BITS")
    if raw is None:
        return DEFAULT_BITS
    bits = int(raw)
    if bits < 128:
        raise ValueError("precision budget must be at least 128 bits")
    return bits


def _mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    if not mpmath.isfinite(x):
        raise ValueError("value must be finite")
    sign, man, exp, _ = x._mpf_
    frac = Fraction(man)
    if exp >= 0:
        frac *= 1 << exp
    elif man:
        frac = Fraction(man, 1 << (-exp))
    return -frac if sign else frac


def _to_fraction(value: RealLike) -> tuple[Fraction, int | None]:
    """Exact rational form of value, plus its trust budget in bits.

    The second component is None when the rational is the exact intended
    value (ints, Fractions, decimal strings, floats: all exact rationals),
    and a bit count when it approximates an underlying real (Slope without
    exact value, high-precision mpf).
    """
    if isinstance(value, Slope):
        if value.exact is not None:
            return value.exact, None
        return Fraction(value.scaled, 1 << value.bits), value.bits
    if isinstance(value, bool):
        raise TypeError("value must be a real number")
    if isinstance(value, int):
        return Fraction(value), None
    if isinstance(value, Fraction):
        return value, None
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("value must be finite")
        return Fraction(value), None
    if isinstance(value, str):
        return Fraction(value), None
    if isinstance(value, mpmath.mpf):
        frac = _mpf_to_fraction(value)
        bits = frac.denominator.bit_length() - 1
        return frac, (bits if bits >= 128 else None)
    raise TypeError(f"unsupported value type: {type(value)!r}")


def _cf_digits(frac: Fraction, depth: int, guard_bits: int | None) -> list[int]:
    """Digits a_0 .. a_depth of frac >= 0 (fewer if the expansion terminates).

    guard_bits, when given, bounds the trustworthy convergents of an
    approximate value: generating a digit whose denominator q satisfies
    q*q > 2^guard_bits raises PrecisionExhausted.
    """
    digits: list[int] = []
    num, den = frac.numerator, frac.denominator
    q_prev, q_cur = 1, 0  # q_{-2}, q_{-1} seeds
    limit = None if guard_bits is None else (1 << guard_bits)
    for i in range(depth + 1):
        a = num // den
        q_next = a * q_cur + q_prev if i > 0 else 1
        if limit is not None and q_next * q_next > limit:
            raise PrecisionExhausted(
                f"continued fraction digit {i} needs q^2 > 2^{guard_bits}; "
                "supply more precision bits"
            )
        digits.append(a)
        q_prev, q_cur = (q_cur, q_next) if i > 0 else (0, 1)
        rem = num - a * den
        if rem == 0:
            break
        num, den = den, rem
    return digits


def _safe_digits(frac: Fraction, depth: int, guard_bits: int | None) -> list[int]:
    """Like _cf_digits but truncates at the guard instead of raising."""
    try:
        return _cf_digits(frac, depth, guard_bits)
    except PrecisionExhausted:
        pass
    lo, hi = 0, depth
    best = [frac.numerator // frac.denominator]
    while lo < hi:
        mid = (lo + hi + 1) // 2
        try:
            best = _cf_digits(frac, mid, guard_bits)
            lo = mid
        except PrecisionExhausted:
            hi = mid - 1
    return best


def _convergents(digits: Sequence[int]) -> tuple[tuple[int, int], ...]:
    p_prev, q_prev = 1, 0
    p_cur, q_cur = digits[0], 1
    out = [(p_cur, q_cur)]
    for a in digits[1:]:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        out.append((p_cur, q_cur))
    return tuple(out)


def _round_scaled(frac: Fraction, bits: int) -> int:
    """Nearest integer to frac * 2^bits, half away from zero."""
    num = frac.numerator << bits
    den = frac.denominator
    if num >= 0:
        return (2 * num + den) // (2 * den)
    return -((-2 * num + den) // (2 * den))


def continued_fraction(value: RealLike, depth: int, bits: int | None = None) -> list[int]:
    """Partial quotients [a0; a1 ... a_depth] of value.

    Terminating expansions return fewer digits and canonically end with a
    digit >= 2 (Euclid produces that form directly; a final digit 1 cannot
    occur because the last remainder reciprocal is always > 1). Approximate
    inputs (Slope, high-precision mpf) raise PrecisionExhausted once the
    convergent denominators outgrow the trusted precision; exact inputs
    (int, float, Fraction, decimal string) expand exactly. `bits` overrides
    the inferred trust budget.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    frac, inferred_bits = _to_fraction(value)
    if frac < 0:
        raise ValueError("continued_fraction expects a nonnegative value")
    guard = bits if bits is not None else inferred_bits
    return _cf_digits(frac, depth, guard)


@dataclass(frozen=True)
class Slope:
    """A flow direction with fixed-point value, digits, and convergents.

    scaled/2^bits approximates the value to within 2^-(bits+1); exact is the
    precise rational value when known (slopes built from partial quotients
    or exact literals). cf and convergents describe the magnitude |value|.
    Immutable; safe to share between threads.
    """

    scaled: int
    bits: int
    cf: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    exact: Fraction | None = None
    label: str | None = None

    def __post_init__(self) -> None:
        if self.bits < 128:
            raise ValueError("Slope requires at least 128 fractional bits")
        if not self.cf:
            raise ValueError("Slope requires at least the digit a0")
        if len(self.cf) != len(self.convergents):
            raise ValueError("digit and convergent lists must align")

    @property
    def value(self) -> float:
        return self.scaled / (1 << self.bits)

    def rational(self) -> Fraction:
        """Exact value when known, else the fixed-point rational."""
        if self.exact is not None:
            return self.exact
        return Fraction(self.scaled, 1 << self.bits)

    def mpf(self) -> mpmath.mpf:
        with mpmath.workprec(self.bits + 16):
            return mpmath.mpf(self.scaled) / (1 << self.bits)

    @classmethod
    def from_value(
        cls,
        value: RealLike,
        depth: int = 64,
        bits: int | None = None,
        label: str | None = None,
    ) -> "Slope":
        """Slope from a numeric value; digits expanded up to index depth.

        Unlike continued_fraction this truncates quietly at the precision
        guard: the stored digits are always trustworthy, there may just be
        fewer than requested.
        """
        frac, inferred = _to_fraction(value)
        budget = bits if bits is not None else default_bits()
        digits = _safe_digits(abs(frac), depth, inferred)
        return cls(
            scaled=_round_scaled(frac, budget),
            bits=budget,
            cf=tuple(digits),
            convergents=_convergents(digits),
            exact=frac if inferred is None else None,
            label=label,
        )

    def __repr__(self) -> str:  # the default dataclass repr would be enormous
        name = self.label or f"{self.value:.12g}"
        return f"Slope({name}, bits={self.bits}, depth={len(self.cf) - 1})"


def from_partial_quotients(a: Sequence[int], bits: int | None = None) -> Slope:
    """Slope whose continued fraction begins with the digits a.

    The value is the exact final convergent. Digit lists ending in 1 are
    canonicalized by [..., a_k, 1] -> [..., a_k + 1], removing the classical
    two-representation ambiguity; the canonical terminating form always ends
    with a digit >= 2 (or is a bare integer [a0]).
    """
    digits = [int(x) for x in a]
    if not digits:
        raise ValueError("need at least one partial quotient")
    if digits[0] < 0:
        raise ValueError("a0 must be >= 0")
    if any(d < 1 for d in digits[1:]):
        raise ValueError("a_i must be >= 1 for i >= 1")
    if len(digits) > 1 and digits[-1] == 1:
        digits = digits[:-1]
        digits[-1] += 1
    budget = bits if bits is not None else default_bits()
    convergents = _convergents(digits)
    p_last, q_last = convergents[-1]
    if q_last * q_last > (1 << budget):
        raise PrecisionExhausted(
            f"final convergent denominator {q_last} exceeds the {budget}-bit budget"
        )
    exact = Fraction(p_last, q_last)
    return Slope(
        scaled=_round_scaled(exact, budget),
        bits=budget,
        cf=tuple(digits),
        convergents=convergents,
        exact=exact,
    )


def is_badly_approximable(s: Slope, depth: int, bound: int) -> bool:
    """True iff max(a1..a_depth) <= bound.

    Depth-truncated surrogate: genuine badly-approximable status depends on
    all infinitely many digits and is undecidable from a finite prefix.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if len(s.cf) - 1 < depth:
        raise ValueError(
            f"slope stores only {len(s.cf) - 1} partial quotients, need {depth}"
        )
    return max(s.cf[1 : depth + 1]) <= bound


def ostrowski_digits(N: int, s: Slope) -> list[int]:
    """Greedy digits b_i with N = sum b_i * q_i over the convergent denominators.

    Greedy normalization guarantees 0 <= b0 < a1, 0 <= b_i <= a_{i+1}, and
    b_i = a_{i+1} implies b_{i-1} = 0.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    qs = [q for (_, q) in s.convergents]
    if qs[-1] <= N:
        raise InsufficientConvergents(
            f"largest stored q is {qs[-1]}, need one exceeding N={N}"
        )
    digits = [0] * len(qs)
    rem = N
    for i in range(len(qs) - 1, -1, -1):
        if qs[i] <= rem:
            digits[i], rem = divmod(rem, qs[i])
    if rem != 0:
        raise AssertionError("greedy expansion failed to terminate at zero")
    return digits


@dataclass(frozen=True)
class Direction:
    """Unit direction (1, alpha)/sqrt(1 + alpha^2) of the flow."""

    theta: tuple[float, float]

    def __post_init__(self) -> None:
        norm = math.hypot(*self.theta)
        if abs(norm - 1.0) > 1e-15:
            raise ValueError(f"direction must be unit length, got |theta| = {norm!r}")

    @classmethod
    def from_slope(cls, alpha: float) -> "Direction":
        h = math.hypot(1.0, alpha)
        return cls((1.0 / h, alpha / h))

    @property
    def angle(self) -> float:
        """Direction angle in [0, pi); verticals map to pi/2."""
        return math.atan2(self.theta[1], self.theta[0]) % math.pi


_NAMED = ("golden", "sqrt2", "pi-3")


def _named_scaled(name: str, bits: int) -> int:
    if name == "golden":
        # (sqrt 5 - 1)/2 = [0;1,1,1,...] at fixed point, floor rounding
        return (math.isqrt(5 << (2 * bits)) - (1 << bits)) // 2
    if name == "sqrt2":
        return math.isqrt(2 << (2 * bits))
    if name == "pi-3":
        with mpmath.workprec(bits + 64):
            return int(mpmath.nint(mpmath.ldexp(mpmath.pi - 3, bits)))
    raise ValueError(f"unknown named slope {name!r}")


def resolve_slope(spec: RealLike | Sequence[int], bits: int | None = None) -> Slope:
    """Build a Slope from a CLI-style spec.

    Accepts the named constants 'golden', 'sqrt2', 'pi-3'; a partial-quotient
    list (sequence of ints, or a string like '[0;2,250000]' or '0,2,250000');
    or a numeric literal (int, float, Fraction, decimal string).
    """
    budget = bits if bits is not None else default_bits()
    if isinstance(spec, Slope):
        return spec
    if isinstance(spec, str):
        text = spec.strip()
        if text in _NAMED:
            scaled = _named_scaled(text, budget)
            approx = Fraction(scaled, 1 << budget)
            digits = _safe_digits(approx, 4096, budget)
            return Slope(
                scaled=scaled,
                bits=budget,
                cf=tuple(digits),
                convergents=_convergents(digits),
                exact=None,
                label=text,
            )
        if text.startswith("[") or "," in text:
            body = text.strip("[]").replace(";", ",")
            quotients = [int(t) for t in body.split(",") if t.strip()]
            return from_partial_quotients(quotients, bits=budget)
        return Slope.from_value(Fraction(text), bits=budget)
    if isinstance(spec, (list, tuple)):
        return from_partial_quotients(spec, bits=budget)
    return Slope.from_value(spec, bits=budget)
