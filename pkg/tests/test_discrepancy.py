"""Kronecker point sets, exact discrepancies, Fourier decay, gap spectra."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equiflow.discrepancy import (
    DiscrepancyValue,
    PointSet1D,
    fourier_coefficient,
    gap_spectrum,
    kh_bound,
    kronecker_points,
    lp_discrepancy,
    lp_variation_1d,
    star_discrepancy,
)
from equiflow.slope import resolve_slope

from helpers import brute_star_discrepancy, quad_lp_discrepancy

GOLDEN = resolve_slope("golden")


def test_kronecker_exact_thirds():
    P = kronecker_points(Fraction(1, 3), 0, 3)
    assert P.exact_den == 3
    assert P.exact_num == (1, 2, 0)
    assert P.points == (pytest.approx(1 / 3), pytest.approx(2 / 3), 0.0)
    assert P.provenance == "kronecker"
    assert P.N == 3


def test_kronecker_shift_and_prefix():
    P = kronecker_points(Fraction(1, 4), Fraction(1, 8), 6)
    # {k/4 + 1/8} = 3/8, 5/8, 7/8, 1/8, 3/8, 5/8
    assert [Fraction(u, P.exact_den) for u in P.exact_num] == [
        Fraction(3, 8), Fraction(5, 8), Fraction(7, 8),
        Fraction(1, 8), Fraction(3, 8), Fraction(5, 8),
    ]
    Q = P.prefix(4)
    assert Q.N == 4
    assert Q.exact_den == P.exact_den
    assert Q.exact_num == P.exact_num[:4]
    with pytest.raises(ValueError):
        P.prefix(0)
    with pytest.raises(ValueError):
        P.prefix(7)


def test_star_midpoint_set_is_optimal():
    # midpoints (2i-1)/2N attain the 1/(2N) lower bound exactly
    N = 8
    P = PointSet1D(points=tuple((2 * i - 1) / (2 * N) for i in range(1, N + 1)))
    D = star_discrepancy(P)
    assert D.value == 1 / 16
    assert D.p == math.inf
    assert D.method == "exact-closed-form"


def test_singleton_closed_forms():
    P = PointSet1D(points=(0.5,))
    assert star_discrepancy(P).value == 0.5
    assert lp_discrepancy(P, 1.0).value == pytest.approx(0.25, abs=1e-15)
    assert lp_discrepancy(P, 2.0).value == pytest.approx(math.sqrt(1 / 12), abs=1e-15)


def test_lattice_star_and_resonance():
    N = 32
    P = kronecker_points(Fraction(1, N), 0, N)
    assert star_discrepancy(P).value == pytest.approx(1 / N, abs=1e-15)
    # full resonance at k = N, full cancellation at k = 1
    assert abs(fourier_coefficient(P, N)) == pytest.approx(1.0, abs=1e-12)
    assert abs(fourier_coefficient(P, 1)) == pytest.approx(0.0, abs=1e-12)


def test_fourier_rejects_k_zero():
    P = PointSet1D(points=(0.25, 0.75))
    with pytest.raises(ValueError):
        fourier_coefficient(P, 0)


def test_fourier_golden_decay_bound():
    # |c_k| <= 1/(2N dist(k alpha)) via the geometric sum and
    # |1 - e^{2 pi i t}| >= 4 dist(t); dist computed in exact rationals
    N = 1000
    P = kronecker_points(GOLDEN, 0, N)
    a = GOLDEN.rational()
    for k in range(1, 21):
        frac = (k * a) % 1
        dist = float(min(frac, 1 - frac))
        bound = min(1.0, 1.0 / (2 * N * dist))
        assert abs(fourier_coefficient(P, k)) <= bound * (1 + 1e-9), k


def test_star_matches_brute_force_small_sets():
    import random

    rng = random.Random(7)
    for _ in range(50):
        pts = tuple(rng.random() for _ in range(rng.randint(1, 9)))
        P = PointSet1D(points=pts)
        assert star_discrepancy(P).value == pytest.approx(
            brute_star_discrepancy(pts), abs=1e-12
        )


def test_lp_matches_quadrature_small_sets():
    import random

    rng = random.Random(11)
    for _ in range(8):
        pts = tuple(rng.random() for _ in range(rng.randint(1, 7)))
        P = PointSet1D(points=pts)
        for p in (1.0, 2.0, 3.0):
            assert lp_discrepancy(P, p).value == pytest.approx(
                quad_lp_discrepancy(pts, p), abs=1e-10
            )


def test_lp_rejects_bad_exponents():
    P = PointSet1D(points=(0.5,))
    for p in (0.5, 0.0, math.inf, -2.0):
        with pytest.raises(ValueError):
            lp_discrepancy(P, p)


@given(
    st.lists(
        st.floats(min_value=0.0, max_value=1.0, exclude_max=True, allow_nan=False),
        min_size=1,
        max_size=50,
    )
)
@settings(max_examples=60, deadline=None)
def test_norm_monotonicity_and_lower_bound(pts):
    P = PointSet1D(points=tuple(pts))
    d1 = lp_discrepancy(P, 1.0).value
    d2 = lp_discrepancy(P, 2.0).value
    d4 = lp_discrepancy(P, 4.0).value
    ds = star_discrepancy(P).value
    assert d1 <= d2 + 1e-12
    assert d2 <= d4 + 1e-12
    assert d4 <= ds + 1e-12
    assert ds >= 1 / (2 * P.N) - 1e-15


def test_kh_bound():
    D = DiscrepancyValue(p=2.0, value=0.125, method="exact-closed-form")
    assert kh_bound(D, 2.0) == 0.25
    with pytest.raises(ValueError):
        kh_bound(D, -1.0)


def test_lp_variation_constant_and_validation():
    ones = [1.0] * 65
    for pp in (1.0, 2.0, math.inf):
        assert lp_variation_1d(ones, pp) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        lp_variation_1d([1.0], 2.0)
    with pytest.raises(ValueError):
        lp_variation_1d(ones, 0.5)


def test_lp_variation_linear_derivative():
    # f' = 2x on [0,1]: ||f'||_1 = 1, ||f'||_2 = 2/sqrt(3), ||f'||_inf = 2
    n = 1 << 14
    samples = [2.0 * i / n for i in range(n + 1)]
    assert lp_variation_1d(samples, 1.0) == pytest.approx(1.0, rel=1e-6)
    assert lp_variation_1d(samples, 2.0) == pytest.approx(2 / math.sqrt(3), rel=1e-6)
    assert lp_variation_1d(samples, math.inf) == 2.0


def test_gap_spectrum_three_distance():
    for N in (7, 100, 1000):
        gaps = gap_spectrum(kronecker_points(GOLDEN, 0, N))
        assert 1 <= len(gaps) <= 3, N
        assert all(isinstance(g, Fraction) and g > 0 for g in gaps)


def test_gap_spectrum_rational_wraparound():
    P = kronecker_points(Fraction(1, 8), 0, 5)
    assert gap_spectrum(P) == [Fraction(1, 8), Fraction(1, 2)]


def test_gap_spectrum_float_fallback():
    P = PointSet1D(points=(0.125, 0.375, 0.875))
    assert gap_spectrum(P) == [Fraction(1, 4), Fraction(1, 2)]


def test_gap_multiplicity_totals():
    # circular gaps of an N-point set always sum to 1
    for N in (13, 64):
        P = kronecker_points(GOLDEN, Fraction(1, 7), N)
        nums = sorted(P.exact_num)
        den = P.exact_den
        raw = [b - a for a, b in zip(nums, nums[1:])]
        raw.append(den - nums[-1] + nums[0])
        assert sum(raw) == den
        assert set(Fraction(g, den) for g in raw) == set(gap_spectrum(P))


def test_pointset_validation():
    with pytest.raises(ValueError):
        PointSet1D(points=())
    with pytest.raises(ValueError):
        PointSet1D(points=(0.2, 1.0))
    with pytest.raises(ValueError):
        PointSet1D(points=(0.2,), exact_num=(1,))
    with pytest.raises(ValueError):
        PointSet1D(points=(0.2, 0.3), exact_num=(1,), exact_den=5)
    with pytest.raises(ValueError):
        kronecker_points(Fraction(1, 3), 0, 0)
