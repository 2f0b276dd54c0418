"""The section function tau: closed forms, Fubini, Sobolev proxy."""

import math
from fractions import Fraction

import pytest

from equiflow.geometry import Disc, Polygon, PowerEpigraph, Prim
from equiflow.scene import load_scene
from equiflow.section import (
    discretization_identity,
    fubini_check,
    sobolev_seminorm,
    tau,
    tau_density,
    tau_samples,
)
from equiflow.slope import resolve_slope

HALF = Prim(Polygon(((0.0, 0.5), (1.0, 0.5), (1.0, 1.0), (0.0, 1.0))))
LINEAR = Prim(Polygon(((0.0, 0.0), (1.0, 0.5), (1.0, 1.0), (0.0, 1.0))))
DISC = Prim(Disc((0.5, 0.5), 0.25))
GOLDEN = resolve_slope("golden")


def test_tau_closed_form_power():
    # h = 1 is identified with h = 0: tau lives on the circle
    for p in (2.0, 3.0):
        E = Prim(PowerEpigraph(1.0, p))
        for i in range(0, 100):
            h = i / 100
            assert tau(E, 0.0, h) == pytest.approx(h ** (1.0 / p), abs=1e-10), (p, h)


def test_tau_closed_form_indicator():
    for i in range(0, 100):
        h = i / 100
        if abs(h - 0.5) < 1e-9:
            continue  # the single discontinuity
        assert tau(HALF, 0.0, h) == pytest.approx(float(h >= 0.5), abs=1e-12)


def test_tau_closed_form_ramp():
    for i in range(0, 100):
        h = i / 100
        assert tau(LINEAR, 0.0, h) == pytest.approx(min(1.0, 2 * h), abs=1e-10)


def test_tau_validation():
    with pytest.raises(ValueError):
        tau(HALF, 0.0, 1.5)
    with pytest.raises(ValueError):
        tau(HALF, 0.0, -0.1)
    with pytest.raises(ValueError):
        tau_samples(HALF, 0.0, 1)
    with pytest.raises(ValueError):
        fubini_check(HALF, 0.0, 8)


def test_tau_samples_grid_and_mean():
    E = Prim(Disc((0.5, 0.5), 0.25))
    n = 64
    samples = tau_samples(E, GOLDEN, n)
    assert samples.grid == tuple(i / n for i in range(n))
    assert samples.spacing == pytest.approx(1 / n)
    for i in (0, 7, 31, 63):
        assert samples.values[i] == pytest.approx(
            tau(E, GOLDEN, Fraction(i, n)), abs=1e-12
        )
    assert samples.mean() == pytest.approx(
        math.fsum(samples.values) / n, abs=1e-15
    )


def test_fubini_mean_approaches_area():
    E = Prim(Disc((0.5, 0.5), 0.25))
    mean, lam, diff = fubini_check(E, GOLDEN, 1024)
    assert lam == pytest.approx(math.pi * 0.0625, abs=1e-9)
    assert mean - lam == pytest.approx(diff, abs=1e-15)
    assert abs(diff) < 1e-3


def test_discretization_identity_is_exact():
    E = Prim(Disc((0.5, 0.5), 0.25))
    for alpha, x0 in ((GOLDEN, 0.3), (Fraction(2, 7), Fraction(1, 5)), (0.125, 0.0)):
        cont, disc = discretization_identity(E, alpha, x0, 100)
        assert abs(cont - disc) <= 1e-7


def test_sobolev_jump_detected_as_divergent():
    report = sobolev_seminorm(HALF, 0.0, 1.5)
    assert report.verdict == "divergent"
    sums = [s for _, s in report.levels]
    # a jump grows the proxy by 2^(s-1) per refinement
    assert sums[-1] / sums[-2] == pytest.approx(2 ** 0.5, rel=0.2)
    report3 = sobolev_seminorm(HALF, 0.0, 3.0)
    assert report3.verdict == "divergent"


def test_sobolev_disc_is_convergent():
    # vertical flow through a centred disc: tau is a continuous bump,
    # cheap to sample and square-root regular at the tangent heights
    report = sobolev_seminorm(DISC, 0.0, 1.5)
    assert report.verdict == "convergent"
    assert report.exponent == 1.5
    spacings = [dh for dh, _ in report.levels]
    assert spacings[0] == pytest.approx(1 / 256)
    assert spacings[-1] == pytest.approx(spacings[0] / 2 ** (len(spacings) - 1))


def test_sobolev_ramp_wraparound_jump_diverges():
    # min(1, 2h) is smooth on [0, 1) but jumps across h = 1 -> 0, and the
    # periodic differences see that jump, so s = 1.5 must diverge
    report = sobolev_seminorm(LINEAR, 0.0, 1.5)
    assert report.verdict == "divergent"


def test_sobolev_validation():
    with pytest.raises(ValueError):
        sobolev_seminorm(HALF, 0.0, 0.0)
    with pytest.raises(ValueError):
        sobolev_seminorm(HALF, 0.0, 4.5)
    with pytest.raises(ValueError):
        sobolev_seminorm(HALF, 0.0, 1.5, levels=9)


def test_tau_density():
    assert tau_density(lambda x, y: 1.0, GOLDEN, 0.25) == pytest.approx(1.0, abs=1e-9)
    for h in (0.1, 0.45, 0.8):
        assert tau_density(lambda x, y: y, 0.0, h) == pytest.approx(h, abs=1e-6)
    with pytest.raises(ValueError):
        tau_density(lambda x, y: 1.0, GOLDEN, 0.25, tol=1e-3)


def test_tau_matches_shipped_power_scenes(scenes_dir):
    for name, p in (("power2.json", 2.0), ("power3.json", 3.0)):
        E = load_scene(scenes_dir / name)
        for h in (0.04, 0.36, 0.81):
            assert tau(E, 0.0, h) == pytest.approx(h ** (1.0 / p), abs=1e-10)
