"""Experiment configs and runners: validation, determinism, CSV contracts."""

import json
import math
from fractions import Fraction
from pathlib import Path

import pytest

from equiflow.errors import ConfigError, DegenerateDirectionWarning, PrecisionExhausted
from equiflow.experiments import (
    ExperimentConfig,
    run_discrepancy_scaling,
    run_error_scaling,
    run_liouville_demo,
)
from equiflow.geometry import Disc, Polygon, Prim, area
from equiflow.slope import resolve_slope

DISC = Prim(Disc((0.5, 0.5), 0.25))
SQUARE = Prim(Polygon(((0.25, 0.25), (0.75, 0.25), (0.75, 0.75), (0.25, 0.75))))
GOLDEN = resolve_slope("golden")


def small_cfg(**kw):
    base = dict(scene=DISC, alpha=GOLDEN, t0=2.0, ratio=1.5, count=12, plot=False)
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ConfigError):
        small_cfg(count=0)
    with pytest.raises(ConfigError):
        small_cfg(count=10001)
    with pytest.raises(ConfigError):
        small_cfg(ratio=1.0)
    with pytest.raises(ConfigError):
        small_cfg(t0=1.0)
    with pytest.raises(ConfigError):
        small_cfg(regime="E")


def test_config_budget_guard():
    # T_max ~ 2^200 outruns the default 256-bit fixed point
    with pytest.raises(PrecisionExhausted):
        small_cfg(ratio=2.0, count=200)
    # exact rational slopes never lose precision, any T goes
    cfg = small_cfg(alpha=resolve_slope(Fraction(2, 7)), ratio=2.0, count=200)
    assert cfg.t_grid()[-1] == pytest.approx(2.0 * 2.0**199)


def test_t_grid_geometric():
    cfg = small_cfg()
    g = cfg.t_grid()
    assert len(g) == 12
    assert g[0] == 2.0
    for a, b in zip(g, g[1:]):
        assert b / a == pytest.approx(1.5)


def test_from_dict_inline_scene_and_tmax():
    doc = {
        "scene": {"shape": "disc", "center": [0.5, 0.5], "radius": 0.25},
        "alpha": "golden",
        "grid": {"t0": 10.0, "ratio": 1.06, "tmax": 1.0e5},
    }
    cfg = ExperimentConfig.from_dict(doc)
    assert cfg.count == 159
    assert cfg.t0 == 10.0
    assert cfg.t_grid()[-1] <= 1.0e5 < cfg.t_grid()[-1] * 1.06
    assert area(cfg.scene) == pytest.approx(math.pi / 16)
    assert len(cfg.config_digest) == 16
    assert cfg.config_digest == ExperimentConfig.from_dict(doc).config_digest
    other = ExperimentConfig.from_dict({**doc, "start": [0.5, 0.5]})
    assert other.config_digest != cfg.config_digest


def test_from_dict_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"alpha": "golden"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(
            {"scene": {"shape": "disc", "center": [0.5, 0.5], "radius": 0.25},
             "alpha": "golden", "grid": 5}
        )
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(
            {"scene": {"shape": "disc", "center": [0.5, 0.5], "radius": 0.25},
             "alpha": "golden", "grid": {"t0": 10.0, "tmax": 5.0}}
        )
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(
            {"scene": {"shape": "disc", "center": [0.5, 0.5], "radius": 0.25},
             "alpha": "golden", "start": [1.0]}
        )


def test_from_file_relative_scene(repo_root):
    cfg = ExperimentConfig.from_file(repo_root / "configs" / "disc_golden.json")
    assert cfg.count == 159
    assert area(cfg.scene) == pytest.approx(math.pi / 16)
    assert cfg.regime == "B"


def test_from_file_errors(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(bad)


def test_error_scaling_report_contracts():
    report = run_error_scaling(small_cfg())
    assert len(report.gamma_sups) == 11
    assert [g for g, _, _ in report.gamma_sups] == [
        pytest.approx(0.5 + 0.1 * i) for i in range(11)
    ]
    assert not report.degenerate.is_degenerate
    assert report.degenerate.distance > 0
    assert report.gamma_sup(0.5) > 0
    assert all(r > 0 for r in report.decade_ratios(0.6))
    assert report.verdict
    assert report.regime == "B"
    with pytest.raises(KeyError):
        report.gamma_sup(0.55)
    with pytest.raises(KeyError):
        report.decade_ratios(0.55)
    assert report.curve.grid == small_cfg().t_grid()


def test_error_scaling_degenerate_warns():
    cfg = small_cfg(scene=SQUARE, alpha=resolve_slope(0.0), regime="B")
    with pytest.warns(DegenerateDirectionWarning):
        report = run_error_scaling(cfg)
    assert report.degenerate.is_degenerate
    assert report.degenerate.count == 2
    assert report.verdict.startswith("degenerate")


def test_error_scaling_csv_deterministic(tmp_path):
    out1 = tmp_path / "a" / "run.csv"
    out2 = tmp_path / "b" / "run.csv"
    run_error_scaling(small_cfg(output=str(out1)))
    run_error_scaling(small_cfg(output=str(out2)))
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    text = b1.decode()
    assert text.startswith("# config-digest=")
    assert "# precision-bits=256" in text
    assert "# scene-digest=" in text
    header = [l for l in text.splitlines() if not l.startswith("#")][0]
    assert header == "T,delta"
    assert not (out1.with_suffix(".png")).exists()  # plot=False


def test_error_scaling_plot_rendered(tmp_path):
    out = tmp_path / "run.csv"
    run_error_scaling(small_cfg(output=str(out), plot=True))
    png = out.with_suffix(".png")
    assert png.is_file() and png.stat().st_size > 1000


def test_liouville_rejects_golden_digits():
    with pytest.raises(ConfigError):
        run_liouville_demo([0] + [1] * 12, (0.25, 0.75, 0.6, 0.64), 100.0)


def test_liouville_validation():
    digits = [0, 2, 16]
    with pytest.raises(ConfigError):
        run_liouville_demo(digits, (0.75, 0.25, 0.6, 0.64), 100.0)  # x0 > x1
    with pytest.raises(ConfigError):
        run_liouville_demo(digits, (0.25, 1.25, 0.6, 0.64), 100.0)  # pokes out
    with pytest.raises(ConfigError):
        run_liouville_demo(digits, (0.25, 0.75, 0.6, 0.64), 1.0)  # t_max
    with pytest.raises(ConfigError):
        run_liouville_demo(digits, (0.25, 0.75, 0.6, 0.64), 1.0e6, ratio=1.0001)


def test_liouville_small_demo_fields(tmp_path):
    out = tmp_path / "liou.csv"
    report = run_liouville_demo(
        [0, 2, 16], (0.25, 0.75, 0.6, 0.64), 50.0,
        output=str(out), ratio=1.2, plot=False,
    )
    assert report.alpha.cf[:3] == (0, 2, 16)
    assert report.exponent == 0.4
    assert len(report.ratios) == len(report.curve.grid)
    assert report.max_ratio == max(report.ratios)
    assert report.witness_t in report.curve.grid
    assert report.exceeded == (report.max_ratio > 1.0)
    i = report.curve.grid.index(report.witness_t)
    assert report.ratios[i] == report.max_ratio
    text = out.read_text()
    assert "# witness-T=" in text
    assert "# exceeded=" in text
    header = [l for l in text.splitlines() if not l.startswith("#")][0]
    assert header == "T,delta,ratio"


def test_discrepancy_scaling_validation():
    with pytest.raises(ConfigError):
        run_discrepancy_scaling("golden", [10, 40])
    with pytest.raises(ConfigError):
        run_discrepancy_scaling("golden", [32, 16])
    with pytest.raises(ConfigError):
        run_discrepancy_scaling("golden", [])
    with pytest.raises(ConfigError):
        run_discrepancy_scaling("golden", [2**21])
    with pytest.raises(ConfigError):
        run_discrepancy_scaling("golden", [16, 32], p=0.5)
    with pytest.raises(ConfigError):
        run_discrepancy_scaling("golden", [16, 32], p=math.inf)


def test_discrepancy_scaling_rows_match_direct(tmp_path):
    from equiflow.discrepancy import kronecker_points, lp_discrepancy, star_discrepancy

    ns = [16, 64, 256]
    out = tmp_path / "disc.csv"
    report = run_discrepancy_scaling("golden", ns, p=2.0, output=str(out), plot=False)
    assert [r[0] for r in report.rows] == ns
    pts = kronecker_points(GOLDEN, 0, 256)
    for n, dinf, dp, stat_p, stat_inf in report.rows:
        pref = pts.prefix(n)
        assert dinf == star_discrepancy(pref).value
        assert dp == lp_discrepancy(pref, 2.0).value
        assert stat_p == pytest.approx(n * dp / math.log(n) ** 0.5, rel=1e-15)
        assert stat_inf == pytest.approx(n * dinf / math.log(n), rel=1e-15)
    text = out.read_text()
    assert "# p=2" in text
    assert "N,D_inf,D_p" in text
