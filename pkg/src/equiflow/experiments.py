"""Experiment runners: error-term scaling, the adversarial near-rational
demo, and discrepancy scaling, with deterministic CSV/plot emission.

Every CSV starts with comment lines carrying the config digest, the
precision budget, and the relevant object digests, so a run is
reproducible from its own output header. Formatting is fixed at 17
significant digits; identical configs produce bit-identical files.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .discrepancy import kronecker_points, lp_discrepancy, star_discrepancy
from .errors import ConfigError, DegenerateDirectionWarning, PrecisionExhausted
from .flow import ErrorCurve, error_curve
from .geometry import SetExpr, area, degenerate_slopes
from .scene import load_scene, parse_scene, scene_dict
from .slope import Slope, from_partial_quotients, resolve_slope

__all__ = [
    "ExperimentConfig",
    "ScalingReport",
    "LiouvilleReport",
    "DiscrepancyScalingReport",
    "run_error_scaling",
    "run_liouville_demo",
    "run_discrepancy_scaling",
]

GAMMA_SCAN = tuple(round(0.5 + 0.1 * i, 1) for i in range(11))
MAX_GRID = 10**4


def _digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _write_csv(path, comments: list[str], columns: list[str], rows) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    p.write_text("\n".join(lines) + "\n")


def _write_plot_data(path, rows) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text("\n".join(f"{_fmt(a)} {_fmt(b)}" for a, b in rows) + "\n")


def _render_plot(path, curves, xlabel: str, ylabel: str, logx=True, logy=False) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    png = Path(path).with_suffix(".png")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, xs, ys in curves:
        ax.plot(xs, ys, lw=1.0, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(png, dpi=110)
    plt.close(fig)
    return png


def _geometric_grid(t0: float, ratio: float, count: int) -> list[float]:
    return [t0 * ratio**k for k in range(count)]


@dataclass(frozen=True)
class ExperimentConfig:
    """Scene + slope + T grid + regime hypothesis for a scaling run."""

    scene: SetExpr
    alpha: Slope
    start: tuple[float, float] = (0.0, 0.0)
    t0: float = 2.0
    ratio: float = 1.1
    count: int = 122
    regime: str = "B"
    output: str | None = None
    gamma_scan: tuple[float, ...] = GAMMA_SCAN
    area_tol: float = 1e-9
    plot: bool = True
    config_digest: str = ""

    def __post_init__(self) -> None:
        if self.count < 1 or self.count > MAX_GRID:
            raise ConfigError(f"grid count must lie in 1..{MAX_GRID}, got {self.count}")
        if self.ratio <= 1.0:
            raise ConfigError(f"grid ratio must exceed 1, got {self.ratio}")
        if self.t0 <= 1.0:
            raise ConfigError(f"t0 must exceed 1 (log-power statistics), got {self.t0}")
        if self.regime not in ("A", "B", "C", "D"):
            raise ConfigError(f"regime must be one of A|B|C|D, got {self.regime!r}")
        t_max = self.t0 * self.ratio ** (self.count - 1)
        if self.alpha.exact is None and t_max * max(1.0, abs(self.alpha.value)) > float(
            2 ** (self.alpha.bits - 64)
        ):
            raise PrecisionExhausted(
                f"T_max = {t_max:.3g} exceeds the {self.alpha.bits}-bit precision budget"
            )

    def t_grid(self) -> list[float]:
        return _geometric_grid(self.t0, self.ratio, self.count)

    @classmethod
    def from_dict(cls, doc: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("experiment config must be a JSON object")
        try:
            raw_scene = doc["scene"]
            alpha_spec = doc["alpha"]
        except KeyError as e:
            raise ConfigError(f"config missing required key {e.args[0]!r}") from e
        if isinstance(raw_scene, str):
            p = Path(raw_scene)
            if base_dir is not None and not p.is_absolute():
                p = base_dir / p
            scene = load_scene(p)
        else:
            scene = parse_scene({"set": raw_scene} if "set" not in raw_scene else raw_scene)
        alpha = resolve_slope(alpha_spec)
        grid = doc.get("grid", {})
        if not isinstance(grid, dict):
            raise ConfigError("'grid' must be an object with t0/ratio/count or tmax")
        t0 = float(grid.get("t0", 2.0))
        ratio = float(grid.get("ratio", 1.1))
        if "count" in grid:
            count = int(grid["count"])
        elif "tmax" in grid:
            tmax = float(grid["tmax"])
            if tmax <= t0 or ratio <= 1.0:
                raise ConfigError("grid tmax must exceed t0 with ratio > 1")
            count = int(math.floor(math.log(tmax / t0) / math.log(ratio))) + 1
        else:
            count = 122
        start = doc.get("start", [0.0, 0.0])
        if not (isinstance(start, (list, tuple)) and len(start) == 2):
            raise ConfigError("'start' must be a [x1, x2] pair")
        tol = doc.get("tolerances", {})
        digest_doc = dict(doc)
        digest_doc["scene"] = scene_dict(scene)
        return cls(
            scene=scene,
            alpha=alpha,
            start=(float(start[0]), float(start[1])),
            t0=t0,
            ratio=ratio,
            count=count,
            regime=str(doc.get("regime", "B")),
            output=doc.get("output"),
            gamma_scan=tuple(doc.get("gamma_scan", GAMMA_SCAN)),
            area_tol=float(tol.get("area", 1e-9)),
            plot=bool(doc.get("plot", True)),
            config_digest=_digest(digest_doc),
        )

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        try:
            doc = json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from e
        return cls.from_dict(doc, base_dir=p.parent)


@dataclass(frozen=True)
class DegenerateCheck:
    is_degenerate: bool
    distance: float  # angular distance to the nearest degenerate direction
    nearest_angle: float
    count: int  # number of degenerate directions of the scene at sigma = 2


@dataclass
class ScalingReport:
    curve: ErrorCurve
    gamma_sups: tuple[tuple[float, float, float], ...]  # (gamma, sup, argmax T)
    decade_sups: dict[float, tuple[tuple[float, float, float], ...]]  # gamma -> (lo, hi, sup)
    degenerate: DegenerateCheck
    regime: str
    verdict: str

    def gamma_sup(self, gamma: float) -> float:
        for g, s, _ in self.gamma_sups:
            if abs(g - gamma) < 1e-12:
                return s
        raise KeyError(f"gamma {gamma} not in the scan")

    def decade_ratios(self, gamma: float) -> tuple[float, ...]:
        for g in self.decade_sups:
            if abs(g - gamma) < 1e-12:
                sups = [s for _, _, s in self.decade_sups[g]]
                return tuple(b / a for a, b in zip(sups, sups[1:]) if a > 0)
        raise KeyError(f"gamma {gamma} not in the scan")


def _sup_stats(grid, deltas, gamma_scan):
    gamma_sups = []
    decade_sups = {}
    for g in gamma_scan:
        best, best_t = -1.0, grid[0]
        for t, d in zip(grid, deltas):
            v = abs(d) / math.log(t) ** g
            if v > best:
                best, best_t = v, t
        gamma_sups.append((g, best, best_t))
        decades = {}
        for t, d in zip(grid, deltas):
            k = math.floor(math.log10(t))
            v = abs(d) / math.log(t) ** g
            lo, hi, cur = decades.get(k, (10.0**k, 10.0 ** (k + 1), 0.0))
            decades[k] = (lo, hi, max(cur, v))
        decade_sups[g] = tuple(decades[k] for k in sorted(decades))
    return tuple(gamma_sups), decade_sups


def run_error_scaling(cfg: ExperimentConfig) -> ScalingReport:
    """Error-term scaling study on a geometric T grid.

    Emits sup_T |Delta(T)| / log(T)^gamma for every gamma in the scan and
    per-decade sups; warns when a regime that presumes a non-degenerate
    direction (B or D) is requested with alpha within 1e-12 of a
    sigma=2-degenerate direction of the scene.
    """
    E = cfg.scene
    degset = degenerate_slopes(E, 2.0)
    ang = math.atan2(cfg.alpha.value, 1.0) % math.pi
    dist, near = degset.nearest(ang)
    check = DegenerateCheck(
        is_degenerate=dist <= 1e-12,
        distance=dist,
        nearest_angle=near,
        count=len(degset.directions),
    )
    if check.is_degenerate and cfg.regime in ("B", "D"):
        warnings.warn(
            DegenerateDirectionWarning(
                f"regime {cfg.regime} requested but alpha is within 1e-12 of the "
                f"degenerate direction at angle {near:.12f}"
            )
        )
    lam = area(E, cfg.area_tol)
    curve = error_curve(E, cfg.start, cfg.alpha, cfg.t_grid(), set_area=lam)
    gamma_sups, decade_sups = _sup_stats(curve.grid, curve.deltas, cfg.gamma_scan)
    mid = decade_sups.get(0.6) or decade_sups[cfg.gamma_scan[0]]
    tail_ok = len(mid) < 2 or mid[-1][2] <= mid[-2][2]
    if check.is_degenerate:
        verdict = "degenerate direction: log-power regimes not expected to hold"
    elif tail_ok:
        verdict = "bounded: per-decade sups non-increasing over the last two decades"
    else:
        verdict = "trend up: per-decade sups still increasing at the grid end"
    report = ScalingReport(
        curve=curve,
        gamma_sups=gamma_sups,
        decade_sups=decade_sups,
        degenerate=check,
        regime=cfg.regime,
        verdict=verdict,
    )
    if cfg.output:
        comments = [
            f"config-digest={cfg.config_digest or _digest({'adhoc': True})}",
            f"precision-bits={cfg.alpha.bits}",
            f"scene-digest={curve.set_digest}",
            f"alpha={cfg.alpha.label or cfg.alpha.value!r}",
            f"area={_fmt(lam)}",
            f"regime={cfg.regime}",
            f"verdict={report.verdict}",
        ]
        rows = list(zip(curve.grid, curve.deltas))
        _write_csv(cfg.output, comments, ["T", "delta"], rows)
        if cfg.plot:
            _render_plot(
                cfg.output,
                [
                    ("|delta(T)|", curve.grid, [abs(d) for d in curve.deltas]),
                    (
                        "|delta|/log(T)^0.6",
                        curve.grid,
                        [abs(d) / math.log(t) ** 0.6 for t, d in zip(curve.grid, curve.deltas)],
                    ),
                ],
                xlabel="T",
                ylabel="error term",
            )
    return report


@dataclass
class LiouvilleReport:
    alpha: Slope
    rect: tuple[float, float, float, float]
    curve: ErrorCurve
    ratios: list[float]  # |Delta(T)| / T^exponent on the grid
    exponent: float
    witness_t: float
    max_ratio: float
    exceeded: bool


def run_liouville_demo(
    a_prefix,
    rect: tuple[float, float, float, float],
    t_max: float,
    output: str | None = None,
    exponent: float = 0.4,
    ratio: float = 1.01,
    plot: bool = True,
) -> LiouvilleReport:
    """Near-rational adversarial demo: scan T <= t_max for |Delta(T)| above
    T^exponent on a thin axis-aligned rectangle.

    a_prefix must contain a jump digit: some a_{i+1} >= q_i^2, the
    near-rational regime in which the orbit clings to a periodic one long
    enough for the rectangle bias to outgrow any log power.
    """
    alpha = from_partial_quotients(a_prefix)
    digits = alpha.cf
    qs = [q for _, q in alpha.convergents]
    # q_i >= 2: with q_0 = 1 the raw inequality is satisfied by any digit list
    if not any(
        qs[i] >= 2 and digits[i + 1] >= qs[i] ** 2 for i in range(len(digits) - 1)
    ):
        raise ConfigError(
            "digit list has no jump a_{i+1} >= q_i^2 (q_i >= 2); the demo needs "
            "a near-rational slope to produce a witness"
        )
    x0, x1, y0, y1 = rect
    if not (0.0 <= x0 < x1 <= 1.0 and 0.0 <= y0 < y1 <= 1.0):
        raise ConfigError(f"rectangle {rect} is not inside the unit square")
    from .geometry import Polygon, Prim

    E = Prim(Polygon(((x0, y0), (x1, y0), (x1, y1), (x0, y1))))
    if t_max <= 1.0:
        raise ConfigError("t_max must exceed 1")
    count = int(math.floor(math.log(t_max) / math.log(ratio))) + 1
    if count > MAX_GRID:
        raise ConfigError(f"scan grid would need {count} > {MAX_GRID} points; raise ratio")
    grid = _geometric_grid(1.0, ratio, count)
    curve = error_curve(E, (0.0, 0.0), alpha, grid)
    ratios = [abs(d) / t**exponent for t, d in zip(curve.grid, curve.deltas)]
    imax = max(range(len(ratios)), key=ratios.__getitem__)
    report = LiouvilleReport(
        alpha=alpha,
        rect=rect,
        curve=curve,
        ratios=ratios,
        exponent=exponent,
        witness_t=curve.grid[imax],
        max_ratio=ratios[imax],
        exceeded=ratios[imax] > 1.0,
    )
    if output:
        comments = [
            f"config-digest={_digest({'digits': list(digits), 'rect': list(rect), 't_max': t_max})}",
            f"precision-bits={alpha.bits}",
            f"scene-digest={curve.set_digest}",
            f"alpha-digits={list(digits)}",
            f"exponent={exponent}",
            f"witness-T={_fmt(report.witness_t)}",
            f"max-ratio={_fmt(report.max_ratio)}",
            f"exceeded={report.exceeded}",
        ]
        rows = list(zip(curve.grid, curve.deltas, ratios))
        _write_csv(output, comments, ["T", "delta", "ratio"], rows)
        if plot:
            _render_plot(
                output,
                [("|delta|/T^" + str(exponent), curve.grid, ratios)],
                xlabel="T",
                ylabel="witness ratio",
            )
    return report


@dataclass
class DiscrepancyScalingReport:
    p: float
    rows: list[tuple[int, float, float, float, float]]
    # (N, D_inf, D_p, N*D_p/log(N)^{1/p'}, N*D_inf/log N)


def run_discrepancy_scaling(
    alpha_spec,
    n_grid,
    p: float = 2.0,
    x0: float = 0.0,
    output: str | None = None,
    plot: bool = True,
) -> DiscrepancyScalingReport:
    """Discrepancy of Kronecker prefixes over a dyadic N grid.

    The table reports D_inf and D_p with the scalings under which a
    badly approximable slope stays bounded: N*D_p/log(N)^{1/p'} and
    N*D_inf/log N.
    """
    alpha = resolve_slope(alpha_spec)
    ns = [int(n) for n in n_grid]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ConfigError("N grid must be nonempty and strictly increasing")
    if any(n & (n - 1) for n in ns):
        raise ConfigError("N grid must be dyadic (powers of two)")
    if ns[-1] > 2**20:
        raise ConfigError(f"N_max must not exceed 2^20, got {ns[-1]}")
    if not 1.0 <= p < math.inf:
        raise ConfigError(f"p must lie in [1, inf), got {p}")
    pts = kronecker_points(alpha, x0, ns[-1])
    p_conj = math.inf if p == 1.0 else p / (p - 1.0)

    def one(n: int):
        pref = pts.prefix(n)
        dinf = star_discrepancy(pref).value
        dp = lp_discrepancy(pref, p).value
        logn = math.log(n)
        stat_p = n * dp if math.isinf(p_conj) else n * dp / logn ** (1.0 / p_conj)
        return (n, dinf, dp, stat_p, n * dinf / logn)

    with ThreadPoolExecutor(max_workers=4) as pool:
        rows = list(pool.map(one, ns))  # merged in grid order
    report = DiscrepancyScalingReport(p=p, rows=rows)
    if output:
        comments = [
            f"config-digest={_digest({'alpha': str(alpha_spec), 'n_grid': ns, 'p': p, 'x0': x0})}",
            f"precision-bits={alpha.bits}",
            f"alpha={alpha.label or alpha.value!r}",
            f"p={_fmt(p)}",
        ]
        cols = ["N", "D_inf", "D_p", "N*D_p/log(N)^(1/p')", "N*D_inf/log(N)"]
        _write_csv(output, comments, cols, rows)
        if plot:
            _render_plot(
                output,
                [
                    ("D_inf", [r[0] for r in rows], [r[1] for r in rows]),
                    (f"D_{p:g}", [r[0] for r in rows], [r[2] for r in rows]),
                ],
                xlabel="N",
                ylabel="discrepancy",
                logy=True,
            )
    return report
