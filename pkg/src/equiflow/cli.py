"""Command-line interface.

Subcommands: area, tau, flow-error, discrepancy, cf, degenerate,
demo-liouville. Tables go to stdout (or --output as CSV with a PNG
companion unless --no-plot); human-readable diagnostics go to stderr.
Exit codes: 0 success, 1 validation/usage error, 2 numerical budget
exhausted.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .errors import BudgetError, EquiflowError, ValidationError
from .experiments import (
    ExperimentConfig,
    run_discrepancy_scaling,
    run_error_scaling,
    run_liouville_demo,
)
from .geometry import area, degenerate_slopes
from .scene import load_scene
from .section import tau_samples
from .slope import is_badly_approximable, ostrowski_digits, resolve_slope


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for budget exhaustion
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _emit(args, columns, rows, comments=(), plot_curves=None, xlabel="", ylabel=""):
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_num(v) for v in row))
    text = "\n".join(lines) + "\n"
    if getattr(args, "output", None):
        out = Path(args.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        if plot_curves and not getattr(args, "no_plot", False):
            from .experiments import _render_plot

            png = _render_plot(out, plot_curves, xlabel=xlabel, ylabel=ylabel)
            print(f"wrote {out} and {png}", file=sys.stderr)
        else:
            print(f"wrote {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    if getattr(args, "plot_data", None):
        from .experiments import _write_plot_data

        _write_plot_data(args.plot_data, [(r[0], r[1]) for r in rows])


def _num(v) -> str:
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".17g")


def _cmd_area(args) -> int:
    E = load_scene(args.scene)
    print(format(area(E, args.tol), ".12g"))
    return 0


def _cmd_tau(args) -> int:
    E = load_scene(args.scene)
    alpha = resolve_slope(args.alpha)
    samples = tau_samples(E, alpha, args.n)
    comments = [
        f"scene={args.scene}",
        f"alpha={alpha.label or alpha.value!r}",
        f"precision-bits={alpha.bits}",
        f"n={args.n}",
    ]
    rows = list(zip(samples.grid, samples.values))
    _emit(
        args,
        ["h", "tau"],
        rows,
        comments,
        plot_curves=[("tau(h)", samples.grid, samples.values)],
        xlabel="h",
        ylabel="tau",
    )
    print(f"mean(tau) = {samples.mean():.12g}", file=sys.stderr)
    return 0


def _cmd_flow_error(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_file(args.config)
        if args.output:
            cfg = _replace_output(cfg, args.output)
        if args.no_plot:
            cfg = _replace_plot(cfg, False)
    else:
        if not (args.scene and args.alpha and args.tmax):
            raise ValidationError("flow-error needs --config or --scene/--alpha/--tmax")
        doc = {
            "scene": args.scene,
            "alpha": args.alpha,
            "start": [args.x0, args.y0],
            "grid": {"t0": args.t0, "ratio": args.grid_ratio, "tmax": args.tmax},
            "regime": args.regime,
            "plot": not args.no_plot,
        }
        if args.output:
            doc["output"] = args.output
        cfg = ExperimentConfig.from_dict(doc, base_dir=Path.cwd())
    report = run_error_scaling(cfg)
    if not cfg.output:
        rows = list(zip(report.curve.grid, report.curve.deltas))
        _emit(args, ["T", "delta"], rows, [f"config-digest={cfg.config_digest}"])
    print(report.verdict, file=sys.stderr)
    for g, s, t in report.gamma_sups:
        print(f"gamma={g:.1f}: sup={s:.6g} at T={t:.6g}", file=sys.stderr)
    return 0


def _replace_output(cfg: ExperimentConfig, output: str) -> ExperimentConfig:
    from dataclasses import replace

    return replace(cfg, output=output)


def _replace_plot(cfg: ExperimentConfig, plot: bool) -> ExperimentConfig:
    from dataclasses import replace

    return replace(cfg, plot=plot)


def _parse_n_grid(spec: str) -> list[int]:
    if ".." in spec:
        lo_s, hi_s = spec.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        ns = []
        n = lo
        while n <= hi:
            ns.append(n)
            n *= 2
        return ns
    return [int(tok) for tok in spec.split(",") if tok.strip()]


def _cmd_discrepancy(args) -> int:
    ns = _parse_n_grid(args.n_grid)
    report = run_discrepancy_scaling(
        args.alpha, ns, p=args.p, x0=args.x0,
        output=args.output, plot=not args.no_plot,
    )
    if not args.output:
        cols = ["N", "D_inf", "D_p", "N*D_p/log(N)^(1/p')", "N*D_inf/log(N)"]
        _emit(args, cols, report.rows)
    return 0


def _compress_digits(digits) -> str:
    parts = []
    i = 1
    while i < len(digits):
        j = i
        while j < len(digits) and digits[j] == digits[i]:
            j += 1
        run = j - i
        parts.append(f"{digits[i]}x{run}" if run >= 4 else ", ".join(str(digits[i]) for _ in range(run)))
        i = j
    return f"[{digits[0]}; " + ", ".join(parts) + "]"


def _cmd_cf(args) -> int:
    s = resolve_slope(args.value)
    digits = list(s.cf[: args.depth + 1])
    print(_compress_digits(digits))
    for k, (p, q) in enumerate(s.convergents[: args.depth + 1]):
        err = abs(s.value - p / q) if q else math.inf
        print(f"  p{k}/q{k} = {p}/{q}   |alpha - p/q| = {err:.3e}")
    depth = min(args.depth, len(s.cf) - 1)
    ba = is_badly_approximable(s, depth, args.ba_bound)
    print(f"badly approximable (digits <= {args.ba_bound} up to depth {depth}): {ba}")
    if args.ostrowski is not None:
        b = ostrowski_digits(args.ostrowski, s)
        total = sum(c * q for c, (_, q) in zip(b, s.convergents))
        print(f"ostrowski({args.ostrowski}) = {b}  (sum b_i*q_i = {total})")
    return 0


def _cmd_degenerate(args) -> int:
    E = load_scene(args.scene)
    dset = degenerate_slopes(E, args.sigma)
    print(f"D_{args.sigma:g}(E): {len(dset.directions)} direction(s)")
    for d in sorted(dset.directions, key=lambda d: d.angle):
        slope = d.slope()
        srep = "inf" if slope is None else format(slope, ".12g")
        order = "inf" if math.isinf(d.order) else format(d.order, "g")
        print(f"  angle={d.angle:.12f}  slope={srep}  order={order}  source={d.source}")
    return 0


def _cmd_demo_liouville(args) -> int:
    doc = json.loads(Path(args.config).read_text())
    try:
        digits = [int(a) for a in doc["digits"]]
        rect = tuple(float(v) for v in doc["rect"])
        t_max = float(doc["t_max"])
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(f"liouville config needs digits, rect, t_max: {e}") from e
    if len(rect) != 4:
        raise ValidationError("rect must be [x_lo, x_hi, y_lo, y_hi]")
    report = run_liouville_demo(
        digits,
        rect,
        t_max,
        output=args.output or doc.get("output"),
        exponent=float(doc.get("exponent", 0.4)),
        ratio=float(doc.get("ratio", 1.01)),
        plot=not args.no_plot,
    )
    verdict = "witness found" if report.exceeded else "no witness"
    print(
        f"{verdict}: max |delta(T)|/T^{report.exponent:g} = {report.max_ratio:.6g} "
        f"at T = {report.witness_t:.6g}"
    )
    return 0


def _build_parser() -> _Parser:
    ap = _Parser(prog="equiflow", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("--output", help="write CSV here instead of stdout")
        p.add_argument("--no-plot", action="store_true", help="skip the companion PNG")
        p.add_argument("--plot-data", help="also write two-column plot data here")

    p = sub.add_parser("area", help="Lebesgue area of a scene")
    p.add_argument("--scene", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(fn=_cmd_area)

    p = sub.add_parser("tau", help="sample the section function to CSV")
    p.add_argument("--scene", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--n", type=int, default=1024)
    add_output(p)
    p.set_defaults(fn=_cmd_tau)

    p = sub.add_parser("flow-error", help="error curve and scaling statistics")
    p.add_argument("--config", help="ExperimentConfig JSON file")
    p.add_argument("--scene")
    p.add_argument("--alpha")
    p.add_argument("--tmax", type=float)
    p.add_argument("--t0", type=float, default=2.0)
    p.add_argument("--grid-ratio", type=float, default=1.1)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--y0", type=float, default=0.0)
    p.add_argument("--regime", choices=("A", "B", "C", "D"), default="B")
    add_output(p)
    p.set_defaults(fn=_cmd_flow_error)

    p = sub.add_parser("discrepancy", help="Kronecker discrepancy scaling table")
    p.add_argument("--alpha", required=True)
    p.add_argument("--n-grid", default="64..1048576", help="dyadic range lo..hi or comma list")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--x0", type=float, default=0.0)
    add_output(p)
    p.set_defaults(fn=_cmd_discrepancy)

    p = sub.add_parser("cf", help="continued-fraction tools")
    p.add_argument("--value", required=True)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--ba-bound", type=int, default=10)
    p.add_argument("--ostrowski", type=int, default=None, metavar="N")
    p.set_defaults(fn=_cmd_cf)

    p = sub.add_parser("degenerate", help="print the degenerate direction set")
    p.add_argument("--scene", required=True)
    p.add_argument("--sigma", type=float, default=2.0)
    p.set_defaults(fn=_cmd_degenerate)

    p = sub.add_parser("demo-liouville", help="near-rational witness demo")
    p.add_argument("--config", required=True)
    add_output(p)
    p.set_defaults(fn=_cmd_demo_liouville)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
        return args.fn(args)
    except BudgetError as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return 2
    except (EquiflowError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
