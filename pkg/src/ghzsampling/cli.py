"""Command-line front end: violation, scaling, scatter, decoherence and
oracle runs with reproducible seeds and CSV/JSON output.

Output files start with '#'-prefixed metadata lines (config echo, version,
seed); reals are written with 17 significant digits so they round-trip.
The config echo deliberately excludes execution-only knobs (workers,
paths): rerunning the same config with a different worker count must
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .bell import bell_report, fit_error_exponent
from .decoherence import NOISE_DOMAIN, analytic_decay, evolve_v
from .estimators import (
    estimate_A,
    estimate_number_q,
    scatter_points,
    v_from_A,
)
from .model import (
    GhzSpec,
    ardehali_preset,
    auto_preset,
    mermin_preset,
    reference_values,
)
from .oracle import DEFAULT_QUBIT_CAP, build_state, oracle_A
from .samplers import REPRESENTATIONS, RngStream, sample_batch


def parse_samples(text: str) -> int:
    """Sample counts as plain integers or power-of-two strings like 2^22."""
    text = text.strip()
    if "^" in text:
        base, _, exp = text.partition("^")
        return int(base) ** int(exp)
    return int(text)


def parse_qubits(text: str):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def preset_for(M: int, preset: str, phi):
    if preset == "mermin":
        spec, plan = mermin_preset(M)
    elif preset == "ardehali":
        spec, plan = ardehali_preset(M)
    else:
        spec, plan = auto_preset(M)
    if phi is not None:
        spec = GhzSpec(M, phi)
    return spec, plan


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_output(path, fmt, config, columns, rows, diagnostics):
    """Write rows as CSV (with '#' metadata) or a single JSON object."""
    if fmt == "csv":
        lines = [
            f"# ghzsampling {__version__}",
            f"# config {json.dumps(config, sort_keys=True)}",
            f"# seed {config['seed']}",
            ",".join(columns),
        ]
        for row in rows:
            lines.append(",".join(_fmt(row.get(col)) for col in columns))
        if diagnostics:
            lines.append(f"# diagnostics {json.dumps(diagnostics, sort_keys=True)}")
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "version": __version__,
            "config": config,
            "results": rows,
            "diagnostics": diagnostics,
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _config_echo(args, fields):
    config = {"subcommand": args.command, "seed": args.seed}
    for name in fields:
        config[name] = getattr(args, name)
    return config


def run_violations(args):
    rows = []
    for M in args.qubits:
        spec, plan = preset_for(M, args.preset, args.phi)
        t0 = time.perf_counter()
        batch = sample_batch(
            spec, args.samples, args.representation, args.seed,
            sub_batches=args.sub_batches, workers=args.workers,
        )
        est = estimate_A(batch, plan, args.sub_batches)
        report = bell_report(est, M)
        # wall time goes to stderr, never into the file: output bytes must
        # not depend on scheduling
        print(
            f"violations M={M}: v={report.v_hat:.6g} se={report.v_se:.3g} "
            f"({time.perf_counter() - t0:.2f}s wall)",
            file=sys.stderr,
        )
        rows.append(
            {
                "M": M,
                "v_hat": report.v_hat,
                "v_se": report.v_se,
                "mabk_bound": report.mabk_bound,
                "qm_v": report.qm_v,
                "svetlichny_bound": report.svetlichny_bound,
                "sigma_mabk": report.sigma_mabk,
                "sigma_svetlichny": report.sigma_svetlichny,
                "genuine": report.genuine,
                "relative_error": report.relative_error,
                "acceptance_rate": batch.acceptance_rate,
            }
        )
    columns = list(rows[0].keys())
    config = _config_echo(
        args, ["qubits", "samples", "representation", "preset", "phi", "sub_batches"]
    )
    write_output(args.output, args.format, config, columns, rows, {})
    return 0


def run_scaling(args):
    if len(args.qubits) < 4:
        raise SystemExit("scaling needs at least 4 qubit counts")
    reps = args.representation.split(",")
    rows = []
    fits = {}
    for rep in reps:
        points = []
        for M in args.qubits:
            spec, plan = preset_for(M, args.preset, args.phi)
            batch = sample_batch(
                spec, args.samples, rep, args.seed,
                sub_batches=args.sub_batches, workers=args.workers,
            )
            est = estimate_A(batch, plan, args.sub_batches)
            _, v_se = v_from_A(est, M)
            v_rel = v_se / reference_values(M).qm_V
            row = {"representation": rep, "M": M, "v_rel_error": v_rel,
                   "n_rel_error": None}
            if rep == "su2q":
                num = estimate_number_q(batch)
                row["n_rel_error"] = num.se_re / num.mean.real
            points.append((M, v_rel))
            rows.append(row)
            print(f"scaling {rep} M={M}: v_rel_error={v_rel:.4g}", file=sys.stderr)
        fit = fit_error_exponent(points)
        fits[rep] = {"slope": fit.slope, "intercept": fit.intercept,
                     "residual": fit.residual}
    columns = ["representation", "M", "v_rel_error", "n_rel_error"]
    config = _config_echo(
        args, ["qubits", "samples", "representation", "preset", "phi", "sub_batches"]
    )
    write_output(args.output, args.format, config, columns, rows, {"fits": fits})
    if args.plot:
        _plot_scaling(args.plot, rows, fits)
    return 0


def run_scatter(args):
    M = args.qubits[0]
    reps = args.representation.split(",")
    rows = []
    for rep in reps:
        spec, plan = preset_for(M, args.preset, args.phi)
        batch = sample_batch(
            spec, args.samples, rep, args.seed,
            sub_batches=args.sub_batches, workers=args.workers,
        )
        pts = scatter_points(batch, plan, tuple(args.pair))
        for idx in range(pts.shape[0]):
            rows.append(
                {"representation": rep, "sample": idx,
                 "x1": float(pts[idx, 0]), "x2": float(pts[idx, 1])}
            )
    columns = ["representation", "sample", "x1", "x2"]
    config = _config_echo(
        args,
        ["qubits", "samples", "representation", "preset", "phi", "sub_batches", "pair"],
    )
    write_output(args.output, args.format, config, columns, rows, {})
    if args.plot:
        _plot_scatter(args.plot, rows)
    return 0


def run_decohere(args):
    rows = []
    for M in args.qubits:
        spec, plan = preset_for(M, args.preset, args.phi)
        batch = sample_batch(
            spec, args.samples, args.representation, args.seed,
            sub_batches=args.sub_batches, workers=args.workers,
        )
        noise = RngStream(args.seed, stream=M, domain=NOISE_DOMAIN)
        run = evolve_v(spec, plan, args.epsilon, args.steps, batch, noise,
                       sub_batches=args.sub_batches)
        for tau, v_hat, v_se in run.series:
            rows.append(
                {"M": M, "tau": tau, "v_hat": v_hat, "v_se": v_se,
                 "analytic": float(analytic_decay(args.epsilon, M, tau))}
            )
    columns = ["M", "tau", "v_hat", "v_se", "analytic"]
    config = _config_echo(
        args,
        ["qubits", "samples", "representation", "preset", "phi", "sub_batches",
         "epsilon", "steps"],
    )
    write_output(args.output, args.format, config, columns, rows, {})
    if args.plot:
        _plot_decoherence(args.plot, rows)
    return 0


def run_oracle(args):
    rows = []
    for M in args.qubits:
        spec, plan = preset_for(M, args.preset, args.phi)
        if M > DEFAULT_QUBIT_CAP:
            raise SystemExit(f"oracle limited to M <= {DEFAULT_QUBIT_CAP}")
        state = build_state(spec)
        a = oracle_A(state, plan)
        ref = reference_values(M) if M >= 2 else None
        if M % 2 == 0:
            v = abs(a.real + a.imag)
        else:
            v = abs(np.sqrt(2.0) * a.imag)
        rows.append(
            {
                "M": M,
                "preset": args.preset,
                "re_A": a.real,
                "im_A": a.imag,
                "v": v,
                "qm_v": ref.qm_V if ref else None,
                "mabk_bound": ref.mabk_bound if ref else None,
                "svetlichny_bound": ref.svetlichny_bound if ref else None,
            }
        )
    columns = list(rows[0].keys())
    config = _config_echo(args, ["qubits", "preset", "phi"])
    write_output(args.output, args.format, config, columns, rows, {})
    return 0


def _agg_axes():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _plot_scatter(path, rows):
    plt = _agg_axes()
    fig, ax = plt.subplots(figsize=(5, 5))
    for rep in sorted({r["representation"] for r in rows}):
        xs = [r["x1"] for r in rows if r["representation"] == rep]
        ys = [r["x2"] for r in rows if r["representation"] == rep]
        ax.plot(xs, ys, ".", ms=1, alpha=0.3, label=rep)
    box = plt.Rectangle((-1, -1), 2, 2, fill=False, color="k", lw=1.5)
    ax.add_patch(box)
    ax.set_xlabel("site-1 x weight")
    ax.set_ylabel("site-2 x weight")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)


def _plot_scaling(path, rows, fits):
    plt = _agg_axes()
    fig, ax = plt.subplots()
    for rep, fit in fits.items():
        ms = [r["M"] for r in rows if r["representation"] == rep]
        errs = [r["v_rel_error"] for r in rows if r["representation"] == rep]
        ax.semilogy(ms, errs, "o-", base=2,
                    label=f"{rep} (slope {fit['slope']:.3f})")
    ax.set_xlabel("qubits M")
    ax.set_ylabel("relative error of V")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)


def _plot_decoherence(path, rows):
    plt = _agg_axes()
    fig, ax = plt.subplots()
    for M in sorted({r["M"] for r in rows}):
        sub = [r for r in rows if r["M"] == M]
        taus = [r["tau"] for r in sub]
        ax.plot(taus, [r["v_hat"] for r in sub], "o", ms=3, label=f"M={M}")
        v0 = sub[0]["v_hat"]
        ax.plot(taus, [v0 * r["analytic"] for r in sub], "-", color="gray")
    ax.set_xlabel("dimensionless time")
    ax.set_ylabel("V")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ghzsampling",
        description="Phase-space sampling of multipartite GHZ Bell violations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, samples=True):
        p.add_argument("--qubits", type=parse_qubits, default=[2],
                       help="comma-separated qubit counts")
        if samples:
            p.add_argument("--samples", type=parse_samples, default=1 << 16,
                           help="accepted samples per run (int or 2^k)")
            p.add_argument("--representation", default="su2q",
                           help="|".join(REPRESENTATIONS) + " (comma list ok)")
            p.add_argument("--sub-batches", dest="sub_batches", type=int, default=64)
            p.add_argument("--workers", type=int,
                           default=max(1, os.cpu_count() or 1))
        p.add_argument("--preset", choices=["mermin", "ardehali", "auto"],
                       default="auto")
        p.add_argument("--phi", type=float, default=None,
                       help="override the GHZ relative phase (radians)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", default=None, help="output path ('-' = stdout)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--plot", default=None, help="optional SVG plot path")

    p = sub.add_parser("violations", help="Bell-violation reports per M")
    common(p)
    p.set_defaults(func=run_violations)

    p = sub.add_parser("scaling", help="sampling-error scaling study")
    common(p)
    p.set_defaults(func=run_scaling)

    p = sub.add_parser("scatter", help="per-sample weight scatter dump")
    common(p)
    p.set_defaults(representation="su2q,pp-number")
    p.add_argument("--pair", type=lambda s: [int(t) for t in s.split(",")],
                   default=[0, 1], help="two site indices for the scatter")
    p.set_defaults(func=run_scatter)

    p = sub.add_parser("decohere", help="collective-noise decay of V")
    common(p)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=50)
    p.set_defaults(func=run_decohere)

    p = sub.add_parser("oracle", help="exact reference values per M")
    common(p, samples=False)
    p.set_defaults(func=run_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
