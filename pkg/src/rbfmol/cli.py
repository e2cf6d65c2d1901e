"""Command line entry point: ``rbfmol solve|sweep|converge|residual``.

Every mode writes plain CSV (UTF-8, comma separated, header row) into the
output directory. Floats are written with 17 significant digits so they
read back bit-for-bit.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import dsw, experiment, operators
from .config import Mode, RunConfig, parse_config
from .errors import BlowUpError, InvalidInputError, NearSingularError


def fmt(value):
    value = float(value)
    if math.isnan(value):
        return "nan"
    return format(value, ".17g")


def label(value):
    # shortest round-trip repr; keeps headers readable ("0.1", not 0.10000000000000001)
    return repr(float(value))


def time_label(t):
    return format(float(t), ".6g")


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def table_csv(table: experiment.PointwiseTable):
    rows = [[label(t)] + [fmt(e) for e in row] for t, row in zip(table.ts, table.errors)]
    return _csv_text(["t/x"] + [label(x) for x in table.xs], rows)


def summary_csv(reports, ops):
    rows = [[r.variable, fmt(r.linf), fmt(r.rms), fmt(ops.cond2), fmt(ops.delta)] for r in reports]
    return _csv_text(["variable", "linf", "rms", "cond2", "delta"], rows)


def profile_csv(run, t, state):
    x = run.nodes.nodes
    u_ref = dsw.reference_u(run.params, x, t)
    v_ref = dsw.reference_v(run.params, x, t)
    rows = [[fmt(a), fmt(b), fmt(c), fmt(d), fmt(e)]
            for a, b, c, d, e in zip(x, state.u, state.v, u_ref, v_ref)]
    return _csv_text(["x", "u_num", "v_num", "u_ref", "v_ref"], rows)


def sweep_csv(points):
    rows = [[fmt(p.shape), fmt(p.linf_u), fmt(p.linf_v), fmt(p.cond2), p.status.value]
            for p in points]
    return _csv_text(["shape", "linf_u", "linf_v", "cond2", "status"], rows)


def convergence_csv(study: experiment.ConvergenceStudy):
    rows = []
    for i, (value, err, status) in enumerate(zip(study.values, study.linf, study.status)):
        rate = fmt(study.rates[i - 1]) if i else ""
        rows.append([study.parameter, fmt(value), fmt(err), rate, status.value])
    return _csv_text(["parameter", "value", "linf", "rate", "status"], rows)


def residual_rows(config: RunConfig):
    """Residuals of the reference wave on the node x sample-time grid."""
    params = config.params()
    x = config.node_set().nodes
    ts = config.sample_ts or (0.0, config.t_end)
    X, T = np.meshgrid(x, np.asarray(ts, dtype=float), indexing="ij")
    X, T = X.ravel(), T.ravel()
    r1, r2 = dsw.reference_residual(params, X, T)
    f1, f2 = dsw.residual_fd(params, X, T)
    closed = dsw.residual_closed_form(params, X, T)
    return X, T, r1, r2, closed, f1, f2


def residual_csv(cols):
    header = ["x", "t", "r1", "r2", "r2_closed", "r1_fd", "r2_fd"]
    rows = [[fmt(v) for v in row] for row in zip(*cols)]
    return _csv_text(header, rows)


def _write_all(out: Path, files):
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")


def _banner(config, cond2=None, delta=None):
    parts = [
        f"mode={config.mode.value}",
        f"kernel={config.kernel.value}",
        f"shape={config.shape:g}",
        f"c={config.wave_speed:g}",
        f"k={config.wave_number:g}",
        f"variant={config.variant.value}",
    ]
    if cond2 is not None:
        parts.append(f"cond2={cond2:.6e}")
    if delta is not None:
        parts.append(f"delta={delta:.6g}")
    print(" ".join(parts))


def _run_solve(config):
    nodes = config.node_set()
    A = operators.build_interpolation_matrix(nodes, config.kernel_spec())
    _banner(config, operators.condition_estimate(A), operators.radial_distance(nodes))
    try:
        run = experiment.solve(config)
    except (NearSingularError, BlowUpError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1, {}
    reports = [experiment.error_report(run, "u"), experiment.error_report(run, "v")]
    files = {
        "errors_u.csv": table_csv(reports[0].pointwise),
        "errors_v.csv": table_csv(reports[1].pointwise),
        "summary.csv": summary_csv(reports, run.ops),
    }
    for t, state in run.snapshots:
        files[f"profile_t{time_label(t)}.csv"] = profile_csv(run, t, state)
    for r in reports:
        print(f"{r.variable}: linf={r.linf:.6e} rms={r.rms:.6e}")
    return 0, files


def _run_sweep(config, jobs=1):
    if not config.shapes:
        raise InvalidInputError("shapes: sweep mode needs at least one shape")
    _banner(config, delta=operators.radial_distance(config.node_set()))
    points = experiment.shape_sweep(config, config.shapes, jobs=jobs)
    for p in points:
        print(f"shape={p.shape:g} status={p.status.value} cond2={p.cond2:.3e} "
              f"linf_u={p.linf_u:.3e} linf_v={p.linf_v:.3e}")
    return 0, {"sweep.csv": sweep_csv(points)}


def _run_converge(config):
    if bool(config.h_list) == bool(config.dt_list):
        raise InvalidInputError("h_list/dt_list: converge mode needs exactly one of them")
    _banner(config)
    if config.h_list:
        study = experiment.convergence_study(config, h_list=config.h_list)
    else:
        study = experiment.convergence_study(config, dt_list=config.dt_list)
    for value, err, status in zip(study.values, study.linf, study.status):
        print(f"{study.parameter}={value:g} linf={err:.6e} status={status.value}")
    return 0, {"convergence.csv": convergence_csv(study)}


def _run_residual(config):
    _banner(config)
    cols = residual_rows(config)
    X, T, r1, r2, closed, f1, f2 = cols
    params = config.params()
    z = params.wave_number * (X - params.wave_speed * T)
    expected = dsw.residual_coefficient(params) * np.max(np.abs(dsw.sech(z) * np.tanh(z)))
    print(f"max|r1|={np.max(np.abs(r1)):.6e} max|r2|={np.max(np.abs(r2)):.6e} "
          f"max|r2_fd|={np.max(np.abs(f2)):.6e} closed-form max={expected:.6e}")
    return 0, {"residual.csv": residual_csv(cols)}


def run(config: RunConfig, jobs=1):
    """Execute ``config.mode`` and write its files. Returns the exit status."""
    out = Path(config.out)
    if config.mode is Mode.SOLVE:
        status, files = _run_solve(config)
    elif config.mode is Mode.SWEEP:
        status, files = _run_sweep(config, jobs)
    elif config.mode is Mode.CONVERGE:
        status, files = _run_converge(config)
    else:
        status, files = _run_residual(config)
    if files:
        try:
            _write_all(out, files)
        except OSError as exc:
            print(f"error: cannot write to {out}: {exc}", file=sys.stderr)
            return 2
    return status


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rbfmol",
        description="RBF method-of-lines solver for the Drinfeld-Sokolov-Wilson system.",
    )
    parser.add_argument("mode", choices=[m.value for m in Mode])
    parser.add_argument("--config", metavar="FILE", help="key = value configuration file")
    parser.add_argument("--kernel", choices=["mq", "imq", "ga"])
    parser.add_argument("--shape", type=float)
    parser.add_argument("--wave-speed", type=float)
    parser.add_argument("--wave-number", type=float)
    parser.add_argument("--a", type=float, help="left end of the domain")
    parser.add_argument("--b", type=float, help="right end of the domain")
    parser.add_argument("--h", type=float, help="uniform node spacing")
    parser.add_argument("--dt", type=float)
    parser.add_argument("--t-end", type=float)
    parser.add_argument("--variant", choices=["original", "corrected"])
    parser.add_argument("--sample-xs", help="comma-separated x values")
    parser.add_argument("--sample-ts", help="comma-separated t values")
    parser.add_argument("--shapes", help="comma-separated shapes for sweep mode")
    parser.add_argument("--h-list", help="comma-separated spacings for converge mode")
    parser.add_argument("--dt-list", help="comma-separated time steps for converge mode")
    parser.add_argument("--pivot-tol", type=float)
    parser.add_argument("--out", metavar="DIR")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key not in ("config", "jobs")
    }
    try:
        config = parse_config(args.config, overrides)
        return run(config, jobs=args.jobs)
    except (InvalidInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
