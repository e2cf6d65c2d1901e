"""Error metrics, pointwise error tables, shape sweeps and refinement studies."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dsw, integrate, operators
from .config import RunConfig
from .errors import BlowUpError, InvalidInputError, NearSingularError


class Status(enum.Enum):
    OK = "OK"
    NEAR_SINGULAR = "NearSingular"
    BLOW_UP = "BlowUp"


def _pair(numeric, exact):
    numeric = np.asarray(numeric, dtype=float).ravel()
    exact = np.asarray(exact, dtype=float).ravel()
    if numeric.shape != exact.shape:
        raise InvalidInputError(f"length mismatch: {numeric.size} vs {exact.size}")
    return numeric, exact


def error_linf(numeric, exact):
    numeric, exact = _pair(numeric, exact)
    if numeric.size == 0:
        return 0.0
    return float(np.max(np.abs(numeric - exact)))


def error_rms(numeric, exact):
    numeric, exact = _pair(numeric, exact)
    if numeric.size == 0:
        raise InvalidInputError("rms of an empty vector is undefined")
    diff = np.abs(numeric - exact)
    scale = diff.max()
    if scale == 0.0 or not np.isfinite(scale):
        return float(scale)
    # scaled so huge but finite errors do not overflow when squared
    return float(scale * np.sqrt(np.mean((diff / scale) ** 2)))


@dataclass
class RunOutput:
    config: RunConfig
    nodes: operators.NodeSet
    params: dsw.DswParams
    ops: operators.DiffOperators
    snapshots: list

    def state_at(self, t):
        for ts, state in self.snapshots:
            if abs(ts - t) <= self.config.dt / 2:
                return state
        raise InvalidInputError(f"no snapshot at t = {t!r}")

    @property
    def final(self):
        return self.snapshots[-1][1]


def solve(config: RunConfig) -> RunOutput:
    """Build operators and integrate. Raises NearSingularError / BlowUpError."""
    nodes = config.node_set()
    params = config.params()
    ops = operators.build_diff_operators(nodes, config.kernel_spec(), config.pivot_tol)
    initial = dsw.initial_state(params, nodes)
    snapshots = integrate.integrate(initial, config.time_grid(), ops, params, nodes)
    return RunOutput(config, nodes, params, ops, snapshots)


def _reference(params, variable, x, t):
    if variable == "u":
        return dsw.reference_u(params, x, t)
    return dsw.reference_v(params, x, t)


def _variable(variable):
    v = str(variable).lower()
    if v not in ("u", "v"):
        raise InvalidInputError(f"variable must be 'u' or 'v', got {variable!r}")
    return v


@dataclass
class PointwiseTable:
    """Absolute errors laid out with one row per time and one column per x."""

    variable: str
    xs: tuple
    ts: tuple
    errors: np.ndarray

    @property
    def max(self):
        return float(self.errors.max()) if self.errors.size else 0.0


def pointwise_table(run: RunOutput, sample_xs, sample_ts, variable="u"):
    variable = _variable(variable)
    cols = []
    for x in sample_xs:
        i = run.nodes.index_of(x)
        if i is None:
            raise InvalidInputError(f"sample x = {x!r} is not a grid node")
        cols.append(i)
    errors = np.empty((len(sample_ts), len(cols)))
    for r, t in enumerate(sample_ts):
        state = run.state_at(t)
        numeric = state.u if variable == "u" else state.v
        x = run.nodes.nodes[cols]
        errors[r] = np.abs(numeric[cols] - _reference(run.params, variable, x, state.t))
    return PointwiseTable(variable, tuple(sample_xs), tuple(sample_ts), errors)


@dataclass
class ErrorReport:
    variable: str
    linf: float
    rms: float
    pointwise: PointwiseTable
    config_echo: dict = field(repr=False)


def error_report(run: RunOutput, variable="u") -> ErrorReport:
    """Pointwise-table maximum plus RMS over all nodes at the last sampled time."""
    variable = _variable(variable)
    cfg = run.config
    table = pointwise_table(run, cfg.sample_xs, cfg.sample_ts, variable)
    state = run.state_at(max(cfg.sample_ts)) if cfg.sample_ts else run.final
    numeric = state.u if variable == "u" else state.v
    exact = _reference(run.params, variable, run.nodes.nodes, state.t)
    return ErrorReport(variable, table.max, error_rms(numeric, exact), table, cfg.echo())


@dataclass(frozen=True)
class SweepPoint:
    """One shape of a sweep; error fields are NaN unless status is OK."""

    shape: float
    linf_u: float
    linf_v: float
    cond2: float
    status: Status


def sweep_point(config: RunConfig, shape: float) -> SweepPoint:
    cfg = config.replace(shape=shape)
    try:
        run = solve(cfg)
    except NearSingularError:
        status = Status.NEAR_SINGULAR
    except BlowUpError:
        status = Status.BLOW_UP
    else:
        return SweepPoint(
            shape,
            error_report(run, "u").linf,
            error_report(run, "v").linf,
            run.ops.cond2,
            Status.OK,
        )
    A = operators.build_interpolation_matrix(cfg.node_set(), cfg.kernel_spec())
    return SweepPoint(shape, math.nan, math.nan, operators.condition_estimate(A), status)


def shape_sweep(config: RunConfig, shapes, jobs=1):
    """Solve once per shape; failures are recorded, not raised. Sorted by shape."""
    shapes = sorted(float(s) for s in shapes)
    if not shapes:
        raise InvalidInputError("shape list is empty")
    if any(not s > 0 for s in shapes):
        raise InvalidInputError("every shape must be > 0")
    if jobs > 1 and len(shapes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(sweep_point, [config] * len(shapes), shapes))
    return [sweep_point(config, s) for s in shapes]


def observed_orders(params, errors):
    """Pairwise rates log(e1/e2) / log(p1/p2); NaN where undefined."""
    rates = []
    for i in range(len(params) - 1):
        e1, e2 = errors[i], errors[i + 1]
        if e1 > 0 and e2 > 0 and math.isfinite(e1) and math.isfinite(e2):
            rates.append(math.log(e1 / e2) / math.log(params[i] / params[i + 1]))
        else:
            rates.append(math.nan)
    return rates


@dataclass
class ConvergenceStudy:
    parameter: str
    values: list
    linf: list
    status: list
    rates: list


def max_error(run: RunOutput, variable="u"):
    """Largest nodal error over every stored snapshot."""
    variable = _variable(variable)
    worst = 0.0
    for t, state in run.snapshots:
        numeric = state.u if variable == "u" else state.v
        exact = _reference(run.params, variable, run.nodes.nodes, t)
        worst = max(worst, error_linf(numeric, exact))
    return worst


def convergence_study(config: RunConfig, h_list=None, dt_list=None, variable="u"):
    """One solve per refinement level of either ``h`` or ``dt``.

    The error measure is the maximum nodal error over all snapshots, which
    stays meaningful when the grid changes between levels.
    """
    if (h_list is None) == (dt_list is None):
        raise InvalidInputError("give exactly one of h_list or dt_list")
    name, values = ("h", h_list) if h_list is not None else ("dt", dt_list)
    values = [float(v) for v in values]
    if not values or any(not v > 0 for v in values):
        raise InvalidInputError(f"{name} values must be positive")
    if len(set(values)) != len(values):
        raise InvalidInputError(f"duplicate {name} values; rates are undefined")
    if any(b >= a for a, b in zip(values, values[1:])):
        raise InvalidInputError(f"{name} values must be strictly decreasing")

    linf, status = [], []
    for value in values:
        cfg = config.replace(**{name: value})
        try:
            run = solve(cfg)
        except NearSingularError:
            linf.append(math.nan)
            status.append(Status.NEAR_SINGULAR)
        except BlowUpError:
            linf.append(math.nan)
            status.append(Status.BLOW_UP)
        else:
            linf.append(max_error(run, variable))
            status.append(Status.OK)
    return ConvergenceStudy(name, values, linf, status, observed_orders(values, linf))
