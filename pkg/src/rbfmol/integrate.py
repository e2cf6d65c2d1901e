"""Fixed-step classical Runge-Kutta integration of the semi-discrete system.

U and V are advanced together as one state Y = (U, V): the right-hand side
for U depends on V and the one for V on both, so each stage evaluates the
full coupled system at the jointly updated stage state. Dirichlet values
are written into the stage state before every right-hand-side evaluation
and into the result after the update.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dsw
from .errors import BlowUpError, InvalidInputError


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    t_end: float
    dt: float
    sample_times: tuple = field(default_factory=tuple)

    def __post_init__(self):
        t0, t_end, dt = float(self.t0), float(self.t_end), float(self.dt)
        if not dt > 0:
            raise InvalidInputError(f"dt must be > 0, got {self.dt!r}")
        if not t0 < t_end:
            raise InvalidInputError(f"need t0 < t_end, got {t0} and {t_end}")
        steps = (t_end - t0) / dt
        if abs(steps - round(steps)) > 1e-6:
            raise InvalidInputError(f"t_end - t0 = {t_end - t0!r} is not a multiple of dt = {dt!r}")
        samples = tuple(sorted(float(s) for s in self.sample_times))
        for s in samples:
            if s < t0 - dt / 2 or s > t_end + dt / 2:
                raise InvalidInputError(f"sample time {s!r} outside [{t0}, {t_end}]")
            n = (s - t0) / dt
            if abs(n - round(n)) > 1e-6:
                raise InvalidInputError(f"sample time {s!r} is not a multiple of dt = {dt!r}")
        object.__setattr__(self, "t0", t0)
        object.__setattr__(self, "t_end", t_end)
        object.__setattr__(self, "dt", dt)
        object.__setattr__(self, "sample_times", samples)

    @property
    def n_steps(self):
        return round((self.t_end - self.t0) / self.dt)

    def time(self, n):
        return self.t0 + n * self.dt

    def sample_steps(self):
        """Step index at which each sample time is captured."""
        return [round((s - self.t0) / self.dt) for s in self.sample_times]


def rk4_advance(f, t, y, dt, constrain=None):
    """One classical RK4 step of y' = f(t, y).

    ``constrain(t, y)`` may overwrite entries of a stage state in place; it
    is applied before each evaluation of ``f`` and to the result.
    """
    if not dt > 0:
        raise InvalidInputError(f"dt must be > 0, got {dt!r}")
    half = t + 0.5 * dt
    full = t + dt

    def stage(tau, base):
        if constrain is not None:
            constrain(tau, base)
        return f(tau, base)

    y = np.array(y, dtype=float)
    k1 = stage(t, y.copy())
    k2 = stage(half, y + (0.5 * dt) * k1)
    k3 = stage(half, y + (0.5 * dt) * k2)
    k4 = stage(full, y + dt * k3)
    out = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if constrain is not None:
        constrain(full, out)
    return out


class _CoupledSystem:
    """Adapter exposing the DSW right-hand side on a stacked vector."""

    def __init__(self, ops, params, n, boundary=None):
        self.ops = ops
        self.params = params
        self.n = n
        self.boundary = boundary or (lambda t: dsw.boundary_values(params, t))

    def __call__(self, t, y):
        du, dv = dsw.rhs_arrays(y[: self.n], y[self.n:], self.ops, t)
        return np.concatenate([du, dv])

    def constrain(self, t, y):
        u_a, u_b, v_a, v_b = self.boundary(t)
        n = self.n
        y[0], y[n - 1], y[n], y[2 * n - 1] = u_a, u_b, v_a, v_b


def _stack(state):
    return np.concatenate([state.u, state.v])


def rk4_step(state, dt, ops, params, nodes=None, boundary=None):
    """Advance ``state`` by one RK4 step of size ``dt``.

    ``boundary(t) -> (u_a, u_b, v_a, v_b)`` replaces the reference-solution
    Dirichlet data when given.
    """
    if not dt > 0:
        raise InvalidInputError(f"dt must be > 0, got {dt!r}")
    n = len(state)
    if nodes is not None and len(nodes) != n:
        raise InvalidInputError(f"state has {n} nodes, node set has {len(nodes)}")
    system = _CoupledSystem(ops, params, n, boundary)
    y = rk4_advance(system, state.t, _stack(state), dt, system.constrain)
    return dsw.SolverState(state.t + dt, y[:n], y[n:])


def integrate(initial, grid: TimeGrid, ops, params, nodes=None, boundary=None):
    """Step from ``grid.t0`` to ``grid.t_end``, returning (time, state) snapshots.

    A snapshot is taken at every requested sample time (snapped to the
    nearest step) and the final state is always included.
    """
    if abs(initial.t - grid.t0) > grid.dt / 2:
        raise InvalidInputError(f"initial state is at t = {initial.t}, grid starts at {grid.t0}")
    n = len(initial)
    if nodes is not None and len(nodes) != n:
        raise InvalidInputError(f"state has {n} nodes, node set has {len(nodes)}")
    if ops.d1.shape != (n, n):
        raise InvalidInputError(f"operators are {ops.d1.shape}, state has {n} nodes")

    system = _CoupledSystem(ops, params, n, boundary)
    wanted = {}
    for step, ts in zip(grid.sample_steps(), grid.sample_times):
        wanted.setdefault(step, grid.time(step))

    snapshots = []
    y = _stack(initial)
    if 0 in wanted:
        snapshots.append((grid.t0, dsw.SolverState(grid.t0, y[:n], y[n:])))

    total = grid.n_steps
    for step in range(1, total + 1):
        t = grid.time(step - 1)
        try:
            y = rk4_advance(system, t, y, grid.dt, system.constrain)
        except BlowUpError as exc:
            raise exc.at_step(step) from None
        if step in wanted or step == total:
            tn = grid.time(step)
            snapshots.append((tn, dsw.SolverState(tn, y[:n].copy(), y[n:].copy())))
    return snapshots

