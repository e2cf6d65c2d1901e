"""The coupled Drinfeld-Sokolov-Wilson system

    u_t + 3 v v_x = 0
    v_t + 2 v_xxx + 2 u v_x + u_x v = 0

with its sech-profile travelling wave, written with xi = x - c t, as

    u = C + 3 k^2 sech^2(k xi),   v = 2 k sqrt(c/2) sech(k xi).

Two choices of the constant C are provided. ``Variant.ORIGINAL`` uses
C = (c - 4k)/2, the form behind the benchmark error tables. ``Variant.CORRECTED`` uses C = (c - 2k^2)/2, the only constant for
which the second equation holds exactly. Substituting the wave gives

    r1 = 0,   r2 = A k sech(k xi) tanh(k xi) (c - 2 k^2 - 2 C),   A = 2 k sqrt(c/2),

so the original constant leaves r2 = 2 A k^2 (2 - k) sech tanh, which is
O(k^3) for small k.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import fd
from .errors import BlowUpError, InvalidInputError

SECH_CUTOFF = 350.0


class Variant(enum.Enum):
    ORIGINAL = "original"
    CORRECTED = "corrected"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise InvalidInputError(
                f"unknown variant {name!r}; expected 'original' or 'corrected'"
            ) from None


@dataclass(frozen=True)
class DswParams:
    wave_speed: float
    wave_number: float
    a: float = -4.0
    b: float = 4.0
    variant: Variant = Variant.ORIGINAL

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        c, k = float(self.wave_speed), float(self.wave_number)
        if not (math.isfinite(c) and c > 0):
            raise InvalidInputError(f"wave_speed must be > 0, got {self.wave_speed!r}")
        if not math.isfinite(k) or k == 0:
            raise InvalidInputError(f"wave_number must be finite and nonzero, got {self.wave_number!r}")
        if not float(self.a) < float(self.b):
            raise InvalidInputError(f"domain must satisfy a < b, got [{self.a}, {self.b}]")
        object.__setattr__(self, "wave_speed", c)
        object.__setattr__(self, "wave_number", k)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @property
    def amplitude(self):
        """Peak of v, 2 k sqrt(c/2)."""
        return 2.0 * self.wave_number * math.sqrt(self.wave_speed / 2.0)

    @property
    def u_offset(self):
        c, k = self.wave_speed, self.wave_number
        if self.variant is Variant.ORIGINAL:
            return (c - 4.0 * k) / 2.0
        return (c - 2.0 * k * k) / 2.0


@dataclass(frozen=True)
class SolverState:
    t: float
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        v = np.array(self.v, dtype=float)
        if u.shape != v.shape or u.ndim != 1:
            raise InvalidInputError(f"u and v must be equal-length vectors, got {u.shape} and {v.shape}")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "t", float(self.t))

    def __len__(self):
        return self.u.size

    @property
    def is_finite(self):
        return bool(np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.v)))


def sech(z):
    """1/cosh(z), exactly zero for |z| > 350 where cosh would overflow."""
    z = np.asarray(z, dtype=float)
    big = np.abs(z) > SECH_CUTOFF
    out = 1.0 / np.cosh(np.where(big, 0.0, z))
    return np.where(big, 0.0, out)


def _phase(p, x, t):
    return p.wave_number * (np.asarray(x, dtype=float) - p.wave_speed * np.asarray(t, dtype=float))


def reference_u(p: DswParams, x, t):
    s = sech(_phase(p, x, t))
    return p.u_offset + 3.0 * p.wave_number**2 * s * s


def reference_v(p: DswParams, x, t):
    return p.amplitude * sech(_phase(p, x, t))


def initial_state(p: DswParams, nodes) -> SolverState:
    x = nodes.nodes
    return SolverState(0.0, reference_u(p, x, 0.0), reference_v(p, x, 0.0))


def boundary_values(p: DswParams, t):
    """Dirichlet data (u_a, u_b, v_a, v_b) at time ``t``."""
    ends = np.array([p.a, p.b])
    u = reference_u(p, ends, t)
    v = reference_v(p, ends, t)
    return float(u[0]), float(u[1]), float(v[0]), float(v[1])


def rhs_arrays(u, v, ops, t=0.0):
    """Semi-discrete right-hand side on plain arrays.

    du = -3 v * (d1 v)
    dv = -(2 d3 v + 2 u * (d1 v) + (d1 u) * v)
    """
    with np.errstate(over="ignore", invalid="ignore"):
        vx = ops.d1 @ v
        ux = ops.d1 @ u
        vxxx = ops.d3 @ v
        du = -3.0 * v * vx
        dv = -(2.0 * vxxx + 2.0 * u * vx + ux * v)
    finite = np.isfinite(du) & np.isfinite(dv)
    if not finite.all():
        raise BlowUpError(t, int(np.argmin(finite)))
    return du, dv


def rhs(state: SolverState, ops):
    return rhs_arrays(state.u, state.v, ops, state.t)


def _analytic_parts(p, x, t):
    # partial derivatives of the reference wave, term by term
    k, c, A = p.wave_number, p.wave_speed, p.amplitude
    z = _phase(p, x, t)
    S = sech(z)
    T = np.tanh(z)
    u = p.u_offset + 3.0 * k * k * S * S
    v = A * S
    u_x = -6.0 * k**3 * S * S * T
    u_t = -c * u_x
    v_x = -A * k * S * T
    v_t = -c * v_x
    v_xxx = A * k**3 * S * T * (6.0 * S * S - 1.0)
    return dict(u=u, v=v, u_x=u_x, u_t=u_t, v_x=v_x, v_t=v_t, v_xxx=v_xxx)


def _combine(d):
    r1_terms = (d["u_t"], 3.0 * d["v"] * d["v_x"])
    r2_terms = (d["v_t"], 2.0 * d["v_xxx"], 2.0 * d["u"] * d["v_x"], d["u_x"] * d["v"])
    r1 = r1_terms[0] + r1_terms[1]
    r2 = r2_terms[0] + r2_terms[1] + r2_terms[2] + r2_terms[3]
    scale1 = sum(np.abs(term) for term in r1_terms)
    scale2 = sum(np.abs(term) for term in r2_terms)
    return r1, r2, scale1, scale2


def reference_residual(p: DswParams, x, t):
    """PDE residuals (r1, r2) of the reference wave from analytic derivatives."""
    r1, r2, _, _ = _combine(_analytic_parts(p, x, t))
    return r1, r2


def residual_scales(p: DswParams, x, t):
    """Sum of absolute term magnitudes in each residual, for relative checks."""
    _, _, s1, s2 = _combine(_analytic_parts(p, x, t))
    return s1, s2


def residual_coefficient(p: DswParams):
    """Coefficient of sech*tanh in r2.

    A k (c - 2k^2 - 2C) simplifies to 2 A k^2 (2 - k) for the original
    constant and to zero for the corrected one; the simplified form avoids
    the cancellation in c - 2C.
    """
    if p.variant is Variant.CORRECTED:
        return 0.0
    k = p.wave_number
    return 2.0 * p.amplitude * k * k * (2.0 - k)


def residual_closed_form(p: DswParams, x, t):
    """r2 of the reference wave in closed form; r1 is identically zero."""
    z = _phase(p, x, t)
    return residual_coefficient(p) * sech(z) * np.tanh(z)


def residual_fd(p: DswParams, x, t, levels=5):
    """Residuals from Richardson finite differences of the reference wave.

    Steps scale with the wave's length 1/|k| and period 1/(c|k|); the
    profile is smooth on those scales so large steps keep rounding low.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    k, c = abs(p.wave_number), p.wave_speed
    hx = 0.2 / k
    ht = 0.2 / (k * c)

    def in_x(func):
        return lambda xx: func(p, xx, t)

    def in_t(func):
        return lambda tt: func(p, x, tt)

    d = dict(
        u=reference_u(p, x, t),
        v=reference_v(p, x, t),
        u_x=fd.richardson(in_x(reference_u), x, 1, hx, levels),
        u_t=fd.richardson(in_t(reference_u), t, 1, ht, levels),
        v_x=fd.richardson(in_x(reference_v), x, 1, hx, levels),
        v_t=fd.richardson(in_t(reference_v), t, 1, ht, levels),
        v_xxx=fd.richardson(in_x(reference_v), x, 3, hx, levels),
    )
    r1, r2, _, _ = _combine(d)
    return r1, r2
