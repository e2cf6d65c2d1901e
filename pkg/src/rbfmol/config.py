"""Run configuration: flat ``key = value`` files plus overrides.

Lists are comma separated. Blank lines and ``#`` comments are ignored.
Defaults reproduce the c=1, k=0.001 Gaussian run on [-4, 4]::

    kernel = ga
    shape = 3400
    wave_speed = 1
    wave_number = 0.001
    h = 0.1
    dt = 0.0001
    t_end = 0.5
    sample_xs = 0.1, 0.2, 0.3, 0.4, 0.5
    sample_ts = 0.1, 0.2, 0.3, 0.4, 0.5
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass
from pathlib import Path

from .dsw import DswParams, Variant
from .errors import InvalidInputError
from .integrate import TimeGrid
from .kernel import Family, KernelSpec
from .operators import DEFAULT_PIVOT_TOL, NodeSet

TABLE_POINTS = (0.1, 0.2, 0.3, 0.4, 0.5)


class Mode(enum.Enum):
    SOLVE = "solve"
    SWEEP = "sweep"
    CONVERGE = "converge"
    RESIDUAL = "residual"


@dataclass(frozen=True)
class RunConfig:
    kernel: Family = Family.GA
    shape: float = 3400.0
    wave_speed: float = 1.0
    wave_number: float = 0.001
    a: float = -4.0
    b: float = 4.0
    h: float | None = 0.1
    nodes: tuple | None = None
    dt: float = 1e-4
    t_end: float = 0.5
    sample_xs: tuple = TABLE_POINTS
    sample_ts: tuple = TABLE_POINTS
    variant: Variant = Variant.ORIGINAL
    mode: Mode = Mode.SOLVE
    shapes: tuple = ()
    h_list: tuple = ()
    dt_list: tuple = ()
    out: str = "results"
    pivot_tol: float = DEFAULT_PIVOT_TOL

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("kernel", Family.parse(self.kernel))
        set_("variant", Variant.parse(self.variant))
        set_("mode", _parse_enum(Mode, self.mode, "mode"))
        for name in ("sample_xs", "sample_ts", "shapes", "h_list", "dt_list"):
            set_(name, tuple(float(v) for v in getattr(self, name)))
        if self.nodes is not None:
            set_("nodes", tuple(float(v) for v in self.nodes))
            set_("h", None)
        if not self.pivot_tol > 0:
            raise InvalidInputError(f"pivot_tol: must be > 0, got {self.pivot_tol!r}")

        # each of these raises with a message naming the constraint
        self.kernel_spec()
        self.params()
        nodes = self.node_set()
        self.time_grid()
        for x in self.sample_xs:
            if nodes.index_of(x) is None:
                raise InvalidInputError(f"sample_xs: {x!r} is not a grid node")
        if any(s <= 0 for s in self.shapes):
            raise InvalidInputError("shapes: every shape must be > 0")

    def kernel_spec(self, shape=None):
        return KernelSpec(self.kernel, self.shape if shape is None else shape)

    def params(self):
        return DswParams(self.wave_speed, self.wave_number, self.a, self.b, self.variant)

    def node_set(self):
        try:
            if self.nodes is not None:
                return NodeSet(self.nodes, self.a, self.b)
            return NodeSet.uniform(self.a, self.b, self.h)
        except InvalidInputError as exc:
            field_name = "nodes" if self.nodes is not None else "h"
            raise InvalidInputError(f"{field_name}: {exc}") from None

    def time_grid(self):
        try:
            return TimeGrid(0.0, self.t_end, self.dt, self.sample_ts)
        except InvalidInputError as exc:
            raise InvalidInputError(f"dt/t_end/sample_ts: {exc}") from None

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def echo(self):
        """Plain-data view of every field, for reports."""
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.value if isinstance(value, enum.Enum) else value
        return out


def _parse_enum(cls, value, name):
    if isinstance(value, cls):
        return value
    try:
        return cls(str(value).strip().lower())
    except ValueError:
        choices = ", ".join(m.value for m in cls)
        raise InvalidInputError(f"{name}: {value!r} is not one of {choices}") from None


def _float_list(text):
    return tuple(float(v) for v in str(text).split(",") if v.strip())


_CONVERTERS = {
    "kernel": str,
    "shape": float,
    "wave_speed": float,
    "wave_number": float,
    "a": float,
    "b": float,
    "h": float,
    "nodes": _float_list,
    "dt": float,
    "t_end": float,
    "sample_xs": _float_list,
    "sample_ts": _float_list,
    "variant": str,
    "mode": str,
    "shapes": _float_list,
    "h_list": _float_list,
    "dt_list": _float_list,
    "out": str,
    "pivot_tol": float,
}


def read_config_file(path):
    """Parse a ``key = value`` file into a dict of raw strings."""
    values = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def parse_config(path=None, overrides=None) -> RunConfig:
    """Build a validated RunConfig from an optional file and overrides.

    Overrides win over file values. Values may be strings (converted per
    field) or already-typed; ``None`` overrides are ignored.
    """
    raw = dict(read_config_file(path)) if path is not None else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key.replace("-", "_")] = value

    kwargs = {}
    for key, value in raw.items():
        if key not in _CONVERTERS:
            raise InvalidInputError(f"unknown config key {key!r}")
        try:
            kwargs[key] = _CONVERTERS[key](value) if isinstance(value, str) else value
        except ValueError:
            raise InvalidInputError(f"{key}: cannot parse {value!r}") from None
    return RunConfig(**kwargs)
