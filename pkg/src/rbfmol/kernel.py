"""Radial basis functions in one dimension and their x-derivatives.

All functions take a *signed* displacement ``s = x - x_j`` so odd-order
derivatives carry the right sign without a separate direction argument.
Values are vectorised over ``s``.

Closed forms (``a`` is the shape parameter)::

    MQ   phi = (a^2 + s^2)^(1/2)
         phi'   = s / phi
         phi''  = a^2 / phi^3
         phi''' = -3 a^2 s / phi^5

    IMQ  q = (a^2 + s^2)^(-1/2),  phi = q
         phi'   = -s q^3
         phi''  = (2 s^2 - a^2) q^5
         phi''' = 3 s (3 a^2 - 2 s^2) q^7

    GA   e = exp(-a s^2),  phi = e
         phi'   = -2 a s e
         phi''  = (4 a^2 s^2 - 2 a) e
         phi''' = (12 a^2 s - 8 a^3 s^3) e

The Gaussian multiplies ``s^2`` by the shape (not its square), so very large
shapes give a near-identity interpolation matrix. Underflow to zero is
expected there and is not special-cased.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


class Family(enum.Enum):
    MQ = "mq"
    IMQ = "imq"
    GA = "ga"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise InvalidInputError(
                f"unknown kernel family {name!r}; expected one of mq, imq, ga"
            ) from None


@dataclass(frozen=True)
class KernelSpec:
    """An RBF family together with its shape parameter."""

    family: Family
    shape: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        shape = float(self.shape)
        if not math.isfinite(shape) or shape <= 0.0:
            raise InvalidInputError(f"shape must be finite and > 0, got {self.shape!r}")
        object.__setattr__(self, "shape", shape)


def _displacement(s):
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        raise InvalidInputError("displacement must be finite")
    return s


def evaluate(spec: KernelSpec, s):
    """phi(|s|) for the given kernel."""
    s = _displacement(s)
    a = spec.shape
    if spec.family is Family.MQ:
        return np.sqrt(a * a + s * s)
    if spec.family is Family.IMQ:
        return 1.0 / np.sqrt(a * a + s * s)
    return np.exp(-a * s * s)


def derivative(spec: KernelSpec, s, order: int):
    """d^n phi / dx^n at displacement ``s`` for ``order`` n in 1..3."""
    if order not in (1, 2, 3):
        raise InvalidInputError(f"derivative order must be 1, 2 or 3, got {order!r}")
    s = _displacement(s)
    a = spec.shape
    a2 = a * a

    if spec.family is Family.MQ:
        phi = np.sqrt(a2 + s * s)
        if order == 1:
            return s / phi
        if order == 2:
            return a2 / phi**3
        return -3.0 * a2 * s / phi**5

    if spec.family is Family.IMQ:
        q = 1.0 / np.sqrt(a2 + s * s)
        if order == 1:
            return -s * q**3
        if order == 2:
            return (2.0 * s * s - a2) * q**5
        return 3.0 * s * (3.0 * a2 - 2.0 * s * s) * q**7

    e = np.exp(-a * s * s)
    if order == 1:
        return -2.0 * a * s * e
    if order == 2:
        return (4.0 * a2 * s * s - 2.0 * a) * e
    return (12.0 * a2 * s - 8.0 * a2 * a * s * s * s) * e
