"""Richardson-extrapolated central differences.

Used as an independent check on the analytic derivative formulas; nothing
in the solver path calls into this module. The arithmetic is generic, so
``f`` may return floats, numpy arrays or ``mpmath`` numbers.
"""

from __future__ import annotations

from .errors import InvalidInputError


def central_difference(f, x, order, h):
    """Second-order central difference of ``f`` at ``x``.

    The truncation error expands in even powers of ``h`` for every order,
    which is what makes Richardson extrapolation applicable.
    """
    if order == 1:
        return (f(x + h) - f(x - h)) / (2 * h)
    if order == 2:
        return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)
    if order == 3:
        return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h**3)
    raise InvalidInputError(f"finite-difference order must be 1, 2 or 3, got {order!r}")


def richardson(f, x, order, h, levels=4):
    """Extrapolate central differences at steps h, h/2, ..., h/2**(levels-1).

    Returns the last diagonal entry of the Neville tableau, with error
    O(h**(2*levels)) for smooth ``f`` (rounding aside).
    """
    if levels < 1:
        raise InvalidInputError("levels must be >= 1")
    prev = [central_difference(f, x, order, h)]
    for i in range(1, levels):
        step = h / 2**i
        row = [central_difference(f, x, order, step)]
        for j in range(1, i + 1):
            factor = 4**j - 1
            row.append(row[j - 1] + (row[j - 1] - prev[j - 1]) / factor)
        prev = row
    return prev[-1]
