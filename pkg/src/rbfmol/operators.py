"""Interpolation and differentiation matrices over a 1D node set.

With ``A[i, j] = phi(x_i - x_j)`` the interpolant of nodal data ``u`` is
``phi(x)^T A^{-1} u``, so the nodal derivative operators are

    d1 = B1 A^{-1},   B1[i, j] = phi'(x_i - x_j)
    d3 = B3 A^{-1},   B3[i, j] = phi'''(x_i - x_j)

Because ``A`` is symmetric, both are obtained from a single LU
factorisation by solving ``A d^T = B^T``. No polynomial terms are appended.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import kernel
from .errors import InvalidInputError, NearSingularError

DEFAULT_PIVOT_TOL = 1e-14


@dataclass(frozen=True)
class NodeSet:
    """Strictly increasing collocation nodes whose ends are the domain ends."""

    nodes: np.ndarray
    a: float
    b: float

    def __post_init__(self):
        x = np.array(self.nodes, dtype=float).ravel()
        a, b = float(self.a), float(self.b)
        if x.size < 4:
            raise InvalidInputError(f"need at least 4 nodes, got {x.size}")
        if not np.all(np.isfinite(x)):
            raise InvalidInputError("nodes must be finite")
        if not np.all(np.diff(x) > 0):
            raise InvalidInputError("nodes must be strictly increasing")
        if x[0] != a or x[-1] != b:
            raise InvalidInputError(
                f"first and last node must equal the domain ends [{a}, {b}]"
            )
        x.setflags(write=False)
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def uniform(cls, a, b, h):
        """Uniform grid with spacing ``h`` including both ends.

        ``(b - a) / h`` must be an integer to within 1e-9.
        """
        if not h > 0:
            raise InvalidInputError(f"h must be > 0, got {h!r}")
        cells = (b - a) / h
        n = round(cells)
        if n < 1 or abs(cells - n) > 1e-9:
            raise InvalidInputError(
                f"h = {h!r} does not divide [{a}, {b}] into an integer number of cells"
            )
        # a + i*h rather than accumulation so node values are reproducible
        x = a + h * np.arange(n + 1)
        x[-1] = b
        return cls(x, a, b)

    def __len__(self):
        return self.nodes.size

    @property
    def boundary(self):
        return (0, self.nodes.size - 1)

    def index_of(self, x, tol=1e-12):
        """Index of the node equal to ``x`` within ``tol``, or None."""
        i = int(np.argmin(np.abs(self.nodes - x)))
        return i if abs(self.nodes[i] - x) <= tol else None


@dataclass(frozen=True)
class DiffOperators:
    """Precomputed first/third derivative matrices plus diagnostics."""

    d1: np.ndarray
    d3: np.ndarray
    cond2: float
    delta: float
    interp: np.ndarray = field(repr=False)

    def __post_init__(self):
        for m in (self.d1, self.d3, self.interp):
            m.setflags(write=False)


def displacements(x):
    x = np.asarray(x, dtype=float)
    return x[:, None] - x[None, :]


def build_interpolation_matrix(nodes, spec: kernel.KernelSpec):
    """A[i, j] = phi(x_i - x_j). ``nodes`` is a NodeSet or plain coordinates."""
    x = nodes.nodes if isinstance(nodes, NodeSet) else nodes
    # fl(x_i - x_j) == -fl(x_j - x_i) and every kernel depends on s*s,
    # so the result is bitwise symmetric without explicit mirroring.
    return kernel.evaluate(spec, displacements(x))


def lu_factor(A, pivot_tol=DEFAULT_PIVOT_TOL):
    """Partial-pivoting LU of ``A`` with a near-singular pivot check."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"matrix must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix entries must be finite")
    with warnings.catch_warnings():
        # exactly singular input warns; the pivot check below reports it
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    threshold = pivot_tol * np.abs(A).sum(axis=1).max()
    pivots = np.abs(np.diag(lu))
    bad = np.flatnonzero(~(pivots >= threshold))
    if bad.size:
        i = bad[0]
        raise NearSingularError(i, pivots[i], threshold)
    return lu, piv


def solve_linear(A, B, pivot_tol=DEFAULT_PIVOT_TOL):
    """Solve ``A X = B`` by LU with partial pivoting.

    Raises NearSingularError if a pivot falls below
    ``pivot_tol * ||A||_inf``.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if B.shape[0] != A.shape[0]:
        raise InvalidInputError(
            f"right-hand side has {B.shape[0]} rows, matrix has {A.shape[0]}"
        )
    factors = lu_factor(A, pivot_tol)
    return scipy.linalg.lu_solve(factors, B, check_finite=False)


def condition_estimate(A):
    """2-norm condition number from the full singular value spectrum."""
    sv = np.linalg.svd(np.asarray(A, dtype=float), compute_uv=False)
    if sv[-1] == 0.0:
        return math.inf
    return float(sv[0] / sv[-1])


def radial_distance(nodes: NodeSet):
    """Fill distance max_x min_i |x - x_i| over [a, b].

    The ends are nodes, so this is half the widest gap.
    """
    return float(np.diff(nodes.nodes).max() / 2.0)


def build_diff_operators(nodes: NodeSet, spec: kernel.KernelSpec,
                         pivot_tol=DEFAULT_PIVOT_TOL):
    S = displacements(nodes.nodes)
    A = kernel.evaluate(spec, S)
    B1 = kernel.derivative(spec, S, 1)
    B3 = kernel.derivative(spec, S, 3)
    factors = lu_factor(A, pivot_tol)
    d1 = scipy.linalg.lu_solve(factors, B1.T, check_finite=False).T
    d3 = scipy.linalg.lu_solve(factors, B3.T, check_finite=False).T
    return DiffOperators(
        d1=np.ascontiguousarray(d1),
        d3=np.ascontiguousarray(d3),
        cond2=condition_estimate(A),
        delta=radial_distance(nodes),
        interp=A,
    )
