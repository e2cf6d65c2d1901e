"""Exception types raised by the solver."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class NearSingularError(ArithmeticError):
    """LU factorization met a pivot below the near-singular threshold.

    Usually means the shape parameter makes the interpolation matrix
    numerically singular.
    """

    def __init__(self, pivot_index, pivot, threshold):
        self.pivot_index = int(pivot_index)
        self.pivot = float(pivot)
        self.threshold = float(threshold)
        super().__init__(
            f"near-singular matrix: |pivot| = {self.pivot:.3e} at index "
            f"{self.pivot_index} is below {self.threshold:.3e}"
        )


class BlowUpError(ArithmeticError):
    """The semi-discrete right-hand side produced a non-finite value."""

    def __init__(self, time, node, step=None):
        self.time = float(time)
        self.node = int(node)
        self.step = step
        where = f" (step {step})" if step is not None else ""
        super().__init__(
            f"non-finite right-hand side at t = {self.time!r}, node {self.node}{where}"
        )

    def at_step(self, step):
        return BlowUpError(self.time, self.node, step)
