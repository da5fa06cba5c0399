"""Exception hierarchy shared by every module of the package."""


class QpsymError(Exception):
    pass


class DimensionError(QpsymError, ValueError):
    pass


class NotPositiveDefinite(QpsymError):
    def __init__(self, pivot, index):
        super().__init__(f"matrix is not positive definite (pivot {pivot:.6g} at index {index})")
        self.pivot = pivot
        self.index = index


class AssumptionViolated(QpsymError):
    """Raised when the constraint-matrix sum is not positive definite."""

    def __init__(self, pivot, index=None):
        super().__init__(
            f"sum of constraint matrices not positive definite (smallest pivot {pivot:.6g})"
        )
        self.pivot = pivot
        self.index = index


class SingularMatrix(QpsymError):
    pass


class NotOrthogonal(QpsymError):
    pass


class WrongComponent(QpsymError):
    """An orthogonal matrix with negative determinant was given where SO(n) is required."""


class SearchBudgetExceeded(QpsymError):
    pass
