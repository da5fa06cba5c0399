"""Problem model ``max x^T A x  s.t.  x^T B_i x <= 1`` and its canonical form."""

from dataclasses import dataclass, field
import hashlib

import numpy as np

from .errors import AssumptionViolated, DimensionError, NotPositiveDefinite
from .linalg import DEFAULT_TOL, as_square, cholesky_pivots, invert_triangular, symmetrize


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QcqpProblem:
    objective: np.ndarray
    constraints: tuple
    min_pivot: float = field(default=float("nan"))

    @property
    def n(self):
        return self.objective.shape[0]

    @property
    def m(self):
        return len(self.constraints)

    @property
    def b_sum(self):
        return sum(self.constraints[1:], self.constraints[0].copy())

    @property
    def scale(self):
        return float(np.linalg.norm(self.objective) + sum(np.linalg.norm(b) for b in self.constraints))

    def digest(self):
        """SHA-256 of the (symmetrized) problem matrices."""
        h = hashlib.sha256()
        h.update(f"qcqp n={self.n} m={self.m};".encode())
        for mat in (self.objective, *self.constraints):
            h.update(np.ascontiguousarray(mat, dtype="<f8").tobytes())
        return h.hexdigest()

    def objective_value(self, x):
        x = np.asarray(x, dtype=float)
        return float(x @ self.objective @ x)

    def constraint_values(self, x):
        x = np.asarray(x, dtype=float)
        return np.array([x @ b @ x for b in self.constraints])


def build_problem(a_raw, b_raw, tol=DEFAULT_TOL):
    """Symmetrize the input matrices and check that ``sum(B_i)`` is positive definite."""
    a = as_square(a_raw, "objective")
    b_list = list(b_raw)
    if not b_list:
        raise DimensionError("at least one constraint matrix is required")
    n = a.shape[0]
    bs = []
    for i, b in enumerate(b_list):
        b = as_square(b, f"constraint {i + 1}")
        if b.shape[0] != n:
            raise DimensionError(f"constraint {i + 1} has shape {b.shape}, expected ({n}, {n})")
        bs.append(symmetrize(b))
    b_sum = sum(bs[1:], bs[0].copy())
    try:
        _, pivots = cholesky_pivots(b_sum, tol)
    except NotPositiveDefinite as exc:
        raise AssumptionViolated(exc.pivot, exc.index) from exc
    return QcqpProblem(
        objective=_frozen(symmetrize(a)),
        constraints=tuple(_frozen(b) for b in bs),
        min_pivot=float(pivots.min()),
    )


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Coordinates in which every symmetry is an orthogonal matrix.

    ``s`` is the Cholesky factor of the constraint sum, so that
    ``a_tilde = s_inv^T A s_inv`` and likewise for each constraint.
    """

    s: np.ndarray
    s_inv: np.ndarray
    a_tilde: np.ndarray
    b_tilde: tuple
    source: QcqpProblem
    condition: float

    @property
    def n(self):
        return self.s.shape[0]

    @property
    def m(self):
        return len(self.b_tilde)

    @property
    def family(self):
        return (self.a_tilde, *self.b_tilde)

    @property
    def scale(self):
        return float(np.linalg.norm(self.a_tilde) + sum(np.linalg.norm(b) for b in self.b_tilde))

    def without_objective(self):
        zero = _frozen(np.zeros_like(self.a_tilde))
        return CanonicalForm(self.s, self.s_inv, zero, self.b_tilde, self.source, self.condition)


def _congruence(s_inv, m):
    return symmetrize(s_inv.T @ m @ s_inv)


def canonicalize(p, tol=DEFAULT_TOL):
    u, _ = cholesky_pivots(p.b_sum, tol)
    s_inv = invert_triangular(u)
    return CanonicalForm(
        s=_frozen(u),
        s_inv=_frozen(s_inv),
        a_tilde=_frozen(_congruence(s_inv, p.objective)),
        b_tilde=tuple(_frozen(_congruence(s_inv, b)) for b in p.constraints),
        source=p,
        condition=float(np.linalg.cond(u) ** 2),
    )


def back_transform(q, c):
    """Map an orthogonal symmetry in canonical coordinates to ``P = S^-1 Q S``."""
    return c.s_inv @ np.asarray(q, dtype=float) @ c.s


def to_canonical(p_mat, c):
    return c.s @ np.asarray(p_mat, dtype=float) @ c.s_inv


def check_permutation(perm, m):
    perm = tuple(int(k) for k in perm)
    if sorted(perm) != list(range(m)):
        raise DimensionError(f"{perm} is not a permutation of 0..{m - 1}")
    return perm


def invariance_residual(p_mat, prob, perm=None, include_objective=True):
    """``||P^T A P - A|| + sum_i ||P^T B_i P - B_perm(i)||`` in Frobenius norm."""
    p_mat = np.asarray(p_mat, dtype=float)
    perm = tuple(range(prob.m)) if perm is None else check_permutation(perm, prob.m)
    a = prob.objective if include_objective else np.zeros_like(prob.objective)
    return _residual(p_mat, a, prob.constraints, perm)


def canonical_invariance_residual(q, c, perm=None):
    q = np.asarray(q, dtype=float)
    perm = tuple(range(c.m)) if perm is None else check_permutation(perm, c.m)
    return _residual(q, c.a_tilde, c.b_tilde, perm)


def _residual(p_mat, a, bs, perm):
    total = np.linalg.norm(p_mat.T @ a @ p_mat - a)
    for i, b in enumerate(bs):
        total += np.linalg.norm(p_mat.T @ b @ p_mat - bs[perm[i]])
    return float(total)


def permutation_matrix(perm):
    """0/1 matrix ``L`` with ``L[i, perm[i]] = 1``."""
    m = len(perm)
    mat = np.zeros((m, m), dtype=int)
    mat[np.arange(m), list(perm)] = 1
    return mat
