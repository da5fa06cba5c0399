"""Dense real matrix kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  Symmetric and
skew-symmetric matrices are built so that the (anti)symmetry holds bit-exactly.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.linalg

from .errors import DimensionError, NotOrthogonal, NotPositiveDefinite, SingularMatrix, WrongComponent


@dataclass(frozen=True)
class Tolerances:
    rank_tol: float = 1e-10
    residual_tol: float = 1e-8
    pd_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rank_tol", "residual_tol", "pd_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


DEFAULT_TOL = Tolerances()


def as_matrix(m, name="matrix"):
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def as_square(m, name="matrix"):
    a = as_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a


def symmetrize(m):
    """Return the symmetric part ``(m + m^T) / 2``."""
    a = as_square(m)
    # float addition commutes, so entry (i, j) and (j, i) come out identical
    return (a + a.T) / 2.0


def skew_part(m):
    a = as_square(m)
    return (a - a.T) / 2.0


def is_symmetric(m):
    return np.array_equal(m, m.T)


def orthogonality_defect(q):
    q = np.asarray(q, dtype=float)
    return float(np.linalg.norm(q.T @ q - np.eye(q.shape[0])))


def cholesky_upper(b, tol=DEFAULT_TOL):
    """Upper triangular ``U`` with positive diagonal and ``b = U^T U``.

    Raises NotPositiveDefinite when a pivot falls below ``pd_tol`` times the
    largest diagonal entry of ``b``.
    """
    b = as_square(b)
    u, _ = _cholesky_pivots(b, tol)
    return u


def cholesky_pivots(b, tol=DEFAULT_TOL):
    """Like :func:`cholesky_upper` but also return the pivots ``U_kk**2``."""
    return _cholesky_pivots(as_square(b), tol)


def _cholesky_pivots(b, tol):
    n = b.shape[0]
    max_diag = float(np.max(np.diag(b)))
    threshold = tol.pd_tol * max_diag
    u = np.zeros_like(b)
    pivots = np.zeros(n)
    for k in range(n):
        pivot = b[k, k] - u[:k, k] @ u[:k, k]
        pivots[k] = pivot
        if not (max_diag > 0.0 and pivot > threshold):
            raise NotPositiveDefinite(float(pivot), k)
        d = math.sqrt(pivot)
        u[k, k] = d
        u[k, k + 1:] = (b[k, k + 1:] - u[:k, k] @ u[:k, k + 1:]) / d
    return u, pivots


def invert_triangular(u):
    u = as_square(u)
    if np.any(np.diag(u) == 0.0):
        raise SingularMatrix("triangular matrix has a zero diagonal entry")
    return scipy.linalg.solve_triangular(u, np.eye(u.shape[0]), lower=False)


def numerical_rank(s, rank_tol, reference=0.0):
    top = max(float(s[0]) if s.size else 0.0, reference)
    if top == 0.0:
        return 0
    return int(np.sum(s > rank_tol * top))


def nullspace(a, tol=DEFAULT_TOL, reference=0.0):
    """Orthonormal basis of the numerical kernel of ``a``, one vector per column.

    Singular values at or below ``rank_tol`` times the largest one count as zero.
    ``reference`` is the magnitude of the data ``a`` was built from; it keeps a
    matrix made purely of rounding error from being read as full rank.
    """
    a = as_matrix(a)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    r = numerical_rank(s, tol.rank_tol, reference)
    return vt[r:].T.copy()


def skew_index_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def skew_basis(n):
    """Unit generators of so(n): +1 at one strictly-upper slot, -1 mirrored."""
    if n < 1:
        raise DimensionError("dimension must be at least 1")
    basis = []
    for i, j in skew_index_pairs(n):
        g = np.zeros((n, n))
        g[i, j] = 1.0
        g[j, i] = -1.0
        basis.append(g)
    return basis


def skew_from_coordinates(coords, n):
    coords = np.asarray(coords, dtype=float)
    if coords.shape != (n * (n - 1) // 2,):
        raise DimensionError(f"expected {n * (n - 1) // 2} coordinates, got {coords.shape}")
    x = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    x[iu] = coords
    x[(iu[1], iu[0])] = -coords
    return x


def skew_coordinates(x):
    x = np.asarray(x, dtype=float)
    return x[np.triu_indices(x.shape[0], 1)].copy()


def _check_skew(x):
    scale = max(1.0, float(np.max(np.abs(x))))
    if np.max(np.abs(x + x.T)) > 1e-12 * scale:
        raise ValueError("matrix is not skew-symmetric")


def expm_skew(x):
    """Matrix exponential of a skew-symmetric matrix by scaling and squaring."""
    x = as_square(x)
    _check_skew(x)
    n = x.shape[0]
    norm = float(np.linalg.norm(x))
    k = 0 if norm <= 0.5 else int(math.ceil(math.log2(norm / 0.5)))
    y = x / 2.0 ** k
    result = np.eye(n)
    term = np.eye(n)
    eps = np.finfo(float).eps
    for j in range(1, 60):
        term = term @ y / j
        result = result + term
        if np.linalg.norm(term) <= eps * np.linalg.norm(result):
            break
    for _ in range(k):
        result = result @ result
    return result


def logm_special_orthogonal(q, tol=DEFAULT_TOL):
    """Principal skew-symmetric logarithm of a special orthogonal matrix.

    The real Schur form of an orthogonal matrix is block diagonal with 2x2
    rotation blocks and +-1 scalars.  Each rotation block contributes its
    angle in (-pi, pi]; the -1 scalars (always an even number when det = +1)
    are paired in the order they appear and logged as half-turns.
    """
    q = as_square(q)
    if orthogonality_defect(q) > tol.residual_tol:
        raise NotOrthogonal("matrix is not orthogonal within residual_tol")
    if np.linalg.det(q) < 0:
        raise WrongComponent("orthogonal matrix has determinant -1")
    t, z = scipy.linalg.schur(q, output="real")
    n = q.shape[0]
    log_t = np.zeros((n, n))
    minus = []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            c = (t[i, i] + t[i + 1, i + 1]) / 2.0
            s = (t[i, i + 1] - t[i + 1, i]) / 2.0
            phi = math.atan2(s, c)
            log_t[i, i + 1] = phi
            log_t[i + 1, i] = -phi
            i += 2
        else:
            if t[i, i] < 0.0:
                minus.append(i)
            i += 1
    if len(minus) % 2:
        raise WrongComponent("odd number of -1 eigenvalues")
    for a, b in zip(minus[0::2], minus[1::2]):
        log_t[a, b] = math.pi
        log_t[b, a] = -math.pi
    return skew_part(z @ log_t @ z.T)


def polar_orthogonal(m):
    """Orthogonal polar factor (nearest orthogonal matrix in Frobenius norm)."""
    u, s, vt = np.linalg.svd(m)
    return u @ vt, s
