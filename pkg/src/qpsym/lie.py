"""Lie algebra of the continuous symmetry subgroup.

A skew-symmetric ``X`` generates symmetries ``exp(t X)`` exactly when it
commutes with the canonical objective and every canonical constraint matrix.
That condition is linear in the coordinates of ``X`` over the unit generators,
so the algebra is the kernel of one stacked linear system.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.linalg

from .errors import DimensionError, NotOrthogonal
from .linalg import (
    DEFAULT_TOL,
    as_square,
    expm_skew,
    logm_special_orthogonal,
    nullspace,
    orthogonality_defect,
    skew_basis,
    skew_from_coordinates,
)


@dataclass(frozen=True, eq=False)
class CommutantSystem:
    matrix: np.ndarray
    n: int
    scale: float = 0.0

    @property
    def rank(self):
        return self.matrix.shape[1] - nullspace(self.matrix, reference=self.scale).shape[1]


@dataclass(frozen=True, eq=False)
class LieBasis:
    """Frobenius-orthonormal generators plus the matrix family they commute with."""

    n: int
    generators: tuple
    family: tuple = ()

    @property
    def dim(self):
        return len(self.generators)

    def combine(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=float).reshape(-1)
        if coeffs.shape != (self.dim,):
            raise DimensionError(f"expected {self.dim} coefficients, got {coeffs.shape[0]}")
        x = np.zeros((self.n, self.n))
        for a, g in zip(coeffs, self.generators):
            x = x + a * g
        return x

    def coordinates(self, x):
        return np.array([float(np.sum(g * x)) for g in self.generators])

    def project(self, x):
        return self.combine(self.coordinates(x)) if self.generators else np.zeros((self.n, self.n))


def _commutator_rows(f, g, iu):
    comm = f @ g - g @ f
    return comm[iu]


def build_commutant_system(c):
    """Column k holds the upper triangle of ``[F, G_k]`` for each F in the family.

    ``[symmetric, skew]`` is symmetric, so the upper triangle with diagonal
    carries every independent equation.
    """
    n = c.n
    iu = np.triu_indices(n)
    gens = skew_basis(n)
    blocks = []
    for f in c.family:
        if gens:
            blocks.append(np.column_stack([_commutator_rows(f, g, iu) for g in gens]))
        else:
            blocks.append(np.zeros((len(iu[0]), 0)))
    return CommutantSystem(matrix=np.vstack(blocks), n=n, scale=c.scale)


def commutant_residual(x, family):
    x = np.asarray(x, dtype=float)
    return float(sum(np.linalg.norm(f @ x - x @ f) for f in family))


def _echelon_orthonormal(kernel):
    # rescale to reduced echelon form on sorted pivot rows, then Gram-Schmidt in
    # that order: deterministic, and the unit basis comes back when it solves
    k = kernel.shape[1]
    _, _, piv = scipy.linalg.qr(kernel.T, pivoting=True)
    rows = np.sort(piv[:k])
    ech = kernel @ np.linalg.inv(kernel[rows, :])
    q, r = np.linalg.qr(ech)
    q = q * np.sign(np.diag(r))
    return q


def lie_basis(c, tol=DEFAULT_TOL):
    n = c.n
    system = build_commutant_system(c)
    if system.matrix.shape[1] == 0:
        return LieBasis(n=n, generators=(), family=tuple(c.family))
    kernel = nullspace(system.matrix, tol, system.scale)
    if kernel.shape[1] == 0:
        return LieBasis(n=n, generators=(), family=tuple(c.family))
    coords = _echelon_orthonormal(kernel)
    gens = []
    for col in coords.T:
        g = skew_from_coordinates(col, n) / math.sqrt(2.0)
        g.setflags(write=False)
        gens.append(g)
    return LieBasis(n=n, generators=tuple(gens), family=tuple(c.family))


def sample_continuous(basis, coeffs):
    """``exp(sum_k coeffs[k] * G_k)``, an element of the continuous subgroup."""
    return expm_skew(basis.combine(coeffs))


def _reaches(x, q, basis, tol):
    proj = basis.project(x)
    if np.linalg.norm(x - proj) > tol.residual_tol * max(1.0, float(np.linalg.norm(x))):
        return False
    return float(np.linalg.norm(expm_skew(proj) - q)) <= tol.residual_tol


def _complex_structure(w, family, tol):
    """A skew ``J`` with ``J^2 = -I`` on span(w) commuting with the restricted family.

    Joint eigenspaces of the restricted family are found from one fixed random
    combination; any odd-dimensional one means no such ``J`` exists.
    """
    d = w.shape[1]
    if not family:
        blocks = [np.arange(d)]
        vecs = np.eye(d)
    else:
        weights = np.random.default_rng(20200607).standard_normal(len(family))
        comb = sum(wt * (w.T @ f @ w) for wt, f in zip(weights, family))
        comb = (comb + comb.T) / 2.0
        vals, vecs = np.linalg.eigh(comb)
        gap = tol.residual_tol * max(1.0, float(np.max(np.abs(vals))))
        blocks, start = [], 0
        for i in range(1, d + 1):
            if i == d or vals[i] - vals[i - 1] > gap:
                blocks.append(np.arange(start, i))
                start = i
    j = np.zeros((d, d))
    for idx in blocks:
        if len(idx) % 2:
            return None
        for a, b in zip(idx[0::2], idx[1::2]):
            va, vb = vecs[:, a], vecs[:, b]
            j += np.outer(va, vb) - np.outer(vb, va)
    return w @ j @ w.T


def in_identity_component(q, basis, tol=DEFAULT_TOL):
    """True iff ``q`` is ``exp(X)`` for some ``X`` in the span of the basis.

    The principal logarithm is tried first.  When ``q`` has -1 eigenvalues the
    half-turn part of the log is ambiguous, so it is rebuilt from a complex
    structure compatible with the family the algebra commutes with.
    """
    q = as_square(q)
    if orthogonality_defect(q) > tol.residual_tol:
        raise NotOrthogonal("matrix is not orthogonal within residual_tol")
    if np.linalg.det(q) < 0:
        return False
    x = logm_special_orthogonal(q, tol)
    if _reaches(x, q, basis, tol):
        return True
    if basis.dim == 0:
        return False
    w = nullspace(q + np.eye(q.shape[0]), tol, 2.0)
    if w.shape[1] == 0:
        return False
    pw = w @ w.T
    j = _complex_structure(w, basis.family, tol)
    if j is None:
        return False
    x2 = x - pw @ x @ pw + math.pi * j
    return _reaches((x2 - x2.T) / 2.0, q, basis, tol)
