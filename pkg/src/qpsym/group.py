"""Full pipeline and the assembled symmetry report."""

from dataclasses import dataclass

import numpy as np

from .discrete import SearchOptions, search_cosets
from .lie import LieBasis, lie_basis
from .linalg import DEFAULT_TOL
from .problem import back_transform, canonicalize, check_permutation, invariance_residual


@dataclass(frozen=True, eq=False)
class CosetRecord:
    index: int
    coset: object  # DiscreteCoset
    p_representative: np.ndarray

    @property
    def permutation(self):
        return self.coset.permutation

    @property
    def det_sign(self):
        return self.coset.det_sign

    @property
    def q_representative(self):
        return self.coset.representative


@dataclass(frozen=True, eq=False)
class SymmetryReport:
    problem_digest: str
    n: int
    m: int
    constraints_only: bool
    lie_generators: tuple
    lie_generators_original: tuple
    cosets: tuple
    s: np.ndarray
    s_inv: np.ndarray
    tolerances: object
    options: object
    permutations: tuple = ()
    pairs: tuple = ()
    duplicates: tuple = ()
    condition: float = 1.0

    @property
    def lie_dim(self):
        return len(self.lie_generators)

    def count(self, det_sign):
        return sum(1 for r in self.cosets if r.det_sign == det_sign)

    def summary(self):
        return (
            f"continuous dim K={self.lie_dim}; det+1 cosets: {self.count(1)}; "
            f"det-1 cosets: {self.count(-1)}; total cosets: {len(self.cosets)}"
        )

    def basis(self, c):
        """LieBasis in canonical coordinates, bound to the family of ``c``."""
        if self.constraints_only:
            c = c.without_objective()
        return LieBasis(n=self.n, generators=tuple(self.lie_generators), family=tuple(c.family))


def analyze(p, opts=SearchOptions(), tol=DEFAULT_TOL, constraints_only=False):
    c = canonicalize(p, tol)
    if constraints_only:
        c = c.without_objective()
    basis = lie_basis(c, tol)
    search = search_cosets(c, basis, opts, tol)
    records = tuple(
        CosetRecord(index=i, coset=cs, p_representative=back_transform(cs.representative, c))
        for i, cs in enumerate(search.cosets)
    )
    return SymmetryReport(
        problem_digest=p.digest(),
        n=p.n,
        m=p.m,
        constraints_only=bool(constraints_only),
        lie_generators=basis.generators,
        lie_generators_original=tuple(c.s_inv @ g @ c.s for g in basis.generators),
        cosets=records,
        s=c.s,
        s_inv=c.s_inv,
        tolerances=tol,
        options=opts,
        permutations=tuple(search.permutations),
        pairs=tuple(search.pairs),
        duplicates=tuple(search.duplicates),
        condition=c.condition,
    )


def penalty_residual(q, c, perm=None):
    """Brute-force symmetry objective: commutation defects plus ``||Q Q^T - E||``."""
    q = np.asarray(q, dtype=float)
    perm = tuple(range(c.m)) if perm is None else check_permutation(perm, c.m)
    total = np.linalg.norm(c.a_tilde @ q - q @ c.a_tilde)
    for i, b in enumerate(c.b_tilde):
        total += np.linalg.norm(b @ q - q @ c.b_tilde[perm[i]])
    total += np.linalg.norm(q @ q.T - np.eye(c.n))
    return float(total)


@dataclass(frozen=True)
class CosetCheck:
    index: int
    p_residual: float
    q_penalty: float
    conjugation: float
    ok: bool


def verify_report(report, p, tol=None):
    """Recompute every residual of ``report`` against problem ``p``."""
    tol = report.tolerances if tol is None else tol
    c = canonicalize(p, tol)
    if report.constraints_only:
        c = c.without_objective()
    prob_scale = sum(float(np.linalg.norm(b)) for b in p.constraints)
    if not report.constraints_only:
        prob_scale += float(np.linalg.norm(p.objective))
    checks = []
    for rec in report.cosets:
        pm = rec.p_representative
        res = invariance_residual(pm, p, rec.permutation, include_objective=not report.constraints_only)
        pen = penalty_residual(rec.q_representative, c, rec.permutation)
        conj = float(np.linalg.norm(rec.q_representative - c.s @ pm @ c.s_inv))
        ok = (
            res <= tol.residual_tol * max(1.0, prob_scale)
            and pen <= tol.residual_tol * max(1.0, c.scale)
            and conj <= tol.residual_tol * max(1.0, c.scale)
        )
        checks.append(CosetCheck(rec.index, res, pen, conj, ok))
    return checks
