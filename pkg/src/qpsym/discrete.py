"""Representatives of every connected component of the symmetry group.

For a fixed constraint permutation the symmetry equations are linear in the
orthogonal matrix ``Q``, so the search first solves for the linear space ``V``
of all solutions and then looks for orthogonal points inside ``V``.  The
orthogonal polar factor of any invertible element of ``V`` lies in ``V`` again
(``Q Q^T`` commutes with the whole family), which makes the final polish exact.
"""

from dataclasses import dataclass, field
import itertools

import numpy as np

from .errors import SearchBudgetExceeded
from .lie import in_identity_component
from .linalg import DEFAULT_TOL, nullspace, orthogonality_defect, polar_orthogonal
from .problem import canonical_invariance_residual, check_permutation


@dataclass(frozen=True)
class SearchOptions:
    max_permutations: int = 40320
    restarts: int = 64
    seed: int = 0
    min_coset_separation: float = 1e-6
    max_iterations: int = 10_000
    polish_threshold: float = 1e-2
    snap_max_dim: int = 5

    def __post_init__(self):
        for name in ("max_permutations", "restarts", "min_coset_separation", "max_iterations", "polish_threshold", "snap_max_dim"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True, eq=False)
class DiscreteCoset:
    representative: np.ndarray
    permutation: tuple
    det_sign: int
    residual: float

    def sort_key(self):
        # ties: closest to the identity (largest trace), then largest entries
        q = self.representative
        return (self.permutation, -self.det_sign, self.residual, -float(np.trace(q)), tuple(-q.ravel()))


@dataclass(frozen=True)
class PairStats:
    permutation: tuple
    det_sign: int
    space_dim: int
    starts: int
    converged: int
    accepted: int


@dataclass(frozen=True, eq=False)
class CosetSearch:
    cosets: list
    pairs: list
    permutations: list
    duplicates: list = field(default_factory=list)


def _spectra(c):
    return [np.linalg.eigvalsh(b) for b in c.b_tilde]


def admissible_permutations(c, tol=DEFAULT_TOL, max_permutations=40320):
    """Permutations that map each constraint onto one with the same spectrum.

    Orthogonal similarity preserves eigenvalues, so other permutations cannot
    be realized.  Enumeration is lexicographic; the identity comes first.
    """
    m = c.m
    spectra = _spectra(c)
    cutoff = tol.rank_tol * c.scale
    compat = [[float(np.max(np.abs(spectra[i] - spectra[j]))) <= cutoff for j in range(m)] for i in range(m)]
    out = []
    used = [False] * m
    current = []

    def extend(i):
        if i == m:
            out.append(tuple(current))
            if len(out) > max_permutations:
                raise SearchBudgetExceeded(
                    f"more than {max_permutations} admissible permutations after spectrum pruning"
                )
            return
        for j in range(m):
            if not used[j] and compat[i][j]:
                used[j] = True
                current.append(j)
                extend(i + 1)
                current.pop()
                used[j] = False

    extend(0)
    return out


def coset_solution_space(c, perm, tol=DEFAULT_TOL):
    """Orthonormal basis of ``{Q : A Q = Q A, B_i Q = Q B_perm(i)}`` (canonical coordinates)."""
    perm = check_permutation(perm, c.m)
    n = c.n
    eye = np.eye(n)
    # row-major vec: vec(F Q) = (F kron I) q, vec(Q G) = (I kron G^T) q
    blocks = [np.kron(c.a_tilde, eye) - np.kron(eye, c.a_tilde.T)]
    for i, b in enumerate(c.b_tilde):
        blocks.append(np.kron(b, eye) - np.kron(eye, c.b_tilde[perm[i]].T))
    kernel = nullspace(np.vstack(blocks), tol, c.scale)
    return [v.reshape(n, n) for v in kernel.T]


def _orthogonality_objective(coeffs, wmat, n):
    q = (coeffs @ wmat).reshape(n, n)
    r = q @ q.T - np.eye(n)
    return float(np.sum(r * r)), q, r


def _descend(coeffs, wmat, n, opts):
    """Projected gradient descent on ``||Q Q^T - E||^2`` with backtracking."""
    val, q, r = _orthogonality_objective(coeffs, wmat, n)
    step = 1.0
    for _ in range(opts.max_iterations):
        if np.sqrt(val) <= opts.polish_threshold:
            break
        grad = wmat @ (4.0 * r @ q).ravel()
        gnorm2 = float(grad @ grad)
        if gnorm2 <= 1e-24:
            break
        while True:
            trial = coeffs - step * grad
            tval, tq, tr = _orthogonality_objective(trial, wmat, n)
            if tval <= val - 0.5 * step * gnorm2:
                break
            step *= 0.5
            if step < 1e-20:
                return coeffs, q
        coeffs, val, q, r = trial, tval, tq, tr
        step *= 2.0
    return coeffs, q


def _signed_permutations(n):
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1.0, -1.0), repeat=n):
            q = np.zeros((n, n))
            q[np.arange(n), perm] = signs
            yield q


def signed_permutation_candidates(c, perm, space, tol):
    """Exact signed-permutation matrices solving the linear system of ``perm``."""
    if not space:
        return []
    vecs = np.array([v.ravel() for v in space])
    cutoff = tol.residual_tol * c.scale
    found = []
    for q in _signed_permutations(c.n):
        flat = q.ravel()
        if np.linalg.norm(flat - (vecs @ flat) @ vecs) > tol.residual_tol:
            continue
        res = canonical_invariance_residual(q, c, perm)
        if res <= cutoff:
            found.append(DiscreteCoset(q, tuple(perm), 1 if np.linalg.det(q) > 0 else -1, res))
    return found


def _polish(q, wmat, n, rounds=3):
    for _ in range(rounds):
        u, s = polar_orthogonal(q)
        if s[-1] <= 1e-8 * s[0]:
            return None
        q = (wmat @ u.ravel() @ wmat).reshape(n, n)
    u, s = polar_orthogonal(q)
    if s[-1] <= 1e-8 * s[0]:
        return None
    return u


def search_pair(c, perm, det_sign, opts, tol, rng, space=None):
    """Multi-start search of one (permutation, determinant sign) pair.

    For ``det_sign = -1`` the unknown is ``Q' = D Q`` with ``D = diag(-1, 1, ..., 1)``,
    so both signs reuse the same det +1 machinery.
    """
    n = c.n
    space = coset_solution_space(c, perm, tol) if space is None else space
    d = len(space)
    found = []
    converged = 0
    if d == 0:
        return found, PairStats(tuple(perm), det_sign, 0, 0, 0, 0)
    flip = np.eye(n)
    if det_sign < 0:
        flip[0, 0] = -1.0
    wmat = np.array([(flip @ v).ravel() for v in space])
    cutoff = tol.residual_tol * c.scale
    for _ in range(opts.restarts):
        start = rng.standard_normal(d) * np.sqrt(n / d)
        _, q = _descend(start, wmat, n, opts)
        q = _polish(q, wmat, n)
        if q is None or orthogonality_defect(q) > tol.residual_tol:
            continue
        converged += 1
        if np.linalg.det(q) <= 0:
            continue
        rep = flip @ q
        res = canonical_invariance_residual(rep, c, perm)
        if res <= cutoff:
            found.append(DiscreteCoset(rep, tuple(perm), det_sign, res))
    return found, PairStats(tuple(perm), det_sign, d, opts.restarts, converged, len(found))


def dedup_cosets(candidates, basis, tol=DEFAULT_TOL, separation=1e-6):
    """Keep one representative per coset of the continuous subgroup.

    Two candidates merge when they share permutation and determinant sign and
    ``Q2 Q1^T`` lies in the identity component.  Candidates are sorted first, so
    the survivor is the one with smallest residual (ties: smallest entries).
    """
    kept = []
    for cand in sorted(candidates, key=DiscreteCoset.sort_key):
        for rep in kept:
            if rep.permutation != cand.permutation or rep.det_sign != cand.det_sign:
                continue
            if np.linalg.norm(rep.representative - cand.representative) <= separation:
                break
            if in_identity_component(cand.representative @ rep.representative.T, basis, tol):
                break
        else:
            kept.append(cand)
    return kept


def _cross_permutation_duplicates(cosets, basis, tol):
    dups = []
    for i, a in enumerate(cosets):
        for j in range(i + 1, len(cosets)):
            b = cosets[j]
            if a.permutation == b.permutation or a.det_sign != b.det_sign:
                continue
            if in_identity_component(b.representative @ a.representative.T, basis, tol):
                dups.append((i, j))
    return dups


def _is_identity_coset(coset, basis, tol):
    return (
        coset.det_sign > 0
        and coset.permutation == tuple(range(len(coset.permutation)))
        and in_identity_component(coset.representative, basis, tol)
    )


def search_cosets(c, basis, opts=SearchOptions(), tol=DEFAULT_TOL):
    perms = admissible_permutations(c, tol, opts.max_permutations)
    identity = tuple(range(c.m))
    candidates = [DiscreteCoset(np.eye(c.n), identity, 1, canonical_invariance_residual(np.eye(c.n), c, identity))]
    pairs = []
    for k, perm in enumerate(perms):
        space = coset_solution_space(c, perm, tol)
        if basis.dim and c.n <= opts.snap_max_dim:
            candidates.extend(signed_permutation_candidates(c, perm, space, tol))
        for det_sign in (1, -1):
            rng = np.random.default_rng([opts.seed, k, 0 if det_sign > 0 else 1])
            found, stats = search_pair(c, perm, det_sign, opts, tol, rng, space)
            candidates.extend(found)
            pairs.append(stats)
    cosets = dedup_cosets(candidates, basis, tol, opts.min_coset_separation)
    cosets.sort(key=lambda cs: (not _is_identity_coset(cs, basis, tol), cs.sort_key()))
    return CosetSearch(
        cosets=cosets,
        pairs=pairs,
        permutations=perms,
        duplicates=_cross_permutation_duplicates(cosets, basis, tol),
    )


def find_cosets(c, basis, opts=SearchOptions(), tol=DEFAULT_TOL):
    return search_cosets(c, basis, opts, tol).cosets
