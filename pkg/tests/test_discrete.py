import math

import numpy as np
import pytest
import sympy

from conftest import rotation2, rotation_axis3
from qpsym.discrete import (
    DiscreteCoset,
    SearchOptions,
    admissible_permutations,
    coset_solution_space,
    dedup_cosets,
    find_cosets,
    search_cosets,
)
from qpsym.errors import SearchBudgetExceeded
from qpsym.lie import LieBasis, in_identity_component, lie_basis
from qpsym.linalg import DEFAULT_TOL
from qpsym.problem import build_problem, canonical_invariance_residual, canonicalize


def exact_solution_space(a, bs, perm):
    """Rational basis of {Q : AQ = QA, B_i Q = Q B_perm(i)} by exact elimination."""
    n = a.shape[0]
    q = sympy.Matrix(n, n, list(sympy.symbols(f"q0:{n * n}")))
    eqs = list(a * q - q * a)
    for i, b in enumerate(bs):
        eqs += list(b * q - q * bs[perm[i]])
    lin = sympy.Matrix([[sympy.diff(e, s) for s in q] for e in eqs])
    return [sympy.Matrix(n, n, list(v)) for v in lin.nullspace()]


def rat(m):
    return sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in np.asarray(m).tolist()])


def same_span(numeric, exact):
    if not exact:
        return not numeric
    e = np.array([np.array(v, dtype=float).ravel() for v in exact]).T
    n = np.array([v.ravel() for v in numeric]).T
    if e.shape[1] != n.shape[1]:
        return False
    pe = e @ np.linalg.pinv(e)
    return np.linalg.norm(pe @ n - n) < 1e-10


EX1 = (np.diag([1.0, 0.8]), [np.array([[0.5, 2.0], [2.0, 0.5]]), np.array([[0.5, -2.0], [-2.0, 0.5]])])
EX2 = (np.eye(3), [np.diag([2.0, 2.0, 0.0]), np.diag([-1.0, -1.0, 1.0])])


@pytest.mark.parametrize("data", [EX1, EX2], ids=["ex1", "ex2"])
@pytest.mark.parametrize("constraints_only", [False, True])
def test_solution_space_matches_exact_oracle(data, constraints_only):
    a, bs = data
    if constraints_only:
        a = np.zeros_like(a)
    c = canonicalize(build_problem(a, bs))
    for perm in [(0, 1), (1, 0)]:
        numeric = coset_solution_space(c, perm)
        exact = exact_solution_space(rat(a), [rat(b) for b in bs], perm)
        assert same_span(numeric, exact), perm


def test_solution_space_examples(ex1_canon, ex2_canon):
    v2 = coset_solution_space(ex2_canon, (0, 1))
    assert len(v2) >= 2
    vecs = np.array([v.ravel() for v in v2]).T
    for member in (np.eye(3), rotation_axis3(0.4), np.diag([1.0, -1.0, -1.0])):
        assert np.linalg.norm(vecs @ (vecs.T @ member.ravel()) - member.ravel()) < 1e-12
    trivial = canonicalize(build_problem(np.eye(3), [np.eye(3)]))
    assert len(coset_solution_space(trivial, (0,))) == 9
    v1 = coset_solution_space(ex1_canon, (0, 1))
    vecs = np.array([v.ravel() for v in v1]).T
    assert np.linalg.norm(vecs @ (vecs.T @ np.eye(2).ravel()) - np.eye(2).ravel()) < 1e-12
    assert len(v2) == 5  # 2x2 block commuting with nothing plus the free (3,3) entry


def test_solution_space_elements_solve_system(ex2_canon):
    for v in coset_solution_space(ex2_canon, (0, 1)):
        for f in ex2_canon.family:
            assert np.linalg.norm(f @ v - v @ f) < 1e-12


def test_admissible_permutations(ex1_canon, ex2_canon):
    assert admissible_permutations(ex1_canon) == [(0, 1), (1, 0)]
    assert admissible_permutations(ex2_canon) == [(0, 1)]
    single = canonicalize(build_problem(np.eye(2), [np.eye(2)]))
    assert admissible_permutations(single) == [(0,)]
    # eigenvalues of [[0.5, 2], [2, 0.5]]: 0.5 +- 2
    np.testing.assert_allclose(np.linalg.eigvalsh(ex1_canon.b_tilde[0]), [-1.5, 2.5])


def test_budget_exceeded():
    bs = [np.eye(3) / 5.0] * 5
    c = canonicalize(build_problem(np.eye(3), bs))
    assert len(admissible_permutations(c)) == 120
    with pytest.raises(SearchBudgetExceeded):
        admissible_permutations(c, max_permutations=100)


def test_options_validated():
    with pytest.raises(ValueError):
        SearchOptions(restarts=0)
    with pytest.raises(ValueError):
        SearchOptions(seed=-1)


def test_find_cosets_constraints_only_ex1(ex1_canon):
    c = ex1_canon.without_objective()
    cosets = find_cosets(c, lie_basis(c))
    plus = [cs for cs in cosets if cs.det_sign == 1]
    assert len(cosets) == 8 and len(plus) == 4
    want = {(0, 1): [0.0, math.pi], (1, 0): [math.pi / 2, 3 * math.pi / 2]}
    for perm, angles in want.items():
        reps = [cs.representative for cs in plus if cs.permutation == perm]
        assert len(reps) == 2
        for a in angles:
            assert min(np.linalg.norm(r - rotation2(a)) for r in reps) < 1e-8


def test_find_cosets_ex1(ex1_canon):
    cosets = find_cosets(ex1_canon, lie_basis(ex1_canon))
    got = [(cs.permutation, cs.det_sign, np.round(cs.representative, 12).tolist()) for cs in cosets]
    assert got[0] == ((0, 1), 1, [[1.0, 0.0], [0.0, 1.0]])
    assert sorted(got) == sorted([
        ((0, 1), 1, [[1.0, 0.0], [0.0, 1.0]]),
        ((0, 1), 1, [[-1.0, 0.0], [0.0, -1.0]]),
        ((1, 0), -1, [[-1.0, 0.0], [0.0, 1.0]]),
        ((1, 0), -1, [[1.0, 0.0], [0.0, -1.0]]),
    ])


def test_find_cosets_ex2(ex2_canon):
    basis = lie_basis(ex2_canon)
    cosets = find_cosets(ex2_canon, basis)
    plus = [cs for cs in cosets if cs.det_sign == 1]
    assert len(plus) == 2
    assert all(cs.permutation == (0, 1) for cs in cosets)
    np.testing.assert_allclose(plus[0].representative, np.eye(3), atol=1e-12)
    assert in_identity_component(plus[1].representative @ np.diag([1.0, -1.0, -1.0]), basis)


def test_representatives_sound():
    rng = np.random.default_rng(4)
    t = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    p = build_problem(t.T @ np.eye(3) @ t, [t.T @ b @ t for b in EX2[1]])
    c = canonicalize(p)
    basis = lie_basis(c)
    for cs in find_cosets(c, basis):
        q = cs.representative
        assert np.linalg.norm(q @ q.T - np.eye(3)) <= DEFAULT_TOL.residual_tol
        assert np.sign(np.linalg.det(q)) == cs.det_sign
        for i, b in enumerate(c.b_tilde):
            assert np.linalg.norm(q.T @ b @ q - c.b_tilde[cs.permutation[i]]) <= DEFAULT_TOL.residual_tol * c.scale


def test_deterministic(ex2_canon):
    basis = lie_basis(ex2_canon)
    opts = SearchOptions(seed=3, restarts=16)
    a = search_cosets(ex2_canon, basis, opts)
    b = search_cosets(ex2_canon, basis, opts)
    assert len(a.cosets) == len(b.cosets)
    for x, y in zip(a.cosets, b.cosets):
        assert np.array_equal(x.representative, y.representative)
        assert x.permutation == y.permutation and x.residual == y.residual
    assert a.pairs == b.pairs


def test_dedup_examples(ex1_canon, ex2_canon):
    basis2 = lie_basis(ex2_canon)
    ident = (0, 1)
    r1 = DiscreteCoset(rotation_axis3(0.3), ident, 1, 0.0)
    r2 = DiscreteCoset(rotation_axis3(1.2), ident, 1, 0.0)
    assert len(dedup_cosets([r1, r2], basis2)) == 1
    e = DiscreteCoset(np.eye(3), ident, 1, 0.0)
    d = DiscreteCoset(np.diag([1.0, -1.0, -1.0]), ident, 1, 0.0)
    assert len(dedup_cosets([e, d], basis2)) == 2
    basis1 = lie_basis(ex1_canon)
    kept = dedup_cosets([DiscreteCoset(-np.eye(2), ident, 1, 0.0), DiscreteCoset(np.eye(2), ident, 1, 0.0)], basis1)
    assert len(kept) == 2
    # equal residuals: the representative nearest the identity survives
    kept = dedup_cosets([r2, r1, DiscreteCoset(np.eye(3), ident, 1, 0.0)], basis2)
    assert len(kept) == 1 and np.array_equal(kept[0].representative, np.eye(3))
    # smallest residual wins over trace
    kept = dedup_cosets([DiscreteCoset(np.eye(3), ident, 1, 1e-12), r1], basis2)
    assert kept[0] is r1


def test_dedup_separates_permutation_and_det():
    basis = LieBasis(n=2, generators=())
    a = DiscreteCoset(np.eye(2), (0, 1), 1, 0.0)
    b = DiscreteCoset(np.eye(2), (1, 0), 1, 0.0)
    assert len(dedup_cosets([a, b], basis)) == 2


def test_solution_space_rounding_error_is_not_rank():
    o, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((2, 2)))
    t = o @ np.diag([0.7, 1.9])
    c = canonicalize(build_problem(t.T @ t, [t.T @ (k * np.eye(2)) @ t for k in (0.4, 0.6)]))
    assert len(coset_solution_space(c, (0, 1))) == 4
