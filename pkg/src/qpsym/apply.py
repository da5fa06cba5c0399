"""Using a computed symmetry group: orbits, equivalent optima, breaking cuts."""

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .linalg import DEFAULT_TOL, expm_skew, nullspace


@dataclass(frozen=True, eq=False)
class Orbit:
    seed: np.ndarray
    points: list
    tags: list


@dataclass(frozen=True, eq=False)
class Cut:
    """Valid inequality ``normal . x >= 0``."""

    normal: np.ndarray
    coset: int = -1


def map_point(p_mat, x):
    return np.asarray(p_mat, dtype=float) @ np.asarray(x, dtype=float)


def continuous_element(report, coeffs):
    """Element of the continuous subgroup in original coordinates."""
    x = np.zeros((report.n, report.n))
    for a, g in zip(coeffs, report.lie_generators):
        x = x + a * g
    return report.s_inv @ expm_skew(x) @ report.s


def orbit(x, report, continuous_samples=0, seed=0):
    """Images of ``x`` under every coset representative and sampled continuous elements."""
    x = np.asarray(x, dtype=float)
    rng = np.random.default_rng(seed)
    radius = 1e-9 * float(np.linalg.norm(x))
    points, tags = [], []

    def add(y, tag):
        for p in points:
            if np.linalg.norm(p - y) <= radius:
                return
        points.append(y)
        tags.append(tag)

    for rec in report.cosets:
        add(map_point(rec.p_representative, x), f"coset {rec.index}")
        if report.lie_dim == 0:
            continue
        for _ in range(continuous_samples):
            coeffs = rng.uniform(-4.0, 4.0, report.lie_dim)
            y = map_point(rec.p_representative @ continuous_element(report, coeffs), x)
            add(y, f"coset {rec.index} continuous [{', '.join(f'{a:.6g}' for a in coeffs)}]")
    return Orbit(seed=x, points=points, tags=tags)


def _fit_continuous(rep_q, gens, xt, yt, rng, starts=8):
    """Coefficients minimizing ``||Q exp(sum c_k G_k) xt - yt||`` from several starts."""
    k = len(gens)

    def resid(c):
        x = sum(a * g for a, g in zip(c, gens))
        return rep_q @ expm_skew(x) @ xt - yt

    best = None
    for s in range(starts):
        c0 = np.zeros(k) if s == 0 else rng.uniform(-4.0, 4.0, k)
        sol = scipy.optimize.least_squares(resid, c0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if best is None or sol.cost < best.cost:
            best = sol
        if np.sqrt(2 * best.cost) < 1e-13:
            break
    return best.x


def related(x, y, report, tol=DEFAULT_TOL, rng=None):
    """Index of a coset whose element maps ``x`` to ``y``, or None."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rng = np.random.default_rng(0) if rng is None else rng
    limit = tol.residual_tol * max(1.0, float(np.linalg.norm(x)))
    xt, yt = report.s @ x, report.s @ y
    for rec in report.cosets:
        p = rec.p_representative
        if np.linalg.norm(p @ x - y) <= limit:
            return rec.index
        if report.lie_dim:
            coeffs = _fit_continuous(rec.q_representative, report.lie_generators, xt, yt, rng)
            if np.linalg.norm(p @ continuous_element(report, coeffs) @ x - y) <= limit:
                return rec.index
    return None


def group_local_optima(points, report, tol=DEFAULT_TOL, seed=0):
    """Partition points into classes of images under the symmetry group.

    Returns lists of indices into ``points``, each sorted, ordered by first index.
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rng = np.random.default_rng(seed)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if find(i) == find(j):
                continue
            if related(pts[i], pts[j], report, tol, rng) is not None:
                parent[find(j)] = find(i)
    classes = {}
    for i in range(len(pts)):
        classes.setdefault(find(i), []).append(i)
    return sorted(classes.values(), key=lambda c: c[0])


def breaking_cut(p_mat, tol=DEFAULT_TOL):
    """Unit ``a`` with ``P^T a = -a``, so that ``a.(P x) = -a.x``; None if no such ``a``.

    The choice is the normalized projection of the first standard basis vector
    with a nonzero component in the eigenspace, signed so that its first
    nonzero coordinate is positive.
    """
    p_mat = np.asarray(p_mat, dtype=float)
    n = p_mat.shape[0]
    space = nullspace(p_mat.T + np.eye(n), tol, float(np.linalg.norm(p_mat, 2)) + 1.0)
    if space.shape[1] == 0:
        return None
    proj = space @ space.T
    for k in range(n):
        v = proj[:, k]
        norm = float(np.linalg.norm(v))
        if norm > 1e-8:
            a = v / norm
            a[np.abs(a) < 1e-15] = 0.0
            lead = a[np.flatnonzero(a)[0]]
            return Cut(normal=a if lead > 0 else -a)
    return None


def cuts(report, tol=DEFAULT_TOL):
    out = []
    for rec in report.cosets:
        cut = breaking_cut(rec.p_representative, tol)
        if cut is not None:
            out.append(Cut(normal=cut.normal, coset=rec.index))
    return out
