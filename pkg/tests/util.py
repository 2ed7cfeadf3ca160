"""Shared independent oracles for the test suite.

Everything here deliberately avoids the production code paths it is used to
check: vertex enumeration goes through exhaustive basis solves, hulls through
a monotone chain, and the qubit test search through a refined dense grid.
"""
import itertools
import math

import numpy as np

from oneshot_secrecy.regions import PolyRow, RatePolytope


def polytope_from_arrays(variables, rows):
    out = [PolyRow(tuple(float(c) for c in coeffs), float(b), f"r{i}")
           for i, (coeffs, b) in enumerate(rows)]
    return RatePolytope(tuple(variables), out)


def enumerate_vertices_nd(a, b, tol=1e-9):
    """All vertices of {x : a x <= b, x >= 0} by exhaustive basis solves."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[1]
    a_full = np.vstack([a, -np.eye(n)])
    b_full = np.concatenate([b, np.zeros(n)])
    vertices = []
    for rows in itertools.combinations(range(len(b_full)), n):
        mat = a_full[list(rows)]
        if abs(np.linalg.det(mat)) < 1e-10:
            continue
        x = np.linalg.solve(mat, b_full[list(rows)])
        if np.all(a_full @ x <= b_full + tol):
            vertices.append(x)
    if not vertices:
        return np.zeros((0, n))
    vs = np.array(vertices)
    order = np.lexsort(vs.T[::-1])
    vs = vs[order]
    keep = [vs[0]]
    for v in vs[1:]:
        if np.max(np.abs(v - keep[-1])) > tol:
            keep.append(v)
    return np.array(keep)


def convex_hull_2d(points):
    """Monotone-chain hull, counterclockwise, without the closing repeat."""
    pts = sorted(set((round(float(x), 12), round(float(y), 12)) for x, y in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def point_in_hull_2d(point, hull, tol=1e-9):
    """Membership in the convex polygon given as a counterclockwise hull."""
    if len(hull) == 0:
        return False
    if len(hull) == 1:
        return abs(point[0] - hull[0][0]) <= tol and abs(point[1] - hull[0][1]) <= tol
    if len(hull) == 2:
        (x1, y1), (x2, y2) = hull
        cross = (x2 - x1) * (point[1] - y1) - (y2 - y1) * (point[0] - x1)
        if abs(cross) > tol * (1 + abs(x2 - x1) + abs(y2 - y1)):
            return False
        dot = (point[0] - x1) * (x2 - x1) + (point[1] - y1) * (y2 - y1)
        return -tol <= dot <= (x2 - x1) ** 2 + (y2 - y1) ** 2 + tol
    for i in range(len(hull)):
        ax, ay = hull[i]
        bx, by = hull[(i + 1) % len(hull)]
        cross = (bx - ax) * (point[1] - ay) - (by - ay) * (point[0] - ax)
        if cross < -tol * (1 + abs(bx - ax) + abs(by - ay)):
            return False
    return True


def qubit_grid_beta(rho, sigma, eps, n_theta=1000, n_phi=1000):
    """Brute force over qubit tests L = V diag(l1, l2) V^dagger on a dense grid.

    For each of ~10^6 Bloch orientations the admissible (l1, l2) box cut by
    the type-I constraint is a polygon; its corners are enumerated directly
    and the cheapest feasible corner test is kept.  Independent of the
    production solver: no spectral threshold construction is used.
    """
    target = 1.0 - eps
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    c, s = np.cos(tt / 2), np.sin(tt / 2)
    e = np.exp(1j * pp)
    v1 = np.stack([c, e * s], axis=-1)
    v2 = np.stack([-np.conj(e) * s, c], axis=-1)

    def weight(v, m):
        return np.real(np.einsum("...i,ij,...j->...", v.conj(), m, v))

    a1, a2 = weight(v1, rho), weight(v2, rho)
    b1, b2 = weight(v1, sigma), weight(v2, sigma)
    best = np.full(a1.shape, np.inf)
    tiny = 1e-15

    def consider(l1, l2):
        nonlocal best
        ok = (
            (l1 >= -tiny) & (l1 <= 1 + tiny) & (l2 >= -tiny) & (l2 <= 1 + tiny)
            & (l1 * a1 + l2 * a2 >= target - 1e-12)
        )
        cost = l1 * b1 + l2 * b2
        best = np.where(ok, np.minimum(best, cost), best)

    ones = np.ones_like(a1)
    consider(ones, ones)
    with np.errstate(divide="ignore", invalid="ignore"):
        consider(ones, np.clip((target - a1) / np.where(a2 > tiny, a2, np.nan), 0.0, 1.0))
        consider(np.clip((target - a2) / np.where(a1 > tiny, a1, np.nan), 0.0, 1.0), ones)
        consider(np.clip(target / np.where(a1 > tiny, a1, np.nan), 0.0, 1.0), 0.0 * ones)
        consider(0.0 * ones, np.clip(target / np.where(a2 > tiny, a2, np.nan), 0.0, 1.0))
    return float(np.min(best))
