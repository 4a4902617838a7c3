"""Reconstruction of a polytope from its surface area measure, and Blaschke addition.

The polytope with facet normals u_i and facet areas w_i is found by minimizing

    F(h) = sum_i w_i h_i - c log V(P(h)),     P(h) = {x : u_i . x <= h_i},

which is convex in the support numbers h because V^{1/n} is concave.  Since
dV/dh_i is the area a_i of facet i, a stationary point has a_i = (V / c) w_i, so
a uniform dilatation afterwards matches the areas to the weights.  Newton steps
use the exact second derivatives of the volume,

    d a_i / d h_j = vol_{n-2}(F_i cap F_j) / sin(theta_ij)      (i != j),

with the diagonal fixed by translation invariance, sum_j (d a_i / d h_j) u_j = 0.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .bodies import (
    DiscreteSphericalMeasure,
    Polytope,
    _cluster_points,
    add_measures,
    flat_measure,
    halfspace_cells,
    scale_body,
    surface_area_measure,
)
from .errors import DegenerateBodyError, SolverStalled
from .sphere import ball_volume

log = logging.getLogger(__name__)

__all__ = [
    "SolverConfig",
    "solve_minkowski",
    "add_measures",
    "blaschke_sum",
    "scale_body",
    "minkowski_residual",
]


@dataclass(frozen=True)
class SolverConfig:
    area_tolerance: float = 1e-9
    max_iterations: int = 200
    line_search_shrink: float = 0.5

    def __post_init__(self):
        if not self.area_tolerance > 0:
            raise ValueError("area_tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 < self.line_search_shrink < 1:
            raise ValueError("line_search_shrink must lie in (0, 1)")


class _State:
    """Facet areas and volume of P(h) for a fixed normal set, origin interior."""

    def __init__(self, normals, h):
        self.h = h
        n = normals.shape[1]
        self.verts, faces = halfspace_cells(normals, h, np.zeros(n), combinatorial=True)
        self.faces = faces
        self.areas = np.array([flat_measure(self.verts[list(f)], n - 1)[0] for f in faces])
        self.volume = float(self.areas @ h) / n


def _area_jacobian(normals, state):
    n = normals.shape[1]
    m = len(normals)
    inc = np.zeros((len(state.verts), m), dtype=bool)
    for j, f in enumerate(state.faces):
        inc[list(f), j] = True
    shared = inc.T.astype(int) @ inc.astype(int)
    cosines = normals @ normals.T
    jac = np.zeros((m, m))
    active = state.areas > 0
    for i in range(m):
        for j in range(i + 1, m):
            if shared[i, j] < n - 1 or not (active[i] and active[j]):
                continue
            pts = state.verts[np.flatnonzero(inc[:, i] & inc[:, j])]
            ridge = flat_measure(pts, n - 2)[0]
            if ridge > 0:
                s = np.sqrt(max(1.0 - cosines[i, j] ** 2, 1e-300))
                jac[i, j] = jac[j, i] = ridge / s
    jac[np.diag_indices(m)] = -(jac * cosines).sum(axis=1)
    return jac


def _complement(u):
    # orthonormal basis of the complement of span{(u_i . e_k)_i : k}
    qfull, _ = np.linalg.qr(u, mode="complete")
    return qfull[:, np.linalg.matrix_rank(u):]


def _merge_split_vertices(p: Polytope, rel=1e-9) -> Polytope:
    # a vertex where more than n facets meet comes out of the halfspace
    # intersection as a cluster of nearly equal points; collapse each cluster
    radius = np.max(np.linalg.norm(p.vertices - p.vertices.mean(axis=0), axis=1))
    verts, label = _cluster_points(p.vertices, rel * radius, return_labels=True)
    if len(verts) == len(p.vertices):
        return p
    faces = [sorted(set(label[list(f)].tolist())) for f in p.faces]
    return Polytope(verts, p.normals, p.offsets, faces)


def minkowski_residual(p: Polytope, mu: DiscreteSphericalMeasure) -> float:
    """Largest relative facet-area error of p against the target measure.

    Atoms with no matching facet count as a full relative error of 1.
    """
    areas = p.facet_areas()
    worst = 0.0
    for u, w in zip(mu.directions, mu.weights):
        k = np.flatnonzero(np.linalg.norm(p.normals - u, axis=1) < 1e-9)
        a = areas[k].sum() if len(k) else 0.0
        worst = max(worst, abs(a - w) / w)
    return worst


def solve_minkowski(mu: DiscreteSphericalMeasure, cfg: SolverConfig | None = None) -> Polytope:
    """The polytope with centroid at the origin whose surface area measure is ``mu``.

    Raises
    ------
    InvalidMeasureError
        If ``mu`` has nonzero centroid or lies in a great subsphere.
    SolverStalled
        If the facet areas do not reach ``cfg.area_tolerance`` (relative).
    """
    cfg = cfg or SolverConfig()
    mu.check_admissible()
    u, w = mu.directions, mu.weights
    m, n = u.shape
    total = float(w.sum())
    # start from the circumscribed body of the ball with the target surface area
    r0 = (total / (n * ball_volume(n))) ** (1.0 / (n - 1))
    c = ball_volume(n) * r0 ** n
    h = np.full(m, r0)
    state = _State(u, h)

    def objective(s):
        return float(w @ s.h) - c * np.log(s.volume)

    f = objective(state)
    stop = min(cfg.area_tolerance * 1e-3, 1e-12)
    it = 0
    for it in range(1, cfg.max_iterations + 1):
        v = state.volume
        g = w - c * state.areas / v
        rel = np.max(np.abs(g) / w)
        log.debug("iter %d residual %.3e", it, rel)
        if rel < stop:
            break
        jac = _area_jacobian(u, state)
        hess = -c * (jac / v - np.outer(state.areas, state.areas) / v ** 2)
        active = state.areas > 0
        d = np.zeros(m)
        idx = np.flatnonzero(active)
        # translations u . x leave F unchanged; solve on their orthogonal complement
        q = _complement(u[idx])
        hq = q.T @ hess[np.ix_(idx, idx)] @ q
        d[idx] = -q @ np.linalg.lstsq(hq, q.T @ g[idx], rcond=1e-13)[0]
        if not active.all():
            # a vanished facet: pull its plane onto the body so it reappears
            reach = np.max(state.verts @ u[~active].T, axis=0)
            d[~active] = reach - state.h[~active] - 1e-3 * r0
        if g @ d >= 0:
            d = -g * (r0 / np.max(np.abs(g))) * 0.1
        t = 1.0
        accepted = False
        while t > 1e-14:
            trial = state.h + t * d
            if np.min(trial) > 0:
                try:
                    cand = _State(u, trial)
                except DegenerateBodyError:
                    cand = None
                if cand is not None and cand.volume > 0:
                    if rel > 1e-5:
                        accepted = objective(cand) <= f + 1e-4 * t * (g @ d)
                    else:
                        # F is flat to rounding here; judge the step by the gradient
                        g_c = w - c * cand.areas / cand.volume
                        accepted = np.max(np.abs(g_c) / w) < 0.5 * rel
                    if accepted:
                        break
            t *= cfg.line_search_shrink
        if not accepted:
            log.debug("line search exhausted at iteration %d, residual %.3e", it, rel)
            break
        # keep the origin deep inside: translate so the vertex mean is at o
        shift = cand.verts.mean(axis=0)
        state = _State(u, cand.h - u @ shift)
        f = objective(state)

    scale = (total / state.areas.sum()) ** (1.0 / (n - 1))
    try:
        body = Polytope.from_halfspaces(u, scale * state.h, np.zeros(n))
    except DegenerateBodyError as exc:
        raise SolverStalled("solver stalled: degenerate iterate", iterations=it) from exc
    residual = minkowski_residual(body, mu)
    if residual > cfg.area_tolerance:
        raise SolverStalled(
            f"solver stalled: relative area residual {residual:.3e} after {it} iterations",
            residual=residual, iterations=it)
    return _merge_split_vertices(body).recentered()


def blaschke_sum(k: Polytope, l: Polytope, cfg: SolverConfig | None = None) -> Polytope:
    """K # L: the body with centroid at o and surface area measure S(K) + S(L)."""
    if k.dim != l.dim:
        raise ValueError("dimension mismatch")
    return solve_minkowski(add_measures(surface_area_measure(k), surface_area_measure(l)), cfg)
