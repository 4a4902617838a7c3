"""Projection bodies of polytopes, zonotopes and their generating measures.

For a polytope P with facet normals u_i and areas w_i, Cauchy's projection
formula gives the brightness function

    h_{Pi P}(x) = 1/2 sum_i w_i |x . u_i|,

so Pi P is the zonotope with generators (w_i / 2) u_i.  A zonotope Z = sum_i [-v_i, v_i]
has the even generating measure with atoms (+-v_i/|v_i|, |v_i|), normalized so that
h_Z(x) = 1/2 int |x . v| dmu_Z(v); for o-symmetric K this makes mu_{Pi K} = S(K, .).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import (
    DiscreteSphericalMeasure,
    LinearMap,
    Polytope,
    _extreme_points,
    _rank,
    apply_linear,
    surface_area_measure,
)
from .errors import DegenerateBodyError
from .minkowski import SolverConfig, _merge_split_vertices, solve_minkowski
from .report import CheckReport
from .sphere import random_directions, sample_directions

__all__ = [
    "Zonotope",
    "projection_body",
    "generating_measure",
    "inverse_projection_body",
    "check_transform_law",
]


@dataclass(frozen=True, eq=False)
class Zonotope:
    """The Minkowski sum of the segments [-v_i, v_i] over the rows of ``generators``."""

    generators: np.ndarray

    def __post_init__(self):
        g = np.atleast_2d(np.array(self.generators, dtype=float))
        if g.size == 0 or g.ndim != 2:
            raise ValueError("zonotope needs at least one generator")
        if np.any(np.linalg.norm(g, axis=1) == 0):
            raise ValueError("zero generator")
        g.setflags(write=False)
        object.__setattr__(self, "generators", g)

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    @property
    def is_full_dimensional(self) -> bool:
        return _rank(self.generators) == self.dim

    def support(self, x):
        x = np.asarray(x, dtype=float)
        h = np.abs(np.atleast_2d(x) @ self.generators.T).sum(axis=1)
        return float(h[0]) if x.ndim == 1 else h

    def __add__(self, other: "Zonotope") -> "Zonotope":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return Zonotope(np.vstack([self.generators, other.generators]))

    def scaled(self, r: float) -> "Zonotope":
        if not r > 0:
            raise ValueError("scale must be positive")
        return Zonotope(r * self.generators)

    def linear_image(self, phi: LinearMap) -> "Zonotope":
        return Zonotope(phi(self.generators))

    def generating_measure(self) -> DiscreteSphericalMeasure:
        return generating_measure(self)

    def to_polytope(self) -> Polytope:
        """Vertex/facet form, built by adding one segment at a time and pruning to the hull."""
        pts = np.zeros((1, self.dim))
        for v in self.generators:
            pts = np.vstack([pts + v, pts - v])
            if len(pts) > 2 * self.dim + 2:
                pts = _extreme_points(pts)
        return Polytope.from_vertices(pts)

    def __repr__(self):
        return f"Zonotope(dim={self.dim}, generators={len(self.generators)})"


def projection_body(p: Polytope) -> Zonotope:
    """Pi P as a zonotope with one generator (w_i / 2) u_i per facet."""
    if not p.is_full_dimensional:
        raise DegenerateBodyError("not full-dimensional")
    mu = surface_area_measure(p)
    return Zonotope(0.5 * mu.weights[:, None] * mu.directions)


def generating_measure(z: Zonotope) -> DiscreteSphericalMeasure:
    """Even measure with atoms (+-v/|v|, |v|) per generator, parallel atoms merged."""
    g = z.generators
    r = np.linalg.norm(g, axis=1)
    u = g / r[:, None]
    return DiscreteSphericalMeasure(np.vstack([u, -u]), np.concatenate([r, r]))


def _symmetrize(p: Polytope) -> Polytope:
    # average the support numbers of each facet pair u, -u
    u = p.normals
    gap = np.linalg.norm(u[:, None, :] + u[None, :, :], axis=2)
    pair = np.argmin(gap, axis=1)
    if np.max(gap[np.arange(len(u)), pair]) > 1e-9:
        raise DegenerateBodyError("solution is not centrally symmetric")
    h = 0.5 * (p.offsets + p.offsets[pair])
    return _merge_split_vertices(Polytope.from_halfspaces(u, h, np.zeros(p.dim)))


def inverse_projection_body(z: Zonotope, cfg: SolverConfig | None = None) -> Polytope:
    """The o-symmetric polytope K with Pi K = Z, i.e. S(K, .) = mu_Z."""
    if not z.is_full_dimensional:
        raise DegenerateBodyError("not full-dimensional")
    k = solve_minkowski(generating_measure(z), cfg)
    return _symmetrize(k)


def check_transform_law(phi: LinearMap, p: Polytope, tol: float = 1e-8,
                        cfg: SolverConfig | None = None, samples: int = 200,
                        seed: int = 0) -> CheckReport:
    """Both linear transform laws of Pi, compared through support functions.

    Pi(phi P) = |det phi| phi^{-t} Pi P is checked on P itself, and
    Pi^{-1}(phi Z) = |det phi|^{1/(n-1)} phi^{-t} Pi^{-1} Z on Z = Pi P.  The
    discrepancy is the largest support difference, relative to the support
    size, over a sphere mesh plus random directions.
    """
    if phi.dim != p.dim:
        raise ValueError("dimension mismatch")
    n = p.dim
    mesh, _ = sample_directions(n, 3)
    x = np.vstack([mesh, random_directions(np.random.default_rng(seed), samples, n)])
    det = abs(phi.determinant)
    mt = LinearMap(phi.inverse_transpose)

    lhs = projection_body(apply_linear(phi, p))
    rhs = projection_body(p).linear_image(mt).scaled(det)
    hl, hr = lhs.support(x), rhs.support(x)
    pit = float(np.max(np.abs(hl - hr)) / max(np.max(np.abs(hr)), 1e-300))

    z = projection_body(p)
    a = inverse_projection_body(z.linear_image(phi), cfg)
    b = apply_linear(mt, inverse_projection_body(z, cfg))
    ha = a.support(x)
    hb = det ** (1.0 / (n - 1)) * b.support(x)
    pimt = float(np.max(np.abs(ha - hb)) / max(np.max(np.abs(hb)), 1e-300))
    return CheckReport.agreement("transform_law", max(pit, pimt), tol,
                                 details={"pit": pit, "pimt": pimt})
