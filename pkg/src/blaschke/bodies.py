"""Convex bodies, spherical measures and the elementary operations on them.

Polytopes are the concrete body type: every identity exercised by this package
is exact on polytopes.  Bodies that are not polytopes in general (Lp sums,
M-sums) are represented by their support functions only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.spatial import ConvexHull, Delaunay, HalfspaceIntersection, QhullError

from .errors import DegenerateBodyError, InvalidMeasureError
from .sphere import normalize, sample_directions

ANGLE_TOL = 1e-9
UNIT_TOL = 1e-12


def _rank(x, rel=1e-10):
    if len(x) == 0:
        return 0
    s = np.linalg.svd(np.atleast_2d(x), compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rel * s[0]))


def _flat_basis(points, k):
    c = points.mean(axis=0)
    x = points - c
    _, s, vt = np.linalg.svd(x, full_matrices=False)
    return c, x, s, vt[:k]


def _polygon_measure(y):
    # y: planar points in convex position (any order)
    c = y.mean(axis=0)
    order = np.argsort(np.arctan2(y[:, 1] - c[1], y[:, 0] - c[0]))
    p = y[order] - c
    q = np.roll(p, -1, axis=0)
    cross = p[:, 0] * q[:, 1] - p[:, 1] * q[:, 0]
    area = 0.5 * cross.sum()
    if area <= 0:
        return 0.0, c
    cen = c + ((p + q) * cross[:, None]).sum(axis=0) / (6.0 * area)
    return float(area), cen


def flat_measure(points, k):
    """k-volume and centroid of the convex hull of points lying in a k-flat.

    Returns ``(0.0, mean)`` when the points span less than k dimensions.
    """
    points = np.asarray(points, dtype=float)
    mean = points.mean(axis=0) if len(points) else None
    if k == 0:
        return (1.0 if len(points) else 0.0), mean
    if len(points) <= k:
        return 0.0, mean
    c, x, s, basis = _flat_basis(points, k)
    scale = max(s[0], np.max(np.abs(points)), 1e-300)
    if s[k - 1] <= 1e-12 * scale:
        return 0.0, mean
    y = x @ basis.T
    if k == 1:
        lo, hi = y[:, 0].min(), y[:, 0].max()
        return float(hi - lo), c + 0.5 * (lo + hi) * basis[0]
    if k == 2:
        area, cen = _polygon_measure(y)
        return area, c + cen @ basis
    try:
        tri = Delaunay(y)
    except QhullError:
        return 0.0, mean
    simp = y[tri.simplices]
    vols = np.abs(np.linalg.det(simp[:, 1:] - simp[:, :1])) / np.prod(np.arange(1, k + 1))
    total = vols.sum()
    if total <= 0:
        return 0.0, mean
    cen = (vols[:, None] * simp.mean(axis=1)).sum(axis=0) / total
    return float(total), c + cen @ basis


def _cluster_points(points, tol, return_labels=False):
    """Merge points closer than ``tol``; returns representatives in first-seen order."""
    if len(points) == 0:
        return (points, np.zeros(0, dtype=int)) if return_labels else points
    d = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    label = -np.ones(len(points), dtype=int)
    reps = []
    for i in range(len(points)):
        if label[i] >= 0:
            continue
        members = np.flatnonzero((d[i] < tol) & (label < 0))
        label[members] = len(reps)
        reps.append(points[members].mean(axis=0))
    if return_labels:
        return np.array(reps), label
    return np.array(reps)


def _vertex_filter(points, normals, offsets, tol):
    """Keep points lying on facets whose normals span R^n (true vertices)."""
    n = points.shape[1]
    on = (points @ normals.T) >= offsets[None, :] - tol
    keep = [i for i in range(len(points)) if _rank(normals[on[i]]) == n]
    return points[keep]


def _faces(vertices, normals, offsets, tol):
    on = np.abs(vertices @ normals.T - offsets[None, :]) <= tol
    return [tuple(np.flatnonzero(on[:, j]).tolist()) for j in range(len(normals))]


@dataclass(frozen=True, eq=False)
class Polytope:
    """A convex polytope stored both by vertices and by facets.

    ``normals[i]`` is the unit outer normal of facet ``i``, ``offsets[i]`` its
    support number and ``faces[i]`` the indices of the vertices it contains.
    Lower-dimensional polytopes carry vertices only and are accepted solely by
    support-function operations.
    """

    vertices: np.ndarray
    normals: np.ndarray = field(default=None)
    offsets: np.ndarray = field(default=None)
    faces: tuple = ()

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or len(v) == 0:
            raise ValueError("polytope needs a nonempty vertex list")
        n = v.shape[1]
        nr = np.zeros((0, n)) if self.normals is None else np.array(self.normals, dtype=float).reshape(-1, n)
        off = np.zeros(0) if self.offsets is None else np.array(self.offsets, dtype=float).reshape(-1)
        for a in (v, nr, off):
            a.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "normals", nr)
        object.__setattr__(self, "offsets", off)
        object.__setattr__(self, "faces", tuple(tuple(f) for f in self.faces))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_vertices(cls, points) -> "Polytope":
        """Convex hull of a finite point set (facets merged at angular tolerance)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        n = pts.shape[1]
        if n < 1:
            raise ValueError("dimension must be positive")
        scale = max(np.max(np.abs(pts)), 1e-300)
        pts = _cluster_points(pts, 1e-12 * scale)
        if len(pts) <= n or _rank(pts - pts.mean(axis=0)) < n:
            return cls(_extreme_points(pts))
        hull = ConvexHull(pts)
        eq = hull.equations
        groups = []
        for j in range(len(eq)):
            for g in groups:
                if np.linalg.norm(eq[g[0], :n] - eq[j, :n]) < ANGLE_TOL:
                    g.append(j)
                    break
            else:
                groups.append([j])
        normals = normalize(np.array([eq[g, :n].mean(axis=0) for g in groups]))
        cand = pts[np.sort(hull.vertices)]
        offsets = np.max(cand @ normals.T, axis=0)
        tol = 1e-9 * max(np.max(np.linalg.norm(cand - cand.mean(axis=0), axis=1)), 1e-300)
        verts = _vertex_filter(cand, normals, offsets, tol)
        offsets = np.max(verts @ normals.T, axis=0)
        return cls(verts, normals, offsets, _faces(verts, normals, offsets, tol))

    @classmethod
    def from_halfspaces(cls, normals, offsets, interior_point=None) -> "Polytope":
        """Intersection of the halfspaces ``normals[i] . x <= offsets[i]``.

        Redundant halfspaces (those whose facet has no area) are dropped; the
        remaining facets keep the supplied normals exactly.
        """
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        offsets = np.asarray(offsets, dtype=float)
        verts, faces = halfspace_cells(normals, offsets, interior_point)
        n = normals.shape[1]
        keep = [i for i, f in enumerate(faces) if flat_measure(verts[list(f)], n - 1)[0] > 0]
        return cls(verts, normals[keep], offsets[keep], [faces[i] for i in keep])

    @classmethod
    def box(cls, halfwidths) -> "Polytope":
        hw = np.asarray(halfwidths, dtype=float)
        n = len(hw)
        eye = np.eye(n)
        normals = np.vstack([eye, -eye])
        return cls.from_halfspaces(normals, np.concatenate([hw, hw]), np.zeros(n))

    @classmethod
    def cube(cls, side=1.0, n=3) -> "Polytope":
        return cls.box(np.full(n, side / 2.0))

    @classmethod
    def cross_polytope(cls, n=3, radius=1.0) -> "Polytope":
        eye = radius * np.eye(n)
        return cls.from_vertices(np.vstack([eye, -eye]))

    @classmethod
    def ball_approximation(cls, radius=1.0, depth=1) -> "Polytope":
        """Polytope inscribed in the ball of given radius in R^3 (icosphere hull)."""
        from .sphere import icosphere

        v, _ = icosphere(depth)
        return cls.from_vertices(radius * v)

    # -- basic properties ---------------------------------------------------

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def is_full_dimensional(self) -> bool:
        return len(self.normals) > 0

    def _require_body(self):
        if not self.is_full_dimensional:
            raise DegenerateBodyError("not full-dimensional")

    def support(self, x):
        """Support function; ``x`` may be a single vector or a stack of rows."""
        x = np.asarray(x, dtype=float)
        return np.max(x @ self.vertices.T, axis=-1)

    def facet_areas(self) -> np.ndarray:
        self._require_body()
        n = self.dim
        return np.array([flat_measure(self.vertices[list(f)], n - 1)[0] for f in self.faces])

    def volume(self) -> float:
        return _volume_and_centroid(self)[0]

    def centroid(self) -> np.ndarray:
        return _volume_and_centroid(self)[1]

    def surface_area(self) -> float:
        return float(self.facet_areas().sum())

    def translate(self, t) -> "Polytope":
        t = np.asarray(t, dtype=float)
        return Polytope(self.vertices + t, self.normals, self.offsets + self.normals @ t, self.faces)

    def recentered(self) -> "Polytope":
        return self.translate(-self.centroid())

    def is_symmetric(self, tol=1e-9) -> bool:
        """Whether the vertex set is closed under negation within ``tol``."""
        v = self.vertices
        d = np.linalg.norm(v[:, None, :] + v[None, :, :], axis=2)
        return bool(np.all(d.min(axis=1) <= tol))

    def extent(self, axis=-1) -> float:
        c = self.vertices[:, axis]
        return float(c.max() - c.min())

    def validate(self, tol=1e-9):
        """Check the representation invariants; raises ``ValueError`` on failure."""
        if not self.is_full_dimensional:
            return
        n = self.dim
        if not np.allclose(np.linalg.norm(self.normals, axis=1), 1.0, atol=UNIT_TOL):
            raise ValueError("facet normals must be unit vectors")
        scale = max(np.max(np.abs(self.vertices)), 1.0)
        slack = self.vertices @ self.normals.T - self.offsets[None, :]
        if np.max(slack) > tol * scale:
            raise ValueError("vertex outside a facet halfspace")
        for j, f in enumerate(self.faces):
            pts = self.vertices[list(f)]
            if len(pts) < n or np.max(np.abs(pts @ self.normals[j] - self.offsets[j])) > tol * scale:
                raise ValueError(f"facet {j} is not attained by n vertices")
            if _rank(pts - pts.mean(axis=0)) < n - 1:
                raise ValueError(f"facet {j} is lower-dimensional")
        c = self.vertices.mean(axis=0)
        if np.min(self.offsets - self.normals @ c) <= 0:
            raise ValueError("empty interior")


def _extreme_points(pts):
    """Extreme points of a possibly lower-dimensional finite set."""
    if len(pts) == 1:
        return pts
    c = pts.mean(axis=0)
    x = pts - c
    k = _rank(x)
    if k == 0:
        return pts[:1]
    _, _, vt = np.linalg.svd(x, full_matrices=False)
    y = x @ vt[:k].T
    if k == 1:
        return pts[[int(np.argmin(y[:, 0])), int(np.argmax(y[:, 0]))]]
    hull = ConvexHull(y)
    return pts[np.sort(hull.vertices)]


def halfspace_cells(normals, offsets, interior_point=None, combinatorial=False):
    """Vertices of a halfspace intersection and the vertex set of every halfspace.

    The returned face list is indexed like the input; redundant halfspaces get
    faces that span less than a facet (possibly empty).  With ``combinatorial``
    the incidences are read off qhull's dual hull instead of distance tests, and
    coincident vertices are kept; areas and volumes then stay consistent to
    rounding even where many planes nearly meet.
    """
    if interior_point is None:
        interior_point = chebyshev_center(normals, offsets)
    interior_point = np.asarray(interior_point, dtype=float)
    if np.min(offsets - normals @ interior_point) <= 0:
        raise DegenerateBodyError("interior point is not strictly inside")
    hs = np.hstack([normals, -offsets[:, None]])
    try:
        hsi = HalfspaceIntersection(hs, interior_point)
    except QhullError as exc:
        raise DegenerateBodyError("halfspace intersection failed") from exc
    inter = hsi.intersections
    if not np.all(np.isfinite(inter)):
        raise DegenerateBodyError("halfspaces do not bound a body")
    if combinatorial:
        faces = [[] for _ in range(len(normals))]
        for k, planes in enumerate(hsi.dual_facets):
            for i in planes:
                faces[i].append(k)
        return inter, [tuple(f) for f in faces]
    scale = max(np.max(np.abs(inter - interior_point)), 1e-300)
    # vertices where more than n planes nearly meet are split by tiny edges;
    # merging only at rounding level keeps the facet areas exact
    verts = _cluster_points(inter, 1e-13 * scale)
    tol = 1e-12 * scale
    verts = _vertex_filter(verts, normals, offsets, tol)
    return verts, _faces(verts, normals, offsets, tol)


def chebyshev_center(normals, offsets):
    from scipy.optimize import linprog

    n = normals.shape[1]
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a = np.hstack([normals, np.linalg.norm(normals, axis=1)[:, None]])
    res = linprog(c, A_ub=a, b_ub=offsets, bounds=[(None, None)] * n + [(0, None)])
    if res.status != 0 or res.x[-1] <= 0:
        raise DegenerateBodyError("halfspaces have empty interior")
    return res.x[:n]


def _volume_and_centroid(p: Polytope):
    # fan of pyramids over the facets, apex at the vertex mean
    p._require_body()
    n = p.dim
    apex = p.vertices.mean(axis=0)
    vol = 0.0
    moment = np.zeros(n)
    for j, f in enumerate(p.faces):
        area, fc = flat_measure(p.vertices[list(f)], n - 1)
        height = p.offsets[j] - p.normals[j] @ apex
        v = area * height / n
        vol += v
        moment += v * (apex + n / (n + 1.0) * (fc - apex))
    return float(vol), moment / vol


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True, eq=False)
class DiscreteSphericalMeasure:
    """Finite sum of weighted point masses on S^{n-1}.

    Atoms whose directions are closer than ``ANGLE_TOL`` (chordal) are merged on
    construction and atoms are stored in lexicographic direction order, so equal
    measures have equal arrays.
    """

    directions: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        d = np.atleast_2d(np.asarray(self.directions, dtype=float))
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if d.shape[0] != len(w):
            raise ValueError("one weight per direction required")
        if len(w) and np.any(w <= 0):
            raise ValueError("atom weights must be positive")
        if len(w):
            norms = np.linalg.norm(d, axis=1)
            if np.any(np.abs(norms - 1.0) > 1e-8):
                raise ValueError("atom directions must be unit vectors")
            # rows already unit to rounding are kept bit-exact
            off = np.abs(norms - 1.0) > 4 * np.finfo(float).eps
            d = d.copy()
            d[off] /= norms[off, None]
            d, w = _merge_atoms(d, w)
        for a in (d, w):
            a.setflags(write=False)
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_vectors(cls, vectors, weights=None):
        """Atoms from arbitrary nonzero vectors (normalized); weights default to norms."""
        v = np.atleast_2d(np.asarray(vectors, dtype=float))
        norms = np.linalg.norm(v, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero direction")
        w = norms if weights is None else weights
        return cls(v / norms[:, None], w)

    @classmethod
    def empty(cls, n):
        return cls(np.zeros((0, n)), np.zeros(0))

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    def __len__(self):
        return len(self.weights)

    def total_mass(self) -> float:
        return float(self.weights.sum())

    def centroid(self) -> np.ndarray:
        return self.weights @ self.directions

    def __add__(self, other):
        return add_measures(self, other)

    def scaled(self, c) -> "DiscreteSphericalMeasure":
        if c <= 0:
            raise ValueError("scale must be positive")
        return DiscreteSphericalMeasure(self.directions, c * self.weights)

    def reflected(self) -> "DiscreteSphericalMeasure":
        return DiscreteSphericalMeasure(-self.directions, self.weights)

    def integrate(self, f) -> float:
        """Integral of a function of the direction (vectorized over rows)."""
        return float(self.weights @ np.asarray(f(self.directions), dtype=float))

    def is_even(self, tol=1e-9) -> bool:
        for u, w in zip(self.directions, self.weights):
            k = np.flatnonzero(np.linalg.norm(self.directions + u, axis=1) < ANGLE_TOL)
            if len(k) != 1 or abs(self.weights[k[0]] - w) > tol * max(1.0, w):
                return False
        return True

    def check_admissible(self, centroid_tol=1e-8, spread_tol=1e-8):
        """Raise unless the measure satisfies the Minkowski existence conditions."""
        if len(self) == 0:
            raise InvalidMeasureError("measure degenerate")
        scale = max(1.0, self.total_mass())
        if np.linalg.norm(self.centroid()) >= centroid_tol * scale:
            raise InvalidMeasureError("measure centroid nonzero")
        s = np.linalg.svd(self.directions, compute_uv=False)
        if len(s) < self.dim or s[-1] <= spread_tol:
            raise InvalidMeasureError("measure degenerate")

    def is_admissible(self) -> bool:
        try:
            self.check_admissible()
        except InvalidMeasureError:
            return False
        return True


def _merge_atoms(d, w):
    order = np.lexsort(d.T[::-1])
    d, w = d[order], w[order]
    used = np.zeros(len(w), dtype=bool)
    out_d, out_w = [], []
    for i in range(len(w)):
        if used[i]:
            continue
        close = np.flatnonzero(~used & (np.linalg.norm(d - d[i], axis=1) < ANGLE_TOL))
        used[close] = True
        wt = w[close].sum()
        if len(close) > 1:
            dir_ = (w[close, None] * d[close]).sum(axis=0)
            out_d.append(dir_ / np.linalg.norm(dir_))
        else:
            out_d.append(d[i])
        out_w.append(wt)
    d, w = np.array(out_d), np.array(out_w)
    order = np.lexsort(d.T[::-1])
    return d[order], w[order]


def add_measures(mu: DiscreteSphericalMeasure, nu: DiscreteSphericalMeasure) -> DiscreteSphericalMeasure:
    """Sum of two measures; atoms in parallel directions are merged."""
    if mu.dim != nu.dim:
        raise ValueError("dimension mismatch")
    return DiscreteSphericalMeasure(np.vstack([mu.directions, nu.directions]),
                                    np.concatenate([mu.weights, nu.weights]))


def surface_area_measure(p: Polytope) -> DiscreteSphericalMeasure:
    """One atom per facet: outer unit normal weighted by the facet area."""
    return DiscreteSphericalMeasure(p.normals, p.facet_areas())


# ---------------------------------------------------------------------------
# support-function bodies


class ConvexBodyOracle:
    """A convex body known only through its support function.

    ``func`` maps a stack of row vectors of shape (m, n) to m support values.
    """

    def __init__(self, dim: int, func: Callable, name: str = "oracle"):
        self.dim = int(dim)
        self._func = func
        self.name = name

    def support(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            return float(self._func(x[None, :])[0])
        return np.asarray(self._func(x), dtype=float)

    @classmethod
    def of(cls, body) -> "ConvexBodyOracle":
        if isinstance(body, ConvexBodyOracle):
            return body
        return cls(body.dim, body.support, type(body).__name__)

    @classmethod
    def point(cls, n):
        return cls(n, lambda x: np.zeros(len(x)), "origin")

    @classmethod
    def ball(cls, n, radius=1.0):
        return cls(n, lambda x: radius * np.linalg.norm(x, axis=1), "ball")

    def __repr__(self):
        return f"ConvexBodyOracle(dim={self.dim}, name={self.name!r})"


def _support_rows(body, x):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return np.asarray(body.support(x), dtype=float).reshape(len(x))


class UnconditionalBody2D:
    """A 1-unconditional compact convex set M in the plane, given by h_M.

    The symmetry is verified on a fixed sample of points at construction.
    """

    _probe = np.array([[0.3, 1.7], [1.0, 0.0], [0.0, 1.0], [2.0, 0.5], [1.1, 1.1],
                       [0.05, 3.0], [4.0, 0.2], [0.7, 0.9]])

    def __init__(self, func: Callable, name: str = "M"):
        self._func = func
        self.name = name
        ref = self._func(self._probe)
        for sx, sy in ((-1, 1), (1, -1), (-1, -1)):
            other = self._func(self._probe * np.array([sx, sy]))
            if np.max(np.abs(other - ref)) > 1e-10 * max(1.0, np.max(np.abs(ref))):
                raise ValueError("M is not 1-unconditional")

    def support(self, s, t=None):
        if t is None:
            st = np.atleast_2d(np.asarray(s, dtype=float))
            out = self._func(st)
            return float(out[0]) if np.ndim(s) == 1 else out
        return float(self._func(np.array([[s, t]], dtype=float))[0])

    @classmethod
    def box(cls, a, b):
        """M = [-a, a] x [-b, b]; the M-sum is aK + bL."""
        if a < 0 or b < 0:
            raise ValueError("box half-sides must be nonnegative")
        return cls(lambda st: a * np.abs(st[:, 0]) + b * np.abs(st[:, 1]), f"box({a},{b})")

    @classmethod
    def lp_ball(cls, p):
        """Unit ball of l_p in the plane; its support function is the dual l_q norm."""
        if p < 1:
            raise ValueError("p must be >= 1")
        q = np.inf if p == 1 else (1.0 if np.isinf(p) else p / (p - 1.0))
        return cls(lambda st: np.linalg.norm(st, ord=q, axis=1), f"l{p}-ball")

    @classmethod
    def for_lp_sum(cls, p):
        """The M whose M-sum is the Lp sum +_p, i.e. h_M is the l_p norm."""
        q = np.inf if p == 1 else (1.0 if np.isinf(p) else p / (p - 1.0))
        return cls.lp_ball(q)

    @classmethod
    def point(cls):
        return cls(lambda st: np.zeros(len(st)), "origin")


# ---------------------------------------------------------------------------
# operations


def support(body, x):
    return body.support(x)


def volume(p: Polytope) -> float:
    return p.volume()


def centroid(p: Polytope) -> np.ndarray:
    return p.centroid()


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    """Convex hull of the pairwise vertex sums."""
    if p.dim != q.dim:
        raise ValueError("dimension mismatch")
    sums = (p.vertices[:, None, :] + q.vertices[None, :, :]).reshape(-1, p.dim)
    return Polytope.from_vertices(sums)


def lp_sum_support(k, l, p, x):
    """Support value of the Lp sum K +_p L at x (p > 1, p = inf allowed)."""
    if not p > 1:
        raise ValueError("p must exceed 1")
    hk = _support_rows(k, x)
    hl = _support_rows(l, x)
    if np.min(hk) < -1e-12 or np.min(hl) < -1e-12:
        raise ValueError("body does not contain origin")
    hk, hl = np.maximum(hk, 0.0), np.maximum(hl, 0.0)
    out = np.maximum(hk, hl) if np.isinf(p) else (hk ** p + hl ** p) ** (1.0 / p)
    return float(out[0]) if np.ndim(x) == 1 else out


def lp_sum(k, l, p) -> ConvexBodyOracle:
    if k.dim != l.dim:
        raise ValueError("dimension mismatch")
    return ConvexBodyOracle(k.dim, lambda x: lp_sum_support(k, l, p, x), f"Lp(p={p})")


def m_sum_support(k, l, m: UnconditionalBody2D, x):
    """Support value of the M-sum: h_M(h_K(x), h_L(x))."""
    hk = _support_rows(k, x)
    hl = _support_rows(l, x)
    out = m.support(np.column_stack([hk, hl]))
    return float(out[0]) if np.ndim(x) == 1 else out


def m_sum(k, l, m: UnconditionalBody2D) -> ConvexBodyOracle:
    if k.dim != l.dim:
        raise ValueError("dimension mismatch")
    return ConvexBodyOracle(k.dim, lambda x: m_sum_support(k, l, m, x), f"M-sum({m.name})")


def outer_approximation(body, resolution=3) -> Polytope:
    """Circumscribed polytope: intersection of supporting halfspaces at sample directions."""
    u, _ = sample_directions(body.dim, resolution)
    h = _support_rows(body, u)
    return Polytope.from_halfspaces(u, h)


def mixed_volume_1(k, l: Polytope) -> float:
    """V(K; L, n-1) as the integral of h_K against the surface measure of L."""
    l._require_body()
    return float(_support_rows(k, l.normals) @ l.facet_areas())


class LinearMap:
    """An invertible linear map of R^n."""

    def __init__(self, matrix):
        a = np.array(matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("square matrix required")
        det = float(np.linalg.det(a))
        if abs(det) <= 1e-10:
            raise ValueError("singular map")
        a.setflags(write=False)
        self.matrix = a
        self.determinant = det

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def inverse_transpose(self):
        return np.linalg.inv(self.matrix).T

    def inverse(self) -> "LinearMap":
        return LinearMap(np.linalg.inv(self.matrix))

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T

    def __matmul__(self, other):
        return LinearMap(self.matrix @ other.matrix)

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n))


def apply_linear(phi: LinearMap, p: Polytope) -> Polytope:
    """Image of a polytope; facet normals are carried by phi^{-t}."""
    if phi.dim != p.dim:
        raise ValueError("dimension mismatch")
    verts = phi(p.vertices)
    if not p.is_full_dimensional:
        return Polytope(verts)
    m = p.normals @ phi.inverse_transpose.T
    r = np.linalg.norm(m, axis=1)
    return Polytope(verts, m / r[:, None], p.offsets / r, p.faces)


def scale_body(a: float, p: Polytope) -> Polytope:
    """Dilatate aP for a > 0."""
    if not a > 0:
        raise ValueError("scale must be positive: a point is not a body")
    return Polytope(a * p.vertices, p.normals, a * p.offsets, p.faces)


def pushforward_measure(phi: LinearMap, mu: DiscreteSphericalMeasure) -> DiscreteSphericalMeasure:
    """Surface area measure of phi(P) computed from that of P alone.

    A facet with normal u and area a is mapped to a facet with normal
    phi^{-t}u / |phi^{-t}u| and area |det phi| |phi^{-t}u| a.
    """
    mu.check_admissible()
    m = mu.directions @ phi.inverse_transpose.T
    r = np.linalg.norm(m, axis=1)
    return DiscreteSphericalMeasure(m / r[:, None], abs(phi.determinant) * r * mu.weights)


def _point_face_distance(x, p: Polytope, j, order_cache):
    u, h = p.normals[j], p.offsets[j]
    pts = order_cache[j]
    proj = x - (u @ x - h) * u
    # inside test against the ordered convex polygon
    edges = np.roll(pts, -1, axis=0) - pts
    side = np.cross(edges, proj - pts) @ u
    if np.all(side >= -1e-15 * max(1.0, np.max(np.abs(pts)))):
        return abs(u @ x - h)
    a, b = pts, np.roll(pts, -1, axis=0)
    ab = b - a
    t = np.clip(np.einsum("ij,ij->i", x - a, ab) / np.einsum("ij,ij->i", ab, ab), 0.0, 1.0)
    return float(np.min(np.linalg.norm(a + t[:, None] * ab - x, axis=1)))


def _ordered_faces(p: Polytope):
    out = []
    for j, f in enumerate(p.faces):
        pts = p.vertices[list(f)]
        c = pts.mean(axis=0)
        e1 = pts[0] - c
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(p.normals[j], e1)
        ang = np.arctan2((pts - c) @ e2, (pts - c) @ e1)
        out.append(pts[np.argsort(ang)])
    return out


def point_polytope_distance(x, p: Polytope, faces=None) -> float:
    """Euclidean distance from a point to a full-dimensional 3-polytope."""
    viol = p.normals @ x - p.offsets
    if np.max(viol) <= 0:
        return 0.0
    faces = _ordered_faces(p) if faces is None else faces
    return min(_point_face_distance(x, p, j, faces) for j in np.flatnonzero(viol > 0))


def _exact_hausdorff(k: Polytope, l: Polytope) -> float:
    fk, fl = _ordered_faces(k), _ordered_faces(l)
    a = max(point_polytope_distance(v, l, fl) for v in k.vertices)
    b = max(point_polytope_distance(v, k, fk) for v in l.vertices)
    return max(a, b)


def hausdorff_distance(k, l, resolution: int = 6):
    """Hausdorff distance as ``(value, error_bound)``.

    Two full-dimensional 3-polytopes are compared exactly through the maximal
    vertex-to-body distance (the bound is then rounding-level).  Otherwise the
    support difference is sampled on a sphere mesh and the bound is
    ``(R_K + R_L) * rho`` with rho the covering chord of the sample and R the
    circumradii about the origin.
    """
    if k.dim != l.dim:
        raise ValueError("dimension mismatch")
    if (isinstance(k, Polytope) and isinstance(l, Polytope) and k.dim == 3
            and k.is_full_dimensional and l.is_full_dimensional):
        value = _exact_hausdorff(k, l)
        scale = max(np.max(np.abs(k.vertices)), np.max(np.abs(l.vertices)), 1.0)
        return value, 64 * np.finfo(float).eps * scale
    return sampled_hausdorff(k, l, resolution)


def sampled_hausdorff(k, l, resolution: int = 6):
    u, rho = sample_directions(k.dim, resolution)
    hk, hl = _support_rows(k, u), _support_rows(l, u)
    value = float(np.max(np.abs(hk - hl)))
    rk = max(float(np.max(hk)), 0.0) / (1.0 - rho)
    rl = max(float(np.max(hl)), 0.0) / (1.0 - rho)
    return value, (rk + rl) * rho
