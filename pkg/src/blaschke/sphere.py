"""Direction sampling on the unit sphere and small geometric helpers."""
from __future__ import annotations

from functools import lru_cache
from math import gamma, pi

import numpy as np


def ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n."""
    return pi ** (n / 2) / gamma(n / 2 + 1)


def normalize(x, axis=-1):
    x = np.asarray(x, dtype=float)
    return x / np.linalg.norm(x, axis=axis, keepdims=True)


@lru_cache(maxsize=None)
def _icosphere(depth: int):
    t = (1.0 + 5.0 ** 0.5) / 2.0
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [np.array(v, dtype=float) / np.linalg.norm(v) for v in verts]
    for _ in range(depth):
        cache = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    v = np.array(verts)
    f = np.array(faces, dtype=int)
    v.setflags(write=False)
    f.setflags(write=False)
    return v, f


def icosphere(depth: int):
    """Vertices and triangles of the geodesic icosphere at a subdivision depth.

    Depth 0 is the icosahedron (12 vertices, 20 faces); each level splits every
    triangle into four.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    return _icosphere(depth)


def covering_chord(vertices, faces) -> float:
    """Upper bound on the chordal distance from any sphere point to the nearest sample.

    Every point of the sphere lies under some spherical triangle; within it the
    nearest vertex is no farther than the circumradius of the triangle's spherical
    cap, which is attained at the normalized circumcenter.
    """
    a, b, c = (vertices[faces[:, k]] for k in range(3))
    ab, ac = b - a, c - a
    n = np.cross(ab, ac)
    # circumcenter of the planar triangle
    num = (np.einsum("ij,ij->i", ac, ac)[:, None] * np.cross(n, ab)
           + np.einsum("ij,ij->i", ab, ab)[:, None] * np.cross(ac, n))
    cc = a + num / (2.0 * np.einsum("ij,ij->i", n, n))[:, None]
    cc = normalize(cc)
    return float(np.max(np.linalg.norm(cc - a, axis=1)))


def sample_directions(n: int, resolution: int, rng=None):
    """Directions covering S^{n-1} together with their covering chord.

    For n = 3 the icosphere at depth ``resolution`` is used.  For n = 2 the
    circle is split into ``12 * 4**resolution`` equal arcs.  Other dimensions
    get a normalized cubical grid on the boundary of [-1, 1]^n with
    ``resolution + 2`` points per edge, whose covering chord is bounded by the
    grid half-diagonal.
    """
    if n == 3:
        v, f = icosphere(resolution)
        return v, covering_chord(v, f)
    if n == 2:
        m = 12 * 4 ** resolution
        t = 2 * pi * np.arange(m) / m
        return np.column_stack([np.cos(t), np.sin(t)]), 2 * np.sin(pi / (2 * m))
    k = resolution + 2
    ticks = np.linspace(-1.0, 1.0, k)
    pts = []
    for axis in range(n):
        for sign in (-1.0, 1.0):
            grids = np.meshgrid(*([ticks] * (n - 1)), indexing="ij")
            face = np.column_stack([g.ravel() for g in grids])
            pts.append(np.insert(face, axis, sign, axis=1))
    pts = np.unique(np.vstack(pts), axis=0)
    # half-diagonal of a grid cell on a cube face; the radial projection onto the
    # sphere does not expand distances because every face point has norm >= 1
    step = 2.0 / (k - 1)
    return normalize(pts), step * (n - 1) ** 0.5 / 2.0


def random_directions(rng, count: int, n: int):
    return normalize(rng.standard_normal((count, n)))


def rotation_matrix(n: int, angle: float, i: int = 0, j: int = 1):
    """Rotation by ``angle`` in the {x_i, x_j}-plane, fixing the other coordinates."""
    r = np.eye(n)
    c, s = np.cos(angle), np.sin(angle)
    r[i, i], r[i, j], r[j, i], r[j, j] = c, -s, s, c
    return r
