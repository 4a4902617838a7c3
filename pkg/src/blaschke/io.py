"""JSON body and measure files, and OFF mesh export.

Body files::

    {"type": "polytope", "dim": n, "vertices": [[...], ...]}
    {"type": "zonotope", "dim": n, "generators": [[...], ...]}
    {"type": "box", "halfwidths": [...]}

A polytope file may also carry ``"facets": [{"normal": [...], "offset": h}, ...]``;
the facets are then used as given instead of being recomputed from the hull.
Measure files are ``{"dim": n, "atoms": [{"u": [...], "w": w}, ...]}``.

Floats are written with ``repr``, the shortest string that reads back to the
same double, so export followed by import is bit-identical.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bodies import DiscreteSphericalMeasure, Polytope, _faces
from .projection import Zonotope

__all__ = [
    "body_to_dict",
    "body_from_dict",
    "measure_to_dict",
    "measure_from_dict",
    "load",
    "dumps",
    "to_off",
]


def _rows(a):
    return [[float(x) for x in row] for row in np.asarray(a)]


def body_to_dict(body, facets: bool = False) -> dict:
    if isinstance(body, Zonotope):
        return {"type": "zonotope", "dim": body.dim, "generators": _rows(body.generators)}
    if isinstance(body, Polytope):
        d = {"type": "polytope", "dim": body.dim, "vertices": _rows(body.vertices)}
        if facets and body.is_full_dimensional:
            d["facets"] = [{"normal": [float(x) for x in u], "offset": float(h)}
                           for u, h in zip(body.normals, body.offsets)]
        return d
    raise TypeError(f"cannot serialize {type(body).__name__}")


def _matrix(value, name, dim=None):
    try:
        a = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be a list of numeric rows") from exc
    if a.ndim != 2 or a.shape[0] == 0:
        raise ValueError(f"{name} must be a nonempty list of rows")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} must be finite")
    if dim is not None and a.shape[1] != dim:
        raise ValueError(f"{name} rows must have length dim={dim}")
    return a


def body_from_dict(d: dict):
    if not isinstance(d, dict):
        raise ValueError("body file must hold a JSON object")
    kind = d.get("type")
    dim = d.get("dim")
    if dim is not None and (not isinstance(dim, int) or dim < 1):
        raise ValueError("dim must be a positive integer")
    if kind == "polytope":
        v = _matrix(d.get("vertices"), "vertices", dim)
        if "facets" in d:
            f = d["facets"]
            u = _matrix([x["normal"] for x in f], "facet normals", v.shape[1])
            h = np.array([float(x["offset"]) for x in f])
            radius = np.max(np.linalg.norm(v - v.mean(axis=0), axis=1))
            p = Polytope(v, u, h, _faces(v, u, h, 1e-9 * radius))
            p.validate()
            return p
        return Polytope.from_vertices(v)
    if kind == "zonotope":
        return Zonotope(_matrix(d.get("generators"), "generators", dim))
    if kind == "box":
        hw = np.array(d.get("halfwidths"), dtype=float)
        if hw.ndim != 1 or len(hw) == 0 or np.any(hw <= 0):
            raise ValueError("halfwidths must be a nonempty list of positive numbers")
        if dim is not None and len(hw) != dim:
            raise ValueError("halfwidths must have length dim")
        return Polytope.box(hw)
    raise ValueError(f"unknown body type {kind!r}")


def measure_to_dict(mu: DiscreteSphericalMeasure) -> dict:
    return {"dim": mu.dim,
            "atoms": [{"u": [float(x) for x in u], "w": float(w)}
                      for u, w in zip(mu.directions, mu.weights)]}


def measure_from_dict(d: dict) -> DiscreteSphericalMeasure:
    if not isinstance(d, dict) or "atoms" not in d:
        raise ValueError("measure file must hold an object with 'atoms'")
    dim = d.get("dim")
    atoms = d["atoms"]
    if not atoms:
        if not isinstance(dim, int):
            raise ValueError("empty measure needs dim")
        return DiscreteSphericalMeasure.empty(dim)
    u = _matrix([a["u"] for a in atoms], "atom directions", dim)
    w = np.array([float(a["w"]) for a in atoms])
    return DiscreteSphericalMeasure(u, w)


def load(path):
    """Read a body or measure file; measures are recognized by their 'atoms' key."""
    text = Path(path).read_text()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON ({exc.msg})") from exc
    if isinstance(d, dict) and "atoms" in d:
        return measure_from_dict(d)
    return body_from_dict(d)


def dumps(obj) -> str:
    if isinstance(obj, DiscreteSphericalMeasure):
        obj = measure_to_dict(obj)
    elif isinstance(obj, (Polytope, Zonotope)):
        obj = body_to_dict(obj)
    return json.dumps(obj, indent=2)


def to_off(p: Polytope) -> str:
    """ASCII OFF mesh of a full-dimensional 3-polytope, faces counter-clockwise from outside."""
    if p.dim != 3 or not p.is_full_dimensional:
        raise ValueError("OFF export needs a full-dimensional 3-polytope")
    lines = ["OFF", f"{len(p.vertices)} {len(p.faces)} 0"]
    lines += [" ".join(repr(float(x)) for x in v) for v in p.vertices]
    for u, f in zip(p.normals, p.faces):
        idx = np.array(f)
        pts = p.vertices[idx]
        c = pts.mean(axis=0)
        e1 = pts[0] - c
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(u, e1)
        order = idx[np.argsort(np.arctan2((pts - c) @ e2, (pts - c) @ e1))]
        lines.append(" ".join([str(len(order))] + [str(int(i)) for i in order]))
    return "\n".join(lines) + "\n"
