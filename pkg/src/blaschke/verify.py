"""Executable checks of the identities, bounds and counterexamples of the theory.

Every check returns a :class:`CheckReport`.  Random instances are drawn from a
``numpy.random.Generator`` so a suite run is reproducible from its seed.
"""
from __future__ import annotations

import json
import logging
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .bodies import (
    DiscreteSphericalMeasure,
    LinearMap,
    Polytope,
    UnconditionalBody2D,
    apply_linear,
    hausdorff_distance,
    minkowski_sum,
    scale_body,
)
from .levy_prokhorov import delta_bar_lp, delta_lp
from .minkowski import SolverConfig, blaschke_sum
from .projection import (
    Zonotope,
    check_transform_law,
    generating_measure,
    projection_body,
)
from .report import CheckReport
from .sphere import random_directions, rotation_matrix

log = logging.getLogger(__name__)

LP_TOL = 1e-9
PAPER_TOL = 1e-6

__all__ = [
    "CheckReport",
    "measure_discrepancy",
    "random_polytope",
    "random_zonotope",
    "random_linear_map",
    "perturbed",
    "check_pik",
    "check_isometry",
    "check_blaschke_lipschitz",
    "check_gl_covariance_blaschke",
    "check_not_monotone",
    "check_hlawka",
    "check_theoremB_constraints",
    "check_rotation_counterexample_minkowski",
    "check_rotation_counterexample_blaschke",
    "check_limit_identity",
    "check_scaled_blaschke_family",
    "run_suite",
    "suite_json",
]


# ---------------------------------------------------------------------------
# instances


def random_polytope(rng, n=3, facets=(8, 30), symmetric=False) -> Polytope:
    """Hull of Gaussian points (closed under negation if ``symmetric``), redrawn
    until the facet count lies in the inclusive range ``facets``."""
    lo, hi = facets
    while True:
        k = int(rng.integers(max(n + 1, lo // 2), max(n + 2, hi // 2 + 2)))
        x = rng.standard_normal((k, n))
        if symmetric:
            x = np.vstack([x, -x])
        p = Polytope.from_vertices(x)
        if p.is_full_dimensional and lo <= len(p.normals) <= hi:
            return p


def random_zonotope(rng, n=3, generators=(3, 15)) -> Zonotope:
    g = int(rng.integers(generators[0], generators[1] + 1))
    return Zonotope(rng.standard_normal((g, n)))


def random_linear_map(rng, n=3, max_condition=10.0) -> LinearMap:
    """Random orthogonal factors around singular values spread within ``max_condition``."""
    q1, _ = np.linalg.qr(rng.standard_normal((n, n)))
    q2, _ = np.linalg.qr(rng.standard_normal((n, n)))
    s = np.exp(rng.uniform(0.0, np.log(max_condition), n))
    return LinearMap(q1 @ np.diag(s) @ q2)


def perturbed(rng, p: Polytope, size=0.05) -> Polytope:
    """Hull of slightly moved vertices; o-symmetry of ``p`` is preserved."""
    v = p.vertices
    if p.is_symmetric():
        pair = np.argmin(np.linalg.norm(v[:, None, :] + v[None, :, :], axis=2), axis=1)
        noise = rng.standard_normal(v.shape) * size
        noise = 0.5 * (noise - noise[pair])
        return Polytope.from_vertices(v + noise)
    return Polytope.from_vertices(v + rng.standard_normal(v.shape) * size)


def _witness(*bodies):
    out = []
    for b in bodies:
        if isinstance(b, Polytope):
            out.append({"type": "polytope", "vertices": b.vertices.tolist()})
        elif isinstance(b, Zonotope):
            out.append({"type": "zonotope", "generators": b.generators.tolist()})
        elif isinstance(b, LinearMap):
            out.append({"type": "linear_map", "matrix": b.matrix.tolist()})
    return out


def measure_discrepancy(mu: DiscreteSphericalMeasure, nu: DiscreteSphericalMeasure) -> float:
    """Largest atomwise weight difference (relative to max(1, weight)).

    Atoms are paired by direction; an unpaired atom makes the discrepancy infinite.
    """
    if len(mu) != len(nu):
        return float("inf")
    worst = 0.0
    for u, w in zip(mu.directions, mu.weights):
        k = np.argmin(np.linalg.norm(nu.directions - u, axis=1))
        if np.linalg.norm(nu.directions[k] - u) > 1e-8:
            return float("inf")
        worst = max(worst, abs(nu.weights[k] - w) / max(1.0, w))
    return worst


def _rotate(p: Polytope, angle: float) -> Polytope:
    return apply_linear(LinearMap(rotation_matrix(p.dim, angle)), p)


# ---------------------------------------------------------------------------
# checks


def check_pik(p: Polytope, q: Polytope, tol=1e-7, cfg=None, rng=None) -> CheckReport:
    """Pi(P # Q) = Pi P + Pi Q through generating measures and sampled supports."""
    lhs = projection_body(blaschke_sum(p, q, cfg))
    rhs = projection_body(p) + projection_body(q)
    atoms = measure_discrepancy(generating_measure(lhs), generating_measure(rhs))
    rng = rng or np.random.default_rng(0)
    x = random_directions(rng, 200, p.dim)
    sup = float(np.max(np.abs(lhs.support(x) - rhs.support(x))))
    return CheckReport.agreement("pik", max(atoms, sup), tol,
                                 details={"atoms": atoms, "support": sup},
                                 witness=_witness(p, q))


def check_isometry(k: Polytope, l: Polytope, tol=LP_TOL) -> CheckReport:
    """delta_bar_LP(Pi K, Pi L) = delta_LP(K, L) for o-symmetric K, L."""
    if not (k.is_symmetric() and l.is_symmetric()):
        raise ValueError("o-symmetric bodies required")
    a = delta_bar_lp(projection_body(k), projection_body(l), tol)
    b = delta_lp(k, l, tol)
    return CheckReport.agreement("isometry", abs(a - b), 2 * tol,
                                 details={"zonotopes": a, "bodies": b},
                                 witness=_witness(k, l))


def check_blaschke_lipschitz(k1, l1, k2, l2, tol=LP_TOL, cfg=None) -> CheckReport:
    """delta_LP(K1 # L1, K2 # L2) <= 2 max(delta_LP(K1, K2), delta_LP(L1, L2)).

    ``measured`` is the excess of the left side over the bound (so <= 3 tol passes).
    """
    lhs = delta_lp(blaschke_sum(k1, l1, cfg), blaschke_sum(k2, l2, cfg), tol)
    bound = 2 * max(delta_lp(k1, k2, tol), delta_lp(l1, l2, tol))
    return CheckReport.agreement("blaschke_lipschitz", lhs - bound, 3 * tol,
                                 details={"lhs": lhs, "bound": bound},
                                 witness=_witness(k1, l1, k2, l2))


def check_gl_covariance_blaschke(k, l, phi: LinearMap, tol=PAPER_TOL, cfg=None) -> CheckReport:
    """phi(K # L) = phi K # phi L in the Hausdorff metric."""
    a = apply_linear(phi, blaschke_sum(k, l, cfg))
    b = blaschke_sum(apply_linear(phi, k), apply_linear(phi, l), cfg)
    value, bound = hausdorff_distance(a, b)
    return CheckReport.agreement("gl_covariance_blaschke", value + bound, tol,
                                 details={"hausdorff": value, "error_bound": bound},
                                 witness=_witness(k, l, phi))


def check_not_monotone(tol=PAPER_TOL, cfg=None) -> CheckReport:
    """K, L inside M = conv(K, L), yet K # L is taller than M # M.

    K is the unit cube about o, L its rotation by pi/4 about the x3-axis.  The
    expected heights are sqrt(1 + sqrt 2) and sqrt 2.
    """
    k = Polytope.cube()
    l = _rotate(k, np.pi / 4)
    m = Polytope.from_vertices(np.vstack([k.vertices, l.vertices]))
    kl = blaschke_sum(k, l, cfg)
    mm = blaschke_sum(m, m, cfg)
    h_kl, h_mm = kl.extent(2), mm.extent(2)
    areas = kl.facet_areas()
    vertical = np.abs(kl.normals[:, 2]) < 1e-9
    err = max(abs(h_kl - np.sqrt(1 + np.sqrt(2))), abs(h_mm - np.sqrt(2)),
              float(np.max(np.abs(areas[vertical] - 1.0))),
              float(np.max(np.abs(areas[~vertical] - 2.0))))
    if not (h_kl > h_mm and vertical.sum() == 8 and (~vertical).sum() == 2):
        err = float("inf")
    return CheckReport.agreement("not_monotone", err, tol,
                                 details={"height_KL": h_kl, "height_MM": h_mm,
                                          "gap": h_kl - h_mm})


def _hlawka_slack(h: Callable, x, y, z):
    return h(x) + h(y) + h(z) + h(x + y + z) - h(x + y) - h(x + z) - h(y + z)


def check_hlawka(z: Zonotope, trials: int = 10_000, rng=None, tol=1e-9) -> CheckReport:
    """Hlawka's inequality for h_Z on random triples; ``measured`` is minus the least slack."""
    rng = rng or np.random.default_rng(0)
    x, y, w = (rng.standard_normal((trials, z.dim)) for _ in range(3))
    slack = _hlawka_slack(z.support, x, y, w)
    worst = float(np.min(slack))
    return CheckReport.agreement("hlawka", -worst, tol, details={"min_slack": worst},
                                 witness=None if worst >= -tol else _witness(z))


def theorem_b_residuals(m: UnconditionalBody2D) -> dict:
    """Residuals of (f1) at s = 1, (f2) at t = 2, and (goal)."""
    h = m.support
    return {
        "f1": h(2, 2) - h(0, 1) - h(2, 1),
        "f2": h(4, 2) - h(2, 0) - h(2, 2),
        "goal": h(1, 1) - h(1, 0) - h(0, 1),
    }


def proof_hlawka_slacks(m: UnconditionalBody2D, s=1.0, t=2.0) -> dict:
    """Hlawka slack of h_M(h_K, h_L) at the vectors used to derive (f1) and (f2).

    (f1): K = conv{+-e1, +-e2}, L = [-e3, e3], x = (-1, 1, s), y = (1, -1, 0), z = (1, 1, 0).
    (f2): K = [-e1, e1], L = conv{+-e2, +-e3}, x = (t, -1, 1), y = (0, 1, -1), z = (0, 1, 1).
    """
    def op1(w):
        return m.support(max(abs(w[0]), abs(w[1])), abs(w[2]))

    def op2(w):
        return m.support(abs(w[0]), max(abs(w[1]), abs(w[2])))

    a = _hlawka_slack(op1, np.array([-1.0, 1.0, s]), np.array([1.0, -1.0, 0.0]),
                      np.array([1.0, 1.0, 0.0]))
    b = _hlawka_slack(op2, np.array([t, -1.0, 1.0]), np.array([0.0, 1.0, -1.0]),
                      np.array([0.0, 1.0, 1.0]))
    return {"hlawka_f1": float(a), "hlawka_f2": float(b)}


def check_theoremB_constraints(m: UnconditionalBody2D, tol=1e-12) -> CheckReport:
    """Whether M passes the three constraint equations (box type).

    ``passed`` means all residuals are below ``tol``.  The details carry the
    residuals and the Hlawka slacks at the proof's vectors, which are zero for
    box M (and reduce to the (f1), (f2) residuals in general).
    """
    res = theorem_b_residuals(m)
    details = {k: float(v) for k, v in res.items()}
    details.update(proof_hlawka_slacks(m))
    worst = max(abs(v) for v in res.values())
    return CheckReport.agreement("theoremB_constraints", worst, tol, details=details)


def _best_cube_gap(body: Polytope, side_guess: float) -> float:
    # Hausdorff distance to the nearest axis-aligned cube about o
    f = lambda c: hausdorff_distance(body, Polytope.cube(c))[0]  # noqa: E731
    res = minimize_scalar(f, bounds=(0.5 * side_guess, 2.0 * side_guess), method="bounded",
                          options={"xatol": 1e-10})
    return float(res.fun)


def check_rotation_counterexample_minkowski(tol=PAPER_TOL, margin=0.05) -> CheckReport:
    """K * L = F^{-1}(F K + F L), F rotating by the volume, on two unit cubes.

    The result must be [-1, 1]^3 rotated by 1 - 2^3 = -7 in the {x1, x2}-plane
    and stay more than ``margin`` away from every cube aK + bL.
    """
    k = Polytope.cube()
    fk = _rotate(k, k.volume())
    s = minkowski_sum(fk, fk)
    kl = _rotate(s, -s.volume())
    target = _rotate(Polytope.cube(2.0), 1.0 - 2 ** 3)
    value, bound = hausdorff_distance(kl, target)
    gap = _best_cube_gap(kl, 2.0)
    err = value + bound
    return CheckReport.agreement(
        "rotation_counterexample_minkowski", err if gap > margin else float("inf"), tol,
        details={"hausdorff_to_rotated_cube": value, "gap_to_boxes": gap,
                 "net_angle": 1.0 - s.volume()})


def check_rotation_counterexample_blaschke(tol=PAPER_TOL, margin=0.05, pairs=0, rng=None,
                                           lp_tol=LP_TOL, cfg=None) -> CheckReport:
    """K * L = F^{-1}(F K # F L), F rotating by the surface area.

    Fixed part: two unit cubes give the sqrt(2)-cube rotated by -2n = -6, more than
    ``margin`` from every cube aK # bL.  Random part: on ``pairs`` o-symmetric
    pairs, delta_LP(F K, F L) <= 4 delta_LP(K, L).
    """
    def f(p, sign=1.0):
        return _rotate(p, sign * p.surface_area())

    k = Polytope.cube()
    s = blaschke_sum(f(k), f(k), cfg)
    kl = f(s, -1.0)
    target = _rotate(Polytope.cube(np.sqrt(2.0)), -6.0)
    value, bound = hausdorff_distance(kl, target)
    gap = _best_cube_gap(kl, np.sqrt(2.0))
    err = value + bound
    details = {"hausdorff_to_rotated_cube": value, "gap_to_boxes": gap,
               "surface_area_sum": s.surface_area()}
    rng = rng or np.random.default_rng(0)
    worst_excess = -np.inf
    witness = None
    for _ in range(pairs):
        a = random_polytope(rng, symmetric=True)
        b = perturbed(rng, a, float(rng.uniform(0.005, 0.1)))
        excess = delta_lp(f(a), f(b), lp_tol) - 4 * delta_lp(a, b, lp_tol)
        if excess > worst_excess:
            worst_excess, witness = excess, _witness(a, b)
    if pairs:
        details["bound_excess"] = float(worst_excess)
    ok = gap > margin and (not pairs or worst_excess <= 3 * lp_tol)
    return CheckReport.agreement("rotation_counterexample_blaschke",
                                 err if ok else float("inf"), tol, details=details,
                                 witness=witness if pairs and worst_excess > 3 * lp_tol else None)


def check_limit_identity(k: Polytope, s_values=(0.5, 0.25, 0.1), depth=1,
                         lp_tol=LP_TOL, cfg=None) -> CheckReport:
    """delta_LP(K # sB, K) and delta(K # sB, K) fall toward 0 as s decreases.

    sB is the icosphere polytope inscribed in sB^3 (80 facets at depth 1).  Passing
    needs both sequences strictly decreasing and the last LP value below
    10 s^{n-1} S(B).  ``measured`` is the last LP value.
    """
    n = k.dim
    lps, hds = [], []
    for s in sorted(s_values, reverse=True):
        ball = Polytope.ball_approximation(s, depth)
        ks = blaschke_sum(k, ball, cfg)
        lps.append(delta_lp(ks, k, lp_tol))
        hds.append(hausdorff_distance(ks, k.recentered())[0])
    s_min = min(s_values)
    limit = 10 * s_min ** (n - 1) * Polytope.ball_approximation(1.0, depth).surface_area()
    decreasing = all(np.diff(lps) < 0) and all(np.diff(hds) < 0)
    measured = lps[-1] if decreasing else float("inf")
    return CheckReport.agreement("limit_identity", measured, limit,
                                 details={"lp": lps, "hausdorff": hds})


def check_scaled_blaschke_family(k, l, a, b, tol=1e-7, cfg=None) -> CheckReport:
    """Pi(aK # bL) = a^{n-1} Pi K + b^{n-1} Pi L at generating-measure level."""
    n = k.dim
    lhs = projection_body(blaschke_sum(scale_body(a, k), scale_body(b, l), cfg))
    rhs = projection_body(k).scaled(a ** (n - 1)) + projection_body(l).scaled(b ** (n - 1))
    err = measure_discrepancy(generating_measure(lhs), generating_measure(rhs))
    return CheckReport.agreement("scaled_blaschke_family", err, tol,
                                 details={"a": a, "b": b}, witness=_witness(k, l))


# ---------------------------------------------------------------------------
# suite


def _suite(cfg):
    # (name, check) pairs; each check draws from its own generator
    def pik(r):
        return check_pik(random_polytope(r), random_polytope(r), cfg=cfg, rng=r)

    def isometry(r):
        a = random_polytope(r, symmetric=True)
        return check_isometry(a, perturbed(r, a, 0.05))

    def lipschitz(r):
        k1, l1 = random_polytope(r, symmetric=True), random_polytope(r, symmetric=True)
        return check_blaschke_lipschitz(k1, l1, perturbed(r, k1, 0.05), perturbed(r, l1, 0.05),
                                        cfg=cfg)

    def covariance(r):
        return check_gl_covariance_blaschke(random_polytope(r), random_polytope(r),
                                            random_linear_map(r), cfg=cfg)

    def scaled(r):
        return check_scaled_blaschke_family(random_polytope(r, symmetric=True),
                                            random_polytope(r, symmetric=True),
                                            float(r.uniform(0.5, 2)), float(r.uniform(0.5, 2)),
                                            cfg=cfg)

    def transform(r):
        return check_transform_law(random_linear_map(r), random_polytope(r, symmetric=True),
                                   cfg=cfg, seed=int(r.integers(2 ** 31)))

    def disc_goal(r):
        rep = check_theoremB_constraints(UnconditionalBody2D.lp_ball(2))
        err = abs(abs(rep.details["goal"]) - (2 - np.sqrt(2)))
        return CheckReport.agreement("theoremB_disc_goal", err, 1e-12, details=rep.details)

    return [
        ("not_monotone", lambda r: check_not_monotone(cfg=cfg)),
        ("pik", pik),
        ("isometry", isometry),
        ("blaschke_lipschitz", lipschitz),
        ("gl_covariance_blaschke", covariance),
        ("hlawka", lambda r: check_hlawka(random_zonotope(r), 10_000, rng=r)),
        ("theoremB_constraints",
         lambda r: check_theoremB_constraints(UnconditionalBody2D.box(1.0, 2.0))),
        ("theoremB_disc_goal", disc_goal),
        ("rotation_counterexample_minkowski", lambda r: check_rotation_counterexample_minkowski()),
        ("rotation_counterexample_blaschke",
         lambda r: check_rotation_counterexample_blaschke(pairs=5, rng=r, cfg=cfg)),
        ("limit_identity", lambda r: check_limit_identity(Polytope.cube(), cfg=cfg)),
        ("scaled_blaschke_family", scaled),
        ("transform_law", transform),
    ]


def run_suite(seed: int = 0, filter: str | None = None,
              cfg: SolverConfig | None = None) -> list[CheckReport]:
    """Run every check (or those whose name contains ``filter``) from one seed.

    Check number i draws from ``default_rng([seed, i])``, so filtering does not
    change the instances a check sees.
    """
    reports = []
    for i, (name, check) in enumerate(_suite(cfg)):
        if filter and filter not in name:
            continue
        try:
            rep = check(np.random.default_rng([seed, i]))
        except Exception as exc:  # a crashing check is a failed check
            log.exception("check %s raised", name)
            rep = CheckReport(name, False, float("inf"), 0.0, details={"error": str(exc)})
        reports.append(rep)
    return reports


def suite_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)
