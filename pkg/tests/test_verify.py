import json

import numpy as np
import pytest

from blaschke import (
    LinearMap,
    Polytope,
    UnconditionalBody2D,
    Zonotope,
    generating_measure,
    projection_body,
    scale_body,
    surface_area_measure,
)
from blaschke.report import CheckReport
from blaschke.sphere import rotation_matrix
from blaschke.verify import (
    check_blaschke_lipschitz,
    check_gl_covariance_blaschke,
    check_hlawka,
    check_isometry,
    check_limit_identity,
    check_not_monotone,
    check_pik,
    check_rotation_counterexample_blaschke,
    check_rotation_counterexample_minkowski,
    check_scaled_blaschke_family,
    check_theoremB_constraints,
    measure_discrepancy,
    perturbed,
    proof_hlawka_slacks,
    random_linear_map,
    random_polytope,
    run_suite,
    suite_json,
    theorem_b_residuals,
)
from blaschke import blaschke_sum


def test_report_semantics():
    ok = CheckReport.agreement("a", 1e-9, 1e-8)
    assert ok.passed and ok.line().startswith("PASS a")
    bad = CheckReport.agreement("b", 1e-7, 1e-8, witness={"x": 1})
    assert not bad.passed and bad.line().startswith("FAIL b")
    assert bad.to_dict()["witness"] == {"x": 1}
    assert "witness" not in ok.to_dict() or ok.to_dict()["witness"] is None
    assert CheckReport.violation("c", 0.2, 0.05).passed
    assert not CheckReport.violation("c", 0.01, 0.05).passed
    json.dumps(CheckReport.agreement("d", float("inf"), 1.0).to_dict(), allow_nan=False)


def test_pik_examples(cube):
    rep = check_pik(cube, cube)
    assert rep.passed
    mu = generating_measure(projection_body(blaschke_sum(cube, cube)))
    assert len(mu) == 6 and np.allclose(mu.weights, 2.0, rtol=1e-9)
    p = random_polytope(np.random.default_rng(0))
    two = generating_measure(projection_body(blaschke_sum(p, p)))
    assert measure_discrepancy(two, generating_measure(projection_body(p).scaled(2.0))) < 1e-7
    assert check_pik(p, random_polytope(np.random.default_rng(1))).passed


def test_isometry_examples(cube):
    rep = check_isometry(cube, cube)
    assert rep.passed and rep.details["bodies"] == 0.0
    rep = check_isometry(cube, Polytope.cube(1.05))
    assert rep.passed and rep.details["bodies"] > 0
    with pytest.raises(ValueError, match="symmetric"):
        check_isometry(cube, Polytope.from_vertices(np.vstack([np.zeros(3), np.eye(3)])))


def test_lipschitz_examples(cube, octahedron):
    rep = check_blaschke_lipschitz(cube, octahedron, cube, octahedron)
    assert rep.passed and rep.details["lhs"] == pytest.approx(0.0, abs=1e-9)
    c = 0.04
    k2 = Polytope.box([0.5, 0.5, 0.5 * (1 + c)])
    rep = check_blaschke_lipschitz(cube, octahedron, k2, octahedron)
    assert rep.passed and rep.details["lhs"] <= rep.details["bound"] + 3e-9


def test_gl_covariance_examples(cube, octahedron):
    assert check_gl_covariance_blaschke(cube, octahedron, LinearMap.identity(3)).measured < 1e-9
    rot = LinearMap(rotation_matrix(3, 0.4, 0, 2))
    assert check_gl_covariance_blaschke(cube, octahedron, rot).passed
    assert check_gl_covariance_blaschke(cube, cube, LinearMap(np.diag([2.0, 1, 1]))).passed


def test_not_monotone():
    rep = check_not_monotone()
    assert rep.passed
    assert rep.details["height_KL"] == pytest.approx(np.sqrt(1 + np.sqrt(2)), abs=1e-6)
    assert rep.details["height_MM"] == pytest.approx(np.sqrt(2), abs=1e-6)
    assert rep.details["gap"] > 0.1


def test_hlawka_examples():
    z = Zonotope(np.eye(3))
    e = np.eye(3)
    h = z.support
    slack = h(e[0]) + h(e[1]) + h(e[2]) + h(e.sum(0)) - h(e[0] + e[1]) - h(e[0] + e[2]) - h(e[1] + e[2])
    assert slack == 0.0
    x = np.array([0.3, -1.2, 0.7])
    assert h(3 * x) + 3 * h(x) - 3 * h(2 * x) == pytest.approx(0.0, abs=1e-14)
    rep = check_hlawka(Zonotope(np.random.default_rng(0).standard_normal((8, 3))), 10_000)
    assert rep.passed and rep.details["min_slack"] >= -1e-9


def test_hlawka_detects_non_zonoid():
    # the l-infinity norm is the support function of the octahedron, not a zonoid
    class Linf:
        dim = 3

        def support(self, x):
            return np.max(np.abs(np.atleast_2d(x)), axis=-1)

    rep = check_hlawka(Linf(), 5000)
    assert not rep.passed and rep.witness is not None


def test_theorem_b_examples():
    box = check_theoremB_constraints(UnconditionalBody2D.box(1.0, 1.0))
    assert box.passed
    assert all(v == 0.0 for v in theorem_b_residuals(UnconditionalBody2D.box(1.0, 2.0)).values())
    disc = check_theoremB_constraints(UnconditionalBody2D.lp_ball(2))
    assert not disc.passed
    assert disc.details["goal"] == pytest.approx(np.sqrt(2) - 2, abs=1e-12)
    # the l-infinity ball has support |s| + |t|: it is the box [-1, 1]^2
    sq = theorem_b_residuals(UnconditionalBody2D.lp_ball(np.inf))
    assert all(abs(v) < 1e-15 for v in sq.values())


def test_proof_slacks_match_constraint_residuals():
    for m in (UnconditionalBody2D.box(1.0, 2.0), UnconditionalBody2D.lp_ball(2),
              UnconditionalBody2D.lp_ball(3)):
        res = theorem_b_residuals(m)
        slack = proof_hlawka_slacks(m)
        # at the proof's vectors the Hlawka slack is exactly the constraint residual
        assert slack["hlawka_f1"] == pytest.approx(res["f1"], abs=1e-12)
        assert slack["hlawka_f2"] == pytest.approx(res["f2"], abs=1e-12)
    # so a round M breaks Hlawka there, and a box meets it with equality
    assert proof_hlawka_slacks(UnconditionalBody2D.lp_ball(2))["hlawka_f1"] < -0.4


def test_rotation_counterexample_minkowski():
    rep = check_rotation_counterexample_minkowski()
    assert rep.passed
    assert rep.details["net_angle"] == pytest.approx(-7.0)
    assert rep.details["gap_to_boxes"] > 0.05


def test_rotation_counterexample_blaschke(cube):
    assert cube.surface_area() == pytest.approx(6.0)
    rep = check_rotation_counterexample_blaschke(pairs=4, rng=np.random.default_rng(3))
    assert rep.passed
    assert rep.details["gap_to_boxes"] > 0.05
    assert rep.details["bound_excess"] <= 3e-9


def test_limit_identity(cube):
    rep = check_limit_identity(cube)
    assert rep.passed
    lp, hd = rep.details["lp"], rep.details["hausdorff"]
    assert lp[0] > lp[1] > lp[2] and hd[0] > hd[1] > hd[2]


def test_scaled_family_examples(cube):
    assert check_scaled_blaschke_family(cube, cube, 1.0, 1.0).passed
    mu = generating_measure(projection_body(blaschke_sum(scale_body(2.0, cube), cube)))
    assert len(mu) == 6 and np.allclose(mu.weights, 5.0, rtol=1e-9)
    rng = np.random.default_rng(4)
    k, l = random_polytope(rng, symmetric=True), random_polytope(rng, symmetric=True)
    assert check_scaled_blaschke_family(k, l, 0.6, 1.7).passed


def test_instance_generators():
    rng = np.random.default_rng(5)
    p = random_polytope(rng, facets=(8, 30))
    assert 8 <= len(p.normals) <= 30
    s = random_polytope(rng, symmetric=True)
    assert s.is_symmetric() and perturbed(rng, s, 0.05).is_symmetric()
    phi = random_linear_map(rng, 3, max_condition=10)
    assert np.linalg.cond(phi.matrix) <= 10 + 1e-9
    assert len(surface_area_measure(p)) == len(p.normals)


def test_suite_passes_and_is_reproducible():
    reports = run_suite(seed=0)
    assert len(reports) == 13
    assert all(r.passed for r in reports), [r.line() for r in reports if not r.passed]
    again = suite_json(run_suite(seed=0))
    assert suite_json(reports) == again


def test_filter_keeps_instances():
    full = {r.name: r for r in run_suite(seed=2, filter="iso")}
    assert list(full) == ["isometry"]
    alone = run_suite(seed=2, filter="isometry")[0]
    assert alone.to_dict() == full["isometry"].to_dict()


def test_crashing_check_is_a_failure(monkeypatch):
    import blaschke.verify as v

    def boom(cfg):
        return [("boom", lambda r: 1 / 0)]

    monkeypatch.setattr(v, "_suite", boom)
    (rep,) = v.run_suite()
    assert not rep.passed and "division" in rep.details["error"]
