import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.spatial import ConvexHull

from blaschke import (
    ConvexBodyOracle,
    DegenerateBodyError,
    DiscreteSphericalMeasure,
    InvalidMeasureError,
    LinearMap,
    Polytope,
    UnconditionalBody2D,
    apply_linear,
    hausdorff_distance,
    lp_sum_support,
    m_sum_support,
    minkowski_sum,
    mixed_volume_1,
    pushforward_measure,
    support,
    surface_area_measure,
)
from blaschke.bodies import outer_approximation, sampled_hausdorff
from blaschke.sphere import covering_chord, icosphere, random_directions, rotation_matrix

finite = st.floats(-10, 10, allow_nan=False)
points3 = arrays(np.float64, st.tuples(st.integers(5, 14), st.just(3)), elements=finite)


def random_body(seed, k=12, n=3):
    return Polytope.from_vertices(np.random.default_rng(seed).standard_normal((k, n)))


def atoms_equal(mu, nu, tol=1e-12):
    return (len(mu) == len(nu) and np.allclose(mu.directions, nu.directions, atol=tol)
            and np.allclose(mu.weights, nu.weights, atol=tol))


# -- support, volume, centroid ------------------------------------------------


def test_support_examples(cube, octahedron):
    assert support(cube, np.array([1.0, 1.0, 1.0])) == pytest.approx(1.5)
    assert support(cube, np.zeros(3)) == 0.0
    # brute force over the six octahedron vertices
    x = np.array([2.0, 1.0, 0.0])
    assert support(octahedron, x) == max(x @ v for v in np.vstack([np.eye(3), -np.eye(3)]))


def test_volume_examples(cube, octahedron):
    assert cube.volume() == pytest.approx(1.0, abs=1e-14)
    assert Polytope.cube(2.0).volume() == pytest.approx(8.0, abs=1e-13)
    assert octahedron.volume() == pytest.approx(4 / 3, abs=1e-14)


def test_octahedron_volume_monte_carlo(octahedron):
    x = np.random.default_rng(1).uniform(-1, 1, (400_000, 3))
    est = 8 * np.mean(np.abs(x).sum(axis=1) <= 1)
    assert octahedron.volume() == pytest.approx(est, abs=0.02)


def test_volume_matches_qhull():
    for seed in range(10):
        p = random_body(seed)
        assert p.volume() == pytest.approx(ConvexHull(p.vertices).volume, rel=1e-12)


def test_centroid_examples(cube, simplex):
    assert np.allclose(cube.centroid(), 0, atol=1e-15)
    assert np.allclose(Polytope.from_vertices(np.array(
        [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]],
        dtype=float)).centroid(), 0.5)
    assert np.allclose(simplex.centroid(), 0.25, atol=1e-15)


def test_simplex_centroid_monte_carlo(simplex):
    x = np.random.default_rng(2).uniform(0, 1, (300_000, 3))
    inside = x[x.sum(axis=1) <= 1]
    assert np.allclose(simplex.centroid(), inside.mean(axis=0), atol=5e-3)


def test_symmetric_centroid_is_origin():
    x = np.random.default_rng(3).standard_normal((9, 3))
    p = Polytope.from_vertices(np.vstack([x, -x]))
    assert np.allclose(p.centroid(), 0, atol=1e-10)


def test_flat_body_rejected():
    flat = Polytope.from_vertices(np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0.0]]))
    assert not flat.is_full_dimensional
    with pytest.raises(DegenerateBodyError, match="not full-dimensional"):
        flat.volume()
    with pytest.raises(DegenerateBodyError):
        surface_area_measure(flat)
    # support-function operations still accept it
    assert flat.support(np.array([1.0, 1.0, 0.0])) == 2.0


@given(points3)
def test_random_hulls_are_valid(pts):
    p = Polytope.from_vertices(pts)
    if p.is_full_dimensional:
        p.validate()
        assert np.linalg.norm(surface_area_measure(p).centroid()) < 1e-8 * max(1, p.surface_area())


# -- surface area measures ----------------------------------------------------


def test_surface_measure_examples(cube, octahedron):
    mu = surface_area_measure(cube)
    assert len(mu) == 6 and np.allclose(mu.weights, 1.0)
    assert np.allclose(np.sort(np.abs(mu.directions).sum(axis=1)), 1.0)
    assert np.allclose(surface_area_measure(Polytope.cube(2.0)).weights, 4.0)
    nu = surface_area_measure(octahedron)
    assert len(nu) == 8
    assert np.allclose(nu.weights, np.sqrt(3) / 2)
    assert np.allclose(np.abs(nu.directions), 1 / np.sqrt(3))


def test_measure_merges_and_sorts():
    e = np.eye(3)
    mu = DiscreteSphericalMeasure(np.vstack([e[0], e[1], e[0] + 1e-12]), [1.0, 2.0, 3.0])
    assert len(mu) == 2
    assert mu.weights.tolist() == [2.0, 4.0]  # lexicographic order: e2 before e1


def test_measure_validation():
    with pytest.raises(ValueError, match="positive"):
        DiscreteSphericalMeasure(np.eye(3), [1.0, 0.0, 1.0])
    with pytest.raises(ValueError, match="unit"):
        DiscreteSphericalMeasure(2 * np.eye(3), [1.0, 1.0, 1.0])
    with pytest.raises(InvalidMeasureError, match="centroid nonzero"):
        DiscreteSphericalMeasure(np.eye(3), [1.0, 1.0, 1.0]).check_admissible()
    planar = DiscreteSphericalMeasure(np.array([[1.0, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]]),
                                      np.ones(4))
    with pytest.raises(InvalidMeasureError, match="degenerate"):
        planar.check_admissible()


# -- sums -------------------------------------------------------------------


def test_minkowski_sum_examples(cube):
    point = Polytope.from_vertices(np.zeros((1, 3)))
    assert hausdorff_distance(minkowski_sum(cube, point), cube)[0] < 1e-15
    double = minkowski_sum(cube, cube)
    assert hausdorff_distance(double, Polytope.cube(2.0))[0] < 1e-15
    e = np.eye(3)
    square = minkowski_sum(Polytope.from_vertices(np.vstack([-e[0], e[0]])),
                           Polytope.from_vertices(np.vstack([-e[1], e[1]])))
    assert not square.is_full_dimensional
    assert sorted(map(tuple, square.vertices)) == [(-1, -1, 0), (-1, 1, 0), (1, -1, 0), (1, 1, 0)]


def test_minkowski_sum_support_is_additive(rng):
    p, q = random_body(4), random_body(5, 9)
    s = minkowski_sum(p, q)
    x = rng.standard_normal((1000, 3))
    assert np.max(np.abs(s.support(x) - p.support(x) - q.support(x))) < 1e-9


def test_minkowski_sum_dimension_mismatch(cube):
    with pytest.raises(ValueError, match="dimension"):
        minkowski_sum(cube, Polytope.cube(1.0, 2))


def test_lp_sum_support_examples(cube):
    k = ConvexBodyOracle(3, lambda x: np.full(len(x), 3.0))
    l = ConvexBodyOracle(3, lambda x: np.full(len(x), 4.0))
    x = np.array([1.0, 0, 0])
    assert lp_sum_support(k, l, 2, x) == pytest.approx(5.0)
    o = ConvexBodyOracle.point(3)
    assert lp_sum_support(cube, o, 3.5, x) == pytest.approx(cube.support(x))
    one = ConvexBodyOracle(3, lambda x: np.ones(len(x)))
    assert lp_sum_support(one, one, np.inf, x) == 1.0


def test_lp_sum_needs_origin(cube):
    shifted = cube.translate(np.array([2.0, 0, 0]))
    with pytest.raises(ValueError, match="does not contain origin"):
        lp_sum_support(shifted, cube, 2, np.array([-1.0, 0, 0]))


def test_m_sum_examples(cube, octahedron, rng):
    x = rng.standard_normal((50, 3))
    hk, hl = cube.support(x), octahedron.support(x)
    box = UnconditionalBody2D.box(1, 1)
    assert np.allclose(m_sum_support(cube, octahedron, box, x), hk + hl, atol=1e-12)
    disc = UnconditionalBody2D.lp_ball(2)
    assert np.allclose(m_sum_support(cube, octahedron, disc, x), np.hypot(hk, hl))
    assert np.all(m_sum_support(cube, octahedron, UnconditionalBody2D.point(), x) == 0)


@given(st.floats(0, 5), st.floats(0, 5), st.integers(0, 10_000))
def test_m_sum_box_is_weighted_minkowski(a, b, seed):
    p, q = random_body(seed % 7), random_body(seed % 5 + 7, 8)
    x = np.random.default_rng(seed).standard_normal((20, 3))
    m = UnconditionalBody2D.box(a, b)
    # M-sums are defined for o-symmetric bodies; the box identity holds for any support values
    got = m.support(np.column_stack([np.abs(p.support(x)), np.abs(q.support(x))]))
    want = a * np.abs(p.support(x)) + b * np.abs(q.support(x))
    assert np.max(np.abs(got - want)) <= 1e-12 * max(1.0, np.max(want))


def test_non_unconditional_m_rejected():
    with pytest.raises(ValueError, match="1-unconditional"):
        UnconditionalBody2D(lambda st: np.abs(st[:, 0] + 0.5 * st[:, 1]))


def test_lp_ball_support_is_dual_norm():
    square = UnconditionalBody2D.lp_ball(np.inf)
    assert square.support(1.0, 1.0) == 2.0
    diamond = UnconditionalBody2D.lp_ball(1)
    assert diamond.support(1.0, 3.0) == 3.0


@given(arrays(np.float64, (2, 3), elements=finite), st.floats(0, 100))
def test_support_homogeneous_subadditive(xy, r):
    p = random_body(11)
    x, y = xy
    assert p.support(r * x) == pytest.approx(r * p.support(x), abs=1e-10 * max(1, r * np.abs(x).sum()))
    assert p.support(x + y) <= p.support(x) + p.support(y) + 1e-10


# -- mixed volume, linear maps ----------------------------------------------------


def test_mixed_volume_examples(cube, octahedron):
    assert mixed_volume_1(cube, cube) == pytest.approx(3.0)
    assert mixed_volume_1(ConvexBodyOracle.point(3), cube) == 0.0
    assert mixed_volume_1(Polytope.cube(2.0), octahedron) == pytest.approx(12.0)


def test_mixed_volume_is_volume_derivative():
    # d/dt V(L + tK) at t = 0 is the integral of h_K against S(L, .)
    k, l = random_body(21, 8), random_body(22, 10)
    v0 = l.volume()

    def slope(t):
        return (minkowski_sum(l, Polytope(t * k.vertices)).volume() - v0) / t

    # one Richardson step cancels the O(t) term of the forward difference
    t = 1e-4
    assert 2 * slope(t) - slope(2 * t) == pytest.approx(mixed_volume_1(k, l), rel=1e-6)


def test_mixed_volume_self_is_n_volume():
    for seed in range(5):
        p = random_body(seed)
        assert mixed_volume_1(p, p) == pytest.approx(3 * p.volume(), rel=1e-9)


def test_apply_linear_examples(cube):
    assert hausdorff_distance(apply_linear(LinearMap.identity(3), cube), cube)[0] == 0
    assert hausdorff_distance(apply_linear(LinearMap(2 * np.eye(3)), cube),
                              Polytope.cube(2.0))[0] < 1e-15
    l = apply_linear(LinearMap(rotation_matrix(3, np.pi / 4)), cube)
    assert l.extent(0) == pytest.approx(np.sqrt(2))
    assert l.extent(2) == pytest.approx(1.0)


def test_apply_linear_scales_volume(rng):
    for seed in range(5):
        p = random_body(seed)
        phi = LinearMap(rng.standard_normal((3, 3)))
        q = apply_linear(phi, p)
        q.validate()
        assert q.volume() == pytest.approx(abs(phi.determinant) * p.volume(), rel=1e-9)


def test_singular_map_rejected():
    with pytest.raises(ValueError, match="singular"):
        LinearMap(np.diag([1.0, 1.0, 0.0]))


def test_pushforward_examples(cube):
    mu = surface_area_measure(cube)
    assert atoms_equal(pushforward_measure(LinearMap.identity(3), mu), mu)
    rot = LinearMap(rotation_matrix(3, 0.3, 0, 2))
    nu = pushforward_measure(rot, mu)
    assert np.allclose(nu.weights, 1.0)
    stretched = pushforward_measure(LinearMap(np.diag([2.0, 1, 1])), mu)
    got = {tuple(np.round(u, 12)): w for u, w in zip(stretched.directions, stretched.weights)}
    assert got[(1.0, 0.0, 0.0)] == pytest.approx(1.0)
    assert got[(0.0, 1.0, 0.0)] == pytest.approx(2.0)
    assert got[(0.0, 0.0, -1.0)] == pytest.approx(2.0)


def test_pushforward_matches_image_measure(rng):
    for seed in range(8):
        p = random_body(seed)
        phi = LinearMap(rng.standard_normal((3, 3)))
        a = pushforward_measure(phi, surface_area_measure(p))
        b = surface_area_measure(apply_linear(phi, p))
        assert len(a) == len(b)
        assert np.allclose(a.directions, b.directions, atol=1e-8)
        assert np.allclose(a.weights, b.weights, rtol=1e-8)


# -- Hausdorff distance ----------------------------------------------------


def test_hausdorff_examples(cube):
    assert hausdorff_distance(cube, cube)[0] == 0
    value, bound = hausdorff_distance(cube, Polytope.cube(2.0))
    assert value == pytest.approx(np.sqrt(3) / 2, abs=1e-14)
    sampled, sbound = sampled_hausdorff(cube, Polytope.cube(2.0), 6)
    assert sampled <= np.sqrt(3) / 2 + 1e-15
    assert np.sqrt(3) / 2 <= sampled + sbound
    eps = 0.125
    grown = ConvexBodyOracle(3, lambda x: cube.support(x) + eps * np.linalg.norm(x, axis=1))
    v, b = hausdorff_distance(cube, grown)
    assert v == pytest.approx(eps, abs=1e-15)


def test_exact_and_sampled_hausdorff_agree():
    for seed in range(6):
        p, q = random_body(seed), random_body(seed + 100)
        exact, _ = hausdorff_distance(p, q)
        sampled, bound = sampled_hausdorff(p, q, 5)
        assert sampled <= exact + 1e-12
        assert exact <= sampled + bound


def test_hausdorff_triangle_inequality():
    bodies = [random_body(s) for s in range(4)]
    for a in bodies:
        for b in bodies:
            for c in bodies:
                ab, eab = sampled_hausdorff(a, b, 4)
                bc, ebc = sampled_hausdorff(b, c, 4)
                ac, eac = sampled_hausdorff(a, c, 4)
                assert ac <= ab + bc + 2 * (eab + ebc + eac)


def test_covering_chord_bounds_random_points():
    v, f = icosphere(3)
    rho = covering_chord(v, f)
    x = random_directions(np.random.default_rng(0), 20_000, 3)
    nearest = np.min(np.linalg.norm(x[:, None, :] - v[None, :, :], axis=2), axis=1)
    assert nearest.max() <= rho


def test_outer_approximation_contains_body(cube):
    outer = outer_approximation(ConvexBodyOracle.of(cube), 2)
    x = random_directions(np.random.default_rng(5), 500, 3)
    assert np.all(outer.support(x) >= cube.support(x) - 1e-12)
