import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blaschke.sphere import (
    ball_volume,
    covering_chord,
    icosphere,
    random_directions,
    rotation_matrix,
    sample_directions,
)


def test_ball_volume_values():
    assert ball_volume(1) == pytest.approx(2.0)
    assert ball_volume(2) == pytest.approx(np.pi)
    assert ball_volume(3) == pytest.approx(4 * np.pi / 3)
    # recurrence kappa_n = 2 pi / n kappa_{n-2}
    for n in range(3, 9):
        assert ball_volume(n) == pytest.approx(2 * np.pi / n * ball_volume(n - 2))


@pytest.mark.parametrize("depth", [0, 1, 2, 3])
def test_icosphere_counts(depth):
    v, f = icosphere(depth)
    assert len(f) == 20 * 4 ** depth
    assert len(v) - 3 * len(f) // 2 + len(f) == 2  # Euler
    assert np.allclose(np.linalg.norm(v, axis=1), 1.0)


def test_icosphere_rejects_negative_depth():
    with pytest.raises(ValueError):
        icosphere(-1)


def test_covering_chord_shrinks_with_depth():
    rhos = [covering_chord(*icosphere(d)) for d in range(5)]
    assert all(a > b for a, b in zip(rhos, rhos[1:]))
    assert rhos[-1] < 0.05


@pytest.mark.parametrize("n,res", [(2, 2), (3, 2), (4, 3)])
def test_sample_directions_cover(n, res):
    u, rho = sample_directions(n, res)
    x = random_directions(np.random.default_rng(n), 5000, n)
    nearest = np.min(np.linalg.norm(x[:, None, :] - u[None, :, :], axis=2), axis=1)
    assert nearest.max() <= rho


@given(st.floats(-10, 10), st.integers(2, 5))
def test_rotation_is_orthogonal(angle, n):
    r = rotation_matrix(n, angle)
    assert np.allclose(r @ r.T, np.eye(n))
    assert np.linalg.det(r) == pytest.approx(1.0)
    assert np.allclose(r[2:, 2:], np.eye(n - 2))


def test_rotation_composes_additively():
    a, b = 0.7, -2.1
    assert np.allclose(rotation_matrix(3, a) @ rotation_matrix(3, b), rotation_matrix(3, a + b))
