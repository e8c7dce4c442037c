import numpy as np
import pytest

from cosphere import Euclidean, ProductManifold, Sphere, Torus
from cosphere.ad import fd_jvp

FAMILIES = [
    Euclidean(3),
    Sphere(2),
    Sphere(3),
    Torus(2),
    Torus(3),
    ProductManifold([Torus(2), Euclidean(2)]),
    ProductManifold([Sphere(2), Torus(1)]),
]


def test_samples_satisfy_constraints():
    rng = np.random.default_rng(0)
    for M in FAMILIES:
        for _ in range(20):
            x = M.sample(rng)
            assert x.shape == (M.ambient_dim,)
            assert M.constraint_residual(x) < 1e-12


def test_projection_idempotent_and_tangent():
    rng = np.random.default_rng(1)
    for M in FAMILIES:
        for _ in range(10):
            q = M.sample(rng)
            w = rng.standard_normal(M.ambient_dim)
            v = M.project_tangent(q, w)
            v2 = M.project_tangent(q, v)
            assert np.max(np.abs(v - v2)) < 1e-12
            M.check_tangent(q, v, tol=1e-10)
            R = M.normal_matrix(q)
            if R.shape[0]:
                assert np.max(np.abs(R @ v)) < 1e-10


def test_tangent_frame_orthonormal_and_deterministic():
    rng = np.random.default_rng(2)
    for M in FAMILIES:
        q = M.sample(rng)
        E = M.tangent_frame(q)
        assert E.shape == (M.ambient_dim, M.intrinsic_dim)
        assert np.max(np.abs(E.T @ E - np.eye(M.intrinsic_dim))) < 1e-12
        E2 = M.tangent_frame(q)
        assert np.array_equal(E, E2)


def test_retract_center_and_stays_on():
    rng = np.random.default_rng(3)
    for M in FAMILIES:
        for _ in range(10):
            q = M.sample(rng)
            x0 = M.retract(q, np.zeros(M.ambient_dim))
            assert np.max(np.abs(x0 - q)) < 1e-14
            u = 0.4 * M.random_tangent(q, rng)
            x = M.retract(q, u)
            assert M.constraint_residual(x) < 1e-12


def test_retract_jvp_matches_fd():
    rng = np.random.default_rng(4)
    for M in FAMILIES:
        for _ in range(6):
            q = M.sample(rng)
            u = 0.3 * M.random_tangent(q, rng)
            v = M.random_tangent(q, rng)
            _, dx = M.retract_jvp(q, u, v)
            fd = fd_jvp(lambda uu: M.retract(q, uu), u, v)
            assert np.max(np.abs(dx - fd)) < 1e-7


def test_retract_derivative_identity_at_zero():
    rng = np.random.default_rng(5)
    for M in FAMILIES:
        q = M.sample(rng)
        for _ in range(5):
            v = M.random_tangent(q, rng)
            _, dx = M.retract_jvp(q, np.zeros(M.ambient_dim), v)
            assert np.max(np.abs(dx - v)) < 1e-12


def test_torus_retract_is_angle_advance():
    T = Torus(1)
    q = np.array([1.0, 0.0])
    u = 0.7 * np.array([0.0, 1.0])  # tangent, angle 0.7
    x = T.retract(q, u)
    assert np.allclose(x, [np.cos(0.7), np.sin(0.7)], atol=1e-14)


def test_sphere_retract_is_normalized_sum():
    S = Sphere(2)
    q = np.array([1.0, 0.0, 0.0])
    u = np.array([0.0, 1.0, 0.0])
    y = q + u
    assert np.allclose(S.retract(q, u), y / np.linalg.norm(y), atol=1e-15)


def test_point_off_manifold_rejected():
    S = Sphere(2)
    with pytest.raises(ValueError):
        S.check_point(np.array([1.1, 0.0, 0.0]))
    with pytest.raises(ValueError):
        S.project_tangent(np.array([2.0, 0.0, 0.0]), np.ones(3))


def test_invalid_constructions():
    with pytest.raises(ValueError):
        Euclidean(0)
    with pytest.raises(ValueError):
        Sphere(0)
    with pytest.raises(ValueError):
        Torus(0)
    with pytest.raises(ValueError):
        ProductManifold([])


def test_seeded_sampling_reproducible():
    M = ProductManifold([Torus(2), Sphere(2)])
    a = M.sample(np.random.default_rng(7))
    b = M.sample(np.random.default_rng(7))
    assert np.array_equal(a, b)
