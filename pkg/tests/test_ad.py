import numpy as np
import pytest

from cosphere import ad


def test_scalar_arithmetic_against_hand_derivatives():
    x = ad.seed(np.array(1.3), np.array([1.0]))
    out = ad.sin(x) * x + ad.cos(x) / (x + 2.0)
    want_val = np.sin(1.3) * 1.3 + np.cos(1.3) / 3.3
    want_der = np.sin(1.3) + 1.3 * np.cos(1.3) - np.sin(1.3) / 3.3 - np.cos(1.3) / 3.3**2
    assert abs(ad.value(out) - want_val) < 1e-14
    assert abs(ad.partials(out)[0] - want_der) < 1e-14


def test_vector_ops_and_multi_directions():
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = rng.standard_normal(5)
        dirs = rng.standard_normal((5, 3))
        d = ad.seed(x, dirs)
        out = ad.dot(d, d) ** 0.5  # |x|
        grad = x / np.linalg.norm(x)
        assert np.max(np.abs(ad.partials(out) - grad @ dirs)) < 1e-12


def test_division_and_pow():
    x = ad.seed(np.array(2.0), np.array([1.0]))
    out = 1.0 / x + x**3
    assert abs(ad.value(out) - (0.5 + 8.0)) < 1e-14
    assert abs(ad.partials(out)[0] - (-0.25 + 12.0)) < 1e-14


def test_numpy_array_times_dual_defers():
    # ndarray * Dual must dispatch to the dual, not go elementwise-object
    d = ad.seed(np.array(3.0), np.array([1.0]))
    v = np.array([1.0, 2.0])
    out = v * d
    assert isinstance(out, ad.Dual)
    assert np.allclose(ad.value(out), [3.0, 6.0])
    assert np.allclose(ad.partials(out)[:, 0], [1.0, 2.0])


def test_concat_pack_matvec():
    d = ad.seed(np.array([1.0, 2.0]), np.eye(2))
    c = ad.concat([d, np.array([5.0])])
    assert ad.value(c).shape == (3,)
    assert np.allclose(ad.partials(c)[2], 0.0)
    s = ad.pack([d[0] * d[1], 4.0])
    assert np.allclose(ad.value(s), [2.0, 4.0])
    assert np.allclose(ad.partials(s)[0], [2.0, 1.0])
    A = np.array([[1.0, 2.0], [0.0, 1.0]])
    m = ad.matvec(A, d)
    assert np.allclose(ad.partials(m), A)


def test_jvp_matches_fd():
    rng = np.random.default_rng(1)

    def f(x):
        return ad.pack([ad.dot(x, x), ad.sin(x[0]) * x[1]]) if isinstance(x, ad.Dual) else np.array(
            [np.dot(x, x), np.sin(x[0]) * x[1]]
        )

    for _ in range(10):
        x = rng.standard_normal(3)
        v = rng.standard_normal(3)
        _, dv = ad.jvp(f, x, v)
        fd = ad.fd_jvp(f, x, v)
        assert np.max(np.abs(dv - fd)) < 1e-8


def test_shape_errors():
    with pytest.raises(ValueError):
        ad.Dual(np.zeros(3), np.zeros((4, 2)))
    with pytest.raises(ValueError):
        ad.seed(np.zeros(3), np.zeros((4, 2)))
    with pytest.raises(ValueError):
        ad.partials(np.zeros(3))
