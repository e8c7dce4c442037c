import math

import numpy as np
import pytest

from cosphere import Euclidean, OneFormField, Sphere, Torus
from cosphere.bundles import CosphereBundle, CotangentBundle, Section, induced_contact_form, liouville_form
from cosphere.forms import _perm_table, contact_volume, d_eval, d_frame, reeb_vector


def test_d_of_x_dy_on_plane():
    # omega = x dy on R^2 has d(omega) = dx ^ dy
    M = Euclidean(2)
    om = OneFormField(M, lambda x, v: x[0] * v[1])
    val = d_eval(om, np.array([0.3, -1.2]), np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert abs(val - 1.0) < 1e-12


def test_d_of_liouville_on_line_bundle():
    # theta = p dq on T*(R^1): d(theta)(e_q, e_p) = -1 in (q, p) order
    TQ = CotangentBundle(Euclidean(1))
    theta = liouville_form(TQ)
    val = d_eval(theta, np.array([0.4, 2.0]), np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert abs(val + 1.0) < 1e-12


def test_d_antisymmetric_and_bilinear():
    rng = np.random.default_rng(0)
    TQ = CotangentBundle(Torus(2))
    theta = liouville_form(TQ)
    for _ in range(10):
        x = TQ.sample(rng)
        X = TQ.random_tangent(x, rng)
        Y = TQ.random_tangent(x, rng)
        Z = TQ.random_tangent(x, rng)
        a, b = rng.standard_normal(2)
        assert abs(d_eval(theta, x, X, Y) + d_eval(theta, x, Y, X)) < 1e-12
        lhs = d_eval(theta, x, a * X + b * Z, Y)
        rhs = a * d_eval(theta, x, X, Y) + b * d_eval(theta, x, Z, Y)
        assert abs(lhs - rhs) < 1e-10


def test_d_independent_of_ambient_extension():
    # two extensions agreeing on the sphere must give the same d values
    S = Sphere(2)
    om1 = OneFormField(S, lambda x, v: v[0])
    om2 = OneFormField(S, lambda x, v: (x[0] ** 2 + x[1] ** 2 + x[2] ** 2) * v[0])
    rng = np.random.default_rng(1)
    for _ in range(10):
        q = S.sample(rng)
        X = S.random_tangent(q, rng)
        Y = S.random_tangent(q, rng)
        assert abs(d_eval(om1, q, X, Y) - d_eval(om2, q, X, Y)) < 1e-9


def test_d_frame_matches_d_eval():
    TQ = CotangentBundle(Sphere(2))
    theta = liouville_form(TQ)
    rng = np.random.default_rng(2)
    x = TQ.sample(rng)
    E = TQ.tangent_frame(x)
    B = d_frame(theta, x, E)
    for i in range(3):
        for j in range(3):
            assert abs(B[i, j] - d_eval(theta, x, E[:, i], E[:, j])) < 1e-11


def test_fd_backend_agrees_with_ad():
    B = CosphereBundle(Torus(2))
    eta = induced_contact_form(B, Section())
    rng = np.random.default_rng(3)
    for _ in range(5):
        x = B.sample(rng)
        E = B.tangent_frame(x)
        assert np.max(np.abs(d_frame(eta, x, E, backend="ad") - d_frame(eta, x, E, backend="fd"))) < 1e-8


def test_flat_cosphere_volume_is_factorial():
    rng = np.random.default_rng(4)
    for n in (2, 3, 4):
        B = CosphereBundle(Euclidean(n))
        eta = induced_contact_form(B, Section())
        for _ in range(4):
            vol = contact_volume(eta, B.sample(rng))
            assert abs(abs(vol) - math.factorial(n - 1)) < 1e-10


def test_scaled_section_scales_volume():
    # eta_c = c * eta_1 scales the (2k+1)-form by c^(k+1)
    B = CosphereBundle(Euclidean(2))
    rng = np.random.default_rng(5)
    x = B.sample(rng)
    E = B.tangent_frame(x)
    v1 = contact_volume(induced_contact_form(B, Section(1.0)), x, frame=E)
    v2 = contact_volume(induced_contact_form(B, Section(2.0)), x, frame=E)
    assert abs(v2 - 4.0 * v1) < 1e-10


def test_volume_errors():
    TQ = CotangentBundle(Euclidean(1))  # intrinsic dim 2: even
    theta = liouville_form(TQ)
    with pytest.raises(ValueError):
        contact_volume(theta, np.array([0.0, 1.0]))
    B = CosphereBundle(Euclidean(2))
    eta = induced_contact_form(B, Section())
    x = B.sample(np.random.default_rng(6))
    E = B.tangent_frame(x)
    E[:, 1] = E[:, 0]
    with pytest.raises(ValueError):
        contact_volume(eta, x, frame=E)
    big = CosphereBundle(Euclidean(6))  # dim 11 over the cap
    with pytest.raises(ValueError):
        contact_volume(induced_contact_form(big, Section()), big.sample(np.random.default_rng(7)))


def test_perm_table():
    perms, signs = _perm_table(3)
    assert perms.shape == (6, 3)
    assert int(signs.sum()) == 0
    assert signs[0] == 1.0  # identity permutation first


def test_reeb_flat_and_sphere_oracles():
    rng = np.random.default_rng(8)
    B = CosphereBundle(Euclidean(2))
    eta = induced_contact_form(B, Section())
    for _ in range(5):
        x = B.sample(rng)
        R = reeb_vector(eta, x)
        assert np.max(np.abs(R - np.concatenate([x[2:], [0.0, 0.0]]))) < 1e-10
    BS = CosphereBundle(Sphere(2))
    eta = induced_contact_form(BS, Section())
    for _ in range(5):
        x = BS.sample(rng)
        q, p = x[:3], x[3:]
        R = reeb_vector(eta, x)
        assert np.max(np.abs(R - np.concatenate([p, -q]))) < 1e-10


def test_reeb_scaled_section_inverse_scaling():
    B = CosphereBundle(Torus(2))
    x = B.sample(np.random.default_rng(9))
    R1 = reeb_vector(induced_contact_form(B, Section(1.0)), x)
    R2 = reeb_vector(induced_contact_form(B, Section(2.0)), x)
    assert np.max(np.abs(2.0 * R2 - R1)) < 1e-10


def test_reeb_rejects_non_contact_form():
    M = Torus(1)  # omega = 0 is nowhere contact
    zero = OneFormField(M, lambda x, v: 0.0 * v[0])
    with pytest.raises(ValueError):
        reeb_vector(zero, M.sample(np.random.default_rng(10)))
