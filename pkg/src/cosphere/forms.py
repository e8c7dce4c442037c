"""One-forms on embedded manifolds and their exterior derivatives.

A one-form is a callable ``fn(x, v)`` that pairs an ambient point with an
ambient tangent vector and is linear in ``v``.  The exterior derivative
is evaluated intrinsically: the form is pulled back through a retraction
chart centered at the evaluation point and differentiated there, so the
result does not depend on how ``fn`` extends off the manifold.

Two backends are available: forward-mode duals (``"ad"``) and central
finite differences (``"fd"``), the latter serving as an independent
cross-check of the former.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

from . import ad
from .manifolds import Manifold

__all__ = ["OneFormField", "d_frame", "d_eval", "contact_volume", "reeb_vector"]

FD_STEP = 1e-6
VOLUME_DIM_CAP = 9


class OneFormField:
    """A one-form ``fn(x, v)`` on ``carrier``, linear in the tangent slot ``v``."""

    __slots__ = ("carrier", "fn", "name")

    def __init__(self, carrier: Manifold, fn, name: str = "omega"):
        self.carrier = carrier
        self.fn = fn
        self.name = name

    def __call__(self, x, v):
        return self.fn(x, v)

    def __repr__(self):
        return f"OneFormField({self.name} on {self.carrier.name})"


def _chart_values_ad(omega: OneFormField, q, frame):
    """Coefficients and first derivatives of the pulled-back form at chart center.

    Returns ``(a, Jac)`` with ``a[j] = omega(q)(frame_j)`` and
    ``Jac[i, j] = d/dc_i (omega(x(c))(d x/d c_j))`` at ``c = 0``, where
    ``x(c) = retract(q, frame @ c)``.
    """
    M = omega.carrier
    d = frame.shape[1]
    c = ad.seed(np.zeros(M.ambient_dim), frame)
    a = np.empty(d)
    jac = np.empty((d, d))
    for j in range(d):
        x, dxj = M.retract_jvp(q, c, frame[:, j])
        g = omega.fn(x, dxj)
        a[j] = float(ad.value(g))
        jac[:, j] = ad.partials(g)
    return a, jac


def _chart_values_fd(omega: OneFormField, q, frame, h: float):
    M = omega.carrier
    d = frame.shape[1]
    a = np.empty(d)
    jac = np.empty((d, d))
    for j in range(d):
        x0, dx0 = M.retract_jvp(q, np.zeros(M.ambient_dim), frame[:, j])
        a[j] = float(omega.fn(x0, dx0))
    for i in range(d):
        gp = np.empty(d)
        gm = np.empty(d)
        for sgn, out in ((1.0, gp), (-1.0, gm)):
            u = sgn * h * frame[:, i]
            for j in range(d):
                x, dxj = M.retract_jvp(q, u, frame[:, j])
                out[j] = float(omega.fn(x, dxj))
        jac[i, :] = (gp - gm) / (2.0 * h)
    return a, jac


def _frame_coeffs(omega: OneFormField, q, frame, backend: str, h: float):
    frame = np.asarray(frame, dtype=float)
    if frame.ndim != 2 or frame.shape[0] != omega.carrier.ambient_dim:
        raise ValueError("frame must have ambient-dimension rows")
    if backend == "ad":
        return _chart_values_ad(omega, q, frame)
    if backend == "fd":
        return _chart_values_fd(omega, q, frame, h)
    raise ValueError(f"unknown backend {backend!r}")


def d_frame(omega: OneFormField, q, frame, backend: str = "ad", h: float = FD_STEP):
    """Matrix ``B[i, j] = d(omega)(frame_i, frame_j)`` at ``q``.

    In chart coordinates the coefficient is the antisymmetrized Jacobian
    of the pulled-back form, which is exactly what a retraction chart
    centered at ``q`` produces.
    """
    _, jac = _frame_coeffs(omega, q, frame, backend, h)
    return jac - jac.T


def d_eval(omega: OneFormField, q, X, Y, backend: str = "ad", h: float = FD_STEP):
    """Evaluate ``d(omega)(X, Y)`` at ``q`` for two tangent vectors."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    B = d_frame(omega, q, np.stack([X, Y], axis=1), backend=backend, h=h)
    return float(B[0, 1])


@lru_cache(maxsize=None)
def _perm_table(d: int):
    """All permutations of range(d) with parity signs, cached."""
    perms = np.array(list(permutations(range(d))), dtype=np.int8)
    inversions = np.zeros(len(perms), dtype=np.int64)
    for i in range(d):
        for j in range(i + 1, d):
            inversions += perms[:, i] > perms[:, j]
    signs = np.where(inversions % 2, -1.0, 1.0)
    return perms, signs


def contact_volume(
    eta: OneFormField, q, frame=None, backend: str = "ad", h: float = FD_STEP
) -> float:
    """Evaluate ``eta ^ (d eta)^n`` on a tangent frame, ``n = (dim - 1)/2``.

    Nonvanishing of this top form is the contact condition.  The value is
    frame dependent; on an orthonormal frame its absolute value is a
    basis-free nondegeneracy measure.
    """
    M = eta.carrier
    d = M.intrinsic_dim
    if d % 2 == 0:
        raise ValueError("contact volume needs odd intrinsic dimension")
    if d > VOLUME_DIM_CAP:
        raise ValueError(f"contact volume capped at dimension {VOLUME_DIM_CAP}, got {d}")
    if frame is None:
        frame = M.tangent_frame(q)
    frame = np.asarray(frame, dtype=float)
    if frame.shape != (M.ambient_dim, d):
        raise ValueError(f"frame must be {M.ambient_dim} x {d}")
    gram = frame.T @ frame
    if abs(np.linalg.det(gram)) < 1e-12:
        raise ValueError("degenerate frame: repeated or dependent vectors")
    a, jac = _frame_coeffs(eta, q, frame, backend, h)
    B = jac - jac.T
    n = (d - 1) // 2
    perms, signs = _perm_table(d)
    terms = a[perms[:, 0]].copy()
    for k in range(n):
        terms *= B[perms[:, 2 * k + 1], perms[:, 2 * k + 2]]
    # each 2-form slot is summed over ordered index pairs, hence the 1/2 per slot
    return float(signs @ terms) / (2.0**n)


def reeb_vector(
    eta: OneFormField, q, backend: str = "ad", h: float = FD_STEP, tol: float = 1e-9
) -> np.ndarray:
    """The unique tangent vector with ``eta(R) = 1`` and ``d eta(R, .) = 0``."""
    M = eta.carrier
    frame = M.tangent_frame(q)
    a, jac = _frame_coeffs(eta, q, frame, backend, h)
    B = jac - jac.T
    sys = np.vstack([a[None, :], B])
    rhs = np.zeros(M.intrinsic_dim + 1)
    rhs[0] = 1.0
    sol, *_ = np.linalg.lstsq(sys, rhs, rcond=None)
    resid = float(np.max(np.abs(sys @ sol - rhs)))
    if resid > tol:
        raise ValueError(f"no Reeb vector: defining system residual {resid:.3e} (form not contact here?)")
    return frame @ sol
