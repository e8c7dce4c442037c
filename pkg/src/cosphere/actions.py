"""Affine isometric group actions and their lifts to covector bundles.

Every supported action is affine, ``q -> O q + shift`` with ``O``
orthogonal (or absent, meaning identity), so the cotangent lift keeps
our ambient-vector covector representation: ``p -> O^-T p``.  Generators
are encoded as pairs ``(A, b)`` with fundamental field
``xi_Q(q) = A q + b``.

The lift to the cosphere bundle acts on rays; on unit representatives it
renormalizes the transported covector and reports the positive factor by
which a section's representative rescales (identically 1 for
isometries, but always computed, never assumed).
"""

from __future__ import annotations

import numpy as np

from . import ad
from .bundles import (
    CospherePoint,
    CosphereBundle,
    CotangentPoint,
    Section,
    apply_section,
    induced_contact_form,
    ray_projection,
    ray_projection_tangent,
    section_factor,
)
from .forms import d_frame
from .manifolds import Euclidean, Manifold, Torus

__all__ = [
    "GroupAction",
    "TorusRotationAction",
    "TranslationAction",
    "AffineShiftAction",
    "LatticeTranslationAction",
    "QuaternionCircleAction",
    "quat_mul",
    "quat_conj",
    "fundamental_field",
    "lifted_fundamental_field",
    "cotangent_lift",
    "cotangent_lift_tangent",
    "cosphere_lift_and_scale",
    "cosphere_lift_tangent",
    "momentum",
    "momentum_pairing",
    "contact_momentum",
    "momentum_gradient_rows",
    "bifurcation_check",
    "invariance_average_residual",
]


class GroupAction:
    """Affine action of an abelian Lie group on an embedded manifold."""

    carrier: Manifold
    algebra_dim: int
    name: str

    def affine(self, g):
        """Pair ``(O, shift)`` with ``act(g, q) = O q + shift``; ``O=None`` means identity."""
        raise NotImplementedError

    def generator(self, xi):
        """Pair ``(A, b)`` with fundamental field ``A q + b``; ``None`` means zero."""
        raise NotImplementedError

    def identity(self):
        raise NotImplementedError

    def compose(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def exp(self, xi):
        """Group element generated by algebra element ``xi``."""
        raise NotImplementedError

    def sample_element(self, rng):
        raise NotImplementedError

    def sample_algebra(self, rng):
        if self.algebra_dim == 0:
            return np.zeros(0)
        return rng.standard_normal(self.algebra_dim)

    def quadrature(self, count: int):
        """Uniform grid of elements for compact groups; None if unavailable."""
        return None

    def act(self, g, q):
        O, shift = self.affine(g)
        q = np.asarray(q, dtype=float)
        return (q if O is None else O @ q) + shift

    def __repr__(self):
        return self.name


def _block_rotation(nq: int, circles, angles) -> np.ndarray:
    O = np.eye(nq)
    for c, a in zip(circles, angles):
        ca, sa = np.cos(a), np.sin(a)
        O[2 * c : 2 * c + 2, 2 * c : 2 * c + 2] = [[ca, -sa], [sa, ca]]
    return O


class TorusRotationAction(GroupAction):
    """T^k rotating k chosen circle factors of a torus, one angle each."""

    def __init__(self, torus: Torus, circles=None):
        self.carrier = torus
        self.circles = list(range(torus.n_circles)) if circles is None else list(circles)
        if len(set(self.circles)) != len(self.circles):
            raise ValueError("repeated circle index")
        for c in self.circles:
            if not 0 <= c < torus.n_circles:
                raise ValueError(f"circle index {c} out of range")
        self.algebra_dim = len(self.circles)
        self.name = f"T^{self.algebra_dim} on {torus.name}"

    def affine(self, g):
        return _block_rotation(self.carrier.ambient_dim, self.circles, g), np.zeros(self.carrier.ambient_dim)

    def generator(self, xi):
        A = np.zeros((self.carrier.ambient_dim, self.carrier.ambient_dim))
        for c, w in zip(self.circles, xi):
            A[2 * c, 2 * c + 1] = -w
            A[2 * c + 1, 2 * c] = w
        return A, None

    def identity(self):
        return np.zeros(self.algebra_dim)

    def compose(self, g, h):
        return np.mod(np.asarray(g) + np.asarray(h), 2.0 * np.pi)

    def inverse(self, g):
        return np.mod(-np.asarray(g), 2.0 * np.pi)

    def exp(self, xi):
        return np.mod(np.asarray(xi, dtype=float), 2.0 * np.pi)

    def sample_element(self, rng):
        return rng.uniform(0.0, 2.0 * np.pi, size=self.algebra_dim)

    def quadrature(self, count: int):
        k = self.algebra_dim
        m = max(2, int(round(count ** (1.0 / k))))
        axes = [np.arange(m) * (2.0 * np.pi / m)] * k
        grids = np.meshgrid(*axes, indexing="ij")
        return list(np.stack([g.ravel() for g in grids], axis=1))


class TranslationAction(GroupAction):
    """R^d translating every one of ``blocks`` consecutive d-blocks equally."""

    def __init__(self, space: Euclidean, block_dim: int):
        if space.ambient_dim % block_dim:
            raise ValueError("ambient dimension must be a multiple of the block size")
        self.carrier = space
        self.block_dim = block_dim
        self.blocks = space.ambient_dim // block_dim
        self.algebra_dim = block_dim
        self.name = f"R^{block_dim} diagonal on {space.name}"

    def _tile(self, x):
        return np.tile(np.asarray(x, dtype=float), self.blocks)

    def affine(self, g):
        return None, self._tile(g)

    def generator(self, xi):
        return None, self._tile(xi)

    def identity(self):
        return np.zeros(self.block_dim)

    def compose(self, g, h):
        return np.asarray(g) + np.asarray(h)

    def inverse(self, g):
        return -np.asarray(g)

    def exp(self, xi):
        return np.asarray(xi, dtype=float)

    def sample_element(self, rng):
        return rng.standard_normal(self.block_dim)


class AffineShiftAction(GroupAction):
    """R^r acting on a Euclidean space by given ambient shift directions."""

    def __init__(self, space: Euclidean, shifts):
        self.carrier = space
        self.shifts = np.asarray(shifts, dtype=float)
        if self.shifts.ndim != 2 or self.shifts.shape[1] != space.ambient_dim:
            raise ValueError("shifts must be rows in the ambient space")
        self.algebra_dim = self.shifts.shape[0]
        self.name = f"R^{self.algebra_dim} shifts on {space.name}"

    def affine(self, g):
        return None, self.shifts.T @ np.asarray(g, dtype=float)

    def generator(self, xi):
        return None, self.shifts.T @ np.asarray(xi, dtype=float)

    def identity(self):
        return np.zeros(self.algebra_dim)

    def compose(self, g, h):
        return np.asarray(g) + np.asarray(h)

    def inverse(self, g):
        return -np.asarray(g)

    def exp(self, xi):
        return np.asarray(xi, dtype=float)

    def sample_element(self, rng):
        return rng.standard_normal(self.algebra_dim)


class LatticeTranslationAction(GroupAction):
    """Z^n acting on R^n by steps of 2 pi; discrete, algebra dimension 0."""

    def __init__(self, space: Euclidean, step: float = 2.0 * np.pi):
        self.carrier = space
        self.step = float(step)
        self.algebra_dim = 0
        self.name = f"Z^{space.ambient_dim} on {space.name}"

    def affine(self, g):
        return None, self.step * np.asarray(g, dtype=float)

    def generator(self, xi):
        raise ValueError("discrete group has no nonzero generators")

    def identity(self):
        return np.zeros(self.carrier.ambient_dim, dtype=int)

    def compose(self, g, h):
        return np.asarray(g) + np.asarray(h)

    def inverse(self, g):
        return -np.asarray(g)

    def exp(self, xi):
        xi = np.asarray(xi)
        if xi.size:
            raise ValueError("discrete group has trivial algebra")
        return self.identity()

    def sample_element(self, rng):
        return rng.integers(-3, 4, size=self.carrier.ambient_dim)


def quat_mul(a, b):
    """Hamilton product of quaternions stored as (w, x, y, z)."""
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return np.array(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ]
    )


def quat_conj(a):
    return np.array([a[0], -a[1], -a[2], -a[3]])


# left multiplication by the unit quaternion i, as a matrix on (w, x, y, z)
LEFT_I = np.array(
    [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)


class QuaternionCircleAction(GroupAction):
    """S^1 on the unit quaternions S^3 by left multiplication with exp(i phi)."""

    def __init__(self, sphere):
        if sphere.ambient_dim != 4:
            raise ValueError("needs the 3-sphere in R^4")
        self.carrier = sphere
        self.algebra_dim = 1
        self.name = "S^1 left on S^3"

    def affine(self, g):
        phi = float(np.asarray(g).reshape(()))
        O = np.cos(phi) * np.eye(4) + np.sin(phi) * LEFT_I
        return O, np.zeros(4)

    def generator(self, xi):
        return float(np.asarray(xi).reshape(())) * LEFT_I, None

    def identity(self):
        return np.zeros(1)

    def compose(self, g, h):
        return np.mod(np.asarray(g) + np.asarray(h), 2.0 * np.pi)

    def inverse(self, g):
        return np.mod(-np.asarray(g), 2.0 * np.pi)

    def exp(self, xi):
        return np.mod(np.asarray(xi, dtype=float).reshape(1), 2.0 * np.pi)

    def sample_element(self, rng):
        return rng.uniform(0.0, 2.0 * np.pi, size=1)

    def quadrature(self, count: int):
        return list(np.arange(count)[:, None] * (2.0 * np.pi / count))


# lifts and momentum maps ---------------------------------------------


def fundamental_field(action: GroupAction, xi, q) -> np.ndarray:
    A, b = action.generator(xi)
    q = np.asarray(q, dtype=float)
    out = np.zeros_like(q)
    if A is not None:
        out += A @ q
    if b is not None:
        out += b
    return out


def lifted_fundamental_field(action: GroupAction, xi, x, unit_fiber: bool = False) -> np.ndarray:
    """Generator of the lifted action at ``x = (q, p)`` on T*Q (or S*Q)."""
    A, b = action.generator(xi)
    x = np.asarray(x, dtype=float)
    N = action.carrier.ambient_dim
    q, p = x[:N], x[N : 2 * N]
    vq = np.zeros(N)
    vp = np.zeros(N)
    if A is not None:
        vq += A @ q
        vp -= A.T @ p
    if b is not None:
        vq += b
    if unit_fiber:
        # stay tangent to the unit-covector sphere
        vp = vp - p * np.dot(p, vp)
    return np.concatenate([vq, vp])


def cotangent_lift(action: GroupAction, g, alpha: CotangentPoint) -> CotangentPoint:
    O, shift = action.affine(g)
    q1 = action.act(g, alpha.q)
    if O is None:
        return CotangentPoint(q1, alpha.p.copy())
    try:
        p1 = np.linalg.solve(O.T, alpha.p)
    except np.linalg.LinAlgError as e:
        raise ValueError(f"non-invertible differential for element {g!r}") from e
    return CotangentPoint(q1, p1)


def cotangent_lift_tangent(action: GroupAction, g, V) -> np.ndarray:
    """Derivative of the cotangent lift (constant in the point, being linear)."""
    O, _ = action.affine(g)
    V = np.asarray(V, dtype=float)
    if O is None:
        return V.copy()
    N = O.shape[0]
    return np.concatenate([O @ V[:N], np.linalg.solve(O.T, V[N:])])


def cosphere_lift_and_scale(
    action: GroupAction, g, s: CospherePoint, section: Section
) -> tuple[CospherePoint, float]:
    """Lifted point on S*Q plus the section-representative scale factor."""
    rep = apply_section(section, s)
    beta = cotangent_lift(action, g, rep)
    factor = section_factor(section, beta) / section_factor(section, rep)
    return ray_projection(beta), factor


def cosphere_lift_tangent(action: GroupAction, g, s: CospherePoint, w) -> np.ndarray:
    """Derivative of the cosphere lift at ``s`` applied to tangent ``w``."""
    beta = cotangent_lift(action, g, s.representative())
    return ray_projection_tangent(beta, cotangent_lift_tangent(action, g, w))


def momentum(action: GroupAction, alpha: CotangentPoint) -> np.ndarray:
    """Cotangent momentum map: pair the covector with each basis generator."""
    k = action.algebra_dim
    out = np.empty(k)
    for i in range(k):
        out[i] = np.dot(alpha.p, fundamental_field(action, np.eye(k)[i], alpha.q))
    return out


def momentum_pairing(action: GroupAction, alpha: CotangentPoint, xi) -> float:
    return float(np.dot(alpha.p, fundamental_field(action, xi, alpha.q)))


def contact_momentum(
    action: GroupAction, bundle: CosphereBundle, section: Section, s: CospherePoint, xi
) -> float:
    """Contact momentum: the induced contact form fed the lifted generator."""
    eta = induced_contact_form(bundle, section)
    x = s.ambient()
    return float(eta(x, lifted_fundamental_field(action, xi, x, unit_fiber=True)))


def momentum_gradient_rows(action: GroupAction, alpha: CotangentPoint) -> np.ndarray:
    """Ambient gradient of each momentum component over (q, p)."""
    k = action.algebra_dim
    N = action.carrier.ambient_dim
    rows = np.zeros((k, 2 * N))
    for i in range(k):
        A, b = action.generator(np.eye(k)[i])
        if A is not None:
            rows[i, :N] += A.T @ alpha.p
        rows[i, N:] = fundamental_field(action, np.eye(k)[i], alpha.q)
    return rows


def bifurcation_check(
    action: GroupAction,
    bundle: CosphereBundle,
    section: Section,
    s: CospherePoint,
    svd_tol: float = 1e-8,
) -> dict:
    """Pointwise pairing between the momentum differential and the contact form.

    The derivative of each momentum component along the bundle (computed
    by chart differentiation) must match minus the exterior derivative of
    the contact form fed the corresponding lifted generator.  Rank of the
    one side plus the degenerate-generator dimension of the other must
    recover the algebra dimension.
    """
    k = action.algebra_dim
    if k == 0:
        return {"residual": 0.0, "rank": 0, "null_dim": 0, "algebra_dim": 0, "rank_consistent": True}
    x = s.ambient()
    E = bundle.tangent_frame(x)
    d = E.shape[1]
    N = action.carrier.ambient_dim
    c = section.scale
    gens = [action.generator(np.eye(k)[i]) for i in range(k)]

    # momentum components differentiated through the retraction chart
    M = np.empty((k, d))
    x_dual = bundle.retract_jvp(x, ad.seed(np.zeros(2 * N), E), np.zeros(2 * N))[0]
    qd, pd = x_dual[:N], x_dual[N : 2 * N]
    for i, (A, b) in enumerate(gens):
        field = ad.matvec(A, qd) if A is not None else np.zeros(N)
        if b is not None:
            field = field + b
        M[i, :] = ad.partials(c * ad.dot(pd, field))

    # the contact form side: d(eta) paired generator-against-frame
    eta = induced_contact_form(bundle, section)
    xi_cols = np.stack(
        [lifted_fundamental_field(action, np.eye(k)[i], x, unit_fiber=True) for i in range(k)],
        axis=1,
    )
    B = d_frame(eta, x, np.concatenate([xi_cols, E], axis=1))
    D = B[:k, k:]

    sv_m = np.linalg.svd(M, compute_uv=False)
    sv_d = np.linalg.svd(D, compute_uv=False)
    rank_m = int(np.sum(sv_m > svd_tol))
    rank_d = int(np.sum(sv_d > svd_tol))
    return {
        "residual": float(np.max(np.abs(M + D))),
        "rank": rank_m,
        "null_dim": k - rank_d,
        "algebra_dim": k,
        "rank_consistent": rank_m + (k - rank_d) == k,
    }


def invariance_average_residual(
    action: GroupAction,
    bundle: CosphereBundle,
    section: Section,
    s: CospherePoint,
    w,
    count: int = 64,
) -> float | None:
    """Group-averaged contact form versus the form itself; None if non-compact."""
    gs = action.quadrature(count)
    if gs is None:
        return None
    eta = induced_contact_form(bundle, section)
    w = np.asarray(w, dtype=float)
    base = float(eta(s.ambient(), w))
    acc = 0.0
    for g in gs:
        s1, _ = cosphere_lift_and_scale(action, g, s, section)
        acc += float(eta(s1.ambient(), cosphere_lift_tangent(action, g, s, w)))
    return abs(acc / len(gs) - base)
