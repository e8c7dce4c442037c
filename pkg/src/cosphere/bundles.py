"""Cotangent and cosphere bundles of embedded manifolds.

Covectors at ``q`` are represented by ambient vectors ``p`` tangent to the
base at ``q``, paired with tangents through the Euclidean dot product.
The cosphere bundle is realized as the unit-covector sphere in each
fiber; a ray through a nonzero covector is identified with its unit
representative.  A :class:`Section` assigns to each ray the
representative of prescribed norm, giving a positive function on nonzero
covectors (``scale / |p|``, homogeneous of degree -1) and with it a
contact form on the cosphere bundle.

The punctured cotangent bundle is symplectomorphic to the cone
``(cosphere bundle) x R_+`` carrying the differential of the scaled
contact form; :func:`cone_check` verifies that identification
numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ad
from .forms import OneFormField, d_eval
from .manifolds import Euclidean, Manifold, ProductManifold

__all__ = [
    "CotangentPoint",
    "CospherePoint",
    "CotangentBundle",
    "CosphereBundle",
    "Section",
    "section_factor",
    "apply_section",
    "liouville_form",
    "induced_contact_form",
    "liouville_eval",
    "ray_projection",
    "ray_projection_tangent",
    "section_change_factor",
    "cone_manifold",
    "cone_one_form",
    "cone_map",
    "cone_map_tangent",
    "cone_check",
]

DEGENERATE_NORM = 1e-6


@dataclass(eq=False)
class CotangentPoint:
    """A covector: base point ``q`` and fiber vector ``p`` tangent at ``q``."""

    q: np.ndarray
    p: np.ndarray

    def ambient(self) -> np.ndarray:
        return np.concatenate([self.q, self.p])


@dataclass(eq=False)
class CospherePoint:
    """A ray of covectors, stored through its unit-norm representative."""

    q: np.ndarray
    p: np.ndarray

    def ambient(self) -> np.ndarray:
        return np.concatenate([self.q, self.p])

    def representative(self) -> CotangentPoint:
        return CotangentPoint(self.q.copy(), self.p.copy())


class CotangentBundle(Manifold):
    """T*Q embedded in R^{2N}: pairs (q, p) with p tangent to Q at q."""

    def __init__(self, base: Manifold):
        self.base = base
        self.ambient_dim = 2 * base.ambient_dim
        self.intrinsic_dim = 2 * base.intrinsic_dim
        self.name = f"T*({base.name})"

    def split(self, x):
        N = self.base.ambient_dim
        return x[:N], x[N : 2 * N]

    def constraint(self, x):
        q, p = self.split(x)
        base_c = self.base.constraint(q)
        tang = [ad.dot(n, p) for n in self.base.normal_vectors(q)]
        if not tang:
            return base_c
        return ad.concat([base_c, ad.pack(tang)])

    def normal_vectors(self, x):
        q, p = self.split(x)
        N = self.base.ambient_dim
        zero = np.zeros(N)
        rows = []
        nq = self.base.normal_vectors(q)
        np_rows = self.base.normal_vectors(p)  # = directional derivative of n_k by linearity
        dual = isinstance(x, ad.Dual)

        def join(aa, bb):
            if dual or isinstance(aa, ad.Dual) or isinstance(bb, ad.Dual):
                return ad.concat([aa, bb])
            out = np.zeros(2 * N)
            out[:N], out[N:] = aa, bb
            return out

        for n in nq:
            rows.append(join(n, zero))
        for n, dn in zip(nq, np_rows):
            rows.append(join(dn, n))
        return rows

    def _fiber_transport_jvp(self, q, p, u, v):
        """Shared retraction core: move base, carry the fiber, re-project."""
        N = self.base.ambient_dim
        a, b = u[:N], u[N : 2 * N]
        v = np.asarray(v, dtype=float)
        va, vb = v[:N], v[N : 2 * N]
        q1, dq1 = self.base.retract_jvp(q, a, va)
        w = p + b
        dw = vb
        ns = self.base.normal_vectors(q1)
        dns = self.base.normal_vectors(dq1)
        p1, dp1 = w, dw
        for n, dn in zip(ns, dns):
            nn = ad.dot(n, n)
            coef = ad.dot(n, w) / nn
            dcoef = (ad.dot(dn, w) + ad.dot(n, dw) - coef * (2.0 * ad.dot(n, dn))) / nn
            p1 = p1 - n * coef
            dp1 = dp1 - dn * coef - n * dcoef
        return q1, p1, dq1, dp1

    def retract_jvp(self, x, u, v):
        q, p = self.split(np.asarray(x, dtype=float))
        q1, p1, dq1, dp1 = self._fiber_transport_jvp(q, p, u, v)
        return ad.concat([q1, p1]), ad.concat([dq1, dp1])

    def sample_covector(self, q, rng, unit: bool = False) -> np.ndarray:
        while True:
            p = self.base.project_tangent(q, rng.standard_normal(self.base.ambient_dim))
            m = np.linalg.norm(p)
            if m > DEGENERATE_NORM:
                return p / m if unit else p

    def sample(self, rng):
        q = self.base.sample(rng)
        return np.concatenate([q, self.sample_covector(q, rng)])

    def point(self, x) -> CotangentPoint:
        self.check_point(x)
        q, p = self.split(np.asarray(x, dtype=float))
        return CotangentPoint(q, p)


class CosphereBundle(CotangentBundle):
    """S*Q: unit-covector representatives of rays in T*Q minus the zero section."""

    def __init__(self, base: Manifold):
        super().__init__(base)
        self.intrinsic_dim = 2 * base.intrinsic_dim - 1
        self.name = f"S*({base.name})"

    def constraint(self, x):
        q, p = self.split(x)
        return ad.concat([super().constraint(x), ad.pack([ad.dot(p, p) - 1.0])])

    def normal_vectors(self, x):
        q, p = self.split(x)
        rows = super().normal_vectors(x)
        if isinstance(x, ad.Dual):
            rows.append(ad.concat([np.zeros(self.base.ambient_dim), 2.0 * p]))
        else:
            r = np.zeros(self.ambient_dim)
            r[self.base.ambient_dim :] = 2.0 * np.asarray(p, dtype=float)
            rows.append(r)
        return rows

    def retract_jvp(self, x, u, v):
        q, p = self.split(np.asarray(x, dtype=float))
        q1, p1, dq1, dp1 = self._fiber_transport_jvp(q, p, u, v)
        m = ad.norm(p1)
        p2 = p1 / m
        dp2 = dp1 / m - p1 * (ad.dot(p1, dp1) / m**3)
        return ad.concat([q1, p2]), ad.concat([dq1, dp2])

    def sample(self, rng):
        q = self.base.sample(rng)
        return np.concatenate([q, self.sample_covector(q, rng, unit=True)])

    def point(self, x) -> CospherePoint:
        self.check_point(x)
        q, p = self.split(np.asarray(x, dtype=float))
        return CospherePoint(q, p)


@dataclass(frozen=True)
class Section:
    """Choice of ray representatives: the covector of norm ``scale`` on each ray."""

    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("section scale must be positive")


def section_factor(section: Section, alpha: CotangentPoint) -> float:
    """Positive homogeneous degree -1 function: section norm over covector norm."""
    m = float(np.linalg.norm(alpha.p))
    if m < DEGENERATE_NORM:
        raise ValueError(f"degenerate covector: |p| = {m:.3e}")
    return section.scale / m


def apply_section(section: Section, s: CospherePoint) -> CotangentPoint:
    """The representative the section picks on the ray of ``s``."""
    return CotangentPoint(s.q.copy(), section.scale * s.p)


def section_change_factor(sigma: Section, rho: Section, s: CospherePoint) -> float:
    """Transition function between two sections, evaluated as a composition."""
    return section_factor(sigma, apply_section(rho, s))


def liouville_form(bundle: CotangentBundle) -> OneFormField:
    """Tautological one-form on T*Q: pair the fiber covector with the base velocity."""
    N = bundle.base.ambient_dim

    def fn(x, v):
        return ad.dot(x[N : 2 * N], v[:N])

    return OneFormField(bundle, fn, name="theta")


def induced_contact_form(bundle: CosphereBundle, section: Section) -> OneFormField:
    """Contact form on S*Q pulled back from the section's representative covectors."""
    N = bundle.base.ambient_dim
    c = section.scale

    def fn(x, v):
        return c * ad.dot(x[N : 2 * N], v[:N])

    return OneFormField(bundle, fn, name=f"eta[{c:g}]")


def liouville_eval(bundle: CotangentBundle, alpha: CotangentPoint, V, check: bool = True) -> float:
    x = alpha.ambient()
    if check:
        bundle.check_point(x, tol=1e-8)
        bundle.check_tangent(x, V, tol=1e-8)
    return float(liouville_form(bundle)(x, np.asarray(V, dtype=float)))


def ray_projection(alpha: CotangentPoint) -> CospherePoint:
    """Quotient map T*Q minus zero section -> S*Q on representatives."""
    m = float(np.linalg.norm(alpha.p))
    if m < DEGENERATE_NORM:
        raise ValueError(f"degenerate covector: |p| = {m:.3e}")
    return CospherePoint(alpha.q.copy(), alpha.p / m)


def ray_projection_tangent(alpha: CotangentPoint, V) -> np.ndarray:
    """Derivative of :func:`ray_projection` at ``alpha`` applied to ``V``."""
    N = alpha.q.shape[0]
    V = np.asarray(V, dtype=float)
    dq, dp = V[:N], V[N:]
    p = alpha.p
    m = float(np.linalg.norm(p))
    if m < DEGENERATE_NORM:
        raise ValueError("degenerate covector")
    u = p / m
    dpu = dp / m - u * (np.dot(u, dp) / m)
    return np.concatenate([dq, dpu])


# cone over the cosphere bundle ---------------------------------------


def cone_manifold(bundle: CosphereBundle) -> ProductManifold:
    """S*Q x R with the radial coordinate appended last."""
    return ProductManifold([bundle, Euclidean(1)])


def cone_one_form(bundle: CosphereBundle, section: Section) -> OneFormField:
    """Radial coordinate times the induced contact form, on the cone."""
    N = bundle.base.ambient_dim
    c = section.scale
    cone = cone_manifold(bundle)

    def fn(x, v):
        return x[2 * N] * c * ad.dot(x[N : 2 * N], v[:N])

    return OneFormField(cone, fn, name=f"t*eta[{c:g}]")


def cone_map(section: Section, x_cone) -> CotangentPoint:
    """(ray, t) -> the ray's section representative scaled by t."""
    x_cone = np.asarray(x_cone, dtype=float)
    N = (x_cone.shape[0] - 1) // 2
    t = float(x_cone[2 * N])
    if not t > 0:
        raise ValueError(f"cone coordinate must be positive, got {t:g}")
    return CotangentPoint(x_cone[:N].copy(), t * section.scale * x_cone[N : 2 * N])


def cone_map_tangent(section: Section, x_cone, v) -> np.ndarray:
    x_cone = np.asarray(x_cone, dtype=float)
    v = np.asarray(v, dtype=float)
    N = (x_cone.shape[0] - 1) // 2
    t = float(x_cone[2 * N])
    p = x_cone[N : 2 * N]
    c = section.scale
    return np.concatenate([v[:N], t * c * v[N : 2 * N] + c * p * v[2 * N]])


def cone_check(
    bundle: CosphereBundle,
    section: Section,
    s: CospherePoint,
    t: float,
    rng,
    pairs: int = 50,
    backend: str = "ad",
) -> float:
    """Max mismatch between d(cone form) and the pulled-back d(Liouville form).

    Both sides are evaluated independently through their own charts: the
    left on T*Q at the image covector, the right on the cone.  Agreement
    on random tangent pairs verifies that the cone map is a
    symplectomorphism onto the punctured cotangent bundle.
    """
    if not t > 0:
        raise ValueError("cone coordinate must be positive")
    cone = cone_manifold(bundle)
    x = np.concatenate([s.ambient(), [float(t)]])
    cone.check_point(x, tol=1e-8)
    tq = CotangentBundle(bundle.base)
    theta = liouville_form(tq)
    omega_cone = cone_one_form(bundle, section)
    alpha = cone_map(section, x)
    worst = 0.0
    for _ in range(pairs):
        U = cone.random_tangent(x, rng)
        V = cone.random_tangent(x, rng)
        lhs = d_eval(theta, alpha.ambient(), cone_map_tangent(section, x, U), cone_map_tangent(section, x, V), backend=backend)
        rhs = d_eval(omega_cone, x, U, V, backend=backend)
        worst = max(worst, abs(lhs - rhs))
    return worst
