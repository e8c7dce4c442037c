"""Named reduction scenarios: manifold, action, momentum value, quotient.

Each scenario packages everything the verification suite needs: the base
manifold ``Q`` with its cosphere bundle, an action of an abelian group
``G``, the momentum value (zero or a positive ray through ``mu``), the
reducing subgroup's algebra inside ``g``, the quotient manifold with an
explicit quotient map, and the expected dimension bookkeeping.

Registry:
  * ``paral1``: a circle rotating one factor of ``T^n``; zero level;
    quotient ``T^(n-1)``.
  * ``paral2``: the lattice ``Z^n`` translating ``R^n`` by multiples of
    ``2 pi``; discrete group, zero level is everything; quotient ``T^n``
    via the angle covering.  The proportionality factor must be
    identically 1 here.
  * ``paral3``: the circle acting on unit quaternions ``S^3`` by left
    multiplication; zero level; quotient ``S^2`` via the Hopf map.
  * ``albert_torus``: the full torus ``T^n`` on itself; momentum ray
    through the last angular momentum; kernel subgroup ``T^(n-1)``;
    reduced space is the cosphere bundle of the remaining circle.
  * ``linear_momentum``: diagonal translations of ``n+1`` particles in
    ``R^3``; momentum ray through total momentum ``v``; kernel subgroup
    the translations orthogonal to ``v``; quotient by relative
    displacements plus the ``v``-component of the first particle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .actions import (
    AffineShiftAction,
    GroupAction,
    LatticeTranslationAction,
    QuaternionCircleAction,
    TorusRotationAction,
    TranslationAction,
    quat_conj,
    quat_mul,
)
from .bundles import CospherePoint, CosphereBundle, Section
from .manifolds import Euclidean, Manifold, Sphere, Torus

__all__ = [
    "QuotientMap",
    "ReductionScenario",
    "make_scenario",
    "scenario_names",
    "SCENARIO_DEFAULT_N",
]


class QuotientMap:
    """Smooth surjection Q -> Q/K with an explicit derivative."""

    def apply(self, q) -> np.ndarray:
        raise NotImplementedError

    def tangent(self, q, v) -> np.ndarray:
        raise NotImplementedError


class DropFirstCircle(QuotientMap):
    """T^n -> T^(n-1): forget the rotated circle."""

    def apply(self, q):
        return np.asarray(q, dtype=float)[2:].copy()

    def tangent(self, q, v):
        return np.asarray(v, dtype=float)[2:].copy()


class KeepLastCircle(QuotientMap):
    """T^n -> T^1: the circle untouched by the kernel subgroup."""

    def apply(self, q):
        return np.asarray(q, dtype=float)[-2:].copy()

    def tangent(self, q, v):
        return np.asarray(v, dtype=float)[-2:].copy()


class AngleCover(QuotientMap):
    """R^n -> T^n: each coordinate becomes a point on its circle."""

    def __init__(self, n: int):
        self.n = n

    def apply(self, q):
        q = np.asarray(q, dtype=float)
        out = np.empty(2 * self.n)
        out[0::2] = np.cos(q)
        out[1::2] = np.sin(q)
        return out

    def tangent(self, q, v):
        q = np.asarray(q, dtype=float)
        v = np.asarray(v, dtype=float)
        out = np.empty(2 * self.n)
        out[0::2] = -np.sin(q) * v
        out[1::2] = np.cos(q) * v
        return out


_I_QUAT = np.array([0.0, 1.0, 0.0, 0.0])


class HopfMap(QuotientMap):
    """S^3 -> S^2 by q -> conj(q) i q, imaginary part taken as R^3."""

    def apply(self, q):
        q = np.asarray(q, dtype=float)
        return quat_mul(quat_conj(q), quat_mul(_I_QUAT, q))[1:]

    def tangent(self, q, v):
        q = np.asarray(q, dtype=float)
        v = np.asarray(v, dtype=float)
        term = quat_mul(quat_conj(v), quat_mul(_I_QUAT, q))
        term = term + quat_mul(quat_conj(q), quat_mul(_I_QUAT, v))
        return term[1:]


class RelativeDisplacement(QuotientMap):
    """R^{3(n+1)} -> R^{3n+1}: successive differences plus the v-component
    of the first particle; invariant exactly under translations
    orthogonal to v."""

    def __init__(self, n_pairs: int, v):
        self.n = n_pairs
        self.v = np.asarray(v, dtype=float)
        self.vv = float(np.dot(self.v, self.v))

    def apply(self, q):
        q = np.asarray(q, dtype=float).reshape(self.n + 1, 3)
        diffs = (q[1:] - q[:-1]).ravel()
        return np.concatenate([diffs, [float(q[0] @ self.v) / self.vv]])

    def tangent(self, q, v):
        return self.apply(v)  # the map is linear


@dataclass(eq=False)
class ReductionScenario:
    """A reduction problem instance plus its expected bookkeeping."""

    name: str
    n: int
    base: Manifold
    bundle: CosphereBundle
    action: GroupAction
    mu: np.ndarray
    red_basis: np.ndarray  # rows: algebra of the reducing subgroup inside g
    quotient_base: Manifold
    quotient_bundle: CosphereBundle
    qmap: QuotientMap
    section: Section
    quotient_section: Section
    expected_level_dim: int
    expected_orbit_dim: int
    expected_reduced_dim: int
    factor_unity: bool = False
    aux_zero: Optional["ReductionScenario"] = None
    oracle_reduce: Optional[Callable[[CospherePoint], CospherePoint]] = None
    description: str = ""

    @property
    def is_zero(self) -> bool:
        return self.mu.size == 0 or not self.mu.any()

    @property
    def mu_hat(self) -> np.ndarray:
        if self.is_zero:
            raise ValueError("zero momentum value has no direction")
        return self.mu / np.linalg.norm(self.mu)

    @property
    def mu_perp(self) -> np.ndarray:
        """Rows spanning the complement of mu in the dual algebra."""
        if self.is_zero:
            raise ValueError("zero momentum value has no complement")
        k = self.mu.shape[0]
        _, _, vt = np.linalg.svd(self.mu[None, :])
        return vt[1:k]

    def config(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "base": self.base.name,
            "bundle": self.bundle.name,
            "action": self.action.name,
            "momentum_value": "zero" if self.is_zero else [float(t) for t in self.mu],
            "quotient": self.quotient_base.name,
            "reducing_algebra_dim": int(self.red_basis.shape[0]),
        }

    def __repr__(self):
        return f"ReductionScenario({self.name}, n={self.n})"


def _paral1(n: int) -> ReductionScenario:
    if not 2 <= n <= 5:
        raise ValueError("paral1 needs 2 <= n <= 5")
    torus = Torus(n)
    quotient = Torus(n - 1)
    action = TorusRotationAction(torus, circles=[0])
    sc = ReductionScenario(
        name="paral1",
        n=n,
        base=torus,
        bundle=CosphereBundle(torus),
        action=action,
        mu=np.zeros(1),
        red_basis=np.eye(1),
        quotient_base=quotient,
        quotient_bundle=CosphereBundle(quotient),
        qmap=DropFirstCircle(),
        section=Section(),
        quotient_section=Section(),
        expected_level_dim=2 * n - 2,
        expected_orbit_dim=1,
        expected_reduced_dim=2 * n - 3,
        description="circle rotating one factor of a torus, zero level",
    )

    def oracle(s: CospherePoint) -> CospherePoint:
        return CospherePoint(s.q[2:].copy(), s.p[2:].copy())

    sc.oracle_reduce = oracle
    return sc


def _paral2(n: int) -> ReductionScenario:
    if not 1 <= n <= 4:
        raise ValueError("paral2 needs 1 <= n <= 4")
    space = Euclidean(n)
    quotient = Torus(n)
    qmap = AngleCover(n)
    sc = ReductionScenario(
        name="paral2",
        n=n,
        base=space,
        bundle=CosphereBundle(space),
        action=LatticeTranslationAction(space),
        mu=np.zeros(0),
        red_basis=np.zeros((0, 0)),
        quotient_base=quotient,
        quotient_bundle=CosphereBundle(quotient),
        qmap=qmap,
        section=Section(),
        quotient_section=Section(),
        expected_level_dim=2 * n - 1,
        expected_orbit_dim=0,
        expected_reduced_dim=2 * n - 1,
        factor_unity=True,
        description="lattice translations of Euclidean space, quotient torus",
    )

    def oracle(s: CospherePoint) -> CospherePoint:
        return CospherePoint(qmap.apply(s.q), qmap.tangent(s.q, s.p))

    sc.oracle_reduce = oracle
    return sc


def _paral3(n: int) -> ReductionScenario:
    if n != 3:
        raise ValueError("paral3 is the 3-sphere scenario; n is fixed at 3")
    sphere = Sphere(3)
    quotient = Sphere(2)
    qmap = HopfMap()
    sc = ReductionScenario(
        name="paral3",
        n=3,
        base=sphere,
        bundle=CosphereBundle(sphere),
        action=QuaternionCircleAction(sphere),
        mu=np.zeros(1),
        red_basis=np.eye(1),
        quotient_base=quotient,
        quotient_bundle=CosphereBundle(quotient),
        qmap=qmap,
        section=Section(),
        quotient_section=Section(),
        expected_level_dim=4,
        expected_orbit_dim=1,
        expected_reduced_dim=3,
        description="circle on unit quaternions, quotient the Hopf two-sphere",
    )

    def oracle(s: CospherePoint) -> CospherePoint:
        # level covectors are horizontal; the Hopf derivative doubles
        # lengths there, so the image covector renormalizes to Tpi(p)/2
        pbar = qmap.tangent(s.q, s.p)
        return CospherePoint(qmap.apply(s.q), pbar / np.linalg.norm(pbar))

    sc.oracle_reduce = oracle
    return sc


def _albert_torus(n: int) -> ReductionScenario:
    if not 2 <= n <= 4:
        raise ValueError("albert_torus needs 2 <= n <= 4")
    torus = Torus(n)
    quotient = Torus(1)
    mu = np.zeros(n)
    mu[-1] = 1.0
    sc = ReductionScenario(
        name="albert_torus",
        n=n,
        base=torus,
        bundle=CosphereBundle(torus),
        action=TorusRotationAction(torus),
        mu=mu,
        red_basis=np.eye(n)[: n - 1],
        quotient_base=quotient,
        quotient_bundle=CosphereBundle(quotient),
        qmap=KeepLastCircle(),
        section=Section(),
        quotient_section=Section(),
        expected_level_dim=n,
        expected_orbit_dim=n - 1,
        expected_reduced_dim=1,
        description="full torus on itself, momentum ray of the last circle",
    )
    aux = ReductionScenario(
        name="albert_torus_kernel_zero",
        n=n,
        base=torus,
        bundle=sc.bundle,
        action=TorusRotationAction(torus, circles=list(range(n - 1))),
        mu=np.zeros(n - 1),
        red_basis=np.eye(n - 1),
        quotient_base=quotient,
        quotient_bundle=sc.quotient_bundle,
        qmap=sc.qmap,
        section=Section(),
        quotient_section=Section(),
        expected_level_dim=n,
        expected_orbit_dim=n - 1,
        expected_reduced_dim=1,
    )
    sc.aux_zero = aux

    def oracle(s: CospherePoint) -> CospherePoint:
        qb = s.q[-2:]
        # the ray level forces the covector to the last circle's angular direction
        return CospherePoint(qb.copy(), np.array([-qb[1], qb[0]]))

    sc.oracle_reduce = oracle
    return sc


def _linear_momentum(n: int) -> ReductionScenario:
    if not 1 <= n <= 3:
        raise ValueError("linear_momentum needs 1 <= n <= 3 particle pairs")
    space = Euclidean(3 * (n + 1))
    quotient = Euclidean(3 * n + 1)
    v = np.array([0.0, 0.0, 1.0])
    action = TranslationAction(space, block_dim=3)
    # kernel of the momentum value: translations orthogonal to v
    red = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    sc = ReductionScenario(
        name="linear_momentum",
        n=n,
        base=space,
        bundle=CosphereBundle(space),
        action=action,
        mu=v.copy(),
        red_basis=red,
        quotient_base=quotient,
        quotient_bundle=CosphereBundle(quotient),
        qmap=RelativeDisplacement(n, v),
        section=Section(),
        quotient_section=Section(),
        expected_level_dim=6 * (n + 1) - 3,
        expected_orbit_dim=2,
        expected_reduced_dim=6 * n + 1,
        description="diagonal translations of n+1 particles, total momentum ray",
    )
    shifts = np.stack([np.tile(r, n + 1) for r in red])
    aux = ReductionScenario(
        name="linear_momentum_kernel_zero",
        n=n,
        base=space,
        bundle=sc.bundle,
        action=AffineShiftAction(space, shifts),
        mu=np.zeros(2),
        red_basis=np.eye(2),
        quotient_base=quotient,
        quotient_bundle=sc.quotient_bundle,
        qmap=sc.qmap,
        section=Section(),
        quotient_section=Section(),
        expected_level_dim=6 * (n + 1) - 3,
        expected_orbit_dim=2,
        expected_reduced_dim=6 * n + 1,
    )
    sc.aux_zero = aux
    return sc


_BUILDERS = {
    "paral1": (_paral1, 3),
    "paral2": (_paral2, 2),
    "paral3": (_paral3, 3),
    "albert_torus": (_albert_torus, 2),
    "linear_momentum": (_linear_momentum, 1),
}

SCENARIO_DEFAULT_N = {k: v[1] for k, v in _BUILDERS.items()}


def scenario_names() -> list[str]:
    return list(_BUILDERS)


def make_scenario(name: str, n: int | None = None) -> ReductionScenario:
    if name not in _BUILDERS:
        raise ValueError(f"unknown scenario {name!r}; known: {', '.join(_BUILDERS)}")
    builder, default_n = _BUILDERS[name]
    if name == "paral3" and n is not None and n != 3:
        # fixed-size scenario: a global --n should not break it
        n = None
    return builder(default_n if n is None else n)
