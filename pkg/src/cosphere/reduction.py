"""Reduction maps, verification checks, and the structured report.

The reduced covector at a level point is built by pairing against
horizontal lifts: split the base tangent space into the reducing
subgroup's orbit directions and their orthogonal complement, push the
complement down through the quotient map, and solve for the unique
downstairs covector with the same pairings.  The suite then verifies the
reduction statements pointwise: the reduced contact form pulls back to a
positive multiple of the form on the level set, the multiple is the
ratio of section factors, the map is constant on orbits and scale
classes, and separates distinct classes.

Every check returns a :class:`CheckResult` with the worst residual seen,
an optional minimum positivity factor, and a pass flag; a scenario's
results are collected into a :class:`VerificationReport`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import ad
from .actions import (
    GroupAction,
    bifurcation_check,
    contact_momentum,
    cosphere_lift_and_scale,
    cosphere_lift_tangent,
    cotangent_lift,
    cotangent_lift_tangent,
    fundamental_field,
    invariance_average_residual,
    lifted_fundamental_field,
    momentum,
    momentum_gradient_rows,
    momentum_pairing,
)
from .bundles import (
    CospherePoint,
    CotangentBundle,
    CotangentPoint,
    Section,
    apply_section,
    cone_check,
    induced_contact_form,
    liouville_form,
    ray_projection,
    ray_projection_tangent,
    section_change_factor,
    section_factor,
)
from .forms import VOLUME_DIM_CAP, contact_volume, d_frame, reeb_vector
from .scenarios import ReductionScenario

__all__ = [
    "CheckResult",
    "VerificationReport",
    "kernel_algebra",
    "sample_level",
    "level_tangent",
    "reduce_covector",
    "reduce_at_zero",
    "reduce_on_ray",
    "dimension_audit",
    "injectivity_check",
    "run_scenario_suite",
    "CHECK_ORDER",
]

RANK_TOL = 1e-8
EXACT_TOL = 1e-12
AD_TOL = 1e-9
FD_TOL = 1e-6
CONSTRAINT_TOL = 1e-10
NONDEG_MARGIN = 1e-3
FACTOR_MARGIN = 1e-6
UNITY_TOL = 1e-10


@dataclass
class CheckResult:
    """Outcome of one verification check."""

    name: str
    samples: int
    max_residual: float
    min_factor: Optional[float]
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "samples": int(self.samples),
            "max_residual": float(self.max_residual),
            "min_factor": None if self.min_factor is None else float(self.min_factor),
            "pass": bool(self.passed),
            "details": self.details,
        }


@dataclass
class VerificationReport:
    """All check outcomes for one scenario."""

    scenario: dict
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
        }

    def summary_lines(self) -> list:
        name = self.scenario.get("name", "?")
        lines = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            extra = "" if c.min_factor is None else f"  min_factor={c.min_factor:.3e}"
            lines.append(
                f"[{status}] {name}.{c.name}  samples={c.samples}  max_residual={c.max_residual:.3e}{extra}"
            )
        return lines


def _skip(name: str, reason: str) -> CheckResult:
    return CheckResult(name, 0, 0.0, None, True, {"skipped": reason})


# level-set machinery --------------------------------------------------


def kernel_algebra(mu: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning the annihilated subalgebra of ``mu``."""
    mu = np.asarray(mu, dtype=float)
    k = mu.shape[0]
    if k == 0:
        return np.zeros((0, 0))
    if not mu.any():
        return np.eye(k)
    _, _, vt = np.linalg.svd(mu[None, :])
    return vt[1:]


def _level_rows(S: ReductionScenario, alpha: CotangentPoint) -> np.ndarray:
    """Ambient gradients of the level set's equality constraints."""
    rows = momentum_gradient_rows(S.action, alpha)
    if S.is_zero:
        return rows
    return S.mu_perp @ rows


def _momentum_residual(S: ReductionScenario, alpha: CotangentPoint) -> tuple[float, Optional[float]]:
    """(equality residual, positive ray coordinate or None for zero levels)."""
    if S.action.algebra_dim == 0:
        return 0.0, None
    J = momentum(S.action, alpha)
    if S.is_zero:
        return float(np.max(np.abs(J))), None
    perp = S.mu_perp @ J
    resid = float(np.max(np.abs(perp))) if perp.size else 0.0
    return resid, float(np.dot(S.mu_hat, J))


def sample_level(S: ReductionScenario, rng, max_tries: int = 60) -> CospherePoint:
    """Random point of the zero level set or of the positive momentum ray level."""
    for _ in range(max_tries):
        q = S.base.sample(rng)
        p = S.bundle.sample_covector(q, rng)
        k = S.action.algebra_dim
        if k:
            fields = np.stack(
                [fundamental_field(S.action, np.eye(k)[i], q) for i in range(k)]
            )
            C = fields if S.is_zero else S.mu_perp @ fields
            if C.shape[0]:
                sol, *_ = np.linalg.lstsq(C @ C.T, C @ p, rcond=None)
                p = p - C.T @ sol
        m = np.linalg.norm(p)
        if m < 1e-6:
            continue
        p = p / m
        if not S.is_zero:
            t = float(np.dot(S.mu_hat, momentum(S.action, CotangentPoint(q, p))))
            if abs(t) < 1e-6:
                continue
            if t < 0:
                p = -p
        s = CospherePoint(q, p)
        resid, _ = _momentum_residual(S, s.representative())
        if resid <= CONSTRAINT_TOL and S.bundle.constraint_residual(s.ambient()) <= CONSTRAINT_TOL:
            return s
    raise RuntimeError(f"could not sample the level set of {S.name}")


def level_tangent(S: ReductionScenario, s: CospherePoint, rng) -> np.ndarray:
    """Random tangent to the level set inside the cosphere bundle at ``s``."""
    x = s.ambient()
    rows = np.vstack([S.bundle.normal_matrix(x), _level_rows(S, s.representative())])
    w = rng.standard_normal(x.shape[0])
    sol, *_ = np.linalg.lstsq(rows @ rows.T, rows @ w, rcond=None)
    return w - rows.T @ sol


# reduction maps -------------------------------------------------------


def _orthonormal_columns(cols, tol: float = 1e-8) -> np.ndarray:
    out = []
    for v in cols:
        v = np.asarray(v, dtype=float).copy()
        for u in out:
            v -= u * np.dot(u, v)
        n = np.linalg.norm(v)
        if n > tol:
            out.append(v / n)
    if not out:
        return np.zeros((len(cols[0]) if cols else 0, 0))
    return np.stack(out, axis=1)


def _vertical_columns(S: ReductionScenario, q) -> np.ndarray:
    r = S.red_basis.shape[0]
    if r == 0:
        return np.zeros((S.base.ambient_dim, 0))
    return _orthonormal_columns([fundamental_field(S.action, b, q) for b in S.red_basis])


def reduce_covector(S: ReductionScenario, alpha: CotangentPoint) -> CotangentPoint:
    """Push a level covector down to the quotient by horizontal pairing."""
    q, p = alpha.q, alpha.p
    V = _vertical_columns(S, q)
    E = S.base.tangent_frame(q)
    hcols = []
    for j in range(E.shape[1]):
        h = E[:, j] - V @ (V.T @ E[:, j]) if V.shape[1] else E[:, j].copy()
        for u in hcols:
            h = h - u * np.dot(u, h)
        n = np.linalg.norm(h)
        if n > 1e-8:
            hcols.append(h / n)
    H = np.stack(hcols, axis=1)
    qbar = S.qmap.apply(q)
    Fbar = S.quotient_base.tangent_frame(qbar)
    dbar = Fbar.shape[1]
    if H.shape[1] != dbar:
        raise ValueError(
            f"horizontal space dim {H.shape[1]} != quotient dim {dbar} at a {S.name} point"
        )
    L = np.empty((dbar, dbar))
    for j in range(dbar):
        for b in range(dbar):
            L[j, b] = np.dot(Fbar[:, j], S.qmap.tangent(q, H[:, b]))
    try:
        coords = np.linalg.solve(L.T, H.T @ p)
    except np.linalg.LinAlgError as e:
        raise ValueError(f"quotient map degenerate at a {S.name} point") from e
    return CotangentPoint(qbar, Fbar @ coords)


def _reduce_point(S: ReductionScenario, s: CospherePoint) -> tuple[CospherePoint, float]:
    beta = reduce_covector(S, s.representative())
    m = float(np.linalg.norm(beta.p))
    if m < 1e-9:
        raise ValueError(f"reduced covector degenerates at a {S.name} point")
    factor = S.quotient_section.scale / (m * S.section.scale)
    return CospherePoint(beta.q, beta.p / m), factor


def reduce_at_zero(S: ReductionScenario, s: CospherePoint, membership_tol: float = 1e-8):
    """Reduced point and proportionality factor on the zero level set."""
    if not S.is_zero:
        raise ValueError(f"{S.name} reduces on a momentum ray, not at zero")
    resid, _ = _momentum_residual(S, s.representative())
    if resid > membership_tol:
        raise ValueError(f"point not on the zero level: residual {resid:.3e}")
    return _reduce_point(S, s)


def reduce_on_ray(S: ReductionScenario, s: CospherePoint, membership_tol: float = 1e-8):
    """Reduced point and proportionality factor on the positive momentum ray level."""
    if S.is_zero:
        raise ValueError(f"{S.name} reduces at zero, not on a ray")
    resid, t = _momentum_residual(S, s.representative())
    if resid > membership_tol or t is None or t <= 0:
        raise ValueError(
            f"point not on the positive momentum ray: residual {resid:.3e}, ray coordinate {t}"
        )
    return _reduce_point(S, s)


def _reduce(S: ReductionScenario, s: CospherePoint):
    return reduce_at_zero(S, s) if S.is_zero else reduce_on_ray(S, s)


def _sample_reducing_element(S: ReductionScenario, rng):
    r = S.red_basis.shape[0]
    if r == 0:
        return S.action.sample_element(rng)
    return S.action.exp(S.red_basis.T @ rng.standard_normal(r))


def _lift_to_level(S: ReductionScenario, g, s: CospherePoint) -> CospherePoint:
    s1, _ = cosphere_lift_and_scale(S.action, g, s, S.section)
    return s1


# audits ---------------------------------------------------------------


def dimension_audit(S: ReductionScenario, rng, points: int = 8) -> dict:
    """SVD-based dimension counts of level, orbit, and reduced space."""
    level_dims, orbit_dims = set(), set()
    for _ in range(points):
        s = sample_level(S, rng)
        x = s.ambient()
        rows = np.vstack([S.bundle.normal_matrix(x), _level_rows(S, s.representative())])
        sv = np.linalg.svd(rows, compute_uv=False) if rows.size else np.zeros(0)
        level_dims.add(x.shape[0] - int(np.sum(sv > RANK_TOL)))
        r = S.red_basis.shape[0]
        if r:
            cols = np.stack(
                [lifted_fundamental_field(S.action, b, x, unit_fiber=True) for b in S.red_basis],
                axis=1,
            )
            sv = np.linalg.svd(cols, compute_uv=False)
            orbit_dims.add(int(np.sum(sv > RANK_TOL)))
        else:
            orbit_dims.add(0)
    level = sorted(level_dims)
    orbit = sorted(orbit_dims)
    reduced = level[0] - orbit[0] if len(level) == 1 and len(orbit) == 1 else None
    return {
        "points": points,
        "level_dim": level[0] if len(level) == 1 else level,
        "orbit_dim": orbit[0] if len(orbit) == 1 else orbit,
        "reduced_dim": reduced,
        "expected_level_dim": S.expected_level_dim,
        "expected_orbit_dim": S.expected_orbit_dim,
        "expected_reduced_dim": S.expected_reduced_dim,
        "quotient_bundle_dim": S.quotient_bundle.intrinsic_dim,
        "constant_across_points": len(level) == 1 and len(orbit) == 1,
    }


def injectivity_check(S: ReductionScenario, rng, pairs: int = 200, tol: float = AD_TOL) -> CheckResult:
    """Same-class pairs must collapse; independent pairs must stay apart."""
    if S.is_zero:
        return _skip("injectivity", "ray-level scenarios only")
    same_worst = 0.0
    min_distinct = np.inf
    collisions = 0
    half = pairs // 2
    for _ in range(half):
        s = sample_level(S, rng)
        g = _sample_reducing_element(S, rng)
        s2 = _lift_to_level(S, g, s)
        r1, _ = _reduce(S, s)
        r2, _ = _reduce(S, s2)
        same_worst = max(same_worst, float(np.max(np.abs(r1.ambient() - r2.ambient()))))
    for _ in range(pairs - half):
        a = sample_level(S, rng)
        b = sample_level(S, rng)
        ra, _ = _reduce(S, a)
        rb, _ = _reduce(S, b)
        dist = float(np.linalg.norm(ra.ambient() - rb.ambient()))
        min_distinct = min(min_distinct, dist)
        if dist <= tol:
            collisions += 1
    return CheckResult(
        "injectivity",
        pairs,
        same_worst,
        float(min_distinct),
        same_worst <= tol and collisions == 0,
        {"distinct_collisions": collisions},
    )


# individual checks ----------------------------------------------------


def _check_quotient_map(S, rng, samples):
    worst = 0.0
    ok = True
    for _ in range(samples):
        q = S.base.sample(rng)
        g = _sample_reducing_element(S, rng)
        q2 = S.action.act(g, q)
        worst = max(worst, float(np.max(np.abs(S.qmap.apply(q2) - S.qmap.apply(q)))))
        E = S.base.tangent_frame(q)
        Dpi = np.stack([S.qmap.tangent(q, E[:, j]) for j in range(E.shape[1])], axis=1)
        rank = int(np.sum(np.linalg.svd(Dpi, compute_uv=False) > RANK_TOL))
        ok = ok and rank == S.quotient_base.intrinsic_dim
        V = _vertical_columns(S, q)
        for j in range(V.shape[1]):
            worst = max(worst, float(np.max(np.abs(S.qmap.tangent(q, V[:, j])))))
    return CheckResult("quotient_map", samples, worst, None, ok and worst <= CONSTRAINT_TOL)


def _check_section_identity(S, rng, samples, tangents):
    tq = CotangentBundle(S.base)
    theta = liouville_form(tq)
    worst = 0.0
    for sec in (S.section, Section(2.0)):
        eta = induced_contact_form(S.bundle, sec)
        for _ in range(samples // 2):
            x = tq.sample(rng)
            alpha = tq.point(x)
            alpha = CotangentPoint(alpha.q, alpha.p * np.exp(rng.uniform(-1.5, 1.5)))
            f = section_factor(sec, alpha)
            s = ray_projection(alpha)
            for _ in range(tangents):
                V = tq.random_tangent(alpha.ambient(), rng)
                lhs = float(eta(s.ambient(), ray_projection_tangent(alpha, V)))
                rhs = f * float(theta(alpha.ambient(), V))
                worst = max(worst, abs(lhs - rhs))
    return CheckResult("section_identity", samples, worst, None, worst <= AD_TOL)


def _check_section_homogeneity(S, rng, samples):
    tq = CotangentBundle(S.base)
    worst = 0.0
    for sec in (S.section, Section(2.0), Section(0.5)):
        for _ in range(samples // 3 + 1):
            alpha = tq.point(tq.sample(rng))
            f = section_factor(sec, alpha)
            for r in (0.5, 2.0, 10.0):
                fr = section_factor(sec, CotangentPoint(alpha.q, r * alpha.p))
                worst = max(worst, abs(fr * r - f))
    return CheckResult("section_homogeneity", samples, worst, None, worst <= EXACT_TOL)


def _check_section_change(S, rng, samples):
    worst = 0.0
    pairs = [(Section(1.0), Section(2.0)), (Section(2.0), Section(0.5)), (Section(1.0), Section(np.e))]
    for sigma, rho in pairs:
        eta_s = induced_contact_form(S.bundle, sigma)
        eta_r = induced_contact_form(S.bundle, rho)
        for _ in range(samples // 3 + 1):
            s = S.bundle.point(S.bundle.sample(rng))
            g = section_change_factor(sigma, rho, s)
            grev = section_change_factor(rho, sigma, s)
            alpha = CotangentPoint(s.q, s.p * np.exp(rng.uniform(-1.0, 1.0)))
            oracle = section_factor(sigma, alpha) / section_factor(rho, alpha)
            worst = max(worst, abs(g - oracle), abs(g * grev - 1.0))
            w = S.bundle.random_tangent(s.ambient(), rng)
            worst = max(worst, abs(float(eta_s(s.ambient(), w)) - g * float(eta_r(s.ambient(), w))))
    return CheckResult("section_change", samples, worst, None, worst <= EXACT_TOL)


def _volume_bundles(S):
    out = []
    if S.bundle.intrinsic_dim <= VOLUME_DIM_CAP:
        out.append((S.bundle, S.section))
    if S.quotient_bundle.intrinsic_dim <= VOLUME_DIM_CAP:
        out.append((S.quotient_bundle, S.quotient_section))
    return out

def _check_contact_nondegeneracy(S, rng, samples):
    bundles = _volume_bundles(S)
    if not bundles:
        return _skip("contact_nondegeneracy", "intrinsic dimension above the top-form cap")
    min_vol = np.inf
    per = {}
    for b, sec in bundles:
        eta = induced_contact_form(b, sec)
        local = np.inf
        for _ in range(samples):
            x = b.sample(rng)
            local = min(local, abs(contact_volume(eta, x)))
        per[b.name] = float(local)
        min_vol = min(min_vol, local)
    return CheckResult(
        "contact_nondegeneracy",
        samples * len(bundles),
        0.0,
        float(min_vol),
        min_vol >= NONDEG_MARGIN,
        {"min_abs_volume": per},
    )


def _check_reeb_defining(S, rng, samples):
    worst = 0.0
    for b, sec in ((S.bundle, S.section), (S.quotient_bundle, S.quotient_section)):
        eta = induced_contact_form(b, sec)
        for _ in range(samples // 2):
            x = b.sample(rng)
            R = reeb_vector(eta, x)
            frame = b.tangent_frame(x)
            worst = max(worst, abs(float(eta(x, R)) - 1.0))
            B = d_frame(eta, x, np.concatenate([R[:, None], frame], axis=1))
            worst = max(worst, float(np.max(np.abs(B[0, 1:]))))
    return CheckResult("reeb_defining", samples, worst, None, worst <= AD_TOL)


def _check_reeb_momentum_rate(S, rng, samples):
    k = S.action.algebra_dim
    if k == 0:
        return _skip("reeb_momentum_rate", "discrete group: no momentum components")
    eta = induced_contact_form(S.bundle, S.section)
    N = S.base.ambient_dim
    worst = 0.0
    for _ in range(samples):
        s = sample_level(S, rng)
        x = s.ambient()
        R = reeb_vector(eta, x)
        x_dual = S.bundle.retract_jvp(x, ad.seed(np.zeros(2 * N), R[:, None]), np.zeros(2 * N))[0]
        qd, pd = x_dual[:N], x_dual[N : 2 * N]
        for i in range(k):
            A, bvec = S.action.generator(np.eye(k)[i])
            fld = ad.matvec(A, qd) if A is not None else np.zeros(N)
            if bvec is not None:
                fld = fld + bvec
            rate = ad.partials(S.section.scale * ad.dot(pd, fld))[0]
            worst = max(worst, abs(float(rate)))
    return CheckResult("reeb_momentum_rate", samples, worst, None, worst <= AD_TOL)


def _check_cone(S, rng, samples, tol):
    total_pairs = 50
    points = 5
    per = total_pairs // points
    worst = 0.0
    for i in range(points):
        s = S.bundle.point(S.bundle.sample(rng))
        t = float(rng.uniform(0.4, 2.5))
        worst = max(worst, cone_check(S.bundle, S.section, s, t, rng, pairs=per))
    return CheckResult("cone_symplectomorphism", total_pairs, worst, None, worst <= tol)


def _check_action_group_law(S, rng, samples):
    worst = 0.0
    tq = CotangentBundle(S.base)
    for _ in range(samples):
        g = S.action.sample_element(rng)
        h = S.action.sample_element(rng)
        q = S.base.sample(rng)
        lhs = S.action.act(S.action.compose(g, h), q)
        rhs = S.action.act(g, S.action.act(h, q))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        e = S.action.identity()
        worst = max(worst, float(np.max(np.abs(S.action.act(e, q) - q))))
        back = S.action.act(S.action.inverse(g), S.action.act(g, q))
        worst = max(worst, float(np.max(np.abs(back - q))))
        alpha = tq.point(tq.sample(rng))
        one = cotangent_lift(S.action, S.action.compose(g, h), alpha)
        two = cotangent_lift(S.action, g, cotangent_lift(S.action, h, alpha))
        worst = max(worst, float(np.max(np.abs(one.ambient() - two.ambient()))))
    return CheckResult("action_group_law", samples, worst, None, worst <= EXACT_TOL)


def _check_action_liouville(S, rng, samples, tangents):
    tq = CotangentBundle(S.base)
    theta = liouville_form(tq)
    worst = 0.0
    for _ in range(samples):
        alpha = tq.point(tq.sample(rng))
        g = S.action.sample_element(rng)
        beta = cotangent_lift(S.action, g, alpha)
        for _ in range(tangents):
            V = tq.random_tangent(alpha.ambient(), rng)
            lhs = float(theta(beta.ambient(), cotangent_lift_tangent(S.action, g, V)))
            rhs = float(theta(alpha.ambient(), V))
            worst = max(worst, abs(lhs - rhs))
    return CheckResult("action_liouville_invariance", samples, worst, None, worst <= EXACT_TOL)


def _check_action_contact_rescaling(S, rng, samples, tangents):
    eta = induced_contact_form(S.bundle, S.section)
    worst = 0.0
    min_factor = np.inf
    for _ in range(samples):
        s = S.bundle.point(S.bundle.sample(rng))
        g = S.action.sample_element(rng)
        s1, factor = cosphere_lift_and_scale(S.action, g, s, S.section)
        min_factor = min(min_factor, factor)
        for _ in range(tangents):
            w = S.bundle.random_tangent(s.ambient(), rng)
            lhs = float(eta(s1.ambient(), cosphere_lift_tangent(S.action, g, s, w)))
            rhs = factor * float(eta(s.ambient(), w))
            worst = max(worst, abs(lhs - rhs))
    return CheckResult(
        "action_contact_rescaling",
        samples,
        worst,
        float(min_factor),
        worst <= EXACT_TOL and min_factor >= FACTOR_MARGIN,
    )


def _check_action_averaging(S, rng, samples):
    if S.action.quadrature(4) is None:
        return _skip("action_averaging", "non-compact group: no invariant average")
    worst = 0.0
    count = min(samples, 8)
    for _ in range(count):
        s = S.bundle.point(S.bundle.sample(rng))
        w = S.bundle.random_tangent(s.ambient(), rng)
        r = invariance_average_residual(S.action, S.bundle, S.section, s, w, count=64)
        worst = max(worst, r)
    return CheckResult("action_averaging", count, worst, None, worst <= AD_TOL)


def _check_momentum_relation(S, rng, samples):
    k = S.action.algebra_dim
    if k == 0:
        return _skip("momentum_relation", "discrete group: no momentum components")
    worst = 0.0
    for _ in range(samples):
        s = S.bundle.point(S.bundle.sample(rng))
        xi = S.action.sample_algebra(rng)
        jc = contact_momentum(S.action, S.bundle, S.section, s, xi)
        for r in (1.0, 0.5, 3.0):
            alpha = CotangentPoint(s.q, r * s.p)
            val = section_factor(S.section, alpha) * momentum_pairing(S.action, alpha, xi)
            worst = max(worst, abs(val - jc))
    return CheckResult("momentum_relation", samples, worst, None, worst <= AD_TOL)


def _check_momentum_rep_independence(S, rng, samples):
    k = S.action.algebra_dim
    if k == 0:
        return _skip("momentum_rep_independence", "discrete group: no momentum components")
    worst = 0.0
    for _ in range(samples):
        s = S.bundle.point(S.bundle.sample(rng))
        xi = S.action.sample_algebra(rng)
        vals = []
        for r in (0.25, 1.0, 8.0):
            alpha = CotangentPoint(s.q, r * s.p)
            vals.append(section_factor(S.section, alpha) * momentum_pairing(S.action, alpha, xi))
        worst = max(worst, max(vals) - min(vals))
    return CheckResult("momentum_rep_independence", samples, worst, None, worst <= EXACT_TOL)


def _check_bifurcation(S, rng, samples):
    k = S.action.algebra_dim
    if k == 0:
        return _skip("bifurcation_pairing", "discrete group: no momentum components")
    worst = 0.0
    consistent = True
    ranks = set()
    for _ in range(samples):
        s = S.bundle.point(S.bundle.sample(rng))
        rep = bifurcation_check(S.action, S.bundle, S.section, s)
        worst = max(worst, rep["residual"])
        consistent = consistent and rep["rank_consistent"]
        ranks.add((rep["rank"], rep["null_dim"]))
    return CheckResult(
        "bifurcation_pairing",
        samples,
        worst,
        None,
        worst <= AD_TOL and consistent,
        {"rank_profiles": sorted([list(r) for r in ranks])},
    )


def _check_level_set(S, rng, samples):
    worst = 0.0
    min_ray = np.inf
    for _ in range(samples):
        s = sample_level(S, rng)
        worst = max(worst, S.bundle.constraint_residual(s.ambient()))
        resid, t = _momentum_residual(S, s.representative())
        worst = max(worst, resid)
        if t is not None:
            min_ray = min(min_ray, t)
    mf = None if S.is_zero else float(min_ray)
    ok = worst <= CONSTRAINT_TOL and (mf is None or mf >= FACTOR_MARGIN)
    return CheckResult("level_set", samples, worst, mf, ok)


def _check_level_tangency(S, rng, samples, tangents):
    worst = 0.0
    for _ in range(samples):
        s = sample_level(S, rng)
        x = s.ambient()
        rows = np.vstack([S.bundle.normal_matrix(x), _level_rows(S, s.representative())])
        for _ in range(tangents):
            V = level_tangent(S, s, rng)
            if rows.size:
                worst = max(worst, float(np.max(np.abs(rows @ V))))
    return CheckResult("level_tangency", samples, worst, None, worst <= CONSTRAINT_TOL)


def _check_kernel_algebra(S, rng):
    if S.is_zero:
        return _skip("kernel_algebra", "zero level: the reducing subgroup is the whole group")
    B = kernel_algebra(S.mu)
    R = S.red_basis
    if B.shape != R.shape:
        return CheckResult("kernel_algebra", 1, 1.0, None, False, {"computed_dim": int(B.shape[0]), "expected_dim": int(R.shape[0])})
    # principal angles between the two row spans
    Bo = np.linalg.qr(B.T)[0]
    Ro = np.linalg.qr(R.T)[0]
    sv = np.linalg.svd(Bo.T @ Ro, compute_uv=False)
    worst = float(np.max(np.abs(sv - 1.0))) if sv.size else 0.0
    mu_res = float(np.max(np.abs(R @ S.mu)))
    worst = max(worst, mu_res)
    return CheckResult(
        "kernel_algebra",
        1,
        worst,
        None,
        worst <= CONSTRAINT_TOL,
        {"kernel_dim": int(B.shape[0])},
    )


def _check_reduction_identity(S, rng, samples, tangents, tol):
    worst = 0.0
    min_f = np.inf
    point_resid = 0.0
    N = S.base.ambient_dim
    for _ in range(samples):
        s = sample_level(S, rng)
        sbar, F = _reduce(S, s)
        min_f = min(min_f, F)
        point_resid = max(point_resid, S.quotient_bundle.constraint_residual(sbar.ambient()))
        rep = s.representative()
        for _ in range(tangents):
            V = level_tangent(S, s, rng)
            dq = V[:N]
            lhs = S.quotient_section.scale * float(np.dot(sbar.p, S.qmap.tangent(s.q, dq)))
            rhs = S.section.scale * float(np.dot(rep.p, dq))
            worst = max(worst, abs(lhs - F * rhs))
    worst = max(worst, point_resid)
    return CheckResult(
        "reduction_identity",
        samples,
        worst,
        float(min_f),
        worst <= tol and min_f >= FACTOR_MARGIN,
        {"max_image_constraint_residual": float(point_resid)},
    )


def _check_reduction_scale_invariance(S, rng, samples):
    worst = 0.0
    for _ in range(samples):
        s = sample_level(S, rng)
        base = reduce_covector(S, s.representative())
        for r in (0.5, 2.0, 10.0):
            scaled = reduce_covector(S, CotangentPoint(s.q, r * s.p))
            worst = max(
                worst,
                float(np.max(np.abs(scaled.p / r - base.p))),
                float(np.max(np.abs(scaled.q - base.q))),
            )
    return CheckResult("reduction_scale_invariance", samples, worst, None, worst <= EXACT_TOL)


def _check_reduction_well_defined(S, rng, samples, tol):
    worst = 0.0
    factor_worst = 0.0
    for _ in range(samples):
        s = sample_level(S, rng)
        r1, f1 = _reduce(S, s)
        g = _sample_reducing_element(S, rng)
        s2 = _lift_to_level(S, g, s)
        r2, f2 = _reduce(S, s2)
        worst = max(worst, float(np.max(np.abs(r1.ambient() - r2.ambient()))))
        factor_worst = max(factor_worst, abs(f1 - f2))
    worst = max(worst, factor_worst)
    return CheckResult("reduction_well_defined", samples, worst, None, worst <= tol)


def _check_reduction_factor_unity(S, rng, samples):
    if not S.factor_unity:
        return _skip("reduction_factor_unity", "factor is only forced to 1 for discrete quotients")
    worst = 0.0
    for _ in range(samples):
        s = sample_level(S, rng)
        _, F = _reduce(S, s)
        worst = max(worst, abs(F - 1.0))
    return CheckResult("reduction_factor_unity", samples, worst, None, worst <= UNITY_TOL)


def _check_reduction_oracle(S, rng, samples, tol):
    if S.oracle_reduce is None:
        return _skip("reduction_oracle", "no closed-form reduction for this scenario")
    worst = 0.0
    for _ in range(samples):
        s = sample_level(S, rng)
        got, _ = _reduce(S, s)
        want = S.oracle_reduce(s)
        worst = max(worst, float(np.max(np.abs(got.ambient() - want.ambient()))))
    return CheckResult("reduction_oracle", samples, worst, None, worst <= tol)


def _check_reduction_kernel_consistency(S, rng, samples, tol):
    if S.aux_zero is None:
        return _skip("reduction_kernel_consistency", "no kernel-subgroup zero reduction attached")
    worst = 0.0
    for _ in range(samples):
        s = sample_level(S, rng)
        a, fa = reduce_on_ray(S, s)
        b, fb = reduce_at_zero(S.aux_zero, s)
        worst = max(worst, float(np.max(np.abs(a.ambient() - b.ambient()))), abs(fa - fb))
    return CheckResult("reduction_kernel_consistency", samples, worst, None, worst <= tol)


def _check_reduction_image_contact(S, rng, samples):
    if S.quotient_bundle.intrinsic_dim > VOLUME_DIM_CAP:
        return _skip("reduction_image_contact", "reduced dimension above the top-form cap")
    eta = induced_contact_form(S.quotient_bundle, S.quotient_section)
    min_vol = np.inf
    for _ in range(samples):
        s = sample_level(S, rng)
        sbar, _ = _reduce(S, s)
        min_vol = min(min_vol, abs(contact_volume(eta, sbar.ambient())))
    return CheckResult(
        "reduction_image_contact", samples, 0.0, float(min_vol), min_vol >= NONDEG_MARGIN
    )


def _check_dimension_audit(S, rng):
    audit = dimension_audit(S, rng)
    ok = (
        audit["constant_across_points"]
        and audit["level_dim"] == S.expected_level_dim
        and audit["orbit_dim"] == S.expected_orbit_dim
        and audit["reduced_dim"] == S.expected_reduced_dim
        and audit["reduced_dim"] == S.quotient_bundle.intrinsic_dim
    )
    return CheckResult("dimension_audit", audit["points"], 0.0, None, ok, audit)


def _check_ad_fd(S, rng, spots=20):
    worst = 0.0
    ranks_ok = True
    budget = {"d_frame": 8, "reeb": 6, "qmap": spots - 14}
    for _ in range(budget["d_frame"]):
        b, sec = (S.bundle, S.section) if rng.uniform() < 0.5 else (S.quotient_bundle, S.quotient_section)
        eta = induced_contact_form(b, sec)
        x = b.sample(rng)
        cols = np.stack([b.random_tangent(x, rng, unit=True) for _ in range(3)], axis=1)
        Ba = d_frame(eta, x, cols, backend="ad")
        Bf = d_frame(eta, x, cols, backend="fd")
        worst = max(worst, float(np.max(np.abs(Ba - Bf))) / (1.0 + float(np.max(np.abs(Ba)))))
    for _ in range(budget["reeb"]):
        b, sec = (S.bundle, S.section) if rng.uniform() < 0.5 else (S.quotient_bundle, S.quotient_section)
        eta = induced_contact_form(b, sec)
        x = b.sample(rng)
        Ra = reeb_vector(eta, x, backend="ad")
        Rf = reeb_vector(eta, x, backend="fd", tol=1e-4)
        worst = max(worst, float(np.max(np.abs(Ra - Rf))) / (1.0 + float(np.max(np.abs(Ra)))))
    for _ in range(budget["qmap"]):
        q = S.base.sample(rng)
        E = S.base.tangent_frame(q)
        h = 1e-6
        hand = np.stack([S.qmap.tangent(q, E[:, j]) for j in range(E.shape[1])], axis=1)
        fd = np.stack(
            [
                (S.qmap.apply(S.base.retract(q, h * E[:, j])) - S.qmap.apply(S.base.retract(q, -h * E[:, j]))) / (2 * h)
                for j in range(E.shape[1])
            ],
            axis=1,
        )
        worst = max(worst, float(np.max(np.abs(hand - fd))) / (1.0 + float(np.max(np.abs(hand)))))
        ra = int(np.sum(np.linalg.svd(hand, compute_uv=False) > RANK_TOL))
        rf = int(np.sum(np.linalg.svd(fd, compute_uv=False) > 1e-4))
        ranks_ok = ranks_ok and ra == rf
    return CheckResult("ad_fd_consistency", spots, worst, None, worst <= FD_TOL and ranks_ok)


CHECK_ORDER = [
    "quotient_map",
    "section_identity",
    "section_homogeneity",
    "section_change",
    "contact_nondegeneracy",
    "reeb_defining",
    "reeb_momentum_rate",
    "cone_symplectomorphism",
    "action_group_law",
    "action_liouville_invariance",
    "action_contact_rescaling",
    "action_averaging",
    "momentum_relation",
    "momentum_rep_independence",
    "bifurcation_pairing",
    "level_set",
    "level_tangency",
    "kernel_algebra",
    "reduction_identity",
    "reduction_scale_invariance",
    "reduction_well_defined",
    "reduction_factor_unity",
    "reduction_oracle",
    "reduction_kernel_consistency",
    "reduction_image_contact",
    "injectivity",
    "dimension_audit",
    "ad_fd_consistency",
]


def run_scenario_suite(
    S: ReductionScenario,
    samples: int = 64,
    tangents: int = 8,
    tol: float = 1e-8,
    seed: int = 42,
) -> VerificationReport:
    """Run every verification check on one scenario with per-check seeding."""

    def rng_for(name):
        return np.random.default_rng([seed, CHECK_ORDER.index(name)])

    light = max(8, samples // 4)
    checks = [
        _check_quotient_map(S, rng_for("quotient_map"), light),
        _check_section_identity(S, rng_for("section_identity"), samples, tangents),
        _check_section_homogeneity(S, rng_for("section_homogeneity"), samples),
        _check_section_change(S, rng_for("section_change"), samples),
        _check_contact_nondegeneracy(S, rng_for("contact_nondegeneracy"), samples),
        _check_reeb_defining(S, rng_for("reeb_defining"), light),
        _check_reeb_momentum_rate(S, rng_for("reeb_momentum_rate"), light),
        _check_cone(S, rng_for("cone_symplectomorphism"), samples, tol),
        _check_action_group_law(S, rng_for("action_group_law"), samples),
        _check_action_liouville(S, rng_for("action_liouville_invariance"), light, tangents),
        _check_action_contact_rescaling(S, rng_for("action_contact_rescaling"), light, tangents),
        _check_action_averaging(S, rng_for("action_averaging"), samples),
        _check_momentum_relation(S, rng_for("momentum_relation"), samples),
        _check_momentum_rep_independence(S, rng_for("momentum_rep_independence"), samples),
        _check_bifurcation(S, rng_for("bifurcation_pairing"), light),
        _check_level_set(S, rng_for("level_set"), samples),
        _check_level_tangency(S, rng_for("level_tangency"), light, tangents),
        _check_kernel_algebra(S, rng_for("kernel_algebra")),
        _check_reduction_identity(S, rng_for("reduction_identity"), samples, tangents, tol),
        _check_reduction_scale_invariance(S, rng_for("reduction_scale_invariance"), light),
        _check_reduction_well_defined(S, rng_for("reduction_well_defined"), samples, AD_TOL),
        _check_reduction_factor_unity(S, rng_for("reduction_factor_unity"), samples),
        _check_reduction_oracle(S, rng_for("reduction_oracle"), samples, AD_TOL),
        _check_reduction_kernel_consistency(S, rng_for("reduction_kernel_consistency"), light, AD_TOL),
        _check_reduction_image_contact(S, rng_for("reduction_image_contact"), light),
        injectivity_check(S, rng_for("injectivity")),
        _check_dimension_audit(S, rng_for("dimension_audit")),
        _check_ad_fd(S, rng_for("ad_fd_consistency")),
    ]
    return VerificationReport(scenario=S.config(), checks=checks)
