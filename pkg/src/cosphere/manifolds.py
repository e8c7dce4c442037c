"""Embedded manifolds with charts given by explicit retractions.

Every manifold here lives in an ambient Euclidean space and is cut out by
quadratic (or empty) constraints whose gradient fields are linear in
position.  That linearity is what lets the retraction derivatives in
``retract_jvp`` stay in closed form, so exterior derivatives of forms can
be taken through a single layer of forward-mode duals.

Conventions:
  * points and tangents are 1-d numpy arrays in the ambient space;
  * ``retract(q, u)`` maps a tangent displacement ``u`` at ``q`` back to
    the manifold, with ``retract(q, 0) = q`` and derivative ``id`` at 0;
  * ``retract_jvp(q, u, v)`` additionally returns the derivative of the
    retraction in the displacement direction ``v``; ``u`` may be a
    :class:`~cosphere.ad.Dual` so charts can be differentiated.
"""

from __future__ import annotations

import numpy as np

from . import ad

__all__ = ["Manifold", "Euclidean", "Sphere", "Torus", "ProductManifold"]

POINT_TOL = 1e-10
TANGENT_TOL = 1e-10
FRAME_RANK_TOL = 1e-9


class Manifold:
    """Base class: an embedded submanifold of R^ambient_dim."""

    ambient_dim: int
    intrinsic_dim: int
    name: str

    def constraint(self, x):
        """Constraint residual vector; zero exactly on the manifold."""
        raise NotImplementedError

    def normal_vectors(self, x):
        """Gradients of the constraint entries at ``x``, as a list.

        Each entry is linear in its argument; applying the same function to
        a tangent direction gives the directional derivative of that
        normal field.
        """
        raise NotImplementedError

    def retract_jvp(self, q, u, v):
        """Retraction value and its derivative along displacement ``v``."""
        raise NotImplementedError

    def sample(self, rng) -> np.ndarray:
        raise NotImplementedError

    # shared machinery -------------------------------------------------

    def retract(self, q, u):
        return self.retract_jvp(q, u, np.zeros(self.ambient_dim))[0]

    def constraint_residual(self, x) -> float:
        c = self.constraint(x)
        c = ad.value(c)
        return float(np.max(np.abs(c))) if c.size else 0.0

    def check_point(self, x, tol: float = POINT_TOL):
        r = self.constraint_residual(x)
        if r > tol:
            raise ValueError(f"point off {self.name}: constraint residual {r:.3e} > {tol:.1e}")

    def normal_matrix(self, x) -> np.ndarray:
        rows = self.normal_vectors(x)
        if not rows:
            return np.zeros((0, self.ambient_dim))
        return np.stack([ad.value(r) for r in rows])

    def project_tangent(self, q, w, check: bool = True) -> np.ndarray:
        """Orthogonal projection of ``w`` onto the tangent space at ``q``."""
        if check:
            self.check_point(q, tol=1e-8)
        w = np.asarray(w, dtype=float)
        R = self.normal_matrix(q)
        if R.shape[0] == 0:
            return w.copy()
        sol = np.linalg.solve(R @ R.T, R @ w)
        return w - R.T @ sol

    def check_tangent(self, q, v, tol: float = TANGENT_TOL):
        R = self.normal_matrix(q)
        if R.shape[0]:
            r = float(np.max(np.abs(R @ np.asarray(v, dtype=float))))
            if r > tol:
                raise ValueError(f"vector not tangent to {self.name}: residual {r:.3e}")

    def tangent_frame(self, q) -> np.ndarray:
        """Orthonormal tangent basis at ``q``, columns, deterministic order."""
        N, d = self.ambient_dim, self.intrinsic_dim
        cols = []
        for i in range(N):
            v = self.project_tangent(q, np.eye(N)[i], check=False)
            for c in cols:
                v = v - c * np.dot(c, v)
            n = np.linalg.norm(v)
            if n > FRAME_RANK_TOL:
                cols.append(v / n)
            if len(cols) == d:
                break
        if len(cols) != d:
            raise ValueError(f"tangent frame rank {len(cols)} != intrinsic dim {d} on {self.name}")
        return np.stack(cols, axis=1)

    def random_tangent(self, q, rng, unit: bool = False) -> np.ndarray:
        v = self.project_tangent(q, rng.standard_normal(self.ambient_dim), check=False)
        if unit:
            n = np.linalg.norm(v)
            if n < 1e-9:
                return self.random_tangent(q, rng, unit=True)
            v = v / n
        return v

    def __repr__(self):
        return self.name


class Euclidean(Manifold):
    """Flat R^n; retraction is vector addition."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("Euclidean dimension must be >= 1")
        self.ambient_dim = n
        self.intrinsic_dim = n
        self.name = f"R^{n}"

    def constraint(self, x):
        return np.zeros(0)

    def normal_vectors(self, x):
        return []

    def retract_jvp(self, q, u, v):
        return q + u, np.asarray(v, dtype=float) + np.zeros(self.ambient_dim)

    def sample(self, rng):
        return rng.standard_normal(self.ambient_dim)


class Sphere(Manifold):
    """Unit sphere S^n in R^{n+1}; retraction adds then renormalizes."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("sphere dimension must be >= 1")
        self.ambient_dim = n + 1
        self.intrinsic_dim = n
        self.name = f"S^{n}"

    def constraint(self, x):
        return ad.pack([ad.dot(x, x) - 1.0])

    def normal_vectors(self, x):
        return [2.0 * x if isinstance(x, ad.Dual) else 2.0 * np.asarray(x, dtype=float)]

    def retract_jvp(self, q, u, v):
        y = q + u
        m = ad.norm(y)
        x = y / m
        dy = np.asarray(v, dtype=float)
        dx = dy / m - y * (ad.dot(y, dy) / m**3)
        return x, dx

    def sample(self, rng):
        while True:
            x = rng.standard_normal(self.ambient_dim)
            n = np.linalg.norm(x)
            if n > 1e-6:
                return x / n


class Torus(Manifold):
    """Product of n unit circles, one (cos, sin) pair per circle in R^{2n}.

    The retraction advances each circle by the angle read off the
    tangential component of the displacement, so it is a group
    translation in angle coordinates.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("torus factor count must be >= 1")
        self.n_circles = n
        self.ambient_dim = 2 * n
        self.intrinsic_dim = n
        self.name = f"T^{n}"

    def constraint(self, x):
        ents = []
        for i in range(self.n_circles):
            b = x[2 * i : 2 * i + 2]
            ents.append(ad.dot(b, b) - 1.0)
        return ad.pack(ents)

    def normal_vectors(self, x):
        rows = []
        dual = isinstance(x, ad.Dual)
        for i in range(self.n_circles):
            b = 2.0 * x[2 * i : 2 * i + 2]
            before = np.zeros(2 * i)
            after = np.zeros(self.ambient_dim - 2 * i - 2)
            if dual:
                rows.append(ad.concat([before, b, after]))
            else:
                r = np.zeros(self.ambient_dim)
                r[2 * i : 2 * i + 2] = b
                rows.append(r)
        return rows

    def retract_jvp(self, q, u, v):
        xs, dxs = [], []
        v = np.asarray(v, dtype=float)
        for i in range(self.n_circles):
            sl = slice(2 * i, 2 * i + 2)
            qi = np.asarray(q[sl], dtype=float)
            rot = np.array([-qi[1], qi[0]])
            t = ad.dot(u[sl], rot)
            s = float(np.dot(v[sl], rot))
            ct, st = ad.cos(t), ad.sin(t)
            x0 = ct * qi[0] - st * qi[1]
            x1 = st * qi[0] + ct * qi[1]
            xs.append(ad.pack([x0, x1]))
            # d/ds of the rotated point: s times the quarter-turn of (x0, x1)
            dxs.append(ad.pack([-x1 * s, x0 * s]))
        return ad.concat(xs), ad.concat(dxs)

    def sample(self, rng):
        ang = rng.uniform(0.0, 2.0 * np.pi, size=self.n_circles)
        out = np.empty(self.ambient_dim)
        out[0::2] = np.cos(ang)
        out[1::2] = np.sin(ang)
        return out


class ProductManifold(Manifold):
    """Cartesian product embedded block-diagonally; all operations split."""

    def __init__(self, factors):
        if not factors:
            raise ValueError("product needs at least one factor")
        self.factors = list(factors)
        self.offsets = []
        off = 0
        for f in self.factors:
            self.offsets.append(off)
            off += f.ambient_dim
        self.ambient_dim = off
        self.intrinsic_dim = sum(f.intrinsic_dim for f in self.factors)
        self.name = " x ".join(f.name for f in self.factors)

    def _blocks(self, x):
        return [
            x[o : o + f.ambient_dim] for o, f in zip(self.offsets, self.factors)
        ]

    def constraint(self, x):
        return ad.concat([f.constraint(b) for f, b in zip(self.factors, self._blocks(x))])

    def normal_vectors(self, x):
        rows = []
        dual = isinstance(x, ad.Dual)
        for o, f, b in zip(self.offsets, self.factors, self._blocks(x)):
            before = np.zeros(o)
            after = np.zeros(self.ambient_dim - o - f.ambient_dim)
            for r in f.normal_vectors(b):
                if dual or isinstance(r, ad.Dual):
                    rows.append(ad.concat([before, r, after]))
                else:
                    full = np.zeros(self.ambient_dim)
                    full[o : o + f.ambient_dim] = r
                    rows.append(full)
        return rows

    def retract_jvp(self, q, u, v):
        xs, dxs = [], []
        for o, f in zip(self.offsets, self.factors):
            sl = slice(o, o + f.ambient_dim)
            x, dx = f.retract_jvp(q[sl], u[sl], np.asarray(v, dtype=float)[sl])
            xs.append(x)
            dxs.append(dx)
        return ad.concat(xs), ad.concat(dxs)

    def sample(self, rng):
        return np.concatenate([f.sample(rng) for f in self.factors])
