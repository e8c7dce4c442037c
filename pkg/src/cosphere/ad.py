"""Forward-mode dual numbers over numpy arrays.

A ``Dual`` carries a value of shape ``S`` and a stack of directional
derivatives of shape ``S + (k,)`` for ``k`` simultaneous directions.
The helpers in this module accept plain arrays or duals so geometric
code can be written once and differentiated on demand.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Dual",
    "seed",
    "lift",
    "value",
    "partials",
    "sin",
    "cos",
    "sqrt",
    "dot",
    "norm",
    "concat",
    "pack",
    "matvec",
    "jvp",
    "fd_jvp",
]


def _as_arr(x):
    return np.asarray(x, dtype=float)


class Dual:
    """Array value plus directional derivatives along k directions."""

    __slots__ = ("val", "eps")

    # keep numpy from consuming duals elementwise; binary ops defer here
    __array_ufunc__ = None

    def __init__(self, val, eps):
        self.val = _as_arr(val)
        self.eps = _as_arr(eps)
        if self.eps.shape[:-1] != self.val.shape:
            raise ValueError(
                f"eps shape {self.eps.shape} incompatible with value shape {self.val.shape}"
            )

    @property
    def ndir(self) -> int:
        return self.eps.shape[-1]

    def _lift(self, other) -> "Dual":
        if isinstance(other, Dual):
            return other
        a = _as_arr(other)
        return Dual(a, np.zeros(a.shape + (self.ndir,)))

    def __repr__(self):
        return f"Dual(val={self.val!r}, ndir={self.ndir})"

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __add__(self, other):
        o = self._lift(other)
        return Dual(self.val + o.val, self.eps + o.eps)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Dual(self.val - o.val, self.eps - o.eps)

    def __rsub__(self, other):
        o = self._lift(other)
        return Dual(o.val - self.val, o.eps - self.eps)

    def __mul__(self, other):
        o = self._lift(other)
        return Dual(
            self.val * o.val,
            self.eps * o.val[..., None] + o.eps * self.val[..., None],
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        inv = 1.0 / o.val
        val = self.val * inv
        return Dual(val, (self.eps - o.eps * val[..., None]) * inv[..., None])

    def __rtruediv__(self, other):
        return self._lift(other).__truediv__(self)

    def __pow__(self, expo):
        if not np.isscalar(expo):
            raise TypeError("dual power expects a scalar exponent")
        val = self.val**expo
        return Dual(val, self.eps * (expo * self.val ** (expo - 1))[..., None])

    def __getitem__(self, idx):
        return Dual(self.val[idx], self.eps[idx])

    def sum(self):
        return Dual(self.val.sum(), self.eps.reshape(-1, self.ndir).sum(axis=0))


def seed(x, directions) -> Dual:
    """Dual seeded at ``x`` with columns of ``directions`` as derivative directions."""
    x = _as_arr(x)
    d = _as_arr(directions)
    if d.shape[: x.ndim] != x.shape:
        raise ValueError("directions must extend the value shape by one axis")
    return Dual(x, d)


def lift(x, ndir: int) -> Dual:
    x = _as_arr(x)
    return Dual(x, np.zeros(x.shape + (ndir,)))


def value(x):
    return x.val if isinstance(x, Dual) else _as_arr(x)


def partials(x, ndir: int | None = None):
    """Derivative stack of ``x``; zeros if ``x`` is a plain array."""
    if isinstance(x, Dual):
        return x.eps
    if ndir is None:
        raise ValueError("ndir required to take partials of a constant")
    a = _as_arr(x)
    return np.zeros(a.shape + (ndir,))


def sin(x):
    if isinstance(x, Dual):
        return Dual(np.sin(x.val), x.eps * np.cos(x.val)[..., None])
    return np.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(np.cos(x.val), -x.eps * np.sin(x.val)[..., None])
    return np.cos(x)


def sqrt(x):
    if isinstance(x, Dual):
        r = np.sqrt(x.val)
        return Dual(r, x.eps * (0.5 / r)[..., None])
    return np.sqrt(x)


def dot(a, b):
    """Euclidean pairing of two vectors, dual-aware."""
    if isinstance(a, Dual) or isinstance(b, Dual):
        if not isinstance(a, Dual):
            a = lift(a, b.ndir)
        return (a * b).sum()
    return float(np.dot(_as_arr(a), _as_arr(b)))


def norm(a):
    return sqrt(dot(a, a))


def concat(parts):
    """Concatenate 1-d pieces, lifting plain arrays if any piece is dual."""
    duals = [p for p in parts if isinstance(p, Dual)]
    if not duals:
        return np.concatenate([_as_arr(p) for p in parts])
    k = duals[0].ndir
    vals, epss = [], []
    for p in parts:
        p = p if isinstance(p, Dual) else lift(p, k)
        vals.append(p.val)
        epss.append(p.eps)
    return Dual(np.concatenate(vals), np.concatenate(epss, axis=0))


def pack(scalars):
    """Stack scalar entries into a 1-d vector, dual-aware."""
    duals = [s for s in scalars if isinstance(s, Dual)]
    if not duals:
        return np.array([float(s) for s in scalars])
    k = duals[0].ndir
    vals, epss = [], []
    for s in scalars:
        s = s if isinstance(s, Dual) else lift(s, k)
        vals.append(s.val)
        epss.append(s.eps)
    return Dual(np.array(vals), np.stack(epss, axis=0))


def matvec(A, x):
    """Matrix times vector for a constant matrix ``A``."""
    A = _as_arr(A)
    if isinstance(x, Dual):
        return Dual(A @ x.val, A @ x.eps)
    return A @ _as_arr(x)


def jvp(f, x, v):
    """Directional derivative of ``f`` at ``x`` along ``v`` (single dual direction)."""
    x = _as_arr(x)
    v = _as_arr(v)
    out = f(seed(x, v[..., None]))
    return value(out), partials(out)[..., 0]


def fd_jvp(f, x, v, h: float = 1e-6):
    """Central finite-difference counterpart of :func:`jvp`."""
    x = _as_arr(x)
    v = _as_arr(v)
    fp = _as_arr(f(x + h * v))
    fm = _as_arr(f(x - h * v))
    return (fp - fm) / (2.0 * h)
