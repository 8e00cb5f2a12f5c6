"""Second-order forward-mode scalars and finite-difference stencils.

A :class:`Jet` carries value, gradient and (optionally) Hessian with respect to
n chart coordinates.  Entries are ordinary floats in the common case but may
themselves be Jets: seeding variables whose values are Jets nests the
propagation, which is how third/fourth derivatives of composed quantities are
obtained without any symbolic machinery.

The ``fd`` half of this module is the independent cross-check backend: 4th-order
central stencils, mixed second partials by composing first-derivative stencils.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Jet",
    "variables",
    "jet_value",
    "jexp",
    "jlog",
    "jsqrt",
    "jsin",
    "jcos",
    "fd_gradient",
    "fd_hessian",
    "fd_partials",
    "FD_DEFAULT_STEP",
]

FD_DEFAULT_STEP = 1e-3

# ---------------------------------------------------------------------------
# forward-mode jets
# ---------------------------------------------------------------------------

_SCALARS = (int, float, np.integer, np.floating)


class Jet:
    """Truncated Taylor scalar: value, gradient, optional symmetric Hessian."""

    __slots__ = ("v", "g", "h")

    def __init__(self, v, g, h=None):
        self.v = v
        self.g = g
        self.h = h

    def _blank(self):
        return Jet(0.0, self.g * 0.0, None if self.h is None else self.h * 0.0)

    # -- ring operations ---------------------------------------------------

    def __add__(self, o):
        if isinstance(o, np.ndarray):
            return NotImplemented
        if isinstance(o, Jet):
            h = None
            if self.h is not None:
                h = self.h + o.h
            return Jet(self.v + o.v, self.g + o.g, h)
        return Jet(self.v + o, self.g, self.h)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.g, None if self.h is None else -self.h)

    def __sub__(self, o):
        return self + (-o if isinstance(o, Jet) else -o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, np.ndarray):
            return NotImplemented
        if isinstance(o, Jet):
            h = None
            if self.h is not None:
                h = (self.v * o.h + o.v * self.h
                     + np.outer(self.g, o.g) + np.outer(o.g, self.g))
            return Jet(self.v * o.v, self.v * o.g + o.v * self.g, h)
        return Jet(self.v * o, self.g * o, None if self.h is None else self.h * o)

    __rmul__ = __mul__

    def _reciprocal(self):
        iv = 1.0 / self.v
        d1 = -iv * iv
        if self.h is None:
            return Jet(iv, d1 * self.g, None)
        d2 = 2.0 * iv * iv * iv
        return Jet(iv, d1 * self.g, d1 * self.h + d2 * np.outer(self.g, self.g))

    def __truediv__(self, o):
        if isinstance(o, np.ndarray):
            return NotImplemented
        if isinstance(o, Jet):
            return self * o._reciprocal()
        return self * (1.0 / o)

    def __rtruediv__(self, o):
        return self._reciprocal() * o

    def __pow__(self, k):
        if isinstance(k, Jet):
            raise TypeError("jet exponents are not supported")
        if k == 0:
            return Jet(1.0, self.g * 0.0, None if self.h is None else self.h * 0.0)
        if isinstance(k, (int, np.integer)) and k > 0 and k == int(k):
            out = self
            for _ in range(int(k) - 1):
                out = out * self
            return out
        d1 = k * self.v ** (k - 1)
        d2 = k * (k - 1) * self.v ** (k - 2)
        return _chain(self, self.v ** k, d1, d2)

    def __abs__(self):
        s = 1.0 if jet_value(self.v) >= 0 else -1.0
        return self * s

    # comparisons act on values only (used by domain/positivity guards)
    def __lt__(self, o):
        return jet_value(self) < jet_value(o)

    def __gt__(self, o):
        return jet_value(self) > jet_value(o)

    def __repr__(self):
        return f"Jet({self.v!r}, grad={self.g!r})"


def _chain(u: Jet, f0, f1, f2):
    """Compose a univariate function (value f0, derivatives f1, f2) with a jet."""
    if u.h is None:
        return Jet(f0, f1 * u.g, None)
    return Jet(f0, f1 * u.g, f1 * u.h + f2 * np.outer(u.g, u.g))


def variables(p, order: int = 2):
    """Seed one Jet per coordinate of p (order 1: no Hessian block)."""
    n = len(p)
    out = []
    for i in range(n):
        g = np.zeros(n)
        g[i] = 1.0
        h = np.zeros((n, n)) if order >= 2 else None
        out.append(Jet(p[i], g, h))
    return out


def jet_value(x):
    while isinstance(x, Jet):
        x = x.v
    return float(x)


def jexp(x):
    if not isinstance(x, Jet):
        return np.exp(x)
    e = jexp(x.v)
    return _chain(x, e, e, e)


def jlog(x):
    if not isinstance(x, Jet):
        return np.log(x)
    v = jlog(x.v)
    inv = 1.0 / x.v if not isinstance(x.v, Jet) else x.v._reciprocal()
    return _chain(x, v, inv, -(inv * inv))


def jsqrt(x):
    if not isinstance(x, Jet):
        return np.sqrt(x)
    return x ** 0.5


def jsin(x):
    if not isinstance(x, Jet):
        return np.sin(x)
    s, c = jsin(x.v), jcos(x.v)
    return _chain(x, s, c, -s)


def jcos(x):
    if not isinstance(x, Jet):
        return np.cos(x)
    s, c = jsin(x.v), jcos(x.v)
    return _chain(x, c, -s, -c)


# ---------------------------------------------------------------------------
# finite differences (independent backend)
# ---------------------------------------------------------------------------

# 4th-order central first derivative: offsets and weights (divide by 12h)
_D1_OFFSETS = (-2.0, -1.0, 1.0, 2.0)
_D1_WEIGHTS = (1.0, -8.0, 8.0, -1.0)
# 4th-order central second derivative on the diagonal (divide by 12h^2)
_D2_OFFSETS = (-2.0, -1.0, 0.0, 1.0, 2.0)
_D2_WEIGHTS = (-1.0, 16.0, -30.0, 16.0, -1.0)


def _shift(p, i, d):
    q = np.array(p, dtype=float)
    q[i] += d
    return q


def fd_gradient(fn, p, h: float = FD_DEFAULT_STEP) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    n = p.size
    out = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for off, wt in zip(_D1_OFFSETS, _D1_WEIGHTS):
            acc += wt * fn(_shift(p, i, off * h))
        out[i] = acc / (12.0 * h)
    return out


def fd_hessian(fn, p, h: float = FD_DEFAULT_STEP) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    n = p.size
    out = np.zeros((n, n))
    for i in range(n):
        acc = 0.0
        for off, wt in zip(_D2_OFFSETS, _D2_WEIGHTS):
            acc += wt * fn(_shift(p, i, off * h))
        out[i, i] = acc / (12.0 * h * h)
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for oi, wi in zip(_D1_OFFSETS, _D1_WEIGHTS):
                for oj, wj in zip(_D1_OFFSETS, _D1_WEIGHTS):
                    q = np.array(p)
                    q[i] += oi * h
                    q[j] += oj * h
                    acc += wi * wj * fn(q)
            out[i, j] = out[j, i] = acc / (144.0 * h * h)
    return out


def fd_partials(fn, p, h: float = FD_DEFAULT_STEP) -> np.ndarray:
    """First partials of an array-valued pointwise function.

    Returns an array of shape fn(p).shape + (n,), last axis the derivative
    direction.  This is the workhorse for differentiating curvature-derived
    fields one extra order beyond what the jets carry.
    """
    p = np.asarray(p, dtype=float)
    n = p.size
    f0 = np.asarray(fn(p), dtype=float)
    out = np.zeros(f0.shape + (n,))
    for i in range(n):
        acc = np.zeros_like(f0)
        for off, wt in zip(_D1_OFFSETS, _D1_WEIGHTS):
            acc = acc + wt * np.asarray(fn(_shift(p, i, off * h)), dtype=float)
        out[..., i] = acc / (12.0 * h)
    return out
