"""Second-order forward-mode differentiation with truncated jets.

A :class:`Jet` carries ``(value, d1, d2)``: the value of a function along
a line ``t -> x + t v`` and its first and second derivatives in ``t`` at
``t = 0``.  Components may be floats or numpy arrays (broadcast together).
"""

from __future__ import annotations

import numpy as np


class Jet:
    __slots__ = ("v", "d1", "d2")
    __array_priority__ = 100

    def __init__(self, v, d1=0.0, d2=0.0):
        self.v = np.asarray(v, dtype=np.float64) if not np.isscalar(v) else float(v)
        self.d1 = d1
        self.d2 = d2

    def __repr__(self):
        return f"Jet({self.v!r}, {self.d1!r}, {self.d2!r})"

    @staticmethod
    def lift(x) -> "Jet":
        return x if isinstance(x, Jet) else Jet(x, 0.0, 0.0)

    def __add__(self, o):
        o = Jet.lift(o)
        return Jet(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.d1, -self.d2)

    def __sub__(self, o):
        return self + (-Jet.lift(o))

    def __rsub__(self, o):
        return Jet.lift(o) - self

    def __mul__(self, o):
        o = Jet.lift(o)
        return Jet(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )

    __rmul__ = __mul__

    def reciprocal(self):
        r = 1.0 / self.v
        return _chain(self, r, -r * r, 2.0 * r * r * r)

    def __truediv__(self, o):
        return self * Jet.lift(o).reciprocal()

    def __rtruediv__(self, o):
        return Jet.lift(o) * self.reciprocal()

    def __pow__(self, p):
        if isinstance(p, Jet):
            return exp(p * log(self))
        p = float(p)
        if p == 0.0:
            return Jet(np.ones_like(self.v) if isinstance(self.v, np.ndarray) else 1.0)
        if p == 1.0:
            return self
        if p == 2.0:
            return self * self
        return _chain(self, self.v**p, p * self.v ** (p - 1), p * (p - 1) * self.v ** (p - 2))

    def __matmul__(self, o):
        if isinstance(o, Jet):
            return Jet(self.v @ o.v, self.d1 @ o.v + self.v @ o.d1, self.d2 @ o.v + 2.0 * (self.d1 @ o.d1) + self.v @ o.d2)
        o = np.asarray(o)
        return Jet(self.v @ o, _mm(self.d1, o), _mm(self.d2, o))

    def __rmatmul__(self, o):
        o = np.asarray(o)
        return Jet(o @ self.v, _mm(o, self.d1), _mm(o, self.d2))

    def __getitem__(self, idx):
        return Jet(self.v[idx], _idx(self.d1, idx, self.v), _idx(self.d2, idx, self.v))

    def __len__(self):
        return len(self.v)

    def sum(self, axis=None):
        return Jet(
            np.sum(self.v, axis=axis),
            np.sum(np.broadcast_to(self.d1, np.shape(self.v)), axis=axis),
            np.sum(np.broadcast_to(self.d2, np.shape(self.v)), axis=axis),
        )

    @property
    def shape(self):
        return np.shape(self.v)


def _mm(a, b):
    if np.isscalar(a) and a == 0.0 or np.isscalar(b) and b == 0.0:
        return 0.0
    return np.asarray(a) @ np.asarray(b)


def _idx(d, idx, like):
    if np.isscalar(d):
        return d
    return np.broadcast_to(d, np.shape(like))[idx]


def _chain(x: Jet, f0, f1, f2) -> Jet:
    """Apply a scalar function with derivatives ``f0, f1, f2`` evaluated at ``x.v``."""
    return Jet(f0, f1 * x.d1, f2 * x.d1 * x.d1 + f1 * x.d2)


def sin(x):
    if isinstance(x, Jet):
        s, c = np.sin(x.v), np.cos(x.v)
        return _chain(x, s, c, -s)
    return np.sin(x)


def cos(x):
    if isinstance(x, Jet):
        s, c = np.sin(x.v), np.cos(x.v)
        return _chain(x, c, -s, -c)
    return np.cos(x)


def exp(x):
    if isinstance(x, Jet):
        e = np.exp(x.v)
        return _chain(x, e, e, e)
    return np.exp(x)


def log(x):
    if isinstance(x, Jet):
        return _chain(x, np.log(x.v), 1.0 / x.v, -1.0 / (x.v * x.v))
    return np.log(x)


def tanh(x):
    if isinstance(x, Jet):
        t = np.tanh(x.v)
        s1 = 1.0 - t * t
        return _chain(x, t, s1, -2.0 * t * s1)
    return np.tanh(x)


def sqrt(x):
    if isinstance(x, Jet):
        r = np.sqrt(x.v)
        return _chain(x, r, 0.5 / r, -0.25 / (r * x.v))
    return np.sqrt(x)


def relu(x):
    if isinstance(x, Jet):
        on = (x.v > 0).astype(np.float64) if isinstance(x.v, np.ndarray) else float(x.v > 0)
        return _chain(x, x.v * on, on, 0.0 * on)
    return np.maximum(x, 0.0)


def derivatives(f, x, v):
    """Value, first and second directional derivative of ``f`` at ``x`` along ``v``."""
    x = np.asarray(x, dtype=np.float64)
    out = f(Jet(x, np.asarray(v, dtype=np.float64), np.zeros_like(x)))
    out = Jet.lift(out)
    return out.v, out.d1, out.d2


def central_difference(f, x, h=1e-6):
    """Central finite-difference gradient; the independent check for :func:`derivatives`."""
    x = np.asarray(x, dtype=np.float64)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (float(f(x + e)) - float(f(x - e))) / (2 * h)
    return g
