"""Group structure, left-invariant frame, and exact second-order jets.

The ambient space is R^3 with coordinates (x, y, t) and the polarized group
product

    (x, y, t) o (x', y', t') = (x + x', y + y', t + t' + (x y' - x' y) / 2).

Left translation preserves the frame

    X1 = d/dx - (y/2) d/dt,   X2 = d/dy + (x/2) d/dt,   T = d/dt,

whose single nontrivial commutator is [X1, X2] = T.  Everything downstream
(surface frames, curvature, variation integrands) consumes first and second
derivatives of scalar fields, so fields are built from jet arithmetic:
coordinates, constants, +, *, /, powers, exp, trig, and the flat exponential
step used by smooth cutoffs all propagate value, gradient, and Hessian
exactly (no truncation beyond double rounding).  Finite differences are
never used here; they exist only as an independent oracle in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "Point",
    "IDENTITY",
    "group_mul",
    "group_inverse",
    "dilation",
    "Jet",
    "jet_exp",
    "jet_sqrt",
    "jet_sin",
    "jet_cos",
    "jet_abs",
    "flat_exp",
    "smooth_step",
    "ScalarJet",
    "ScalarField",
    "frame_derivative",
    "frame_second",
    "FRAME_NAMES",
]


@dataclass(frozen=True)
class Point:
    """A group element in exponential coordinates (x, y, t)."""

    x: float
    y: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.t)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y}, {self.t})")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.t)


IDENTITY = Point(0.0, 0.0, 0.0)


def group_mul(g: Point, h: Point) -> Point:
    """Group product g o h."""
    return Point(g.x + h.x, g.y + h.y, g.t + h.t + 0.5 * (g.x * h.y - h.x * g.y))


def group_inverse(g: Point) -> Point:
    """Group inverse; g o group_inverse(g) is the identity."""
    return Point(-g.x, -g.y, -g.t)


def dilation(lam: float, g: Point) -> Point:
    """Anisotropic scaling (x, y, t) -> (lam x, lam y, lam^2 t) for lam > 0."""
    if not lam > 0:
        raise ValueError(f"dilation parameter must be positive, got {lam}")
    return Point(lam * g.x, lam * g.y, lam * lam * g.t)


class Jet:
    """Value, gradient, and Hessian of a scalar expression in n variables.

    ``val`` carries the batch shape of the evaluation (a scalar or a 1-D
    array of samples); ``grad`` prepends an axis of length n and ``hess``
    two.  Arithmetic with other jets or with plain scalars/arrays (treated
    as constants) propagates all three orders exactly.
    """

    __slots__ = ("val", "grad", "hess")

    # keep numpy from absorbing reflected operators on ndarray <op> Jet
    __array_ufunc__ = None

    def __init__(self, val, grad, hess):
        self.val = val
        self.grad = grad
        self.hess = hess

    @property
    def nvars(self) -> int:
        return self.grad.shape[0]

    @classmethod
    def variable(cls, values, index: int, nvars: int) -> "Jet":
        v = np.asarray(values, dtype=float)
        g = np.zeros((nvars,) + v.shape)
        g[index] = 1.0
        h = np.zeros((nvars, nvars) + v.shape)
        return cls(v, g, h)

    @classmethod
    def constant(cls, value, nvars: int) -> "Jet":
        v = np.asarray(value, dtype=float)
        return cls(v, np.zeros((nvars,) + v.shape), np.zeros((nvars, nvars) + v.shape))

    def __repr__(self):
        return f"Jet(val={self.val!r})"

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val + other.val, self.grad + other.grad, self.hess + other.hess)
        return Jet(self.val + other, self.grad, self.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val - other.val, self.grad - other.grad, self.hess - other.hess)
        return Jet(self.val - other, self.grad, self.hess)

    def __rsub__(self, other):
        return Jet(other - self.val, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, Jet):
            g = self.grad * other.val + other.grad * self.val
            h = (
                self.hess * other.val
                + other.hess * self.val
                + self.grad[:, None] * other.grad[None, :]
                + other.grad[:, None] * self.grad[None, :]
            )
            return Jet(self.val * other.val, g, h)
        return Jet(self.val * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            q = self.val / other.val
            g = (self.grad - q * other.grad) / other.val
            h = (
                self.hess
                - q * other.hess
                - g[:, None] * other.grad[None, :]
                - other.grad[:, None] * g[None, :]
            ) / other.val
            return Jet(q, g, h)
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        inv = _chain(self, 1.0 / self.val, -1.0 / self.val**2, 2.0 / self.val**3)
        return inv * other

    def __pow__(self, expo):
        if isinstance(expo, float) and expo.is_integer():
            expo = int(expo)
        if isinstance(expo, int):
            if expo == 0:
                return Jet.constant(np.ones_like(np.asarray(self.val, dtype=float)), self.nvars)
            if expo == 1:
                return self
            v = self.val
            return _chain(
                self,
                np.power(v, expo),
                expo * np.power(v, expo - 1),
                expo * (expo - 1) * np.power(v, expo - 2) if expo != 1 else np.zeros_like(v),
            )
        v = self.val
        f0 = np.power(v, expo)
        return _chain(self, f0, expo * f0 / v, expo * (expo - 1) * f0 / (v * v))


def _chain(u: Jet, f0, f1, f2) -> Jet:
    """Compose a scalar function (value f0, derivatives f1, f2) with a jet."""
    g = f1 * u.grad
    h = f1 * u.hess + f2 * (u.grad[:, None] * u.grad[None, :])
    return Jet(f0, g, h)


def jet_exp(u: Jet) -> Jet:
    e = np.exp(u.val)
    return _chain(u, e, e, e)


def jet_sqrt(u: Jet) -> Jet:
    s = np.sqrt(u.val)
    return _chain(u, s, 0.5 / s, -0.25 / (s * u.val))


def jet_sin(u: Jet) -> Jet:
    s, c = np.sin(u.val), np.cos(u.val)
    return _chain(u, s, c, -s)


def jet_cos(u: Jet) -> Jet:
    s, c = np.sin(u.val), np.cos(u.val)
    return _chain(u, c, -s, -c)


def jet_abs(u: Jet) -> Jet:
    """|u|, with sign 0 at the kink; safe under flat compositions only."""
    s = np.sign(u.val)
    return Jet(np.abs(u.val), s * u.grad, s * u.hess)


# Below this threshold exp(-1/t) underflows to exactly 0.0 in doubles, so the
# masked branch introduces no error while keeping 1/t powers finite.
_FLAT_EXP_TINY = 1e-8


def flat_exp(u: Jet) -> Jet:
    """exp(-1/u) for u > 0, continued by zero; smooth with all-zero jets at 0."""
    t = np.asarray(u.val, dtype=float)
    pos = t > _FLAT_EXP_TINY
    ts = np.where(pos, t, 1.0)
    e = np.where(pos, np.exp(-1.0 / ts), 0.0)
    d1 = e / ts**2
    d2 = e * (1.0 / ts**4 - 2.0 / ts**3)
    return _chain(u, e, d1, d2)


def smooth_step(u: Jet) -> Jet:
    """Smooth profile equal to 1 for u <= 1 and 0 for u >= 2.

    Built as E(2 - u) / (E(2 - u) + E(u - 1)) with E the flat exponential,
    so every derivative vanishes at both plateau edges.
    """
    n = flat_exp(2.0 - u)
    return n / (n + flat_exp(u - 1.0))


@dataclass(frozen=True)
class ScalarJet:
    """Snapshot of a field at a point: value, Euclidean gradient, Hessian.

    ``grad`` has shape (3,) ordered (d/dx, d/dy, d/dt); ``hess`` is the
    symmetric (3, 3) matrix of second coordinate derivatives.
    """

    value: float
    grad: np.ndarray
    hess: np.ndarray


class ScalarField:
    """Scalar field defined by a jet-arithmetic rule of ``nvars`` arguments.

    The rule receives one Jet per variable and must combine them with jet
    operations, so evaluation produces exact derivatives.  Fields compose:
    calling a field on jets returns the jet of the composite.
    """

    __slots__ = ("rule", "nvars")

    def __init__(self, rule: Callable[..., Jet], nvars: int = 3):
        self.rule = rule
        self.nvars = int(nvars)

    def __call__(self, *args: Jet) -> Jet:
        out = self.rule(*args)
        if not isinstance(out, Jet):  # constant rule
            ref = args[0]
            return Jet.constant(np.broadcast_to(float(out), np.shape(ref.val)).copy(), ref.nvars)
        return out

    def jet(self, *coords) -> Jet:
        if len(coords) != self.nvars:
            raise ValueError(f"field takes {self.nvars} coordinates, got {len(coords)}")
        arrays = np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in coords])
        jets = [Jet.variable(a, i, self.nvars) for i, a in enumerate(arrays)]
        return self(*jets)

    def value(self, *coords):
        return self.jet(*coords).val

    def at(self, g: Point) -> ScalarJet:
        if self.nvars != 3:
            raise ValueError("point evaluation requires a field of the three ambient coordinates")
        j = self.jet(g.x, g.y, g.t)
        return ScalarJet(float(j.val), np.array(j.grad, dtype=float), np.array(j.hess, dtype=float))


FRAME_NAMES = ("X1", "X2", "T")


def _frame_coefficients(which: str, g: Point) -> np.ndarray:
    if which == "X1":
        return np.array([1.0, 0.0, -0.5 * g.y])
    if which == "X2":
        return np.array([0.0, 1.0, 0.5 * g.x])
    if which == "T":
        return np.array([0.0, 0.0, 1.0])
    raise ValueError(f"unknown frame direction {which!r}, expected one of {FRAME_NAMES}")


def frame_derivative(f: ScalarField, g: Point, which: str) -> float:
    """Derivative of f at g along X1, X2, or T."""
    j = f.at(g)
    return float(_frame_coefficients(which, g) @ j.grad)


def frame_second(f: ScalarField, g: Point, first: str, second: str) -> float:
    """Iterated frame derivative (first applied after second), e.g. X1(X2 f).

    The frame coefficients depend on the point, so beyond the Hessian
    contraction the derivative of the inner t-coefficient enters: the
    t-coefficient of X1 is -y/2 and of X2 is x/2.
    """
    j = f.at(g)
    v = _frame_coefficients(first, g)
    w = _frame_coefficients(second, g)
    out = float(v @ j.hess @ w)
    if second == "X1":
        out += -0.5 * v[1] * j.grad[2]
    elif second == "X2":
        out += 0.5 * v[0] * j.grad[2]
    return out
