"""First-order forward-mode differentiation scalars.

A ``Dual`` carries a value together with the gradient of that value with
respect to a fixed tuple of active coordinates.  Arithmetic propagates the
gradient exactly (up to rounding), so derivatives of polynomial and rational
chart data carry no truncation error.  Finite differences are used only as an
independent oracle in the test suite.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence, Union

import numpy as np

Number = (int, float, np.integer, np.floating)
Scalar = Union["Dual", int, float]


class Dual:
    """Number of the form a + sum_i b_i eps_i with eps_i eps_j = 0."""

    __slots__ = ("value", "grad")

    def __init__(self, value, grad) -> None:
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)

    @staticmethod
    def constant(value, width: int) -> "Dual":
        return Dual(value, np.zeros(width))

    @staticmethod
    def seed(point: Sequence[float]) -> list["Dual"]:
        """Lift coordinates so that coordinate i carries unit derivative e_i."""
        eye = np.eye(len(point))
        return [Dual(float(x), eye[i]) for i, x in enumerate(point)]

    def __repr__(self) -> str:
        return f"Dual({self.value!r}, {self.grad.tolist()!r})"

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value + other.value, self.grad + other.grad)
        if isinstance(other, Number):
            return Dual(self.value + float(other), self.grad)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value - other.value, self.grad - other.grad)
        if isinstance(other, Number):
            return Dual(self.value - float(other), self.grad)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Number):
            return Dual(float(other) - self.value, -self.grad)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.value * other.value,
                self.value * other.grad + other.value * self.grad,
            )
        if isinstance(other, Number):
            c = float(other)
            return Dual(self.value * c, self.grad * c)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            q = self.value / other.value
            return Dual(q, (self.grad - q * other.grad) / other.value)
        if isinstance(other, Number):
            c = float(other)
            return Dual(self.value / c, self.grad / c)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Number):
            c = float(other)
            v = c / self.value
            return Dual(v, (-v / self.value) * self.grad)
        return NotImplemented

    def __neg__(self):
        return Dual(-self.value, -self.grad)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if not isinstance(exponent, (int, np.integer)):
            return NotImplemented
        n = int(exponent)
        if n < 0:
            return 1.0 / (self ** (-n))
        result = Dual.constant(1.0, self.grad.shape[0])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def value_of(x: Scalar) -> float:
    """Plain float value of a scalar that may or may not be a Dual."""
    if isinstance(x, Dual):
        return x.value
    return float(x)


def grad_of(x: Scalar, width: int) -> np.ndarray:
    """Gradient of a scalar; constants contribute a zero vector."""
    if isinstance(x, Dual):
        return x.grad
    return np.zeros(width)


def sqrt(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        r = math.sqrt(x.value)
        return Dual(r, x.grad / (2.0 * r))
    return math.sqrt(x)


def exp(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        e = math.exp(x.value)
        return Dual(e, e * x.grad)
    return math.exp(x)


def sin(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        return Dual(math.sin(x.value), math.cos(x.value) * x.grad)
    return math.sin(x)


def cos(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        return Dual(math.cos(x.value), -math.sin(x.value) * x.grad)
    return math.cos(x)


def gradient(f: Callable[[list], Scalar], point: Sequence[float]) -> np.ndarray:
    """Gradient of a scalar function of several variables at ``point``."""
    out = f(Dual.seed(point))
    return grad_of(out, len(point))
