"""Complexification E = F + iF of a real model."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Element, Frame, ModelSpec
from .errors import ModelMismatch

DEFAULT_GRID = 4096


@dataclass(frozen=True)
class ComplexElement:
    re: Element
    im: Element

    def __post_init__(self):
        if self.re.model != self.im.model:
            raise ModelMismatch("real and imaginary parts live in different models")

    @property
    def model(self) -> ModelSpec:
        return self.re.model

    @classmethod
    def real(cls, x: Element) -> ComplexElement:
        return cls(x, x.model.zero())

    @classmethod
    def from_array(cls, frame: Frame, z: np.ndarray) -> ComplexElement:
        return cls(frame.element(z.real), frame.element(z.imag))

    def to_array(self, frame: Frame) -> np.ndarray:
        return frame.take(self.re) + 1j * frame.take(self.im)

    def __add__(self, other):
        other = _lift(other)
        return ComplexElement(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = _lift(other)
        return ComplexElement(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return ComplexElement(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return ComplexElement(other * self.re, other * self.im)
        return cmul(self, _lift(other))

    __rmul__ = __mul__


def _lift(z) -> ComplexElement:
    return z if isinstance(z, ComplexElement) else ComplexElement.real(z)


def cmul(z: ComplexElement, w: ComplexElement) -> ComplexElement:
    """(a + ib)(c + id) = (ac - bd) + i(ad + bc)."""
    a, b, c, d = z.re, z.im, w.re, w.im
    return ComplexElement(a * c - b * d, a * d + b * c)


def cmodulus_grid(z: ComplexElement, k: int = DEFAULT_GRID) -> Element:
    """sup over theta_j = 2*pi*j/k of cos(theta_j) Re z + sin(theta_j) Im z.

    The angles are computed so that the grid for 2k contains the grid for k
    bitwise, making the result monotone under refinement.
    """
    if k < 4:
        raise ValueError("grid size must be at least 4")
    frame = Frame.of(z.re, z.im)
    x, y = frame.take_all(z.re, z.im)
    theta = 2.0 * np.pi * np.arange(k) / k
    best = np.full(frame.n, -np.inf)
    # chunked to bound memory for large k
    for start in range(0, k, 1024):
        th = theta[start:start + 1024, None]
        best = np.maximum(best, (np.cos(th) * x + np.sin(th) * y).max(axis=0))
    return frame.element(best)


def cmodulus(z: ComplexElement) -> Element:
    """Closed form of the grid supremum: atom-wise hypot."""
    frame = Frame.of(z.re, z.im)
    x, y = frame.take_all(z.re, z.im)
    return frame.element(np.hypot(x, y))
