"""Order intervals [a, b], (a, b) and order neighbourhoods N(c, r)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Element, Frame, is_weak_order_unit, strictly_less


@dataclass(frozen=True)
class OrderInterval:
    a: Element
    b: Element
    closed: bool = True

    def __post_init__(self):
        if not self.a.le(self.b):
            raise ValueError("order interval needs a <= b")

    @property
    def model(self):
        return self.a.model

    @property
    def nondegenerate(self) -> bool:
        """a << b, which the open interval needs to be non-empty."""
        return strictly_less(self.a, self.b)

    def contains(self, x: Element) -> bool:
        frame = Frame.of(self.a, self.b, x)
        a, b, v = frame.take_all(self.a, self.b, x)
        if self.closed:
            return bool(np.all((a <= v) & (v <= b)))
        return bool(np.all((a < v) & (v < b)))

    def sample(self, frame: Frame, rng: np.random.Generator, count: int) -> np.ndarray:
        """``count`` random points of the interval as an array on ``frame``."""
        a, b = frame.take_all(self.a, self.b)
        u = rng.random((count, frame.n))
        return a + u * (b - a)


@dataclass(frozen=True)
class Neighborhood:
    center: Element
    radius: Element
    closed: bool = False

    def __post_init__(self):
        if not is_weak_order_unit(self.radius):
            raise ValueError("neighbourhood radius must be a weak order unit")

    def contains(self, z: Element) -> bool:
        d = abs(z - self.center)
        if self.closed:
            return d.le(self.radius)
        return strictly_less(d, self.radius)

    def interval(self) -> OrderInterval:
        return OrderInterval(self.center - self.radius, self.center + self.radius, closed=self.closed)
