"""Bands, band projections and the inequality-induced band decompositions.

Every band in the two models is a projection band fixed by its support
region, so a :class:`Band` is stored extensionally: a boolean mask over the
atoms of an atomic model, or over canonical dyadic runs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .algebra import Element, Frame, ModelSpec, coalesce, dyadic_pieces, scale, to_grid
from .errors import ModelMismatch, NotInvertibleOnBand

TAU_EQ = 1e-9
TAU_INV = 1e-12


@dataclass(frozen=True, eq=False)
class Band:
    model: ModelSpec
    mask: np.ndarray
    cuts: np.ndarray | None = None

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool)
        if self.model.is_atomic:
            if mask.shape != (self.model.dim,):
                raise ModelMismatch(f"band mask needs {self.model.dim} entries")
            cuts = None
        else:
            cuts, mask = coalesce(np.asarray(self.cuts, dtype=np.int64), mask)
            cuts = np.array(cuts)
            cuts.setflags(write=False)
        mask = np.array(mask)
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "cuts", cuts)

    @classmethod
    def atoms(cls, model: ModelSpec, indices: Iterable[int]) -> Band:
        mask = np.zeros(model.dim, dtype=bool)
        mask[list(indices)] = True
        return cls(model, mask)

    @classmethod
    def intervals(cls, model: ModelSpec, spans: Iterable[tuple[float, float]]) -> Band:
        """Dyadic band from a union of ``(lo, hi)`` intervals."""
        starts, mask, pos = [], [], 0
        for lo, hi in sorted(spans):
            s, e = to_grid(lo, model), to_grid(hi, model)
            if s < pos or e <= s:
                raise ValueError("band intervals must be disjoint and non-empty")
            if s > pos:
                starts.append(pos)
                mask.append(False)
            starts.append(s)
            mask.append(True)
            pos = e
        if pos < model.grid:
            starts.append(pos)
            mask.append(False)
        return cls(model, np.array(mask, dtype=bool), np.array(starts, dtype=np.int64))

    @classmethod
    def whole(cls, model: ModelSpec) -> Band:
        return band_generated(model.unit())

    @classmethod
    def empty(cls, model: ModelSpec) -> Band:
        return band_generated(model.zero())

    def indices(self) -> list[int]:
        """Atom indices of an atomic band."""
        return [int(i) for i in np.flatnonzero(self.mask)]

    def spans(self) -> list[tuple[float, float]]:
        """Maximal intervals of a dyadic band (atoms as unit spans if atomic)."""
        if self.model.is_atomic:
            return [(float(i), float(i + 1)) for i in self.indices()]
        g = self.model.grid
        ends = np.append(self.cuts[1:], g)
        return [(s / g, e / g) for s, e, m in zip(self.cuts, ends, self.mask) if m]

    def dyadic_intervals(self) -> list[tuple[float, float]]:
        """Region as a union of dyadic intervals (minimal dyadic tree leaves)."""
        g = self.model.grid
        return [(s / g, (s + n) / g) for s, n, i in dyadic_pieces(self.cuts, g) if self.mask[i]]

    def is_empty(self) -> bool:
        return not bool(self.mask.any())

    def is_whole(self) -> bool:
        return bool(self.mask.all())

    def issubset(self, other: Band) -> bool:
        a, b = Frame.of(self, other).take_all(self, other)
        return bool(np.all(~a | b))

    def __eq__(self, other):
        if not isinstance(other, Band) or other.model != self.model:
            return NotImplemented
        if self.model.is_atomic:
            return bool(np.array_equal(self.mask, other.mask))
        return bool(np.array_equal(self.cuts, other.cuts) and np.array_equal(self.mask, other.mask))

    def __hash__(self):
        cuts = None if self.cuts is None else self.cuts.tobytes()
        return hash((self.model, cuts, self.mask.tobytes()))

    def __repr__(self):
        if self.model.is_atomic:
            return f"Band({self.indices()})"
        return f"Band({self.spans()})"

    def __or__(self, other):
        return band_op(self, other, "join")

    def __and__(self, other):
        return band_op(self, other, "meet")

    def __invert__(self):
        return band_op(self, None, "complement")

    def __call__(self, x: Element) -> Element:
        return apply_projection(self, x)


def frame_band(frame: Frame, mask) -> Band:
    return Band(frame.model, np.asarray(mask, dtype=bool), frame.cuts)


def apply_projection(band: Band, x: Element) -> Element:
    frame = Frame.of(band, x)
    m, v = frame.take_all(band, x)
    return frame.element(np.where(m, v, 0.0))


def band_op(a: Band, b: Band | None, op: str) -> Band:
    if op == "complement":
        return Band(a.model, ~a.mask, a.cuts)
    frame = Frame.of(a, b)
    ma, mb = frame.take_all(a, b)
    if op == "join":
        return frame_band(frame, ma | mb)
    if op == "meet":
        return frame_band(frame, ma & mb)
    raise ValueError(f"unknown band operation {op!r}")


def band_generated(x: Element) -> Band:
    """Support of |x|: the smallest band containing x."""
    return Band(x.model, x.values != 0.0, x.cuts)


def band_lt(x: Element, y: Element, tol: float = TAU_EQ) -> Band:
    """B_{x<y}: the band generated by (y - x)^+, ignoring gaps of at most ``tol``."""
    d = y - x
    return Band(d.model, d.values > tol, d.cuts)


def band_le(x: Element, y: Element, tol: float = TAU_EQ) -> Band:
    return ~band_lt(y, x, tol)


def band_eq(x: Element, y: Element, tol: float = TAU_EQ) -> Band:
    return band_le(x, y, tol) & band_le(y, x, tol)


def ladder_band(r: Element, m: int) -> Band:
    """B_{(1/m)e <= r}; increases with m and exhausts the model when r >> 0."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    return band_le(scale(1.0 / m, r.model.unit()), r)


def invert_on_band(x: Element, band: Band, tol: float = TAU_INV) -> Element:
    """Return s supported on ``band`` with s * x = P(e)."""
    frame = Frame.of(band, x)
    m, v = frame.take_all(band, x)
    bad = m & (np.abs(v) < tol)
    if bad.any():
        raise NotInvertibleOnBand(f"|x| < {tol} on atoms {np.flatnonzero(bad).tolist()} of the band")
    with np.errstate(divide="ignore"):
        s = np.where(m, 1.0 / np.where(m, v, 1.0), 0.0)
    return frame.element(s)
