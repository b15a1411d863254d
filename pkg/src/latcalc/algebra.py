"""Concrete Dedekind complete Phi-algebra models.

Two models are supported:

* ``atomic``: R^dim with coordinatewise order and multiplication.
* ``dyadic``: finitely valued step functions on [0, 1) whose breakpoints are
  dyadic rationals k / 2**n with n <= max_depth.

Dyadic elements are stored as maximal constant runs: ``cuts`` holds the
integer start of each run on the grid of mesh 2**-max_depth and ``values``
the run values.  Adjacent runs never carry equal values, which makes the
representation canonical; the dyadic-piece view is derived on demand by
:meth:`Element.pieces`.  Two canonical elements are equal iff their arrays
are equal.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DepthExceeded, ModelMismatch

DEPTH_CAP = 24

ATOMIC = "atomic"
DYADIC = "dyadic"


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    dim: int = 0
    max_depth: int = 0

    def __post_init__(self):
        if self.kind == ATOMIC:
            if self.dim < 1:
                raise ValueError("atomic model needs dim >= 1")
        elif self.kind == DYADIC:
            if not 0 <= self.max_depth <= DEPTH_CAP:
                raise ValueError(f"dyadic max_depth must lie in [0, {DEPTH_CAP}]")
        else:
            raise ValueError(f"unknown model kind {self.kind!r}")

    @classmethod
    def atomic(cls, dim: int) -> ModelSpec:
        return cls(ATOMIC, dim=dim)

    @classmethod
    def dyadic(cls, max_depth: int) -> ModelSpec:
        return cls(DYADIC, max_depth=max_depth)

    @classmethod
    def parse(cls, text: str) -> ModelSpec:
        """Parse ``atomic:N`` or ``dyadic:DEPTH``."""
        kind, _, arg = text.partition(":")
        if kind == ATOMIC:
            return cls.atomic(int(arg))
        if kind == DYADIC:
            return cls.dyadic(int(arg))
        raise ValueError(f"bad model {text!r}; expected atomic:N or dyadic:DEPTH")

    @property
    def is_atomic(self) -> bool:
        return self.kind == ATOMIC

    @property
    def grid(self) -> int:
        """Number of finest dyadic cells (dyadic model only)."""
        return 1 << self.max_depth

    def __str__(self):
        return f"atomic:{self.dim}" if self.is_atomic else f"dyadic:{self.max_depth}"

    def zero(self) -> Element:
        return self.constant(0.0)

    def unit(self) -> Element:
        return self.constant(1.0)

    def constant(self, value: float) -> Element:
        if self.is_atomic:
            return Element(self, np.full(self.dim, float(value)))
        return Element(self, np.array([float(value)]), np.array([0], dtype=np.int64))


def _frozen(a, dtype=float) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    if dtype is float:
        a = a + 0.0  # folds -0.0 into 0.0 so equal values are bitwise equal
    a.setflags(write=False)
    return a


def coalesce(cuts: np.ndarray, values: np.ndarray):
    """Merge adjacent runs carrying bitwise-equal values."""
    if len(values) <= 1:
        return cuts, values
    keep = np.empty(len(values), dtype=bool)
    keep[0] = True
    np.not_equal(values[1:], values[:-1], out=keep[1:])
    return cuts[keep], values[keep]


def dyadic_pieces(cuts: Sequence[int], grid: int):
    """Minimal dyadic tree leaves compatible with the run starts ``cuts``.

    Yields ``(start, size, run_index)`` in grid units.
    """
    cuts = list(cuts)

    def rec(lo, size):
        i = bisect_right(cuts, lo) - 1
        nxt = cuts[i + 1] if i + 1 < len(cuts) else grid
        if nxt >= lo + size:
            yield lo, size, i
            return
        half = size // 2
        yield from rec(lo, half)
        yield from rec(lo + half, half)

    yield from rec(0, grid)


@dataclass(frozen=True, eq=False)
class Element:
    """Immutable member of a model.  Use the model helpers or
    :func:`element` to build one."""

    model: ModelSpec
    values: np.ndarray
    cuts: np.ndarray | None = None

    def __post_init__(self):
        vals = _frozen(self.values)
        if not np.all(np.isfinite(vals)):
            raise ValueError("element values must be finite")
        if self.model.is_atomic:
            if vals.shape != (self.model.dim,):
                raise ModelMismatch(f"expected {self.model.dim} coordinates, got {vals.shape}")
            object.__setattr__(self, "values", vals)
            object.__setattr__(self, "cuts", None)
            return
        cuts = np.asarray(self.cuts, dtype=np.int64)
        if cuts.shape != vals.shape or len(cuts) == 0 or cuts[0] != 0:
            raise ValueError("dyadic runs must start at 0 and match values")
        if np.any(np.diff(cuts) <= 0) or cuts[-1] >= self.model.grid:
            raise ValueError("dyadic run starts must increase inside the grid")
        cuts, vals = coalesce(cuts, vals)
        object.__setattr__(self, "values", _frozen(vals))
        object.__setattr__(self, "cuts", _frozen(cuts, np.int64))

    # -- construction -----------------------------------------------------

    @classmethod
    def from_pieces(cls, model: ModelSpec, pieces: Iterable[tuple[tuple[float, float], float]]) -> Element:
        """Build a dyadic element from ``((lo, hi), value)`` pieces covering [0, 1)."""
        if model.is_atomic:
            raise ModelMismatch("pieces only make sense in a dyadic model")
        starts, vals, pos = [], [], 0
        for (lo, hi), v in sorted(pieces, key=lambda p: p[0][0]):
            s, e = to_grid(lo, model), to_grid(hi, model)
            if s != pos or e <= s:
                raise ValueError("pieces must be sorted, disjoint and cover [0, 1)")
            starts.append(s)
            vals.append(v)
            pos = e
        if pos != model.grid:
            raise ValueError("pieces must cover [0, 1)")
        return cls(model, np.array(vals, dtype=float), np.array(starts, dtype=np.int64))

    def pieces(self) -> list[tuple[tuple[float, float], float]]:
        """Canonical dyadic pieces ``((lo, hi), value)``; atoms for atomic models."""
        if self.model.is_atomic:
            return [((float(i), float(i + 1)), float(v)) for i, v in enumerate(self.values)]
        g = self.model.grid
        return [((s / g, (s + n) / g), float(self.values[i]))
                for s, n, i in dyadic_pieces(self.cuts, g)]

    # -- comparisons and order ----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Element) or other.model != self.model:
            return NotImplemented
        if self.model.is_atomic:
            return bool(np.array_equal(self.values, other.values))
        return bool(np.array_equal(self.cuts, other.cuts)
                    and np.array_equal(self.values, other.values))

    def __hash__(self):
        cuts = None if self.cuts is None else self.cuts.tobytes()
        return hash((self.model, cuts, self.values.tobytes()))

    def __repr__(self):
        if self.model.is_atomic:
            return f"Element({[float(v) for v in self.values]})"
        return f"Element({self.model}, {self.pieces()})"

    def le(self, other: Element, tol: float = 0.0) -> bool:
        """Lattice order: self <= other + tol on every atom."""
        a, b = Frame.of(self, other).take_all(self, other)
        return bool(np.all(a <= b + tol))

    def is_zero(self) -> bool:
        return bool(np.all(self.values == 0.0))

    # -- arithmetic ---------------------------------------------------------

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> Element:
        """Apply an atom-wise array function."""
        return Element(self.model, fn(self.values), self.cuts)

    def __add__(self, other):
        return combine(self, other, "add")

    def __sub__(self, other):
        return combine(self, other, "sub")

    def __mul__(self, other):
        if isinstance(other, Element):
            return combine(self, other, "mul")
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def __or__(self, other):
        return combine(self, other, "sup")

    def __and__(self, other):
        return combine(self, other, "inf")

    def __neg__(self):
        return self.map(np.negative)

    def __abs__(self):
        return modulus(self)


def to_grid(x: float, model: ModelSpec) -> int:
    """Position of a dyadic endpoint on the model's finest grid."""
    scaled = float(x) * model.grid
    k = int(round(scaled))
    if k != scaled:
        raise DepthExceeded(f"endpoint {x!r} is not a dyadic rational of depth <= {model.max_depth}")
    if not 0 <= k <= model.grid:
        raise ValueError(f"endpoint {x!r} outside [0, 1]")
    return k


class Frame:
    """A common partition of one model: the atoms shared by a set of elements.

    Atomic frames are the coordinates themselves; dyadic frames are the
    common refinement of the participating run partitions.
    """

    __slots__ = ("model", "cuts")

    def __init__(self, model: ModelSpec, cuts: np.ndarray | None):
        self.model = model
        self.cuts = cuts

    @classmethod
    def of(cls, *items) -> Frame:
        """Common refinement of elements, bands or frames (all one model)."""
        model = items[0].model
        for it in items[1:]:
            if it.model != model:
                raise ModelMismatch(f"{it.model} differs from {model}")
        if model.is_atomic:
            return cls(model, None)
        cuts = items[0].cuts
        for it in items[1:]:
            if it.cuts is not cuts:
                cuts = np.union1d(cuts, it.cuts)
        return cls(model, cuts)

    @property
    def n(self) -> int:
        return self.model.dim if self.model.is_atomic else len(self.cuts)

    @property
    def widths(self) -> np.ndarray:
        if self.model.is_atomic:
            return np.ones(self.model.dim)
        return np.diff(np.append(self.cuts, self.model.grid)) / self.model.grid

    def refine(self, depth: int) -> Frame:
        """Common refinement with the uniform dyadic grid of the given depth."""
        if self.model.is_atomic:
            return self
        depth = min(depth, self.model.max_depth)
        fine = np.arange(0, self.model.grid, self.model.grid >> depth, dtype=np.int64)
        return Frame(self.model, np.union1d(self.cuts, fine))

    def take(self, item) -> np.ndarray:
        """Values (or mask) of an element or band on this frame's atoms."""
        if item.model != self.model:
            raise ModelMismatch(f"{item.model} differs from {self.model}")
        data = item.values if isinstance(item, Element) else item.mask
        if self.model.is_atomic or item.cuts is self.cuts:
            return data
        idx = np.searchsorted(item.cuts, self.cuts, side="right") - 1
        return data[idx]

    def take_all(self, *items):
        return [self.take(it) for it in items]

    def element(self, values) -> Element:
        return Element(self.model, np.asarray(values, dtype=float), self.cuts)


_OPS = {
    "add": np.add,
    "sub": np.subtract,
    "mul": np.multiply,
    "sup": np.maximum,
    "inf": np.minimum,
}


def combine(x: Element, y: Element, op: str) -> Element:
    """Atom-wise ``add``, ``sub``, ``mul``, ``sup`` or ``inf`` on the common refinement."""
    if not isinstance(y, Element):
        raise TypeError(f"cannot combine Element with {type(y).__name__}")
    fn = _OPS[op]
    frame = Frame.of(x, y)
    a, b = frame.take_all(x, y)
    return frame.element(fn(a, b))


def scale(t: float, x: Element) -> Element:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError("scalar must be finite")
    return x.map(lambda v: t * v)


def modulus(x: Element) -> Element:
    return x | -x


def pos_part(x: Element) -> Element:
    return x | x.model.zero()


def neg_part(x: Element) -> Element:
    return (-x) | x.model.zero()


def is_weak_order_unit(x: Element) -> bool:
    # In both models a weak order unit is exactly a strictly positive element.
    return bool(np.all(x.values > 0.0))


def strictly_less(x: Element, y: Element) -> bool:
    """``x << y``: y - x is a weak order unit."""
    return is_weak_order_unit(y - x)


def element(model: ModelSpec, data) -> Element:
    """Build an element from a list (atomic, or uniform dyadic pieces) or piece dict."""
    if isinstance(data, Element):
        if data.model != model:
            raise ModelMismatch(f"{data.model} differs from {model}")
        return data
    if isinstance(data, dict):
        return Element.from_pieces(model, [((p["i"][0], p["i"][1]), p["v"]) for p in data["pieces"]])
    vals = np.asarray(data, dtype=float)
    if model.is_atomic:
        return Element(model, vals)
    n = len(vals)
    depth = n.bit_length() - 1
    if n == 0 or (1 << depth) != n:
        raise ValueError("a dyadic list literal needs 2**k values")
    if depth > model.max_depth:
        raise DepthExceeded(f"list of {n} values needs depth {depth} > {model.max_depth}")
    step = model.grid >> depth
    return Element(model, vals, np.arange(0, model.grid, step, dtype=np.int64))
