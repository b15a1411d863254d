"""Expression trees for lattice-valued functions of one lattice variable."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from ..algebra import Element
from ..complexify import ComplexElement


@dataclass(frozen=True)
class Var:
    def __str__(self):
        return "x"


@dataclass(frozen=True)
class Unit:
    def __str__(self):
        return "e"


@dataclass(frozen=True)
class ScalarLit:
    value: float

    def __str__(self):
        return _num(self.value)


@dataclass(frozen=True)
class ConstElem:
    value: Union[Element, ComplexElement]

    def __str__(self):
        v = self.value
        if isinstance(v, ComplexElement):
            return f"<{_elem(v.re)}+i{_elem(v.im)}>"
        return _elem(v)


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sup:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Inf:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Abs:
    child: "Expr"


@dataclass(frozen=True)
class Pow:
    child: "Expr"
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("exponent must be a positive integer")


@dataclass(frozen=True)
class MapScalar:
    name: str
    child: "Expr"

    def __post_init__(self):
        if not is_map_name(self.name):
            raise ValueError(f"unknown scalar map {self.name!r}")


Expr = Union[Var, Unit, ScalarLit, ConstElem, Add, Sub, Mul, Sup, Inf, Abs, Pow, MapScalar]

BINARY = (Add, Sub, Mul, Sup, Inf)
MAP_NAMES = ("sin", "cos", "exp", "tanh", "sqrtshift")
# sqrtshift_mK(t) = (t^2 + 1)^(-K/2), K odd; closes sqrtshift under differentiation
_RSQRT = re.compile(r"sqrtshift_m(\d+)$")


def is_map_name(name: str) -> bool:
    if name in MAP_NAMES:
        return True
    m = _RSQRT.match(name)
    return bool(m) and int(m.group(1)) % 2 == 1


def sqrtshift_power(name: str) -> int:
    """Exponent p with sqrtshift-family map t -> (t^2 + 1)^(p/2)."""
    if name == "sqrtshift":
        return 1
    return -int(_RSQRT.match(name).group(1))


def sqrtshift_name(p: int) -> str:
    return "sqrtshift" if p == 1 else f"sqrtshift_m{-p}"


def children(node) -> tuple:
    if isinstance(node, BINARY):
        return (node.left, node.right)
    if isinstance(node, (Abs, Pow, MapScalar)):
        return (node.child,)
    return ()


def walk(node, path=()) -> Iterator[tuple[tuple, Expr]]:
    """Pre-order traversal yielding ``(path, node)``."""
    yield path, node
    for i, ch in enumerate(children(node)):
        yield from walk(ch, path + (i,))


def constants(node) -> list:
    return [n.value for _, n in walk(node) if isinstance(n, ConstElem)]


def _num(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") and "e" not in s else s


def _elem(x: Element) -> str:
    if x.model.is_atomic:
        return "[" + ", ".join(_num(v) for v in x.values) + "]"
    # uniform list form at the finest depth the element needs
    pieces = x.pieces()
    n = int(round(1.0 / min(hi - lo for (lo, hi), _ in pieces)))
    vals = []
    for (lo, hi), v in pieces:
        vals.extend([v] * int(round((hi - lo) * n)))
    return "[" + ", ".join(_num(v) for v in vals) + "]"


_PREC = {Add: 1, Sub: 1, Mul: 2}
_SYM = {Add: "+", Sub: "-", Mul: "*"}


def to_text(node) -> str:
    """Pretty-print so that ``parse(to_text(t)) == t``."""
    t = type(node)
    if t in _PREC:
        p = _PREC[t]
        left = to_text(node.left)
        right = to_text(node.right)
        if type(node.left) in _PREC and _PREC[type(node.left)] < p:
            left = f"({left})"
        if type(node.right) in _PREC and _PREC[type(node.right)] <= p:
            right = f"({right})"
        return f"{left} {_SYM[t]} {right}"
    if t is Sup:
        return f"sup({to_text(node.left)}, {to_text(node.right)})"
    if t is Inf:
        return f"inf({to_text(node.left)}, {to_text(node.right)})"
    if t is Abs:
        return f"abs({to_text(node.child)})"
    if t is MapScalar:
        return f"{node.name}({to_text(node.child)})"
    if t is Pow:
        base = to_text(node.child)
        if isinstance(node.child, (Add, Sub, Mul, Pow)):
            base = f"({base})"
        return f"{base}^{node.k}"
    return str(node)


def substitute(node, replacement):
    """Replace every ``Var`` in ``node`` by ``replacement``."""
    t = type(node)
    if t is Var:
        return replacement
    if t in (Add, Sub, Mul, Sup, Inf):
        return t(substitute(node.left, replacement), substitute(node.right, replacement))
    if t is Abs:
        return Abs(substitute(node.child, replacement))
    if t is Pow:
        return Pow(substitute(node.child, replacement), node.k)
    if t is MapScalar:
        return MapScalar(node.name, substitute(node.child, replacement))
    return node
