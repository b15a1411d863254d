"""Function handles: DSL expressions, registered builtins and internal wrappers.

A handle evaluates on :class:`Element` values through ``handle(x)`` and, for
batch work, compiles to an array function on a :class:`Frame`.  Handles are
immutable and safe to share.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..algebra import Element, Frame, ModelSpec
from ..bands import TAU_EQ
from ..complexify import ComplexElement
from ..errors import DomainViolation, ModelMismatch
from . import nodes as n
from .differentiate import differentiate
from .evaluate import ArrayFn, compile_expr
from .parser import parse


class FunctionHandle:
    """Common surface of every function the checks and solvers accept."""

    label: str = "?"
    #: locally band preserving by construction
    lbp: bool = True
    #: True when the handle is a DSL expression (symbolic derivative available)
    is_dsl: bool = False

    def consts(self) -> list[Element]:
        return []

    def check_model(self, model: ModelSpec) -> None:
        for c in self.consts():
            if c.model != model:
                raise ModelMismatch(f"{self.label} carries constants from {c.model}, not {model}")

    def domain_bounds(self, model: ModelSpec) -> Optional[tuple[float, float]]:
        """Atom-wise box ``(lo, hi)`` the handle is defined on, or None for all of E."""
        return None

    def frame_for(self, *items) -> Frame:
        frame = Frame.of(*items, *self.consts())
        self.check_model(frame.model)
        return frame

    def _compile(self, frame: Frame) -> ArrayFn:
        raise NotImplementedError

    def compile(self, frame: Frame) -> ArrayFn:
        self.check_model(frame.model)
        fn = self._compile(frame)
        bounds = self.domain_bounds(frame.model)
        if bounds is None:
            return fn
        lo, hi = bounds

        def guarded(X):
            X = np.asarray(X)
            if np.any(X < lo - TAU_EQ) or np.any(X > hi + TAU_EQ):
                raise DomainViolation(f"{self.label} is defined on [{lo}e, {hi}e] only")
            return fn(X)

        return guarded

    def __call__(self, x: Element) -> Element:
        frame = self.frame_for(x)
        return frame.element(self.compile(frame)(frame.take(x)))

    def derivative(self) -> Optional[FunctionHandle]:
        return None

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class DslFunction(FunctionHandle):
    is_dsl = True

    def __init__(self, expr, label: str | None = None):
        self.expr = expr
        self.label = label or n.to_text(expr)

    @classmethod
    def parse(cls, text: str, model: ModelSpec | None = None) -> DslFunction:
        return cls(parse(text, model))

    def consts(self):
        out = []
        for c in n.constants(self.expr):
            out.extend([c.re, c.im] if isinstance(c, ComplexElement) else [c])
        return out

    @property
    def is_complex(self) -> bool:
        return any(isinstance(c, ComplexElement) for c in n.constants(self.expr))

    def _compile(self, frame):
        return compile_expr(self.expr, frame)

    def compile_complex(self, frame: Frame) -> ArrayFn:
        self.check_model(frame.model)
        return compile_expr(self.expr, frame, complex_values=True)

    def evaluate_complex(self, z: ComplexElement) -> ComplexElement:
        frame = self.frame_for(z.re, z.im)
        return ComplexElement.from_array(frame, self.compile_complex(frame)(z.to_array(frame)))

    def derivative(self):
        return DslFunction(differentiate(self.expr))

    def __eq__(self, other):
        return isinstance(other, DslFunction) and other.expr == self.expr

    def __hash__(self):
        return hash(self.expr)


@dataclass(frozen=True)
class _BuiltinSpec:
    name: str
    rule: Callable[[np.ndarray], np.ndarray]
    lbp: bool
    description: str
    dims: tuple[int, Optional[int]]  # (min, max) atomic dimension
    box: Optional[tuple[float, float]] = None


def _swizzle_affine(X):
    Y = X.copy()
    Y[..., 1] = 1.0 - X[..., 0]
    return Y


def _first_square(X):
    Y = X.copy()
    Y[..., 1] = X[..., 0] * X[..., 0]
    return Y


def _kn_threshold(X):
    k = np.arange(1, X.shape[-1] + 1)
    # k_n vanishes below 1/(2n), equals 1 above 1/n, linear in between
    return np.clip(2.0 * k * X - 1.0, 0.0, 1.0)


def _thin_sqrt(X):
    Y = np.zeros_like(X)
    Y[..., 0] = np.sqrt(np.abs(X[..., 0])) * (X[..., 1] == 0.0)
    return Y


def _coord_sign(X):
    Y = X.copy()
    Y[..., 0] = np.sign(X[..., 0])
    return Y


BUILTINS: dict[str, _BuiltinSpec] = {
    s.name: s for s in [
        _BuiltinSpec("swizzle_affine", _swizzle_affine, False,
                     "(x1, x2, ...) -> (x1, 1 - x1, ...); order bounded, extremum not attained",
                     (2, None), (0.0, 1.0)),
        _BuiltinSpec("first_square", _first_square, False,
                     "(x1, x2, ...) -> (x1, x1^2, ...); skips the value (1/2, 1/2)",
                     (2, None), (0.0, 1.0)),
        _BuiltinSpec("kn_threshold", _kn_threshold, True,
                     "coordinatewise ramps k_n: 0 below 1/(2n), 1 above 1/n",
                     (1, None)),
        _BuiltinSpec("thin_sqrt", _thin_sqrt, False,
                     "(x1, x2) -> (sqrt|x1| [x2 = 0], 0); order but not super order differentiable at 0",
                     (2, 2)),
        _BuiltinSpec("coord_sign", _coord_sign, True,
                     "(x1, x2, ...) -> (sign x1, x2, ...); jumps at x1 = 0",
                     (1, None)),
    ]
}


class BuiltinFunction(FunctionHandle):
    def __init__(self, name: str):
        if name not in BUILTINS:
            raise KeyError(f"unknown builtin {name!r}; known: {sorted(BUILTINS)}")
        self.spec = BUILTINS[name]
        self.label = name
        self.lbp = self.spec.lbp

    def check_model(self, model):
        lo, hi = self.spec.dims
        if not model.is_atomic or model.dim < lo or (hi is not None and model.dim > hi):
            raise ModelMismatch(f"builtin {self.label} needs an atomic model of dimension "
                                f"{lo}{'' if hi == lo else '+' if hi is None else f'..{hi}'}")

    def domain_bounds(self, model):
        return self.spec.box

    def _compile(self, frame):
        rule = self.spec.rule

        def run(X):
            X = np.asarray(X, dtype=float)
            return rule(X)

        return run

    def __eq__(self, other):
        return isinstance(other, BuiltinFunction) and other.label == self.label

    def __hash__(self):
        return hash(("builtin", self.label))


class ArrayFunction(FunctionHandle):
    """Handle built from a frame-level array function (internal constructions)."""

    def __init__(self, label: str, factory: Callable[[Frame], ArrayFn], consts=(),
                 derivative: FunctionHandle | None = None, lbp: bool = True):
        self.label = label
        self._factory = factory
        self._consts = list(consts)
        self._derivative = derivative
        self.lbp = lbp

    def consts(self):
        return self._consts

    def _compile(self, frame):
        return self._factory(frame)

    def derivative(self):
        return self._derivative


def handle_from_spec(spec: dict, model: ModelSpec) -> FunctionHandle:
    """``{"dsl": text}`` or ``{"builtin": name}`` as found in problem files."""
    if "dsl" in spec:
        return DslFunction.parse(spec["dsl"], model)
    if "builtin" in spec:
        return BuiltinFunction(spec["builtin"])
    raise ValueError(f"function spec needs 'dsl' or 'builtin': {spec!r}")


def complex_polynomial(coeffs: list[ComplexElement | Element]) -> DslFunction:
    """The handle z -> sum_k c_k z^k with element coefficients."""
    if not coeffs:
        raise ValueError("need at least one coefficient")
    terms = []
    for k, c in enumerate(coeffs):
        term = n.ConstElem(c)
        if k >= 1:
            term = n.Mul(term, n.Var() if k == 1 else n.Pow(n.Var(), k))
        terms.append(term)
    expr = terms[0]
    for t in terms[1:]:
        expr = n.Add(expr, t)
    return DslFunction(expr, label="complex polynomial")
