"""Compile expression trees to atom-wise array functions.

Compiled functions act on arrays of shape ``(..., n)`` whose last axis runs
over the atoms of a :class:`~latcalc.algebra.Frame`.  Every node acts atom
by atom, which is why every DSL function is locally band preserving.  The
same compiled code runs on float or complex arrays; integer powers use
repeated squaring in both cases so a complex evaluation with zero imaginary
parts reproduces the real one bit for bit.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..algebra import Frame
from ..complexify import ComplexElement
from ..errors import NonPolynomialComplexHandle
from . import nodes as n

ArrayFn = Callable[[np.ndarray], np.ndarray]


def ipow(x, k: int):
    result = None
    base = x
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return result


def scalar_map(name: str) -> Callable:
    if name == "sin":
        return np.sin
    if name == "cos":
        return np.cos
    if name == "exp":
        return np.exp
    if name == "tanh":
        return np.tanh
    p = n.sqrtshift_power(name)
    if p == 1:
        return lambda t: np.sqrt(t * t + 1.0)
    return lambda t: (t * t + 1.0) ** (p / 2.0)


def compile_expr(expr, frame: Frame, complex_values: bool = False) -> ArrayFn:
    """Return ``X -> f(X)`` for arrays on ``frame``."""

    def build(node) -> ArrayFn:
        t = type(node)
        if t is n.Var:
            return lambda X: X
        if t is n.Unit:
            return lambda X: 1.0
        if t is n.ScalarLit:
            v = node.value
            return lambda X: v
        if t is n.ConstElem:
            c = node.value
            if isinstance(c, ComplexElement):
                if not complex_values:
                    raise NonPolynomialComplexHandle("complex constant in a real evaluation")
                arr = c.to_array(frame)
            else:
                arr = frame.take(c)
            return lambda X: arr
        if t is n.MapScalar:
            if complex_values:
                raise NonPolynomialComplexHandle(f"{node.name} is outside the complex polynomial subset")
            fn, ch = scalar_map(node.name), build(node.child)
            return lambda X: fn(ch(X))
        if t is n.Abs:
            _real_only(node, complex_values)
            ch = build(node.child)
            return lambda X: np.abs(ch(X))
        if t is n.Pow:
            ch, k = build(node.child), node.k
            return lambda X: ipow(ch(X), k)
        left, right = build(node.left), build(node.right)
        if t is n.Add:
            return lambda X: left(X) + right(X)
        if t is n.Sub:
            return lambda X: left(X) - right(X)
        if t is n.Mul:
            return lambda X: left(X) * right(X)
        _real_only(node, complex_values)
        if t is n.Sup:
            return lambda X: np.maximum(left(X), right(X))
        if t is n.Inf:
            return lambda X: np.minimum(left(X), right(X))
        raise TypeError(f"not an expression node: {node!r}")

    fn = build(expr)

    def run(X):
        X = np.asarray(X)
        out = fn(X)
        dtype = complex if complex_values else float
        return np.broadcast_to(np.asarray(out, dtype=dtype), X.shape).copy()

    return run


def _real_only(node, complex_values):
    if complex_values:
        raise NonPolynomialComplexHandle(f"{type(node).__name__} is not defined on complex values")
