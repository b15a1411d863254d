"""Symbolic differentiation with sum, product and atom-wise chain rules."""
from __future__ import annotations

from ..errors import NonSmoothNode
from . import nodes as n

ZERO = n.ScalarLit(0.0)
ONE = n.ScalarLit(1.0)


def _is(node, value: float) -> bool:
    return isinstance(node, n.ScalarLit) and node.value == value


def add(a, b):
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    if isinstance(a, n.ScalarLit) and isinstance(b, n.ScalarLit):
        return n.ScalarLit(a.value + b.value)
    return n.Add(a, b)


def sub(a, b):
    if _is(b, 0.0):
        return a
    if isinstance(a, n.ScalarLit) and isinstance(b, n.ScalarLit):
        return n.ScalarLit(a.value - b.value)
    if _is(a, 0.0):
        return mul(n.ScalarLit(-1.0), b)
    return n.Sub(a, b)


def mul(a, b):
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    # e is the multiplicative unit
    if _is(a, 1.0) or isinstance(a, n.Unit):
        return b
    if _is(b, 1.0) or isinstance(b, n.Unit):
        return a
    if isinstance(a, n.ScalarLit) and isinstance(b, n.ScalarLit):
        return n.ScalarLit(a.value * b.value)
    return n.Mul(a, b)


def power(a, k: int):
    return a if k == 1 else n.Pow(a, k)


def _map_derivative(name: str, u):
    """Derivative of the scalar map evaluated at ``u``."""
    if name == "sin":
        return n.MapScalar("cos", u)
    if name == "cos":
        return mul(n.ScalarLit(-1.0), n.MapScalar("sin", u))
    if name == "exp":
        return n.MapScalar("exp", u)
    if name == "tanh":
        return sub(ONE, n.Pow(n.MapScalar("tanh", u), 2))
    # d/dt (t^2 + 1)^(p/2) = p t (t^2 + 1)^((p - 2)/2)
    p = n.sqrtshift_power(name)
    return mul(n.ScalarLit(float(p)), mul(u, n.MapScalar(n.sqrtshift_name(p - 2), u)))


def differentiate(expr, _path=()):
    """Return the derivative tree of a smooth expression.

    Raises :class:`NonSmoothNode` for ``abs``, ``sup`` and ``inf``.
    """
    t = type(expr)
    if t is n.Var:
        return n.Unit()
    if t in (n.Unit, n.ScalarLit, n.ConstElem):
        return ZERO
    if t in (n.Abs, n.Sup, n.Inf):
        raise NonSmoothNode(_path, n.to_text(expr))
    if t is n.Add:
        return add(differentiate(expr.left, _path + (0,)), differentiate(expr.right, _path + (1,)))
    if t is n.Sub:
        return sub(differentiate(expr.left, _path + (0,)), differentiate(expr.right, _path + (1,)))
    if t is n.Mul:
        dl = differentiate(expr.left, _path + (0,))
        dr = differentiate(expr.right, _path + (1,))
        return add(mul(dl, expr.right), mul(expr.left, dr))
    if t is n.Pow:
        du = differentiate(expr.child, _path + (0,))
        if expr.k == 1:
            return du
        return mul(mul(n.ScalarLit(float(expr.k)), power(expr.child, expr.k - 1)), du)
    if t is n.MapScalar:
        du = differentiate(expr.child, _path + (0,))
        return mul(_map_derivative(expr.name, expr.child), du)
    raise TypeError(f"not an expression node: {expr!r}")
