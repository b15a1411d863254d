import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latcalc import Frame, ModelSpec, element
from latcalc.calculus import (
    NOT_DIFFERENTIABLE,
    ORDER,
    ORDER_ONLY,
    SUPER,
    SUPER_DIFFERENTIABLE,
    central_difference,
    classify,
    estimate_derivative,
    verify_differentiability,
)
from latcalc.dsl import BuiltinFunction, DslFunction, differentiate
from latcalc.dsl.evaluate import compile_expr
from latcalc.errors import NoConvergence

from helpers import ATOMIC8, DYADIC5, random_smooth

M2 = ModelSpec.atomic(2)


def test_estimate_oracle():
    d = estimate_derivative(DslFunction.parse("x*x"), element(M2, [3.0, 1.0]))
    np.testing.assert_allclose(d.values, [6.0, 2.0], atol=1e-9)
    d = estimate_derivative(DslFunction.parse("x^3"), DYADIC5.unit())
    np.testing.assert_allclose(d.values, [3.0], atol=1e-9)


def test_estimate_fails_on_jump():
    with pytest.raises(NoConvergence):
        estimate_derivative(BuiltinFunction("coord_sign"), M2.zero())


@pytest.mark.parametrize("name_or_expr,expected", [
    ("x*x - x", SUPER_DIFFERENTIABLE),
    ("sin(x) * sqrtshift(x)", SUPER_DIFFERENTIABLE),
    ("abs(x)", NOT_DIFFERENTIABLE),
    ("thin_sqrt", ORDER_ONLY),
    ("coord_sign", NOT_DIFFERENTIABLE),
    ("swizzle_affine", NOT_DIFFERENTIABLE),
])
def test_classify(name_or_expr, expected):
    try:
        f = BuiltinFunction(name_or_expr)
    except KeyError:
        f = DslFunction.parse(name_or_expr)
    c = M2.constant(0.5) if name_or_expr == "swizzle_affine" else M2.zero()
    r = M2.constant(0.5) if name_or_expr == "swizzle_affine" else M2.unit()
    assert classify(f, c, r) == expected


def test_thin_sqrt_gap():
    f = BuiltinFunction("thin_sqrt")
    c, r = M2.zero(), M2.unit()
    order = verify_differentiability(f, c, M2.zero(), ORDER, r)
    sup = verify_differentiability(f, c, M2.zero(), SUPER, r)
    assert order.passed and order.max_scaled_residual == 0.0
    assert not sup.passed and sup.thin_set_residual > 1.0
    assert sup.witness.values[1] == 0.0 and sup.witness.values[0] != 0.0
    # x and y agree on the first atom, f(x) and f(y) do not: not band preserving
    x, y = element(M2, [0.25, 0.0]), element(M2, [0.25, 0.1])
    assert f(x).values[0] != f(y).values[0]
    assert not f.lbp


def test_wrong_derivative_fails():
    f = DslFunction.parse("x*x")
    rep = verify_differentiability(f, M2.unit(), element(M2, [2.0, 2.5]), ORDER, M2.unit())
    assert not rep.passed and rep.verdict == "fail"


def test_verify_rejects_bad_input():
    f = DslFunction.parse("x")
    with pytest.raises(ValueError):
        verify_differentiability(f, M2.zero(), M2.unit(), "weak", M2.unit())
    with pytest.raises(ValueError):
        verify_differentiability(f, M2.zero(), M2.unit(), ORDER, element(M2, [1, 0]))


def test_dyadic_super_differentiable():
    f = DslFunction.parse("[1, 2, 3, 4] * x^2", DYADIC5)
    c = element(DYADIC5, [0.5, -0.5])
    d = f.derivative()(c)
    assert verify_differentiability(f, c, d, SUPER, DYADIC5.unit()).passed


def _third_derivative(expr):
    return differentiate(differentiate(differentiate(expr)))


@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_central_difference_is_second_order(seed):
    rng = np.random.default_rng(seed)
    expr = DslFunction.parse(random_smooth(rng, ATOMIC8), ATOMIC8).expr
    frame = Frame.of(ATOMIC8.unit())
    C = rng.uniform(-0.5, 0.5, 8)
    fn = compile_expr(expr, frame)
    exact = compile_expr(differentiate(expr), frame)(C)
    f3 = compile_expr(_third_derivative(expr), frame)(C)
    keep = np.abs(f3) > 1e-2 * (1.0 + np.abs(fn(C)))
    e1 = np.abs(central_difference(fn, C, 1e-3) - exact)
    e2 = np.abs(central_difference(fn, C, 5e-4) - exact)
    ratio = e1[keep] / e2[keep]
    assert np.all((ratio >= 3.5) & (ratio <= 4.5))
