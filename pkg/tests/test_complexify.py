import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latcalc import ComplexElement, Frame, ModelSpec, cmodulus, cmodulus_grid, cmul, element

from helpers import DYADIC5, atomic_elements, dyadic_elements

complex_atomic = st.builds(ComplexElement, atomic_elements(), atomic_elements())
complex_dyadic = st.builds(ComplexElement, dyadic_elements(), dyadic_elements())


def test_modulus_oracle():
    m = ModelSpec.atomic(3)
    z = ComplexElement(element(m, [3, 0, -1]), element(m, [4, -2, 1]))
    assert list(cmodulus(z).values) == [5.0, 2.0, np.sqrt(2.0)]
    grid = cmodulus_grid(z, 4096).values
    # theta = 3*pi/2 and theta = 3*pi/4 lie on the grid, so those atoms are near exact
    assert grid[1] == pytest.approx(2.0, abs=1e-15)
    assert grid[2] == pytest.approx(np.sqrt(2.0), rel=1e-15)
    assert grid[0] == pytest.approx(5.0, rel=3e-7)


def test_cmul_oracle():
    m = ModelSpec.atomic(2)
    z = ComplexElement(element(m, [1, 0]), element(m, [1, 1]))
    w = ComplexElement(element(m, [1, 0]), element(m, [-1, 1]))
    p = cmul(z, w)
    assert list(p.re.values) == [2.0, -1.0]
    assert list(p.im.values) == [0.0, 0.0]


def test_grid_needs_four_angles():
    z = ComplexElement.real(ModelSpec.atomic(1).unit())
    with pytest.raises(ValueError):
        cmodulus_grid(z, 2)


def test_dyadic_modulus():
    z = ComplexElement(element(DYADIC5, [3, 0]), element(DYADIC5, [4, 0, 1, 0]))
    assert cmodulus(z) == element(DYADIC5, [5, 3, 1, 0])


@given(st.one_of(complex_atomic, complex_dyadic))
def test_grid_close_to_closed_form(z):
    exact_el, approx_el = cmodulus(z), cmodulus_grid(z, 4096)
    exact, approx = Frame.of(exact_el, approx_el).take_all(exact_el, approx_el)
    # the grid supremum never exceeds the true modulus and misses by at most 1 - cos(pi/K)
    assert np.all(approx <= exact * (1 + 1e-15) + 1e-300)
    assert np.all(approx >= exact * np.cos(np.pi / 4096) - 1e-12)


@given(complex_atomic)
def test_grid_refinement_monotone(z):
    a, b, c = (cmodulus_grid(z, k).values for k in (1024, 2048, 4096))
    assert np.all(a <= b) and np.all(b <= c)


@given(complex_atomic, complex_atomic)
def test_modulus_multiplicative(z, w):
    lhs = cmodulus(cmul(z, w)).values
    rhs = (cmodulus(z) * cmodulus(w)).values
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


@given(atomic_elements())
def test_real_embedding_modulus_is_abs(x):
    assert cmodulus(ComplexElement.real(x)) == abs(x)
