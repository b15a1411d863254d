"""Random problem generators and hypothesis strategies shared by the tests."""
from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from latcalc import ModelSpec, element
from latcalc.algebra import Element

ATOMIC8 = ModelSpec.atomic(8)
DYADIC5 = ModelSpec.dyadic(5)

finite = st.floats(min_value=-8.0, max_value=8.0, allow_nan=False, allow_infinity=False)
positive = st.floats(min_value=1e-3, max_value=8.0, allow_nan=False, allow_infinity=False)


@st.composite
def atomic_elements(draw, dim: int = 8, values=finite) -> Element:
    return element(ModelSpec.atomic(dim), draw(st.lists(values, min_size=dim, max_size=dim)))


@st.composite
def dyadic_elements(draw, depth: int = 5, values=finite) -> Element:
    """Random step functions: a random dyadic partition, one value per piece."""
    model = ModelSpec.dyadic(depth)
    g = model.grid
    pieces = []

    def split(lo, size, level):
        if level < depth and draw(st.booleans()):
            half = size // 2
            split(lo, half, level + 1)
            split(lo + half, half, level + 1)
        else:
            pieces.append(((lo / g, (lo + size) / g), draw(values)))

    split(0, g, 0)
    return Element.from_pieces(model, pieces)


def lit(values) -> str:
    return "[" + ", ".join(repr(float(v)) for v in values) + "]"


def random_coeffs(rng: np.random.Generator, model: ModelSpec, scale: float = 2.0) -> np.ndarray:
    """Values for an element literal; dyadic literals get 2**k uniform pieces."""
    if model.is_atomic:
        return np.round(rng.uniform(-scale, scale, model.dim), 4)
    k = int(rng.integers(0, model.max_depth + 1))
    return np.round(rng.uniform(-scale, scale, 2 ** k), 4)


def random_polynomial(rng: np.random.Generator, model: ModelSpec, degree: int = 3) -> str:
    """sum_k c_k x^k with element coefficients."""
    terms = []
    for k in range(degree + 1):
        c = lit(random_coeffs(rng, model))
        terms.append(c if k == 0 else f"{c}*x" if k == 1 else f"{c}*x^{k}")
    return " + ".join(terms)


_MAPS = ("sin", "cos", "exp", "tanh", "sqrtshift")


def random_smooth(rng: np.random.Generator, model: ModelSpec, depth: int = 3) -> str:
    """A random smooth expression: polynomial skeleton with scalar maps mixed in."""
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.5:
            return "x"
        if r < 0.7:
            return repr(round(float(rng.uniform(-2, 2)), 3))
        if r < 0.8:
            return "e"
        return lit(np.round(random_coeffs(rng, model, 1.5), 3))
    r = rng.random()
    a = random_smooth(rng, model, depth - 1)
    if r < 0.25:
        return f"({a} + {random_smooth(rng, model, depth - 1)})"
    if r < 0.4:
        return f"({a} - {random_smooth(rng, model, depth - 1)})"
    if r < 0.65:
        return f"({a} * {random_smooth(rng, model, depth - 1)})"
    if r < 0.75:
        return f"({a})^{int(rng.integers(2, 4))}"
    name = _MAPS[int(rng.integers(len(_MAPS)))]
    return f"{name}({a})"


def random_box(rng: np.random.Generator, model: ModelSpec, lo: float = -1.0, hi: float = 1.0,
               min_width: float = 0.2):
    """Endpoints a << b with random per-atom widths."""
    if model.is_atomic:
        a = rng.uniform(lo, hi - min_width, model.dim)
        w = rng.uniform(min_width, hi - lo, model.dim)
        return element(model, a), element(model, np.minimum(a + w, hi))
    a = element(model, rng.uniform(lo, hi - min_width, 2 ** int(rng.integers(0, model.max_depth + 1))))
    w = element(model, rng.uniform(min_width, (hi - lo) / 2, 2 ** int(rng.integers(0, model.max_depth + 1))))
    return a, a + w


# one PASS/FAIL line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"AC{criterion:<2} {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
