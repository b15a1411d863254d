"""Order calculus on Dedekind complete Phi-algebras at desk scale."""
from .algebra import (
    Element,
    Frame,
    ModelSpec,
    combine,
    element,
    is_weak_order_unit,
    modulus,
    neg_part,
    pos_part,
    scale,
    strictly_less,
)
from .bands import (
    TAU_EQ,
    TAU_INV,
    Band,
    apply_projection,
    band_eq,
    band_generated,
    band_le,
    band_lt,
    band_op,
    invert_on_band,
    ladder_band,
)
from .complexify import ComplexElement, cmodulus, cmodulus_grid, cmul
from .intervals import Neighborhood, OrderInterval

__version__ = "0.1.0"

__all__ = [
    "Band", "ComplexElement", "Element", "Frame", "ModelSpec", "Neighborhood", "OrderInterval",
    "TAU_EQ", "TAU_INV", "apply_projection", "band_eq", "band_generated", "band_le", "band_lt",
    "band_op", "cmodulus", "cmodulus_grid", "cmul", "combine", "element", "invert_on_band",
    "is_weak_order_unit", "ladder_band", "modulus", "neg_part", "pos_part", "scale",
    "strictly_less",
]
