"""Expression language for lattice-valued functions of one lattice variable."""
from .checks import ContinuityReport, LbpReport, check_lbp, continuity_probe, is_lbp_static
from .differentiate import differentiate
from .handles import (
    BUILTINS,
    ArrayFunction,
    BuiltinFunction,
    DslFunction,
    FunctionHandle,
    complex_polynomial,
    handle_from_spec,
)
from .nodes import (
    Abs, Add, ConstElem, Inf, MapScalar, Mul, Pow, ScalarLit, Sub, Sup, Unit, Var, to_text,
)
from .parser import parse

__all__ = [
    "Abs", "Add", "ArrayFunction", "BUILTINS", "BuiltinFunction", "ConstElem", "ContinuityReport",
    "DslFunction", "FunctionHandle", "Inf", "LbpReport", "MapScalar", "Mul", "Pow", "ScalarLit",
    "Sub", "Sup", "Unit", "Var", "check_lbp", "complex_polynomial", "continuity_probe",
    "differentiate", "handle_from_spec", "is_lbp_static", "parse", "to_text",
]
