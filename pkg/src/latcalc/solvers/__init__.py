"""Constructive band-wise solvers for the boundedness, intermediate value,
extreme value, Rolle and mean value theorems."""
from .common import CAP_REACHED, FEASIBLE, INFEASIBLE, Cell, SolveReport, hypothesis_violated
from .evt import order_bound, solve_evt
from .ivt import solve_ivt
from .mean_value import solve_complex_mvt, solve_mvt, solve_mvt_segment, solve_rolle

__all__ = [
    "CAP_REACHED", "FEASIBLE", "INFEASIBLE", "Cell", "SolveReport", "hypothesis_violated",
    "order_bound", "solve_complex_mvt", "solve_evt", "solve_ivt", "solve_mvt",
    "solve_mvt_segment", "solve_rolle",
]
