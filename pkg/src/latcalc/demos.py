"""Gallery of worked examples and counterexamples.

Each entry runs deterministically and returns a report dict; ``expected`` is
a fragment the fresh report must contain, which keeps the gallery
self-testing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import ModelSpec, element
from .calculus import ORDER, SUPER, classify, estimate_derivative, verify_differentiability
from .complexify import ComplexElement
from .dsl import BuiltinFunction, DslFunction, check_lbp, complex_polynomial
from .intervals import OrderInterval
from .solvers import solve_complex_mvt, solve_evt, solve_ivt, solve_mvt, solve_rolle


@dataclass(frozen=True)
class DemoEntry:
    name: str
    description: str
    expected: dict
    run: Callable[[int], dict]


def _unit_square():
    m = ModelSpec.atomic(2)
    return m, OrderInterval(m.zero(), m.unit())


def _ivt_fail(seed):
    m, box = _unit_square()
    f = BuiltinFunction("first_square")
    target = element(m, [0.5, 0.5])
    report = solve_ivt(f, box, target, seed=seed).to_dict()
    # sup-order distance ||f(x) - y||_inf over a 100 x 100 grid; f ignores x2
    g = np.linspace(0.0, 1.0, 100)
    x1, x2 = np.meshgrid(g, g, indexing="ij")
    X = np.stack([x1.ravel(), x2.ravel()], axis=1)
    dist = np.abs(f.compile(f.frame_for(box.a))(X) - target.values).max(axis=1)
    grid_min = float(dist.min())
    # the distance is 2-Lipschitz in x1 on [0, 1], the grid step is 1/99
    bound = grid_min - 2.0 * (1.0 / 99.0) / 2.0
    report["gridAudit"] = {
        "points": int(len(X)),
        "gridDistance": grid_min,
        "certifiedLowerBound": bound,
        "certified": bool(bound >= 0.05),
    }
    return report


def _evt_fail(seed):
    m, box = _unit_square()
    g = BuiltinFunction("swizzle_affine")
    report = solve_evt(g, box, seed=seed).to_dict()
    grid = np.linspace(0.0, 1.0, 101)
    x1, x2 = np.meshgrid(grid, grid, indexing="ij")
    X = np.stack([x1.ravel(), x2.ravel()], axis=1)
    G = g.compile(g.frame_for(box.a))(X)
    sup = G.max(axis=0)
    gap = float(np.abs(G - sup).max(axis=1).min())
    report["supremumAudit"] = {
        "gridSupremum": [float(v) for v in sup],
        "minDistanceToSupremum": gap,
        "attained": bool(gap == 0.0),
    }
    return report


def _kn_threshold(seed, n_trunc=8):
    m = ModelSpec.atomic(n_trunc)
    f = BuiltinFunction("kn_threshold")
    y = element(m, [1.0 / k for k in range(1, n_trunc + 1)])
    lbp = check_lbp(f, OrderInterval(m.zero(), m.unit()), trials=1000, seed=seed)
    return {
        "truncation": n_trunc,
        "imageOfZero": [float(v) for v in f(m.zero()).values],
        "imageOfReciprocals": [float(v) for v in f(y).values],
        "lbpCheck": lbp.to_dict(),
        "note": ("coordinatewise, hence locally band preserving; on the full sequence space "
                 "viewed as C(beta N) the zero sequence and (1/n) agree at every point of "
                 "beta N \\ N yet map to 0 and e, so the map does not act pointwise there"),
    }


def _thin_sqrt(seed):
    m = ModelSpec.atomic(2)
    f = BuiltinFunction("thin_sqrt")
    c, r = m.zero(), m.unit()
    d = estimate_derivative(f, c, radius=r)
    return {
        "classification": classify(f, c, r, seed=seed),
        "order": verify_differentiability(f, c, d, ORDER, r, seed=seed).to_dict(),
        "super": verify_differentiability(f, c, d, SUPER, r, seed=seed).to_dict(),
    }


def _lbp_witness(seed):
    m, box = _unit_square()
    return check_lbp(BuiltinFunction("swizzle_affine"), box, seed=seed).to_dict()


def _rolle(seed):
    m = ModelSpec.atomic(3)
    return solve_rolle(DslFunction.parse("x*x - x"), OrderInterval(m.zero(), m.unit()), seed=seed).to_dict()


def _mvt(seed):
    m = ModelSpec.atomic(3)
    return solve_mvt(DslFunction.parse("x^3"), OrderInterval(m.zero(), m.unit()), seed=seed).to_dict()


def _cmvt(seed):
    m = ModelSpec.atomic(2)
    zero = ComplexElement.real(m.zero())
    f = complex_polynomial([zero, zero, ComplexElement.real(m.unit())])
    return solve_complex_mvt(f, zero, ComplexElement(m.unit(), m.unit()), seed=seed).to_dict()


def _l0(seed):
    return {
        "kind": "documentation",
        "text": ("On L0[0,1] the interval [0, e] with the L1 norm is a non-compact metric space, "
                 "so a Tietze extension yields a continuous, hence order continuous, unbounded "
                 "function on it.  The construction is not effective and is not executed here; "
                 "the boundedness solver therefore insists on local band preservation."),
    }


DEMOS: dict[str, DemoEntry] = {d.name: d for d in [
    DemoEntry("ivt-fail", "(x, y) -> (x, x^2) misses (1/2, 1/2): IVT fails without LBP",
              {"certificate": "hypothesisViolated(notLbp)", "gridAudit": {"certified": True}}, _ivt_fail),
    DemoEntry("evt-fail", "(x, y) -> (x, 1 - x) has supremum (1, 1), never attained",
              {"certificate": "hypothesisViolated(notLbp)", "supremumAudit": {"attained": False}}, _evt_fail),
    DemoEntry("kn-threshold", "coordinatewise ramps k_n: LBP, order continuous, f((1/n)) = e",
              {"lbpCheck": {"passed": True}, "imageOfReciprocals": [1.0] * 8}, _kn_threshold),
    DemoEntry("thin-sqrt-classify", "order differentiable but not super order differentiable at 0",
              {"classification": "orderOnly", "super": {"verdict": "fail"}}, _thin_sqrt),
    DemoEntry("lbp-witness", "splice witness that (x, y) -> (x, 1 - x) is not LBP",
              {"passed": False, "witness": {"band": {"atoms": [1]}}}, _lbp_witness),
    DemoEntry("rolle-parabola", "Rolle point of x*x - x on [0, e] is e/2",
              {"certificate": "feasible", "witness": [0.5, 0.5, 0.5]}, _rolle),
    DemoEntry("mvt-cubic", "mean value point of x^3 on [0, e] is e/sqrt(3)",
              {"certificate": "feasible"}, _mvt),
    DemoEntry("cmvt-square", "complex mean value points of z^2 from 0 to (1 + i)e",
              {"certificate": "feasible"}, _cmvt),
    DemoEntry("l0-unbounded", "documentation only: an unbounded order continuous function on L0[0,1]",
              {"kind": "documentation"}, _l0),
]}


def list_demos() -> list[tuple[str, str]]:
    return [(d.name, d.description) for d in DEMOS.values()]


def matches(fragment, report, tol: float = 1e-6) -> bool:
    """True when ``report`` contains ``fragment`` (floats compared to ``tol``)."""
    if isinstance(fragment, dict):
        return isinstance(report, dict) and all(k in report and matches(v, report[k], tol)
                                                for k, v in fragment.items())
    if isinstance(fragment, list):
        return (isinstance(report, list) and len(report) == len(fragment)
                and all(matches(a, b, tol) for a, b in zip(fragment, report)))
    if isinstance(fragment, float) and not isinstance(fragment, bool):
        return isinstance(report, (int, float)) and abs(report - fragment) <= tol
    return fragment == report
