"""Rolle, mean value and complex mean value point finding."""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from ..algebra import Element, Frame, ModelSpec
from ..bands import TAU_EQ, frame_band
from ..calculus import estimate_derivative
from ..complexify import ComplexElement
from ..dsl import nodes as n
from ..dsl.evaluate import compile_expr
from ..dsl.handles import ArrayFunction, DslFunction, FunctionHandle
from ..errors import NoConvergence, NonPolynomialComplexHandle
from ..intervals import OrderInterval
from .common import (
    CAP_REACHED,
    FEASIBLE,
    SolveReport,
    default_tol,
    hypothesis_violated,
    lbp_gate,
    segment,
)
from .evt import extremize
from .ivt import bisect_cells


def _derivative_values(f: FunctionHandle, frame: Frame, X: np.ndarray) -> np.ndarray:
    fp = f.derivative()
    if fp is not None:
        return fp.compile(frame)(X)
    return frame.take(estimate_derivative(f, frame.element(X)))


def solve_rolle(f: FunctionHandle, interval: OrderInterval, tol: Optional[float] = None,
                seed: int = 0, check: bool = True) -> SolveReport:
    """Find x0 in (a, b) with f'(x0) = 0 when f(a) = f(b).

    Per atom the extremizers of the EVT solver decide the branch: an interior
    maximum, else an interior minimum, else f is constant there and the
    midpoint is returned.  Interior extremizers are polished by bisection on
    the derivative inside the grid bracket whenever the bracket shows the
    sign change.
    """
    model = interval.model
    tol = default_tol(model) if tol is None else tol
    if not interval.nondegenerate:
        return SolveReport(hypothesis_violated("intervalNotOpen"), detail="needs a << b")
    if check:
        refused = lbp_gate(f, interval, seed)
        if refused is not None:
            return refused
    frame = f.frame_for(interval.a, interval.b)
    fn = f.compile(frame)
    A, B = frame.take_all(interval.a, interval.b)
    FA, FB = fn(np.stack([A, B]))
    differ = np.abs(FA - FB) > TAU_EQ
    if differ.any():
        return SolveReport(hypothesis_violated("endpointsDiffer"),
                           detail=f"f(a) != f(b) on atoms {np.flatnonzero(differ).tolist()}")

    trace: list = []
    hi = extremize(fn, frame, A, B, 1.0, trace)
    lo = extremize(fn, frame, A, B, -1.0, trace)
    on_max = hi.value > FA + TAU_EQ
    on_min = ~on_max & (lo.value < FA - TAU_EQ)
    flat = ~on_max & ~on_min
    T0 = np.where(on_max, hi.t, np.where(on_min, lo.t, 0.5))
    X0 = segment(A, B, T0)

    fp = f.derivative()
    if fp is not None and (on_max | on_min).any():
        dfn = fp.compile(frame)
        L = segment(A, B, np.where(flat, T0, np.where(on_max, hi.bracket_lo, lo.bracket_lo)))
        H = segment(A, B, np.where(flat, T0, np.where(on_max, hi.bracket_hi, lo.bracket_hi)))
        DL, DH, D0 = dfn(np.stack([L, H, X0]))
        brackets = (np.minimum(DL, DH) <= 0.0) & (np.maximum(DL, DH) >= 0.0) & ~flat
        # atoms without a sign change keep the extremizer: a degenerate bracket at x0
        L = np.where(brackets, L, X0)
        H = np.where(brackets, H, X0)
        Y = np.where(brackets, 0.0, D0)
        Tp, _ = bisect_cells(dfn, frame, L, H, Y, tol, trace)
        X0 = segment(L, H, Tp)

    try:
        slope = np.abs(_derivative_values(f, frame, X0))
    except NoConvergence as exc:
        return SolveReport(CAP_REACHED, witness=frame.element(X0), trace=trace, detail=str(exc))
    ok = bool(np.all(slope <= tol))
    return SolveReport(
        FEASIBLE if ok else CAP_REACHED,
        witness=frame.element(X0),
        residual=frame.element(slope),
        trace=trace,
        extras={
            "maxBand": frame_band(frame, on_max),
            "minBand": frame_band(frame, on_min),
            "constantBand": frame_band(frame, flat),
        },
    )


def _affine(a, w):
    """The expression a + x w."""
    return n.Add(n.ConstElem(a), n.Mul(n.Var(), n.ConstElem(w)))


def _aux_handle(model: ModelSpec, value: Callable, deriv: Callable, consts, lbp: bool) -> FunctionHandle:
    """g(t) = (b - a) psi(t) - (psi(b) - psi(a)) t on [0, e], where b - a = e.

    ``value``/``deriv`` map a frame to array functions of the section psi and
    its derivative.
    """
    def g_factory(frame):
        psi = value(frame)
        ends = psi(np.stack([np.zeros(frame.n), np.ones(frame.n)]))
        k = ends[1] - ends[0]
        return lambda T: 1.0 * psi(T) - k * T

    dg = None
    if deriv is not None:
        def dg_factory(frame):
            psi, dpsi = value(frame), deriv(frame)
            ends = psi(np.stack([np.zeros(frame.n), np.ones(frame.n)]))
            k = ends[1] - ends[0]
            return lambda T: 1.0 * dpsi(T) - k

        dg = ArrayFunction("aux'", dg_factory, consts, lbp=lbp)
    return ArrayFunction("aux", g_factory, consts, derivative=dg, lbp=lbp)


def _real_section(f: FunctionHandle, a: Element, b: Element):
    """psi(t) = f(a + t(b - a)) as frame factories for value and derivative."""
    w = b - a
    if f.is_dsl:
        psi = n.substitute(f.expr, _affine(a, w))
        dpsi = DslFunction(psi).derivative().expr
        return (lambda frame: compile_expr(psi, frame),
                lambda frame: compile_expr(dpsi, frame))

    def value(frame):
        fn = f.compile(frame)
        A, W = frame.take_all(a, w)
        return lambda T: fn(A + T * W)

    return value, None


def _mvt_from_section(model: ModelSpec, value, deriv, consts, tol: float,
                      seed: int) -> tuple[SolveReport, Optional[np.ndarray]]:
    g = _aux_handle(model, value, deriv, consts, lbp=True)
    unit = OrderInterval(model.zero(), model.unit())
    rep = solve_rolle(g, unit, tol=tol, seed=seed, check=False)
    if rep.witness is None:
        return rep, None
    frame = g.frame_for(unit.a, unit.b, rep.witness)
    return rep, frame.take(rep.witness)


def solve_mvt(f: FunctionHandle, interval: OrderInterval, tol: Optional[float] = None,
              seed: int = 0, check: bool = True) -> SolveReport:
    """Find x0 in (a, b) with (b - a) f'(x0) = f(b) - f(a).

    The segment is reparametrized over [0, e] as psi(t) = f(a + t(b - a)),
    and Rolle's problem is solved for g(t) = (b - a) psi(t) - (psi(b) - psi(a)) t
    with b - a = e in the new variable.
    """
    model = interval.model
    tol = default_tol(model) if tol is None else tol
    if not interval.nondegenerate:
        return SolveReport(hypothesis_violated("intervalNotOpen"), detail="needs a << b")
    if check:
        refused = lbp_gate(f, interval, seed)
        if refused is not None:
            return refused
    a, b = interval.a, interval.b
    value, deriv = _real_section(f, a, b)
    consts = [a, b] + f.consts()
    rep, T0 = _mvt_from_section(model, value, deriv, consts, tol, seed)
    if T0 is None:
        return rep

    frame = f.frame_for(a, b, rep.witness)
    A, B = frame.take_all(a, b)
    T = frame.take(rep.witness)
    X0 = segment(A, B, T)
    fn = f.compile(frame)
    FA, FB = fn(np.stack([A, B]))
    try:
        slope = _derivative_values(f, frame, X0)
    except NoConvergence as exc:
        return SolveReport(CAP_REACHED, witness=frame.element(X0), detail=str(exc), trace=rep.trace)
    residual = np.abs((B - A) * slope - (FB - FA))
    ok = bool(np.all(residual <= tol))
    constant = rep.extras["constantBand"]
    return SolveReport(
        FEASIBLE if ok and rep.certificate == FEASIBLE else CAP_REACHED,
        witness=frame.element(X0),
        residual=frame.element(residual),
        trace=rep.trace,
        extras={"parameter": rep.witness, "constantBand": constant},
    )


def solve_mvt_segment(f: FunctionHandle, interval: OrderInterval, c: Element, d: Element,
                      tol: Optional[float] = None, seed: int = 0) -> SolveReport:
    """Mean value point on a sub-segment [c, d] of (a, b): (d - c) f'(x0) = f(d) - f(c)."""
    inner = OrderInterval(c, d)
    outer = OrderInterval(interval.a, interval.b, closed=False)
    if not (outer.contains(c) and outer.contains(d)):
        return SolveReport(hypothesis_violated("segmentOutsideInterval"), detail="needs c, d in (a, b)")
    return solve_mvt(f, inner, tol=tol, seed=seed)


def _check_complex_polynomial(f: DslFunction):
    for _, node in n.walk(f.expr):
        if isinstance(node, (n.Abs, n.Sup, n.Inf, n.MapScalar)):
            raise NonPolynomialComplexHandle(f"{type(node).__name__} node in a complex handle")


def solve_complex_mvt(f: DslFunction, a: ComplexElement, b: ComplexElement,
                      tol: Optional[float] = None, seed: int = 0) -> SolveReport:
    """Find u, v on the open segment from a to b with

    Re((b - a) f'(u)) = Re(f(b) - f(a)) and Im((b - a) f'(v)) = Im(f(b) - f(a)).

    The real mean value machinery runs on t -> Re f(a + t(b - a)) and on
    t -> Im f(a + t(b - a)) separately.
    """
    if not isinstance(f, DslFunction):
        raise NonPolynomialComplexHandle("complex mean value needs a polynomial DSL handle")
    _check_complex_polynomial(f)
    model = a.model
    tol = default_tol(model) if tol is None else tol
    w = b - a
    psi = n.substitute(f.expr, _affine(a, w))
    dpsi = DslFunction(psi).derivative().expr
    consts = [a.re, a.im, b.re, b.im] + f.consts()

    def part(take: Callable[[np.ndarray], np.ndarray]):
        def value(frame):
            fn = compile_expr(psi, frame, complex_values=True)
            return lambda T: take(fn(T + 0j))

        def deriv(frame):
            fn = compile_expr(dpsi, frame, complex_values=True)
            return lambda T: take(fn(T + 0j))

        return value, deriv

    results = {}
    trace = []
    certs = []
    for key, take in (("u", np.real), ("v", np.imag)):
        value, deriv = part(take)
        rep, T0 = _mvt_from_section(model, value, deriv, consts, tol, seed)
        certs.append(rep.certificate)
        trace.extend({**ev, "part": key} for ev in rep.trace)
        results[key] = rep.witness
    if any(r is None for r in results.values()):
        return SolveReport(certs[0] if certs[0] != FEASIBLE else certs[1], trace=trace)

    frame = f.frame_for(a.re, a.im, b.re, b.im, results["u"], results["v"])
    Az, Bz = a.to_array(frame), b.to_array(frame)
    fz = f.compile_complex(frame)
    dfz = DslFunction(f.derivative().expr).compile_complex(frame)
    FA, FB = fz(np.stack([Az, Bz]))
    out = {}
    res = {}
    for key, take in (("u", np.real), ("v", np.imag)):
        T = frame.take(results[key])
        Z = Az + (T + 0j) * (Bz - Az)
        out[key] = ComplexElement.from_array(frame, Z)
        res[key] = frame.element(np.abs(take((Bz - Az) * dfz(Z)) - take(FB - FA)))
    ok = all(c == FEASIBLE for c in certs) and all(np.all(r.values <= tol) for r in res.values())
    return SolveReport(
        FEASIBLE if ok else CAP_REACHED,
        witness=out,
        residual=res,
        trace=trace,
        extras={"parameters": results},
    )
