"""Band-wise extremization and order bounds."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..algebra import Element, Frame
from ..dsl.handles import FunctionHandle
from ..errors import HypothesisViolated
from ..intervals import OrderInterval
from .common import (
    CAP_REACHED,
    FEASIBLE,
    MAX_SPLITS,
    Cell,
    SolveReport,
    default_tol,
    lbp_gate,
    segment,
    trace_event,
)

GRID = 65
AUDIT = 10_000
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class Extremum:
    t: np.ndarray          # segment parameter per atom
    value: np.ndarray      # f at a + t(b - a)
    bracket_lo: np.ndarray  # grid neighbours around the winning grid point
    bracket_hi: np.ndarray


def extremize(fn, frame: Frame, A: np.ndarray, B: np.ndarray, sign: float, trace: list,
              grid: int = GRID, t_tol: float = 1e-12, max_splits: int = MAX_SPLITS) -> Extremum:
    """Maximize ``sign * f`` along a + t(b - a) on every atom.

    A multi-start grid picks the best grid point per atom (smallest t on
    ties); atoms sharing a winner form one cell, refined by golden-section
    search on splices.  A refined point replaces the grid point only when it
    is strictly better.
    """
    n = frame.n
    ts = np.linspace(0.0, 1.0, grid)
    F = sign * fn(segment(A, B, np.broadcast_to(ts[:, None], (grid, n))))
    j = np.argmax(F, axis=0)
    best_t = ts[j]
    best_v = F[j, np.arange(n)]
    lo_b = ts[np.maximum(j - 1, 0)]
    hi_b = ts[np.minimum(j + 1, grid - 1)]

    active = []
    for jj in np.unique(j):
        mask = j == jj
        active.append(Cell(mask, float(lo_b[mask][0]), float(hi_b[mask][0])))

    splits = 0
    done: list[Cell] = []
    while active:
        X1 = best_t.copy()
        X2 = best_t.copy()
        pts = []
        for c in active:
            w = c.hi - c.lo
            p1, p2 = c.hi - _INVPHI * w, c.lo + _INVPHI * w
            pts.append((p1, p2))
            X1[c.mask], X2[c.mask] = p1, p2
        F1 = sign * fn(segment(A, B, X1))
        F2 = sign * fn(segment(A, B, X2))
        still = []
        for c, (p1, p2) in zip(active, pts):
            c.steps += 1
            left = F1[c.mask] >= F2[c.mask]
            if left.all():
                c.hi = p2
                still.append(c)
            elif not left.any():
                c.lo = p1
                still.append(c)
            elif splits >= max_splits:
                c.hi = p2
                still.append(c)
            else:
                splits += 1
                sub = np.zeros(n, dtype=bool)
                sub[c.mask] = left
                trace.append(trace_event(frame, "split", c, splits=splits))
                still.append(Cell(sub, c.lo, p2, steps=c.steps))
                still.append(Cell(c.mask & ~sub, p1, c.hi, steps=c.steps))
        active = []
        for c in still:
            (done if c.hi - c.lo <= t_tol else active).append(c)

    T = best_t.copy()
    for c in done:
        T[c.mask] = 0.5 * (c.lo + c.hi)
    FT = sign * fn(segment(A, B, T))
    better = FT > best_v
    best_t = np.where(better, T, best_t)
    best_v = np.where(better, FT, best_v)
    return Extremum(best_t, sign * best_v, lo_b, hi_b)


def solve_evt(f: FunctionHandle, interval: OrderInterval, tol: Optional[float] = None,
              seed: int = 0, audit: int = AUDIT, check: bool = True) -> SolveReport:
    """Find c, d in [a, b] with f(c) <= f(x) <= f(d) for all x in [a, b]."""
    model = interval.model
    tol = default_tol(model) if tol is None else tol
    if check:
        refused = lbp_gate(f, interval, seed)
        if refused is not None:
            return refused
    frame = f.frame_for(interval.a, interval.b)
    fn = f.compile(frame)
    A, B = frame.take_all(interval.a, interval.b)
    trace: list = []
    hi = extremize(fn, frame, A, B, 1.0, trace)
    lo = extremize(fn, frame, A, B, -1.0, trace)
    D = segment(A, B, hi.t)
    C = segment(A, B, lo.t)

    rng = np.random.default_rng(seed)
    X = interval.sample(frame, rng, audit)
    FX = fn(X)
    over = np.maximum(FX.max(axis=0) - hi.value, 0.0)
    under = np.maximum(lo.value - FX.min(axis=0), 0.0)
    residual = np.maximum(over, under)
    ok = bool(np.all(residual <= tol))
    return SolveReport(
        FEASIBLE if ok else CAP_REACHED,
        witness={"min": frame.element(C), "max": frame.element(D)},
        residual=frame.element(residual),
        trace=trace,
        detail=None if ok else "audit found points beyond the extremizers",
        extras={"minValue": frame.element(lo.value), "maxValue": frame.element(hi.value),
                "auditPoints": audit},
    )


def order_bound(f: FunctionHandle, interval: OrderInterval, seed: int = 0) -> Element:
    """M with |f(x)| <= M on [a, b]: the larger of f(d) and -f(c) at the extremizers.

    Raises :class:`HypothesisViolated` for non-LBP handles.
    """
    refused = lbp_gate(f, interval, seed)
    if refused is not None:
        raise HypothesisViolated(refused.detail, refused.extras.get("lbpCheck"))
    frame = f.frame_for(interval.a, interval.b)
    fn = f.compile(frame)
    A, B = frame.take_all(interval.a, interval.b)
    trace: list = []
    hi = extremize(fn, frame, A, B, 1.0, trace)
    lo = extremize(fn, frame, A, B, -1.0, trace)
    return frame.element(np.maximum(np.abs(hi.value), np.abs(lo.value)))
