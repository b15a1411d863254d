"""Band-wise intermediate value root finding.

Each cell carries a band and a bracket [lo, hi] for the segment parameter t
of a + t(b - a).  One evaluation of f per round serves every cell at once:
the candidate is the splice of all cells' midpoints, and local band
preservation guarantees that P(f(candidate)) only depends on the candidate
on P's own band.  A cell whose band sees mixed signs is split along
B_{f(candidate) <= y}.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from ..algebra import Element, Frame
from ..bands import TAU_EQ
from ..dsl.handles import FunctionHandle
from ..intervals import OrderInterval
from .common import (
    CAP_REACHED,
    FEASIBLE,
    INFEASIBLE,
    MAX_BISECTIONS,
    MAX_SPLITS,
    Cell,
    SolveReport,
    continuity_note,
    default_tol,
    lbp_gate,
    segment,
    splice_check,
    trace_event,
)


def bisect_cells(fn, frame: Frame, A: np.ndarray, B: np.ndarray, Y: np.ndarray, tol: float,
                 trace: list, max_bisections: int = MAX_BISECTIONS,
                 max_splits: int = MAX_SPLITS) -> tuple[np.ndarray, bool]:
    """Find T with f(a + T(b - a)) = y atom-wise; returns ``(T, capped)``.

    Assumes y lies between f(a) and f(b) on every atom.
    """
    n = frame.n
    FA, FB = fn(np.stack([A, B]))
    T = np.zeros(n)
    at_a = FA == Y
    at_b = ~at_a & (FB == Y)
    T[at_b] = 1.0
    up = FA <= FB
    orient = np.where(up, 1.0, -1.0)

    cells = []
    for mask in (up & ~at_a & ~at_b, ~up & ~at_a & ~at_b):
        if mask.any():
            cells.append(Cell(mask, 0.0, 1.0))
    for mask, t in ((at_a, 0.0), (at_b, 1.0)):
        if mask.any():
            trace.append(trace_event(frame, "endpoint", Cell(mask, t, t, "converged")))

    splits = 0
    capped = False
    active = list(cells)
    while active:
        M = T.copy()
        mids = []
        for c in active:
            mid = 0.5 * (c.lo + c.hi)
            mids.append(mid)
            M[c.mask] = mid
        G = orient * (fn(segment(A, B, M)) - Y)
        still = []
        for c, mid in zip(active, mids):
            g = G[c.mask]
            exhausted = not (c.lo < mid < c.hi)
            if exhausted or (c.hi - c.lo <= tol and np.max(np.abs(g)) <= tol):
                c.status = "converged"
                T[c.mask] = mid
                trace.append(trace_event(frame, "converged", c, t=mid))
                continue
            if c.steps >= max_bisections:
                c.status = "capped"
                T[c.mask] = mid
                capped = True
                trace.append(trace_event(frame, "cap", c, t=mid))
                continue
            c.steps += 1
            right = g <= 0.0
            if right.all():
                c.lo = mid
                still.append(c)
            elif not right.any():
                c.hi = mid
                still.append(c)
            elif splits >= max_splits:
                c.status = "capped"
                T[c.mask] = mid
                capped = True
                trace.append(trace_event(frame, "splitCap", c, t=mid))
            else:
                splits += 1
                c.status = "split"
                sub = np.zeros(n, dtype=bool)
                sub[c.mask] = right
                left = Cell(sub, mid, c.hi, steps=c.steps)
                sub2 = c.mask & ~sub
                other = Cell(sub2, c.lo, mid, steps=c.steps)
                trace.append(trace_event(frame, "split", c, t=mid, splits=splits))
                still.extend([left, other])
        active = still
    return T, capped


def solve_ivt(f: FunctionHandle, interval: OrderInterval, y: Element, tol: Optional[float] = None,
              seed: int = 0, check: bool = True, debug: bool = False) -> SolveReport:
    """Find c in [a, b] with f(c) = y for an LBP, order continuous f."""
    model = interval.model
    tol = default_tol(model) if tol is None else tol
    if check:
        refused = lbp_gate(f, interval, seed)
        if refused is not None:
            return refused
    frame = f.frame_for(interval.a, interval.b, y)
    fn = f.compile(frame)
    A, B, Y = frame.take_all(interval.a, interval.b, y)
    FA, FB = fn(np.stack([A, B]))
    below = np.minimum(FA, FB) - TAU_EQ > Y
    above = np.maximum(FA, FB) + TAU_EQ < Y
    if below.any() or above.any():
        bad = np.flatnonzero(below | above).tolist()
        return SolveReport(INFEASIBLE, detail=f"target outside [f(a) ^ f(b), f(a) v f(b)] on atoms {bad}")
    # clamp the grey zone so the sign invariant holds exactly
    Y = np.clip(Y, np.minimum(FA, FB), np.maximum(FA, FB))

    trace: list = []
    T, capped = bisect_cells(fn, frame, A, B, Y, tol, trace)
    C = segment(A, B, T)
    residual = np.abs(fn(C) - frame.take(y))
    note = continuity_note(f, interval, seed) if check else None
    extras = {}
    if debug:
        extras["spliceViolations"] = splice_check(fn, frame, A, B, np.random.default_rng(seed))
    if note:
        extras["note"] = note
    ok = bool(np.all(residual <= tol))
    cert = FEASIBLE if ok and not capped and not note else CAP_REACHED
    return SolveReport(cert, frame.element(C), frame.element(residual), trace, extras=extras)
