"""Report types and shared plumbing for the band-wise solvers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from ..algebra import Element, Frame, ModelSpec
from ..bands import Band, frame_band
from ..complexify import ComplexElement
from ..dsl.checks import check_lbp, continuity_probe
from ..dsl.handles import FunctionHandle
from ..intervals import OrderInterval

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
CAP_REACHED = "iterationCapReached"

MAX_BISECTIONS = 200
MAX_SPLITS = 64
LBP_TRIALS = 256


def hypothesis_violated(detail: str) -> str:
    return f"hypothesisViolated({detail})"


def default_tol(model: ModelSpec) -> float:
    return 1e-8 if model.is_atomic else 1e-6


@dataclass
class Cell:
    """A band of atoms sharing one scalar search bracket [lo, hi]."""

    mask: np.ndarray
    lo: float
    hi: float
    status: str = "active"  # active | converged | split | capped
    steps: int = 0

    def band(self, frame: Frame) -> Band:
        return frame_band(frame, self.mask)


@dataclass
class SolveReport:
    certificate: str
    witness: Any = None
    residual: Any = None
    trace: list = field(default_factory=list)
    detail: Optional[str] = None
    extras: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.certificate == FEASIBLE

    @property
    def negative(self) -> bool:
        """Expected negative outcome: an infeasible target or a failed hypothesis."""
        return self.certificate == INFEASIBLE or self.certificate.startswith("hypothesisViolated")

    def to_dict(self) -> dict:
        out = {
            "certificate": self.certificate,
            "witness": _dump(self.witness),
            "residual": _dump(self.residual),
            "trace": self.trace,
        }
        if self.detail is not None:
            out["detail"] = self.detail
        for k, v in self.extras.items():
            out[k] = _dump(v)
        return out


def _dump(v):
    from ..io import dump_band, dump_complex, dump_element

    if isinstance(v, Element):
        return dump_element(v)
    if isinstance(v, ComplexElement):
        return dump_complex(v)
    if isinstance(v, Band):
        return dump_band(v)
    if isinstance(v, dict):
        return {k: _dump(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_dump(x) for x in v]
    if isinstance(v, np.generic):
        return v.item()
    return v


def lbp_gate(f: FunctionHandle, region: OrderInterval, seed: int) -> Optional[SolveReport]:
    """Refuse non-LBP handles with a witness; ``None`` means the hypothesis holds."""
    if f.is_dsl:
        return None
    report = check_lbp(f, region, trials=LBP_TRIALS, seed=seed)
    if report.passed and f.lbp:
        return None
    detail = "notLbp"
    extras = {"lbpCheck": report.to_dict()}
    if report.passed:
        extras["note"] = "declared non-LBP builtin; sampling found no witness"
    return SolveReport(hypothesis_violated(detail), detail=detail, extras=extras)


def continuity_note(f: FunctionHandle, region: OrderInterval, seed: int) -> Optional[str]:
    """Probe order continuity; a suspect atom downgrades the certificate."""
    probe = continuity_probe(f, region, grid=8, levels=12, samples=4, seed=seed)
    if probe.continuous:
        return None
    return f"suspect discontinuity on atoms {probe.suspect_atoms}"


def trace_event(frame: Frame, event: str, cell: Cell, **info) -> dict:
    from ..io import dump_band

    out = {"event": event, "band": dump_band(cell.band(frame)), "lo": cell.lo, "hi": cell.hi,
           "steps": cell.steps}
    out.update(info)
    return out


def splice_check(fn, frame: Frame, A: np.ndarray, B: np.ndarray, rng: np.random.Generator,
                 count: int = 1000) -> int:
    """Count splices where P(u) = P(w) but P(f(u)) != P(f(w)) exactly."""
    U = A + rng.random((count, frame.n)) * (B - A)
    W = A + rng.random((count, frame.n)) * (B - A)
    P = rng.random((count, frame.n)) < 0.5
    W = np.where(P, U, W)
    FU, FW = fn(U), fn(W)
    return int(np.any(P & (FU != FW), axis=1).sum())


def segment(A: np.ndarray, B: np.ndarray, T: np.ndarray) -> np.ndarray:
    """a + t(b - a), exact at t = 0 and t = 1."""
    X = A + T * (B - A)
    return np.where(T == 1.0, B, np.where(T == 0.0, A, X))
