"""Dynamic checks on function handles: LBP splicing and a continuity probe."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..algebra import Frame
from ..bands import TAU_EQ, frame_band
from ..intervals import OrderInterval
from .handles import FunctionHandle


@dataclass
class LbpReport:
    passed: bool
    trials: int
    violations: int
    witness: Optional[dict] = None

    def to_dict(self):
        from ..io import dump_band, dump_element

        out = {"passed": self.passed, "trials": self.trials, "violations": self.violations}
        if self.witness:
            w = self.witness
            out["witness"] = {
                "band": dump_band(w["band"]),
                "x": dump_element(w["x"]),
                "y": dump_element(w["y"]),
                "fx": dump_element(w["fx"]),
                "fy": dump_element(w["fy"]),
            }
        return out


def is_lbp_static(f: FunctionHandle) -> bool:
    """DSL expressions act atom by atom; builtins declare their status."""
    return f.is_dsl or f.lbp


def _sample_frame(f: FunctionHandle, region: OrderInterval) -> Frame:
    frame = f.frame_for(region.a, region.b)
    if not frame.model.is_atomic and frame.n < 2:
        frame = frame.refine(1)
    return frame


def check_lbp(f: FunctionHandle, region: OrderInterval, trials: int = 256, seed: int = 0,
              tol: float = TAU_EQ) -> LbpReport:
    """Look for a band P and points x, y with P(x) = P(y) but P(f(x)) != P(f(y)).

    The second point is the splice y = P(x) + P^d(w).  The first trials use
    the endpoints a, w = b with every single-atom band; the rest are random.
    """
    frame = _sample_frame(f, region)
    fn = f.compile(frame)
    rng = np.random.default_rng(seed)
    a, b = frame.take_all(region.a, region.b)
    nat = frame.n

    k = min(trials, nat)
    X = np.empty((trials, nat))
    W = np.empty((trials, nat))
    P = np.empty((trials, nat), dtype=bool)
    X[:k], W[:k] = a, b
    P[:k] = np.eye(nat, dtype=bool)[:k]
    if trials > k:
        X[k:] = region.sample(frame, rng, trials - k)
        W[k:] = region.sample(frame, rng, trials - k)
        P[k:] = rng.random((trials - k, nat)) < 0.5
    Y = np.where(P, X, W)
    FX, FY = fn(X), fn(Y)
    bad = P & (np.abs(FX - FY) > tol)
    rows = np.flatnonzero(bad.any(axis=1))
    if len(rows) == 0:
        return LbpReport(True, trials, 0)
    i = rows[0]
    witness = {
        "band": frame_band(frame, P[i]),
        "x": frame.element(X[i]),
        "y": frame.element(Y[i]),
        "fx": frame.element(FX[i]),
        "fy": frame.element(FY[i]),
    }
    return LbpReport(False, trials, int(len(rows)), witness)


@dataclass
class ContinuityReport:
    continuous: bool
    suspect_atoms: list[int]
    deltas: list[float]
    oscillation: list[float]  # max over atoms, per level
    ratios: list[float]
    note: str = "sampled probe; a heuristic, not a proof of order continuity"

    def to_dict(self):
        return {
            "continuous": self.continuous,
            "suspectAtoms": self.suspect_atoms,
            "oscillation": self.oscillation,
            "ratios": self.ratios,
            "note": self.note,
        }


def continuity_probe(f: FunctionHandle, region: OrderInterval, grid: int = 8, levels: int = 20,
                     samples: int = 16, seed: int = 0, tol: float = 1e-6) -> ContinuityReport:
    """Estimate atom-wise oscillation of f on shrinking boxes around grid centres.

    Centres are a + (k/grid)(b - a) for k = 0..grid; the box at level j has
    half-width 2^-j (b - a).  An atom is suspect when its oscillation at the
    finest level stays above ``tol`` and has not halved over the last five
    levels (any Hoelder continuous atom with exponent > 1/5 decays faster).
    """
    frame = _sample_frame(f, region)
    fn = f.compile(frame)
    rng = np.random.default_rng(seed)
    a, b = frame.take_all(region.a, region.b)
    nat = frame.n
    width = b - a

    centres = a + np.linspace(0.0, 1.0, grid + 1)[:, None] * width
    fc = fn(centres)
    # directions: random box points, all-sign corners, and thin (partly pinned) moves
    dirs = [rng.uniform(-1.0, 1.0, (samples, nat)), np.ones((1, nat)), -np.ones((1, nat))]
    if nat > 1:
        thin = rng.uniform(-1.0, 1.0, (samples, nat)) * (rng.random((samples, nat)) < 0.5)
        dirs.append(thin)
        dirs.append(np.eye(nat))
        dirs.append(-np.eye(nat))
    S = np.vstack(dirs)

    osc = np.zeros((levels, nat))
    deltas = []
    for j in range(levels):
        scale = 2.0 ** -(j + 1)
        deltas.append(scale)
        Z = np.clip(centres[:, None, :] + scale * S[None, :, :] * width, a, b)
        FZ = fn(Z.reshape(-1, nat)).reshape(Z.shape)
        osc[j] = np.abs(FZ - fc[:, None, :]).max(axis=(0, 1))

    back = osc[max(0, levels - 6)]
    suspect = (osc[-1] > tol) & (osc[-1] > 0.5 * back)
    per_level = osc.max(axis=1)
    ratios = [float(per_level[j + 1] / per_level[j]) if per_level[j] > 0 else 0.0
              for j in range(levels - 1)]
    return ContinuityReport(
        continuous=not bool(suspect.any()),
        suspect_atoms=[int(i) for i in np.flatnonzero(suspect)],
        deltas=deltas,
        oscillation=[float(v) for v in per_level],
        ratios=ratios,
    )
