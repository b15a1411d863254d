"""Numeric order differentiation: estimation, remainder checks, classification.

The definitions quantify over every net shrinking to zero; this engine fixes
the dyadic scale family delta_j = 2^-j r and judges differentiability by the
decay of the scaled remainder along it.  Reports are probes, not proofs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import Element, Frame, is_weak_order_unit
from .bands import TAU_EQ
from .dsl.handles import FunctionHandle
from .errors import DomainViolation, NoConvergence

H0 = 1e-3
STABLE = 1e-9
MAX_HALVINGS = 8
RESIDUAL_PASS = 1e-4

ORDER = "order"
SUPER = "super"

SUPER_DIFFERENTIABLE = "superDifferentiable"
ORDER_ONLY = "orderOnly"
NOT_DIFFERENTIABLE = "notDifferentiable"


def central_difference(fn, C: np.ndarray, h: float) -> np.ndarray:
    """(f(c + h e) - f(c - h e)) / 2h on frame arrays."""
    both = fn(np.stack([C + h, C - h]))
    return (both[0] - both[1]) / (2.0 * h)


def estimate_derivative(f: FunctionHandle, c: Element, radius: Optional[Element] = None,
                        h0: float = H0, stable: float = STABLE,
                        max_halvings: int = MAX_HALVINGS) -> Element:
    """Atom-wise central differences with one Richardson step, halving h until
    successive extrapolated estimates agree to ``stable``.

    With ``radius`` the probe stays inside the neighbourhood N(c, radius).
    """
    frame = f.frame_for(c) if radius is None else f.frame_for(c, radius)
    fn = f.compile(frame)
    C = frame.take(c)
    h = h0
    if radius is not None:
        h = min(h, 0.5 * float(frame.take(radius).min()))
    prev_d = central_difference(fn, C, h)
    prev_r = None
    for _ in range(max_halvings):
        h *= 0.5
        d = central_difference(fn, C, h)
        r = (4.0 * d - prev_d) / 3.0
        if prev_r is not None:
            gap = np.abs(r - prev_r)
            if np.all(gap <= stable):
                return frame.element(r)
        prev_d, prev_r = d, r
    raise NoConvergence(np.flatnonzero(~(np.abs(r - prev_r) <= stable)) if prev_r is not None else [])


@dataclass
class DiffReport:
    derivative: Element
    mode: str
    max_scaled_residual: float
    thin_set_residual: float
    passed: bool
    witness: Optional[Element] = None
    residual_by_scale: Optional[list] = None

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self):
        from .io import dump_element

        out = {
            "derivative": dump_element(self.derivative),
            "mode": self.mode,
            "maxScaledResidual": self.max_scaled_residual,
            "thinSetResidual": self.thin_set_residual,
            "verdict": self.verdict,
        }
        if self.witness is not None:
            out["witness"] = dump_element(self.witness)
        return out


def _check_domain(f: FunctionHandle, frame: Frame, C: np.ndarray, R: np.ndarray):
    bounds = f.domain_bounds(frame.model)
    if bounds is None:
        return
    lo, hi = bounds
    if np.any(C - R < lo - TAU_EQ) or np.any(C + R > hi + TAU_EQ):
        raise DomainViolation(f"c +- r leaves the domain of {f.label}")


def verify_differentiability(f: FunctionHandle, c: Element, d: Element, mode: str, r: Element,
                             samples: int = 32, seed: int = 0, levels: int = 20,
                             tol: float = RESIDUAL_PASS) -> DiffReport:
    """Check |f(z) - f(c) - (z - c) d| <= |z - c| eps along delta_j = 2^-j r.

    Order mode samples z with every atom displaced (|z - c| a weak order
    unit, so z lies in N(c, r)).  Super mode also samples thin z, with a
    random nonempty proper subset of atoms pinned to c.  The scaled residual
    divides atom-wise by max(|z - c|, TAU_EQ).  The check passes when the
    largest scaled residual over the three finest scales is at most ``tol``.
    """
    if mode not in (ORDER, SUPER):
        raise ValueError(f"mode must be {ORDER!r} or {SUPER!r}")
    if not is_weak_order_unit(r):
        raise ValueError("r must be a weak order unit")
    frame = f.frame_for(c, d, r)
    if mode == SUPER and not frame.model.is_atomic and frame.n < 2:
        frame = frame.refine(1)
    fn = f.compile(frame)
    C, D, R = frame.take_all(c, d, r)
    _check_domain(f, frame, C, R)
    nat = frame.n
    rng = np.random.default_rng(seed)

    signs = np.where(rng.random((samples, nat)) < 0.5, -1.0, 1.0)
    full = signs * rng.uniform(0.5, 1.0, (samples, nat))
    full = np.vstack([full, np.ones(nat), -np.ones(nat)])
    thin = np.zeros((0, nat))
    if mode == SUPER and nat > 1:
        pins = rng.random((samples, nat)) < 0.5
        for i in range(samples):
            # force a nonempty proper subset
            if pins[i].all():
                pins[i, rng.integers(nat)] = False
            if not pins[i].any():
                pins[i, rng.integers(nat)] = True
        moves = np.where(rng.random((samples, nat)) < 0.5, -1.0, 1.0) * rng.uniform(0.5, 1.0, (samples, nat))
        thin = np.where(pins, 0.0, moves)
        # single-atom thin moves along each axis
        thin = np.vstack([thin, np.eye(nat), -np.eye(nat)])
    S = np.vstack([full, thin])
    is_thin = np.arange(len(S)) >= len(full)

    fc = fn(C[None, :])[0]
    res_full, res_thin = [], []
    worst, worst_z = -1.0, None
    for j in range(1, levels + 1):
        Z = C + (2.0 ** -j) * S * R
        dz = Z - C
        rem = np.abs(fn(Z) - fc - dz * D)
        scaled = rem / np.maximum(np.abs(dz), TAU_EQ)
        per_sample = scaled.max(axis=1)
        res_full.append(float(per_sample[~is_thin].max()))
        res_thin.append(float(per_sample[is_thin].max()) if is_thin.any() else 0.0)
        if j > levels - 3:
            k = int(np.argmax(per_sample))
            if per_sample[k] > worst:
                worst, worst_z = float(per_sample[k]), Z[k]

    max_full = max(res_full[-3:])
    max_thin = max(res_thin[-3:])
    passed = max(max_full, max_thin) <= tol
    return DiffReport(
        derivative=d,
        mode=mode,
        max_scaled_residual=max(max_full, max_thin),
        thin_set_residual=max_thin,
        passed=passed,
        witness=None if passed else frame.element(worst_z),
        residual_by_scale=[max(a, b) for a, b in zip(res_full, res_thin)],
    )


def classify(f: FunctionHandle, c: Element, r: Element, seed: int = 0) -> str:
    """Three-way verdict: super order, order only, or not differentiable at c."""
    try:
        d = estimate_derivative(f, c, radius=r)
    except NoConvergence:
        return NOT_DIFFERENTIABLE
    if verify_differentiability(f, c, d, SUPER, r, seed=seed).passed:
        return SUPER_DIFFERENTIABLE
    if verify_differentiability(f, c, d, ORDER, r, seed=seed).passed:
        return ORDER_ONLY
    return NOT_DIFFERENTIABLE
