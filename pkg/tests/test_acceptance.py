"""The ten acceptance criteria, each at its stated tolerance.

Every test records a single PASS/FAIL line (shown in the terminal summary)
before asserting.
"""
import io as _io
import json
import math
import subprocess
import sys
import time
from contextlib import redirect_stdout

import numpy as np

from latcalc import (
    Band,
    ComplexElement,
    Frame,
    ModelSpec,
    OrderInterval,
    band_eq,
    band_le,
    band_lt,
    cmodulus,
    cmodulus_grid,
    element,
    is_weak_order_unit,
    ladder_band,
    pos_part,
)
from latcalc.bands import frame_band
from latcalc.calculus import SUPER_DIFFERENTIABLE, central_difference, classify, estimate_derivative
from latcalc.cli import run
from latcalc.demos import DEMOS
from latcalc.dsl import BuiltinFunction, DslFunction, check_lbp, differentiate
from latcalc.dsl.evaluate import compile_expr
from latcalc.solvers.common import MAX_BISECTIONS
from latcalc.solvers import (
    FEASIBLE,
    solve_evt,
    solve_ivt,
    solve_mvt,
    solve_rolle,
)

from helpers import ATOMIC8, DYADIC5, random_box, random_polynomial, random_smooth, record


def _random_pair(rng, model):
    """Random elements with frequent exact ties."""
    if model.is_atomic:
        x = rng.normal(size=8)
        y = np.where(rng.random(8) < 0.3, x, rng.normal(size=8))
        return element(model, x), element(model, y)
    xs = rng.normal(size=2 ** int(rng.integers(0, 6)))
    ys = rng.normal(size=2 ** int(rng.integers(0, 6)))
    x, y = element(model, xs), element(model, ys)
    if rng.random() < 0.3:
        y = band_lt(x, y, 0.0)(y) + (~band_lt(x, y, 0.0))(x)  # ties on a band
    return x, y


def _random_band(rng, frame):
    return frame_band(frame, rng.random(frame.n) < 0.5)


def _band_suite(rng, model):
    failures = []
    x, y = _random_pair(rng, model)
    lt, gt, eq = band_lt(x, y), band_lt(y, x), band_eq(x, y)
    if lt(x) + gt(x) + eq(x) != x or lt(y) + gt(y) + eq(y) != y:
        failures.append("decomposition")
    if lt(y - x) != pos_part(y - x) or not eq(y - x).is_zero():
        failures.append("positive part")
    frame = Frame.of(x, y).refine(2)
    X, Y = frame.take_all(x, y)
    # P(x) <= P(y) forces P inside B_{x<=y}
    p = frame_band(frame, (rng.random(frame.n) < 0.5) & (X <= Y))
    if not p.issubset(band_le(x, y)):
        failures.append("le inclusion")
    p = frame_band(frame, (rng.random(frame.n) < 0.5) & (X == Y))
    if not p.issubset(band_eq(x, y)):
        failures.append("eq inclusion")
    # P(y - x) a weak order unit of P's band forces P inside B_{x<y}
    p = frame_band(frame, (rng.random(frame.n) < 0.5) & (Y - X > 0))
    if not p.issubset(band_lt(x, y, tol=0.0)):
        failures.append("lt inclusion")
    # and for a random band the antecedents are checked directly
    q = _random_band(rng, frame)
    qx, qy = q(x), q(y)
    if qx.le(qy) and not q.issubset(band_le(x, y)):
        failures.append("le inclusion (random band)")
    if qx == qy and not q.issubset(band_eq(x, y)):
        failures.append("eq inclusion (random band)")
    return failures


def test_ac1_band_algebra():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    failures = []
    for _ in range(1000):
        failures += _band_suite(rng, ATOMIC8)
    for _ in range(200):
        failures += _band_suite(rng, DYADIC5)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 5.0
    record(1, ok, f"band algebra: 1000 atomic + 200 dyadic pairs, {len(failures)} failures, {elapsed:.2f}s")
    assert ok, failures[:5]


def test_ac2_complex_modulus():
    rng = np.random.default_rng(2)
    worst, monotone = 0.0, True
    for i in range(100):
        model = ATOMIC8 if i % 2 else DYADIC5
        n = 8 if model.is_atomic else 2 ** int(rng.integers(0, 6))
        r = rng.uniform(1e-3, 10.0, n)
        th = rng.uniform(0, 2 * np.pi, n)
        z = ComplexElement(element(model, r * np.cos(th)), element(model, r * np.sin(th)))
        exact = cmodulus(z)
        assert (1e-3 * model.unit()).le(exact, 1e-12)
        grids = [cmodulus_grid(z, k) for k in (1024, 2048, 4096)]
        frame = Frame.of(exact, *grids)
        E, G1, G2, G4 = frame.take_all(exact, *grids)
        worst = max(worst, float(np.max(np.abs(G4 - E) / E)))
        monotone &= bool(np.all(G1 <= G2) and np.all(G2 <= G4))
    ok = worst <= 1e-6 and monotone
    record(2, ok, f"complex modulus: max relative error {worst:.2e} (<= 1e-6), refinement monotone={monotone}")
    assert ok


def test_ac3_ivt_fixture():
    report = DEMOS["ivt-fail"].run(0)
    audit = report["gridAudit"]
    ok = (report["certificate"] == "hypothesisViolated(notLbp)" and audit["points"] == 10_000
          and audit["certifiedLowerBound"] >= 0.05)
    record(3, ok, f"ivt-fail: {report['certificate']}, grid distance {audit['gridDistance']:.4f}, "
                  f"certified bound {audit['certifiedLowerBound']:.4f} (>= 0.05)")
    assert ok


def _ivt_problem(rng, model):
    f = DslFunction.parse(random_polynomial(rng, model), model)
    a, b = random_box(rng, model)
    fa, fb = f(a), f(b)
    n = 8 if model.is_atomic else 2 ** int(rng.integers(0, 6))
    y = fa + element(model, rng.uniform(0, 1, n)) * (fb - fa)
    return f, OrderInterval(a, b), y


def test_ac4_ivt_solver():
    rng = np.random.default_rng(4)
    bad, worst_res, worst_steps = 0, 0.0, 0
    for i in range(200):
        f, iv, y = _ivt_problem(rng, ATOMIC8)
        rep = solve_ivt(f, iv, y, seed=i)
        worst_res = max(worst_res, float(rep.residual.values.max()))
        steps = max(e["steps"] for e in rep.trace)
        worst_steps = max(worst_steps, steps)
        if rep.certificate != FEASIBLE or rep.residual.values.max() > 1e-8 or steps > MAX_BISECTIONS \
                or not iv.contains(rep.witness):
            bad += 1
    bad_d, worst_res_d, worst_splits = 0, 0.0, 0
    for i in range(50):
        f, iv, y = _ivt_problem(rng, DYADIC5)
        rep = solve_ivt(f, iv, y, seed=i)
        splits = sum(e["event"] == "split" for e in rep.trace)
        worst_splits = max(worst_splits, splits)
        worst_res_d = max(worst_res_d, float(rep.residual.values.max()))
        if rep.certificate != FEASIBLE or rep.residual.values.max() > 1e-6 or splits > 64:
            bad_d += 1
    ok = bad == 0 and bad_d == 0
    record(4, ok, f"ivt: 200 atomic ({bad} bad, residual <= {worst_res:.1e}, bisections <= {worst_steps}); "
                  f"50 dyadic ({bad_d} bad, residual <= {worst_res_d:.1e}, splits <= {worst_splits})")
    assert ok


def test_ac5_evt():
    fixture = DEMOS["evt-fail"].run(0)
    rng = np.random.default_rng(5)
    bad, worst = 0, 0.0
    for i in range(100):
        model = ATOMIC8 if i % 4 else DYADIC5
        f = DslFunction.parse(random_polynomial(rng, model, degree=4), model)
        iv = OrderInterval(*random_box(rng, model))
        rep = solve_evt(f, iv, seed=i)
        c, d = rep.witness["min"], rep.witness["max"]
        frame = f.frame_for(iv.a, iv.b, c, d).refine(3)
        fn = f.compile(frame)
        X = iv.sample(frame, np.random.default_rng(10_000 + i), 10_000)
        FX = fn(X)
        FC, FD = fn(np.stack([frame.take(c), frame.take(d)]))
        gap = max(float((FX - FD).max()), float((FC - FX).max()))
        worst = max(worst, gap)
        if rep.certificate != FEASIBLE or gap > 1e-6 or not (iv.contains(c) and iv.contains(d)):
            bad += 1
    ok = fixture["certificate"].startswith("hypothesisViolated") and bad == 0
    record(5, ok, f"evt: evt-fail {fixture['certificate']}; 100 random problems, {bad} bad, "
                  f"worst audit excess {worst:.1e} (<= 1e-6) on 10^4 points each")
    assert ok


def test_ac6_rolle_mvt():
    m = ModelSpec.atomic(4)
    unit = OrderInterval(m.zero(), m.unit())
    rolle = solve_rolle(DslFunction.parse("x*x - x"), unit)
    rolle_err = float(np.abs(rolle.witness.values - 0.5).max())
    slope = float(np.abs(DslFunction.parse("2*x - 1")(rolle.witness).values).max())
    mvt = solve_mvt(DslFunction.parse("x^3"), unit)
    mvt_err = float(np.abs(mvt.witness.values - 1 / math.sqrt(3.0)).max())
    rng = np.random.default_rng(6)
    bad, worst = 0, 0.0
    for i in range(100):
        f = DslFunction.parse(random_polynomial(rng, ATOMIC8), ATOMIC8)
        rep = solve_mvt(f, OrderInterval(*random_box(rng, ATOMIC8)), seed=i)
        worst = max(worst, float(rep.residual.values.max()))
        if rep.certificate != FEASIBLE or rep.residual.values.max() > 1e-8:
            bad += 1
    ok = rolle_err <= 1e-6 and slope <= 1e-6 and mvt_err <= 1e-6 and bad == 0
    record(6, ok, f"rolle x0 off by {rolle_err:.1e}, |f'(x0)| = {slope:.1e}; mvt x^3 off by {mvt_err:.1e}; "
                  f"100 random mvt: {bad} bad, residual <= {worst:.1e}")
    assert ok


def test_ac7_differentiation_engine():
    rng = np.random.default_rng(7)
    frame = Frame.of(ATOMIC8.unit())
    ratios, rule_gap, used = [], 0.0, 0
    while used < 100:
        expr = DslFunction.parse(random_smooth(rng, ATOMIC8), ATOMIC8).expr
        C = rng.uniform(-0.5, 0.5, 8)
        fn = compile_expr(expr, frame)
        f3 = compile_expr(differentiate(differentiate(differentiate(expr))), frame)(C)
        # the ratio test needs a visible h^2 term above rounding noise
        keep = np.abs(f3) > 1e-2 * (1.0 + np.abs(fn(C)))
        if not keep.any():
            continue
        used += 1
        exact = compile_expr(differentiate(expr), frame)(C)
        e1 = np.abs(central_difference(fn, C, 1e-3) - exact)
        e2 = np.abs(central_difference(fn, C, 5e-4) - exact)
        ratios.extend((e1[keep] / e2[keep]).tolist())

        g = DslFunction.parse(random_smooth(rng, ATOMIC8), ATOMIC8)
        f = DslFunction(expr)
        c = frame.element(C)
        df, dg = estimate_derivative(f, c), estimate_derivative(g, c)
        d_sum = estimate_derivative(DslFunction.parse(f"({f.label}) + ({g.label})", ATOMIC8), c)
        d_prod = estimate_derivative(DslFunction.parse(f"({f.label}) * ({g.label})", ATOMIC8), c)
        rule_gap = max(rule_gap,
                       float(np.abs((d_sum - (df + dg)).values).max()),
                       float(np.abs((d_prod - (df * g(c) + f(c) * dg)).values).max()))
    lo, hi = min(ratios), max(ratios)
    ok = 3.5 <= lo and hi <= 4.5 and rule_gap <= 1e-6
    record(7, ok, f"differentiation: {len(ratios)} atom ratios over 100 functions in [{lo:.3f}, {hi:.3f}]; "
                  f"sum/product rule gap {rule_gap:.1e} (<= 1e-6)")
    assert ok


def _candidates(rng):
    m2, m4 = ModelSpec.atomic(2), ModelSpec.atomic(4)
    for _ in range(30):
        f = DslFunction.parse(random_smooth(rng, ATOMIC8), ATOMIC8)
        yield f, element(ATOMIC8, rng.uniform(-0.5, 0.5, 8)), ATOMIC8.constant(0.05)
    yield BuiltinFunction("kn_threshold"), element(m4, [0.75, 0.375, 0.05, 0.2]), m4.constant(0.01)
    yield BuiltinFunction("coord_sign"), element(m2, [0.5, -0.3]), m2.constant(0.1)
    yield BuiltinFunction("coord_sign"), m2.zero(), m2.constant(0.1)
    yield BuiltinFunction("first_square"), element(m2, [0.5, 0.5]), m2.constant(0.1)
    yield BuiltinFunction("first_square"), element(m2, [0.2, 0.5]), m2.constant(0.1)
    yield BuiltinFunction("swizzle_affine"), element(m2, [0.5, 0.5]), m2.constant(0.1)
    yield BuiltinFunction("thin_sqrt"), m2.zero(), m2.unit()


def test_ac8_super_implies_lbp():
    rng = np.random.default_rng(8)
    supers, violations = 0, 0
    for f, c, r in _candidates(rng):
        if classify(f, c, r) != SUPER_DIFFERENTIABLE:
            continue
        supers += 1
        rep = check_lbp(f, OrderInterval(c - r, c + r), trials=1000, seed=supers)
        violations += rep.violations
    m2 = ModelSpec.atomic(2)
    thin = classify(BuiltinFunction("thin_sqrt"), m2.zero(), m2.unit())
    ok = supers > 0 and violations == 0 and thin == "orderOnly"
    record(8, ok, f"super => lbp: {supers} super differentiable handles, {violations} splice violations "
                  f"in 1000 trials each; thin_sqrt at 0 is {thin}")
    assert ok


def test_ac9_ladder():
    rng = np.random.default_rng(9)
    bad = 0
    for _ in range(100):
        r = element(ATOMIC8, rng.uniform(1e-3, 2.0, 8))
        u = element(ATOMIC8, rng.uniform(0.0, 5.0, 8))
        assert is_weak_order_unit(r)
        m_star = math.ceil(1.0 / float(r.values.min()))
        prev_band, prev_u = Band.empty(ATOMIC8), ATOMIC8.zero()
        for m in range(1, m_star + 1):
            b = ladder_band(r, m)
            pu = b(u)
            if not prev_band.issubset(b) or not prev_u.le(pu):
                bad += 1
            prev_band, prev_u = b, pu
        if not prev_band.is_whole or prev_u != u:
            bad += 1
    ok = bad == 0
    record(9, ok, f"ladder: 100 random r >> 0, {bad} failures (monotone in m, whole at ceil(1/min r), P(u) = u)")
    assert ok


def _run_cli(argv):
    buf = _io.StringIO()
    with redirect_stdout(buf):
        code = run(argv)
    return code, buf.getvalue().encode()


def test_ac10_determinism(tmp_path):
    z = {"re": [0, 0, 0], "im": [0, 0, 0]}
    problems = {
        "ivt": {"model": {"kind": "atomic", "dim": 3}, "function": {"dsl": "x^3 - [1, 0.5, 0.25]*x"},
                "interval": {"a": [-2, -2, -2], "b": [2, 2, 2]}, "target": [0.5, -0.5, 1.0], "seed": 42},
        "evt": {"model": "dyadic:5", "function": {"dsl": "sin(3*x) * [1, -1, 2, 0.5]"},
                "interval": {"a": [0], "b": [2]}, "seed": 42},
        "rolle": {"model": "atomic:3", "function": {"dsl": "(x - 1) * x * [1, 2, 3]"},
                  "interval": {"a": [0, 0, 0], "b": [1, 1, 1]}, "seed": 42},
        "mvt": {"model": "dyadic:4", "function": {"dsl": "exp(x) - [1, 2] * x^2"},
                "interval": {"a": [0, -1], "b": [1, 1]}, "seed": 42},
        "cmvt": {"model": "atomic:3", "function": {"complex_poly": [z, {"re": [1, 2, 3], "im": [0, 1, 0]},
                                                                     {"re": [0, 0, 1], "im": [1, 0, 0]},
                                                                     {"re": [1, 1, 1], "im": [0, 0, 0]}]},
                 "interval": {"a": z, "b": {"re": [1, 1, 1], "im": [0.5, 1, 2]}}, "seed": 42},
    }
    mismatched = []
    for kind, prob in problems.items():
        path = tmp_path / f"{kind}.json"
        path.write_text(json.dumps(prob))
        first = _run_cli(["solve", kind, "--problem", str(path), "--json"])
        second = _run_cli(["solve", kind, "--problem", str(path), "--json"])
        if first != second or first[0] != 0:
            mismatched.append(kind)
    cmd = [sys.executable, "-m", "latcalc.cli", "solve", "evt", "--problem", str(tmp_path / "evt.json"), "--json"]
    outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    if outs[0] != outs[1] or outs[0] != _run_cli(cmd[3:])[1]:
        mismatched.append("evt (separate processes)")
    ok = not mismatched
    record(10, ok, f"determinism: {len(problems)} solvers twice in-process plus evt in two processes, "
                   f"mismatches {mismatched or 'none'}")
    assert ok
