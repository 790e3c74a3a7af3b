"""Acceptance gate: every criterion at its stated tolerance, one line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the pass/fail lines.
"""

import time

import numpy as np
import pytest

from compatpair.actions import ActionParams, BlockSymbol, act_block, compat_residual
from compatpair.algebra import (AlgebraElement, heisenberg_pair, quantum_plane,
                                quantum_plane_parity)
from compatpair.analytic import PolyGauss, op_exp_p, op_exp_q
from compatpair.cli import corpus_dir, main
from compatpair.dsl import parse, serialize, validate
from compatpair.errors import ScenarioParseError
from compatpair.groups import (UnitaryModel, affine_group, du_identity_residual,
                               gaussian_bump, lie_compat_residual, real_line)
from compatpair.scenarios import Scenario, run_scenario
from compatpair.symbols import (GaussianTermSymbol, PhaseGrid,
                                translate_first, translate_second)
from compatpair import weyl


def report(criterion: str, passed: bool, detail: str):
    line = f"[acceptance] {criterion}: {'PASS' if passed else 'FAIL'} ({detail})"
    print(line)
    assert passed, line


def two_term_symbol(rng):
    def term():
        s = rng.uniform(0.8, 1.6)
        E = 0.1 * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        E = 0.5 * (E + E.T)
        b = 0.6 * rng.standard_normal(2) + 1j * rng.uniform(-4.0, 4.0, 2)
        amp = rng.standard_normal() + 1j * rng.standard_normal()
        return GaussianTermSymbol.single(amp, s * np.eye(2) + E, b)
    return term() + term()


def test_criterion_1_quantization_homomorphism():
    rng = np.random.default_rng(2024)
    pairs = [(two_term_symbol(rng), two_term_symbol(rng)) for _ in range(20)]
    t0 = time.perf_counter()
    worst = {}
    for n in (256, 512):
        grid = PhaseGrid(n, 8.0)
        worst[n] = 0.0
        for A, B in pairs:
            a, b = A.render(grid), B.render(grid)
            oa = weyl.weyl_op(a, "hermite", 32)
            ob = weyl.weyl_op(b, "hermite", 32)
            oc = weyl.weyl_op(weyl.star(a, b), "hermite", 32)
            num = np.linalg.norm(oc.entries - (oa @ ob).entries)
            worst[n] = max(worst[n], num / (oa.norm() * ob.norm()))
    elapsed = time.perf_counter() - t0
    ok = worst[256] <= 1e-5 and worst[512] <= 5e-6 and elapsed <= 60.0
    report("criterion 1 (Op(a#b) = Op(a)Op(b))", ok,
           f"residual {worst[256]:.2e} at N=256, {worst[512]:.2e} <= halved bound "
           f"at N=512, {elapsed:.1f}s")


def test_criterion_2_projector():
    grid = PhaseGrid(256, 8.0)
    a00 = GaussianTermSymbol.standard().render(grid)
    idem = a00.distance(weyl.star(a00, a00))
    mat = weyl.weyl_op(a00, "hermite", 32)
    ev = np.linalg.eigvalsh(0.5 * (mat.entries + mat.entries.conj().T))
    spec_dev = max(abs(ev[-1] - 1.0), float(np.max(np.abs(ev[:-1]))))
    norm_dev = abs(weyl.opnorm(a00) - 1.0)
    small = GaussianTermSymbol.standard().render(PhaseGrid(64, 4.0))
    oracle_gap = np.linalg.norm(weyl.weyl_op(small, "hermite", 16).entries
                                - weyl.op_direct_hermite(small, 16).entries)
    ok = idem <= 1e-6 and spec_dev <= 1e-6 and oracle_gap <= 1e-4 and norm_dev <= 1e-8
    report("criterion 2 (projector idempotency and spectrum)", ok,
           f"idem {idem:.2e}, eigs {spec_dev:.2e}, oracle gap {oracle_gap:.2e}, "
           f"norm {norm_dev:.2e}")


def test_criterion_3_compatibility():
    rng = np.random.default_rng(33)
    grid = PhaseGrid(256, 8.0)
    def gauss():
        s = rng.uniform(0.8, 1.5)
        E = 0.08 * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        E = 0.5 * (E + E.T)
        b = 0.5 * rng.standard_normal(2) + 0.4j * rng.standard_normal(2)
        return GaussianTermSymbol.single(1.0 + 0.2j * rng.standard_normal(),
                                         s * np.eye(2) + E, b).render(grid)
    syms = [gauss() for _ in range(11)]
    quads = [BlockSymbol("quad", tuple(syms[(i + k) % 11] for k in range(4)))
             for i in range(11)]
    mats = [BlockSymbol("mat2", tuple(syms[(i + k) % 11] for k in range(4)))
            for i in range(11)]
    x1 = heisenberg_pair()
    x2 = quantum_plane(0.25)
    x3 = quantum_plane_parity(0.25)
    par = ActionParams(0.5, 0.5, 0.25)
    par_m = ActionParams(0.5, 0.5, -0.25)    # alpha beta = gamma + 1/2
    worst = 0.0
    for i in range(10):
        for gen in ("p", "x"):
            worst = max(worst, compat_residual(
                "x1b1", AlgebraElement.gen(x1.alphabet, gen), syms[i], syms[i + 1]))
        for gen in ("x", "y"):
            worst = max(worst, compat_residual(
                "x2b2", AlgebraElement.gen(x2.alphabet, gen), syms[i], syms[i + 1], par))
            worst = max(worst, compat_residual(
                "x2b3", AlgebraElement.gen(x2.alphabet, gen), quads[i], quads[i + 1], par))
            worst = max(worst, compat_residual(
                "x2b4", AlgebraElement.gen(x2.alphabet, gen), mats[i], mats[i + 1], par_m))
        for gen in ("x", "y", "chi"):
            worst = max(worst, compat_residual(
                "x3b4", AlgebraElement.gen(x3.alphabet, gen), mats[i], mats[i + 1], par))
    # negative controls
    flip = ActionParams(-0.5, -0.5, 0.25)
    c_sign = compat_residual("x2b2", AlgebraElement.gen(x2.alphabet, "x"),
                             syms[0], syms[1], par, adjoint_params=flip)
    wrongq = ActionParams(0.55, 0.55, 0.3025)
    c_q = compat_residual("x2b2", AlgebraElement.gen(x2.alphabet, "y"),
                          syms[0], syms[1], par, adjoint_params=wrongq)
    par_small = ActionParams(0.25, 0.25, -0.4375)
    A = mats[0]
    xyA = act_block("x", act_block("y", A, "b4", par_small), "b4", par_small)
    yxA = act_block("y", act_block("x", A, "b4", par_small), "b4", par_small)
    q_bad = np.exp(2j * np.pi * par_small.alpha * par_small.beta)  # alpha beta = gamma
    c_ab = xyA.distance(yxA.scale(q_bad)) / xyA.sup()
    ok = worst <= 1e-6 and c_sign >= 1e-2 and c_q >= 1e-2 and c_ab >= 1e-2
    report("criterion 3 (condition (1) across all pairs)", ok,
           f"worst {worst:.2e}; controls sign {c_sign:.2e}, q {c_q:.2e}, "
           f"half-shift {c_ab:.2e}")


def test_criterion_4_induction_engine():
    rep1 = run_scenario(Scenario(name="s1", kind="s1"))
    vals = {r.check_id: r.residual for r in rep1.records}
    s1_worst = max(v for k, v in vals.items()
                   if k.startswith(("welldef", "symmetry", "homomorphism",
                                    "closed-form")))
    rep4 = run_scenario(Scenario(name="s4", kind="s4"))
    vals4 = {r.check_id: r.residual for r in rep4.records}
    s4_closed = max(vals4["closed-form-p"], vals4["closed-form-x"])
    s4_comm = vals4["commutator"]
    ok = s1_worst <= 1e-12 and s4_closed <= 1e-6 and s4_comm <= 1e-6
    report("criterion 4 (induced representations)", ok,
           f"spectral worst {s1_worst:.2e}; Q/P match {s4_closed:.2e}; "
           f"commutator {s4_comm:.2e}")


def test_criterion_5_exponential_weyl_pair():
    rng = np.random.default_rng(5)
    worst = 0.0
    xs = np.linspace(-3, 3, 41)
    for _ in range(5):
        f = PolyGauss.term(rng.standard_normal(4) + 1j * rng.standard_normal(4),
                           rng.uniform(0.8, 1.5), 0.2 * rng.standard_normal())
        alpha, beta = rng.uniform(0.2, 0.7, 2)
        phase = np.exp(2j * np.pi * alpha * beta)
        for e1 in (1, -1):
            for e2 in (1, -1):
                xy = op_exp_q(alpha, op_exp_p(beta, f).scale(e2)).scale(e1)
                yx = op_exp_p(beta, op_exp_q(alpha, f).scale(e1)).scale(e2)
                num = np.max(np.abs(xy(xs) - phase * yx(xs)))
                worst = max(worst, num / np.max(np.abs(xy(xs))))
    rep7 = run_scenario(Scenario(name="s7", kind="s7", samples=2))
    rep8 = run_scenario(Scenario(name="s8", kind="s8", samples=2))
    c7 = [r.residual for r in rep7.records if r.check_id == "closure-relation"][0]
    c8 = [r.residual for r in rep8.records if r.check_id == "closure-relation"][0]
    ok = worst <= 1e-10 and c7 <= 1e-10 and c8 <= 1e-10
    report("criterion 5 (X Y = e^{2 pi i a b} Y X, all variants)", ok,
           f"scalar/eps worst {worst:.2e}; matrix closures {c7:.2e}, {c8:.2e}")


def test_criterion_6_affine_compatibility():
    t0 = time.perf_counter()
    aff = affine_group()
    probes = np.stack(np.meshgrid(np.linspace(1.0, 2.6, 8),
                                  np.linspace(-0.6, 0.6, 8),
                                  indexing="ij"), -1).reshape(-1, 2)
    res = {}
    for n, step in ((48, 2e-2), (96, 1e-2)):
        a = gaussian_bump(aff, (1.35, 0.05), (0.16, 0.2), n=n)
        b = gaussian_bump(aff, (1.5, -0.1), (0.18, 0.22), n=n)
        res[n] = max(lie_compat_residual(xi, a, b, probes, step=step)
                     for xi in ("scale", "shift"))
    a48 = gaussian_bump(aff, (1.35, 0.05), (0.16, 0.2), n=48)
    b48 = gaussian_bump(aff, (1.5, -0.1), (0.18, 0.22), n=48)
    ctrl = lie_compat_residual("scale", a48, b48, probes, step=2e-2,
                               drop_modular=True)
    elapsed = time.perf_counter() - t0
    ok = (res[48] <= 1e-4 and res[96] <= res[48] / 4.0 and ctrl >= 1e-2
          and elapsed <= 120.0)
    report("criterion 6 (affine-group compatibility)", ok,
           f"base {res[48]:.2e}, refined {res[96]:.2e} "
           f"(ratio {res[48] / res[96]:.1f}), control {ctrl:.2e}, {elapsed:.0f}s")


def test_criterion_7_garding_identity():
    worstR, worstA = 0.0, 0.0
    x = np.linspace(-8.0, 8.0, 512)
    vecs = [np.exp(-x ** 2 / 2), x * np.exp(-x ** 2 / 2),
            np.exp(-(x - 0.5) ** 2)]
    lin = real_line()
    UR = UnitaryModel(lin, x)
    for k in range(5):
        a = gaussian_bump(lin, (0.1 * k - 0.2,), (0.4 + 0.05 * k,), n=192)
        for phi in vecs:
            worstR = max(worstR, du_identity_residual("d", a, phi.astype(complex), UR))
    aff = affine_group()
    UA = UnitaryModel(aff, x)
    for k in range(5):
        a = gaussian_bump(aff, (1.3 + 0.05 * k, 0.04 * k - 0.1),
                          (0.16, 0.2), n=48)
        for phi in vecs:
            for xi in ("scale", "shift"):
                worstA = max(worstA, du_identity_residual(xi, a, phi.astype(complex), UA))
    ok = worstR <= 1e-5 and worstA <= 1e-4
    report("criterion 7 (Garding identity)", ok,
           f"line {worstR:.2e} <= 1e-5, affine {worstA:.2e} <= 1e-4")


def test_criterion_8_lattice_scenario_and_weyl_relation():
    rep = run_scenario(Scenario(name="s9", kind="s9", window=20))
    rel = [r.residual for r in rep.records if r.check_id == "relations"][0]
    grid = PhaseGrid(256, 8.0)
    rng = np.random.default_rng(8)
    worst_tr = 0.0
    for _ in range(4):
        s_amp = rng.integers(1, 6)
        t_amp = rng.integers(1, 6)
        s = s_amp / 16.0
        t = t_amp * grid.dx
        g = GaussianTermSymbol.single(1.0 + 0.2j, rng.uniform(0.9, 1.4) * np.eye(2),
                                      0.3 * rng.standard_normal(2))
        a = g.render(grid)
        lhs = translate_second(translate_first(a, s), t)
        rhs = translate_first(translate_second(a, t), s)
        worst_tr = max(worst_tr, lhs.distance(rhs.scale(np.exp(2j * np.pi * s * t))))
    ok = rel <= 1e-10 and worst_tr <= 1e-8
    report("criterion 8 (lattice relations and Weyl relation)", ok,
           f"relations {rel:.2e} <= 1e-10; translate Weyl {worst_tr:.2e} <= 1e-8")


def test_criterion_9_parser_totality_and_corpus():
    rng = np.random.default_rng(99)
    crashes = 0
    seeds = [b"", b"[", b"[scenario]", b"a = 1", b"\xff\xfe", b"# only comment"]
    for i in range(10_000):
        if i < len(seeds):
            blob = seeds[i]
        else:
            blob = bytes(rng.integers(0, 256, rng.integers(0, 80), dtype=np.uint8))
        try:
            parse(blob)
        except ScenarioParseError:
            pass
        except Exception:
            crashes += 1
    root = corpus_dir()
    round_trip_ok = True
    validated = 0
    for path in sorted(root.rglob("*.cp")):
        doc = parse(path.read_bytes())
        round_trip_ok &= parse(serialize(doc)) == doc
        validate(doc)
        validated += 1
    controls_ok = True
    named = []
    for path in sorted((root / "controls").glob("*.cp")):
        rc = main(["verify", str(path), "-o", "/dev/null"])
        controls_ok &= (rc == 1)
        named.append(rc)
    ok = crashes == 0 and round_trip_ok and validated >= 21 and controls_ok
    report("criterion 9 (parser totality, corpus, controls)", ok,
           f"crashes {crashes}/10000, round-trip {round_trip_ok}, "
           f"{validated} files validated, control exits {named}")
