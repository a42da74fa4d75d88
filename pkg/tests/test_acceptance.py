"""Exit criteria, one test per criterion.

Each test appends a PASS/FAIL line that is printed in the terminal summary.
Tolerances are fixed here and nowhere else.
"""
import filecmp

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, make_walk
from oracles import sbend_lengthening
from meshwalk import (DisorderSpec, ExchangeSymmetry, SBendGeometry, build_walk_unitary,
                      extend_phase_map, generate_phase_map, joint_distribution,
                      mean_position_variance, mz_output, oracle_joint_distribution,
                      path_lengthening, phase_from_deformation, phase_from_mz_measurement,
                      relative_distance_distribution, run_ensemble, scaling_fit, similarity, variance_R)
from meshwalk.cli import main
from meshwalk.lattice import WalkConfig, evolve_single
from meshwalk.metrics import classical_walk_distribution, position_variance, total_variation

KINDS = ("ordered", "static", "dynamic", "fluctuating")
BOSON, FERMION = ExchangeSymmetry.boson(), ExchangeSymmetry.fermion()
ALL_SYMMETRIES = (BOSON, FERMION, ExchangeSymmetry.general(0.7), ExchangeSymmetry.distinguishable())


def record(label, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    return ok


def test_c01_unitarity_and_normalization():
    rng = np.random.default_rng(20120101)
    worst_u, worst_p = 0.0, 0.0
    for i in range(100):
        n = int(rng.integers(1, 13))
        kind = KINDS[i % 4]
        config, pm = make_walk(n, kind, seed=int(rng.integers(2**63)))
        u = build_walk_unitary(config, pm)
        worst_u = max(worst_u, u.unitarity_error())
        sym = ALL_SYMMETRIES[i % 4]
        p = joint_distribution(u, config.input_a, config.input_b, sym).matrix
        worst_p = max(worst_p, abs(p.sum() - 1.0))
    ok = worst_u < 1e-12 and worst_p < 1e-10
    assert record("C1 unitarity/normalization", ok,
                  f"max |U^dag U - I| = {worst_u:.2e} (<1e-12), max |sum P - 1| = {worst_p:.2e} (<1e-10)")


def test_c02_oracle_equivalence():
    worst = 0.0
    for sym in ALL_SYMMETRIES:
        for n in range(1, 7):
            for seed in range(20):
                config, pm = make_walk(n, KINDS[1 + seed % 3], seed=seed)
                u = build_walk_unitary(config, pm)
                fast = joint_distribution(u, config.input_a, config.input_b, sym).matrix
                slow = oracle_joint_distribution(config, pm, config.input_a, config.input_b, sym).matrix
                worst = max(worst, float(np.max(np.abs(fast - slow))))
    ok = worst < 1e-10
    assert record("C2 oracle equivalence", ok, f"max |P - P_oracle| = {worst:.2e} over 480 cases (<1e-10)")


def test_c03_hom_limits():
    config, pm = make_walk(1)
    u = build_walk_unitary(config, pm)
    a, b = config.input_a, config.input_b
    pb = joint_distribution(u, a, b, BOSON).matrix
    pf = joint_distribution(u, a, b, FERMION)
    pr = relative_distance_distribution(pf)
    errs = [abs(pb[a, b]), abs(pb[b, a]), abs(pb[a, a] - 0.5), abs(pb[b, b] - 0.5),
            float(np.max(np.abs(np.diag(pf.matrix)))), abs(pr[1] - 1.0)]
    ok = max(errs) < 1e-12
    assert record("C3 HOM limits", ok, f"max deviation {max(errs):.2e} (<1e-12)")


def test_c04_ballistic_scaling():
    steps = range(4, 21)
    fits = {}
    for sym in (BOSON, FERMION):
        pts = []
        for n in steps:
            config, pm = make_walk(n)
            u = build_walk_unitary(config, pm)
            pts.append((n, mean_position_variance(joint_distribution(u, config.input_a, config.input_b, sym))))
        fits[sym.tag] = scaling_fit(pts).exponent
    ok = all(abs(e - 2.0) <= 0.1 for e in fits.values())
    assert record("C4 ballistic scaling", ok,
                  ", ".join(f"{k} exponent {v:.4f}" for k, v in fits.items()) + " (2.0 +/- 0.1)")


@pytest.mark.slow
def test_c05_localization_saturation():
    steps = tuple(range(50, 101, 10))
    details, ok = [], True
    for sym in (BOSON, FERMION):
        s = run_ensemble("static", steps, 200, seed=0, amplitude=np.pi, symmetry=sym)
        v = s.mean_var_xm
        growth = v[-1] / v[0] - 1.0
        slope = scaling_fit(list(zip(steps, v))).exponent
        ok &= growth < 0.20 and slope < 0.2
        details.append(f"{sym.tag}: Var(50)={v[0]:.3f} Var(100)={v[-1]:.3f} growth {growth:.1%} slope {slope:.3f}")
    assert record("C5 localization saturation", ok, "; ".join(details) + " (growth <20%, slope <0.2)")


def test_c06_statistics_ordering():
    steps = (4, 6, 8)
    checks = []
    for n in steps:
        config, pm = make_walk(n)
        u = build_walk_unitary(config, pm)
        jb = joint_distribution(u, config.input_a, config.input_b, BOSON)
        jf = joint_distribution(u, config.input_a, config.input_b, FERMION)
        checks.append(("ordered", n, mean_position_variance(jb), mean_position_variance(jf),
                       variance_R(jb), variance_R(jf)))
    sb = run_ensemble("static", steps, 200, seed=0, symmetry=BOSON)
    sf = run_ensemble("static", steps, 200, seed=0, symmetry=FERMION)
    for i, n in enumerate(steps):
        checks.append(("static", n, sb.mean_var_xm[i], sf.mean_var_xm[i], sb.mean_var_r[i], sf.mean_var_r[i]))

    ok, parts = True, []
    for kind, n, xb, xf, rb, rf in checks:
        xm_ok, r_ok = xf < xb, rf > rb
        ok &= xm_ok and r_ok
        parts.append(f"{kind} n={n}: Var(xM) F {xf:.3f} {'<' if xm_ok else '>='} B {xb:.3f} [{'ok' if xm_ok else 'X'}], "
                     f"Var(R) F {rf:.3f} {'>' if r_ok else '<='} B {rb:.3f} [{'ok' if r_ok else 'X'}]")
    record("C6 statistics ordering", ok, "\n    " + "\n    ".join(parts))
    assert ok, "Var_ferm(R) > Var_bos(R) does not hold for every walk; see terminal summary"


def test_c07_classical_limit():
    details, ok = [], True
    for n in (6, 10):
        s = run_ensemble("dynamic", (n,), 500, seed=0)
        classical = classical_walk_distribution(WalkConfig(n))
        tv = total_variation(s.mean_marginal[0], classical)
        ok &= tv < 0.05
        details.append(f"TV(n={n}) = {tv:.4f}")
    dyn = run_ensemble("dynamic", (6,), 500, seed=0).mean_single_var[0]
    sta = run_ensemble("static", (6,), 500, seed=0).mean_single_var[0]
    config, pm = make_walk(6)
    ordered = position_variance(0.5 * (evolve_single(config, pm, config.input_a)
                                       + evolve_single(config, pm, config.input_b)))
    order_ok = sta < dyn < ordered
    ok &= order_ok
    details.append(f"n=6 single-particle variance static {sta:.3f} < dynamic {dyn:.3f} < ordered {ordered:.3f}")
    assert record("C7 classical limit", ok, "; ".join(details) + " (TV < 0.05)")


def test_c08_similarity():
    rng = np.random.default_rng(8)
    d = rng.random((5, 5))
    e = rng.random((5, 5))
    errs = [
        abs(similarity(d, d) - 1.0),
        abs(similarity([[1.0, 0.0]], [[0.0, 1.0]])),
        abs(similarity(3.7 * d, 0.2 * e) - similarity(d, e)),
        abs(similarity([[1.0, 0.0]], [[0.5, 0.5]]) - 0.5),
    ]
    ok = max(errs) < 1e-12
    assert record("C8 similarity", ok, f"max deviation {max(errs):.2e} (<1e-12)")


def test_c09_calibration():
    phis = np.linspace(-np.pi, np.pi, 100)
    rt = max(abs(phase_from_mz_measurement(mz_output(p)[0]) - abs(p)) for p in phis)
    geom = SBendGeometry()
    ds = np.linspace(0.0, geom.d_max, 50)
    quad = np.array([path_lengthening(geom, d) for d in ds])
    ref = np.array([sbend_lengthening(geom.length, geom.height, d) for d in ds])
    dl_err = float(np.max(np.abs(quad - ref)))
    phi = np.array([phase_from_deformation(geom, d) for d in ds])
    mono = bool(np.all(np.diff(phi) > 0))
    ok = rt < 1e-10 and dl_err < 1e-6 and mono
    assert record("C9 calibration", ok,
                  f"MZ round trip {rt:.2e} (<1e-10), dl vs Simpson {dl_err:.2e} um (<1e-6), "
                  f"phi(d) strictly increasing: {mono}")


def test_c10_determinism_and_embedding(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[walk]\nn_steps = 8\n[disorder]\nkind = static\nseed = 11\n[particles]\nsymmetry = fermion\n")
    runs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["simulate", "--config", str(cfg), "--out-dir", str(out), "--no-figures"]) == 0
        runs.append(out)
    files = ("joint.csv", "marginal.csv", "metrics.txt", "phase_map.csv", "heatmap.ppm")
    match, mismatch, errors = filecmp.cmpfiles(runs[0], runs[1], files, shallow=False)
    identical = not mismatch and not errors

    m4 = generate_phase_map(DisorderSpec("static", 2012, 4))
    m6 = extend_phase_map(m4, 6, 14, DisorderSpec("static", 2012, 6))
    m8 = extend_phase_map(m6, 8, 18, DisorderSpec("static", 2012, 8))
    embedded = (np.array_equal(m6.phases[2:12, :4], m4.phases)
                and np.array_equal(m8.phases[2:16, :6], m6.phases)
                and np.array_equal(m8.phases[4:14, :4], m4.phases))
    ok = identical and embedded
    assert record("C10 determinism/embedding", ok,
                  f"byte-identical outputs: {identical} ({len(match)}/{len(files)}), 4 in 6 in 8 embedding: {embedded}")
