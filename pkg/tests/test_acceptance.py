"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances.

Run with ``pytest -v tests/test_acceptance.py``; the verdict lines are printed
even when output capture is on. Seeds are fixed in advance and never tuned.
"""
import time
import warnings

import numpy as np
import pytest

from _helpers import plaquette_patterns, random_forest_patterns, random_patterns, total_b1
from quditloops.cli import main
from quditloops.errors import PartialDiscretizationError
from quditloops.graph import betti, build_subgraph
from quditloops.lattice import DUAL, PRIMAL, build, elementary_loops, lattice_summary
from quditloops.model import (
    ModelWarning, boundary_term, loglog_fit, p_loop_edge_eq3, p_not_pauli_twirled,
)
from quditloops.runner import run_point
from quditloops.sampling import pattern_from_list
from quditloops.twirl import (
    ErrorModel, clock, coherent_distribution, dense_oracle, expand_error, invert_syndrome_on_forest,
    kernel_and_windings, pta_distribution, random_unitary, schedule_measurements, syndrome_map,
    total_variation,
)

SEED = 0


@pytest.fixture
def report(capsys):
    def emit(n, name, ok, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'} {name}: {detail}")
        assert ok, f"criterion {n} ({name}) failed: {detail}"
    return emit


def test_criterion_01_structure(report):
    t0 = time.perf_counter()
    bad = []
    for nh in range(2, 13):
        for nv in range(2, 13):
            s = lattice_summary(build((nh, nv)))
            want = {
                "qudits": 2 * nh * nv - nh - nv + 1,
                "primal_loops3": 2 * (nv - 1),
                "primal_loops4": (nh - 2) * (nv - 1),
                "dual_loops3": 2 * (nh - 1),
                "dual_loops4": (nh - 1) * (nv - 2),
            }
            if any(s[k] != v for k, v in want.items()):
                bad.append((nh, nv))
    dt = time.perf_counter() - t0
    report(1, "structural counts 2..12", not bad and dt < 1.0,
           f"mismatches={bad[:5]} elapsed={dt:.3f}s")


def _forest_cases(rng):
    # m <= 5 throughout; d = 5 stays at m <= 3 so each case expands to at most 5^6 terms
    shapes = [(a, b) for a in range(2, 5) for b in range(2, 5)]
    out = []
    for d, count, max_m in ((2, 200, 5), (3, 200, 5), (5, 120, 3)):
        out += [(d, lat, pat) for lat, pat in random_forest_patterns(rng, shapes, count, max_m=max_m)]
    return out


def test_criterion_02_forest_equivalence(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    cases = _forest_cases(rng)
    for d, lat, pat in cases:
        em = ErrorModel.from_matrix(random_unitary(d, int(rng.integers(1 << 30))))
        ex = expand_error(pat, em)
        smap = syndrome_map(lat, pat, d)
        worst = max(worst, total_variation(coherent_distribution(ex, smap), pta_distribution(ex, smap)))
    oracle_worst = 0.0
    n_oracle = 0
    for shape in ((2, 2), (3, 2), (2, 3)):
        lat = build(shape)
        for d in (2, 3):
            for _ in range(10):
                m = int(rng.integers(0, 5))
                pat = pattern_from_list(lat, rng.choice(lat.n_qudits, size=m, replace=False))
                em = ErrorModel.from_matrix(random_unitary(d, int(rng.integers(1 << 30))))
                coh = coherent_distribution(expand_error(pat, em), syndrome_map(lat, pat, d))
                oracle_worst = max(oracle_worst, total_variation(dense_oracle(shape, em, pat), coh))
                n_oracle += 1
    dt = time.perf_counter() - t0
    ok = len(cases) >= 500 and worst < 1e-9 and oracle_worst < 1e-9 and dt < 120
    report(2, "forest coherent == PTA", ok,
           f"cases={len(cases)} max_tv={worst:.2e} oracle_cases={n_oracle} "
           f"oracle_max_tv={oracle_worst:.2e} elapsed={dt:.1f}s")


def test_criterion_03_loop_interference(report):
    lat = build((3, 2))
    sq = [l.qudits for l in elementary_loops(lat, PRIMAL) if len(l.qudits) == 4]
    pat = pattern_from_list(lat, sq[0])
    em = ErrorModel.from_matrix((np.eye(2) + 1j * clock(2)) / np.sqrt(2))
    ex = expand_error(pat, em)
    smap = syndrome_map(lat, pat, 2)
    trivial = (0,) * smap.n_checks
    coh = coherent_distribution(ex, smap)[trivial]
    pta = pta_distribution(ex, smap)[trivial]
    orc = dense_oracle((3, 2), em, pat)[trivial]
    ok = abs(coh - 0.25) <= 1e-9 and abs(pta - 0.125) <= 1e-9 and abs(orc - 0.25) <= 1e-9
    report(3, "plaquette interference", ok, f"coherent={coh:.12f} pta={pta:.12f} oracle={orc:.12f}")


def test_criterion_04_kernel_law(report):
    rng = np.random.default_rng(SEED)
    shapes = [(a, b) for a in range(2, 6) for b in range(2, 6)]
    cases = random_patterns(rng, shapes, 240, max_m=10)
    bad = 0
    with_loops = 0
    for d in (2, 3, 4, 6):
        for lat, pat in cases:
            b1 = total_b1(lat, pat)
            with_loops += b1 > 0
            bad += kernel_and_windings(syndrome_map(lat, pat, d)).size != d ** b1
    report(4, "kernel size d^b1", bad == 0,
           f"patterns={len(cases)} per d, with_loops={with_loops // 4} mismatches={bad}")


def _sim(shape, p, n):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelWarning)
        return run_point(shape, p, n, SEED)


def test_criterion_05_loop_edge_closed_form(report):
    t0 = time.perf_counter()
    lines, ok = [], True
    for p in (0.02, 0.05, 0.1):
        rec = _sim((26, 27), p, 10_000)
        want = p_loop_edge_eq3(26, 27, p)
        est = rec.p_loop_edge
        tol = max(4 * est.stderr, 0.1 * want)
        ok &= abs(est.mean - want) <= tol
        lines.append(f"p={p}: {est.mean:.4g}+-{est.stderr:.2g} vs {want:.4g}")
    dt = time.perf_counter() - t0
    ok &= dt < 300
    report(5, "loop-edge fraction vs closed form", ok, "; ".join(lines) + f" elapsed={dt:.0f}s")


@pytest.mark.slow
def test_criterion_06_exponent(report):
    t0 = time.perf_counter()
    nh, nv = 300, 301
    pts = []
    for p in np.round(np.arange(0.20, 0.301, 0.02), 2):
        rec = _sim((nh, nv), float(p), 2000)
        pts.append((float(p), rec.p_loop_edge.mean - boundary_term(nh, nv, float(p))))
    fit = loglog_fit(pts)
    dt = time.perf_counter() - t0
    ok = 2.9 <= fit.slope <= 3.2 and 4.0 <= fit.coefficient <= 5.5 and dt < 3600
    report(6, "power-law correction", ok,
           f"shape=({nh},{nv}) slope={fit.slope:.4f} coefficient={fit.coefficient:.4f} elapsed={dt:.0f}s")


def test_criterion_07_pntw(report):
    t0 = time.perf_counter()
    lines, ok = [], True
    for shape in ((4, 5), (20, 21)):
        for p in (0.03, 0.05):
            est = _sim(shape, p, 10_000).p_ntw
            want = p_not_pauli_twirled(*shape, p)
            z = abs(est.mean - want) / est.stderr if est.stderr > 0 else np.inf
            ok &= z <= 4
            lines.append(f"{shape} p={p}: {est.mean:.4g}+-{est.stderr:.2g} vs {want:.4g} ({z:.1f} se)")
    dt = time.perf_counter() - t0
    ok &= dt < 300
    report(7, "non-twirlable probability", ok, "; ".join(lines) + f" elapsed={dt:.0f}s")


@pytest.mark.slow
def test_criterion_08_span_scaling(report):
    t0 = time.perf_counter()
    means = [_sim((n, n + 1), 0.3, 200).L_max.mean for n in (64, 128, 256, 512)]
    inc = np.diff(means)
    ratios = inc[1:] / inc[:-1]
    big = _sim((1000, 1001), 0.3, 200).L_max.mean
    dt = time.perf_counter() - t0
    ok = (np.all(inc > 0) and np.all((ratios >= 0.3) & (ratios <= 3))
          and big + 1 <= 10 and dt < 3600)
    report(8, "span growth", ok,
           f"L_max={[round(m, 3) for m in means]} ratios={[round(float(r), 3) for r in ratios]} "
           f"n=1000: L_max+1={big + 1:.3f} elapsed={dt:.0f}s")


def test_criterion_09_determinism(report, tmp_path):
    blobs = []
    for w in (1, 4, 8):
        out = tmp_path / f"w{w}.csv"
        rc = main(["scan", "symmetric", "--sizes", "6,10,14", "--p-grid", "0.1,0.2,0.3",
                   "--samples", "300", "--seed", str(SEED), "--workers", str(w), "--out", str(out)])
        assert rc == 0
        blobs.append(out.read_bytes())
    ok = blobs[0] == blobs[1] == blobs[2] and blobs[0].count(b"\n") == 10
    report(9, "scan byte-identical across workers", ok, f"bytes={len(blobs[0])} workers=1,4,8")


def _prefix_ok(sub, steps):
    g = sub.geometry
    resolved = set()
    for node, e in steps:
        u = g.node_index(node)
        open_edges = [f for f in sub.edges if u in (g.tail[f], g.head[f]) and f not in resolved]
        if open_edges != [e]:
            return False
        resolved.add(e)
    return resolved == set(sub.edges.tolist())


def test_criterion_10_schedule(report):
    rng = np.random.default_rng(SEED)
    shapes = [(a, b) for a in range(2, 7) for b in range(2, 7)]
    forests = random_forest_patterns(rng, shapes, 1200, max_m=8, min_m=0)
    bad_prefix = bad_roundtrip = 0
    for k, (lat, pat) in enumerate(forests):
        d = (2, 3, 5)[k % 3]
        for side in (PRIMAL, DUAL):
            sub = build_subgraph(lat, pat, side)
            bad_prefix += not _prefix_ok(sub, schedule_measurements(sub))
        smap = syndrome_map(lat, pat, d)
        x, z = rng.integers(0, d, (2, smap.m))
        xr, zr = invert_syndrome_on_forest(smap, smap.syndrome(x, z))
        bad_roundtrip += not (np.array_equal(xr, x) and np.array_equal(zr, z))
    loops = plaquette_patterns(rng, [(3, 3), (4, 4), (5, 4)], 100, extra_max=3)
    loops += [c for c in random_patterns(rng, shapes, 400, max_m=14) if total_b1(*c) > 0]
    missed = 0
    for lat, pat in loops:
        smap = syndrome_map(lat, pat, 3)
        raised = 0
        try:
            invert_syndrome_on_forest(smap, np.zeros(smap.n_checks, int))
        except PartialDiscretizationError:
            raised += 1
        looped = [s for s in (PRIMAL, DUAL) if betti(build_subgraph(lat, pat, s)) > 0]
        for side in looped:
            try:
                schedule_measurements(build_subgraph(lat, pat, side))
            except PartialDiscretizationError:
                raised += 1
        missed += raised != 1 + len(looped)
    ok = len(forests) >= 1000 and bad_prefix == bad_roundtrip == missed == 0
    report(10, "schedule and inversion", ok,
           f"forests={len(forests)} prefix_fail={bad_prefix} roundtrip_fail={bad_roundtrip} "
           f"loop_patterns={len(loops)} not_raised={missed}")
