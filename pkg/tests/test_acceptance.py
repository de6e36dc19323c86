"""Acceptance criteria 1-9, one PASS/FAIL line each in the terminal summary."""

import time
from fractions import Fraction

import pytest

from _acclog import report
from strippack.analysis import (
    STATED_OPTIMUM,
    QpPoint,
    lemma_suite,
    qp_grid,
    qp_objective,
    qp_search,
    strip_partition,
)
from strippack.bounds import certify_theorem1, lower_bounds
from strippack.engine import audit_bl_minimality, bl_pack, fqw_trace
from strippack.generators import (
    FIGURE1_POSITIONS,
    checkerboard_ext,
    checkerboard_reference_packing,
    figure1,
    figure5,
    gen,
    random_corpus_specs,
)
from strippack.oracle import exact_opt

F = Fraction
FIG5_PARAMS = [(3, 4), (10, 10), (50, 7)]
FIG1_REGIONS = {7: (0, 8), 8: (8, 12), 10: (12, 15), 11: (15, 16), 14: (16, 22),
                15: (22, 24), 16: (24, 25)}
CHECKER_K = [1, 3, 8, 12, 16, 20]
W_REGION_CHECK = "b_w_regions_half"


def _fixtures():
    return [figure1()] + [figure5(w, h) for w, h in FIG5_PARAMS]


@pytest.fixture(scope="module")
def corpus_traces(random_corpus):
    """FQW traces of the fixtures and the 1000-instance corpus, built once."""
    return [fqw_trace(inst) for inst in _fixtures() + list(random_corpus)]


@pytest.fixture(scope="module")
def solved():
    """Oracle results on small random rectangles and squares: (instance, h_opt, is_square)."""
    out = []
    for squares, seed in ((False, 11), (True, 12)):
        specs = random_corpus_specs(240, seed=seed, n_range=(1, 6), width_range=(4, 12),
                                    dim_max=8, squares=squares)
        for spec in specs:
            inst = gen(spec)
            res = exact_opt(inst, node_budget=2 * 10 ** 6)
            if res.status == "exact":
                out.append((inst, res.h_opt, squares))
    return out


def test_criterion_1_figure1():
    t0 = time.perf_counter()
    trace, _ = fqw_trace(figure1())
    placed = {s.rect_id: (s.x, s.y) for s in trace.steps}
    expected = {f"r{i}": (F(x), F(y)) for i, (x, y) in enumerate(FIGURE1_POSITIONS, 1)}
    regions = {r.index: (r.y_lo, r.y_hi) for r in strip_partition(trace) if not r.empty}
    elapsed = time.perf_counter() - t0
    ok = placed == expected and trace.height == 25 and regions == FIG1_REGIONS and elapsed < 1
    report(1, ok, f"15 placements exact, height {trace.height}, regions "
                  f"H{','.join(map(str, regions))}, {elapsed:.3f}s")
    assert placed == expected
    assert trace.height == 25
    assert regions == FIG1_REGIONS
    assert elapsed < 1


def test_criterion_2_figure5():
    t0 = time.perf_counter()
    heights, parts_ok = [], True
    for w, h in FIG5_PARAMS:
        trace, part = fqw_trace(figure5(w, h))
        heights.append((trace.height, 3 * h))
        parts_ok &= (part.f_set == ("r1", "r2") and part.q_set == ("r3", "r4", "r5")
                     and part.w_set == ())
    elapsed = time.perf_counter() - t0
    ok = all(a == b for a, b in heights) and parts_ok and elapsed < 1
    report(2, ok, f"h_BL = 3h for {FIG5_PARAMS}, F={{r1,r2}} Q={{r3,r4,r5}}, {elapsed:.3f}s")
    assert all(a == b for a, b in heights)
    assert parts_ok
    assert elapsed < 1


def test_criterion_3_certificate(random_corpus):
    t0 = time.perf_counter()
    instances = _fixtures() + list(random_corpus)
    branches = {"area": 0, "degenerate": 0}
    failures = []
    for inst in instances:
        cert = certify_theorem1(*fqw_trace(inst))
        branches[cert.branch] += 1
        if not cert.ok:
            failures.append(cert.describe())
    elapsed = time.perf_counter() - t0
    ok = not failures and len(random_corpus) >= 1000 and elapsed < 30
    report(3, ok, f"{len(instances)} traces, {branches['area']} area / "
                  f"{branches['degenerate']} degenerate, {len(failures)} failures, {elapsed:.1f}s")
    assert not failures, failures[:3]
    assert elapsed < 30


def test_criterion_4_exact_ratios(solved):
    t0 = time.perf_counter()
    worst = {"fqw": F(0), "fqw_sq": F(0), "dw": F(0)}
    bad = []
    for inst, h_opt, squares in solved:
        r_fqw = bl_pack(inst).height / h_opt
        r_dw = bl_pack(inst, "decreasing_width").height / h_opt
        cap = F(2) if squares else F(13, 6)
        key = "fqw_sq" if squares else "fqw"
        worst[key] = max(worst[key], r_fqw)
        worst["dw"] = max(worst["dw"], r_dw)
        if r_fqw > cap or r_dw > 3:
            bad.append([(r.w, r.h) for r in inst.rects])
    n_rect = sum(not s for _, _, s in solved)
    n_sq = sum(s for _, _, s in solved)
    elapsed = time.perf_counter() - t0
    ok = not bad and n_rect >= 200 and n_sq >= 200
    report(4, ok, f"{n_rect} rect + {n_sq} square instances solved; max fqw {float(worst['fqw']):.4f}"
                  f" (<= 13/6), squares {float(worst['fqw_sq']):.4f} (<= 2), "
                  f"decreasing width {float(worst['dw']):.4f} (<= 3)")
    assert n_rect >= 200 and n_sq >= 200
    assert not bad, bad[:3]
    assert elapsed < 300


def _suite_failures(corpus_traces, ignore=()):
    bad = {}
    for trace, part in corpus_traces:
        for c in lemma_suite(trace, part).failures():
            if c.name not in ignore:
                bad[c.name] = bad.get(c.name, 0) + 1
    return bad


@pytest.mark.xfail(strict=True, reason="the W-region check fails on some traces; see W_REGION_CHECK")
def test_criterion_5_lemma_suite(corpus_traces):
    bad = _suite_failures(corpus_traces)
    n = len(corpus_traces)
    report(5, not bad, f"{n} traces, failures by check: {bad or 'none'}")
    assert not bad


def test_criterion_5_without_w_region_check(corpus_traces):
    """Every check except the refuted W-region one holds, including the 5/12 span bound."""
    bad = _suite_failures(corpus_traces, ignore=(W_REGION_CHECK,))
    assert not bad


def test_criterion_6_qp():
    t0 = time.perf_counter()
    stated = qp_objective(QpPoint((F(1, 2), F(1, 2)), (F(1, 3), F(0))))
    _, grid_best, grid_n = qp_grid(2, F(1, 60))
    res = qp_search(8, 10 ** 5, seed=0)
    elapsed = time.perf_counter() - t0
    ok = (stated == STATED_OPTIMUM and grid_best <= STATED_OPTIMUM and res.exceeded == 0
          and res.max_sampled <= STATED_OPTIMUM and elapsed < 30)
    report(6, ok, f"stated point {stated}, grid max {grid_best} over {grid_n} points, "
                  f"10^5 samples at k_max=8 max {float(res.max_sampled):.4f}, {elapsed:.1f}s")
    assert stated == F(7, 12)
    assert grid_best <= STATED_OPTIMUM
    assert res.exceeded == 0 and res.max_sampled <= STATED_OPTIMUM
    assert elapsed < 30


def test_criterion_7_bl_audit(corpus_traces, solved):
    traces = [t for t, _ in corpus_traces]
    for inst, _, _ in solved:
        traces.append(bl_pack(inst))
        traces.append(bl_pack(inst, "decreasing_width"))
    bad = [t for t in traces if not audit_bl_minimality(t).ok]
    report(7, not bad, f"{len(traces)} traces re-enumerated, {len(bad)} violations")
    assert not bad


def test_criterion_8_lower_bounds(solved):
    extra = [(inst, exact_opt(inst).h_opt) for inst in (figure5(3, 4), figure5(4, 2))]
    pairs = [(inst, h) for inst, h, _ in solved] + extra
    bad = [inst for inst, h in pairs if lower_bounds(inst).lb > h]
    report(8, not bad, f"lb <= h_OPT on {len(pairs)} solved instances, {len(bad)} violations")
    assert not bad


def test_criterion_9_checkerboard():
    ratios = []
    for k in CHECKER_K:
        h_bl = bl_pack(checkerboard_ext(k)).height
        ratios.append(h_bl / checkerboard_reference_packing(k).height)
    increasing = all(a < b for a, b in zip(ratios, ratios[1:]))
    ok = increasing and ratios[-1] > F(19, 10)
    table = ", ".join(f"k={k}: {float(r):.4f}" for k, r in zip(CHECKER_K, ratios))
    report(9, ok, table)
    assert increasing
    assert ratios[-1] > F(19, 10)
