"""Acceptance gate: every advertised guarantee, one line per criterion.

Each test prints ``criterion-N <name>: PASS`` (or FAIL detail via the
assertion) and enforces the stated tolerance and time budget.
"""

import time

import pytest

from sympind import perturb_stratified, rs_index, rs_index_stratified
from sympind.suites import (determinant_example_check,
                            determinant_parity_check, stratified_corpus,
                            suite_axioms, suite_main_theorem,
                            suite_rabinowitz, suite_roundtrip)


@pytest.fixture(scope="module")
def main_theorem_run():
    start = time.perf_counter()
    res = suite_main_theorem(seed=0, count=20)
    return res, time.perf_counter() - start


def _report(name, passed, detail=""):
    tag = "PASS" if passed else "FAIL"
    print(f"{name}: {tag}" + (f" ({detail})" if detail else ""))


def test_criterion_1_radial_block_triples():
    start = time.perf_counter()
    res = suite_rabinowitz(seed=0, triples=25)
    elapsed = time.perf_counter() - start
    ok = res.ok and len(res.checks) == 25 and elapsed < 1.0
    _report("criterion-1 radial-block-triples", ok,
            f"{res.passed_count}/25 in {elapsed:.2f}s")
    assert res.ok, [c.line() for c in res.checks if not c.passed]
    assert len(res.checks) == 25
    assert elapsed < 1.0


def test_criterion_2_determinant_example_and_parity():
    start = time.perf_counter()
    example = determinant_example_check(seed=0, count=20)
    parity = determinant_parity_check()
    elapsed = time.perf_counter() - start
    ok = example.passed and parity.passed and elapsed < 1.0
    _report("criterion-2 determinant-example", ok,
            f"{example.detail}; {parity.detail}; {elapsed:.2f}s")
    assert example.passed, example.detail   # closed form to 1e-10
    assert parity.passed, parity.detail
    assert elapsed < 1.0


def test_criterion_3_axiom_battery():
    start = time.perf_counter()
    res = suite_axioms(seed=0, instances=50)
    elapsed = time.perf_counter() - start
    ok = res.ok and elapsed < 30.0
    _report("criterion-3 axioms-50x", ok,
            f"{res.passed_count}/{len(res.checks)} in {elapsed:.1f}s")
    assert res.ok, [c.line() for c in res.checks if not c.passed]
    assert elapsed < 30.0


def test_criterion_4_stratified_perturbation_oracle():
    start = time.perf_counter()
    corpus = stratified_corpus(seed=0, count=20)
    bad = []
    for i, inst in enumerate(corpus):
        strat = rs_index_stratified(inst.path, inst.family)
        flat = rs_index(perturb_stratified(inst.path, inst.family, inst.eps))
        if strat.value != flat.value:
            bad.append(f"[{i} {inst.label}] {strat.value} != {flat.value}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 20.0
    _report("criterion-4 stratified-oracle", ok,
            f"{20 - len(bad)}/20 in {elapsed:.1f}s")
    assert not bad, bad
    assert elapsed < 20.0


def test_criterion_5_main_theorem_families(main_theorem_run):
    res, elapsed = main_theorem_run
    ok = res.ok and len(res.checks) == 20 and elapsed < 120.0
    _report("criterion-5 main-theorem-20", ok,
            f"{res.passed_count}/20 in {elapsed:.1f}s")
    assert res.ok, [c.line() for c in res.checks if not c.passed]
    assert len(res.checks) == 20
    assert elapsed < 120.0


def test_criterion_6_coefficient_roundtrip():
    start = time.perf_counter()
    res = suite_roundtrip(seed=0, count=20)
    elapsed = time.perf_counter() - start
    ok = res.ok
    _report("criterion-6 coefficient-roundtrip", ok,
            f"{res.passed_count}/20 in {elapsed:.1f}s; sup-errors <= 1e-6")
    assert res.ok, [c.line() for c in res.checks if not c.passed]


def test_criterion_7_crossing_form_bridges(main_theorem_run):
    res, _ = main_theorem_run
    worst = 0.0
    count = 0
    for report in res.payload:
        for crossing in report.flow_matrix.crossings:
            worst = max(worst, crossing.block_deviation,
                        crossing.reduced_deviation)
            count += 1
    ok = worst <= 1e-6 and count > 0
    _report("criterion-7 form-bridges", ok,
            f"max deviation {worst:.3e} over {count} crossings")
    assert count > 0
    assert worst <= 1e-6
