"""Verification batteries: dispatch, determinism, and small runs."""

import numpy as np
import pytest

from sympind import (SUITE_NAMES, axiom_names, random_snm_path, run_axiom,
                     run_suite)
from sympind.paths import SnmPath
from sympind.snm import Dimensions, SnmElement
from sympind.suites import (determinant_example_check,
                            determinant_parity_check, stratified_corpus)


def test_axiom_table_is_complete():
    names = axiom_names()
    assert len(names) == 10
    for expected in ("catenation", "naturality", "loop", "product",
                     "splitting", "signature", "zero", "integrality",
                     "determinant", "involution"):
        assert expected in names


def test_unknown_names_raise():
    with pytest.raises(KeyError):
        run_axiom("nonsense")
    with pytest.raises(KeyError):
        run_suite("nonsense")


@pytest.mark.parametrize("name", ["catenation", "loop", "integrality"])
def test_single_axiom_small_run(name):
    check = run_axiom(name, seed=0, instances=3)
    assert check.passed, check.detail


def test_determinant_checks_pass():
    example = determinant_example_check(seed=0, count=50)
    assert example.passed, example.detail
    parity = determinant_parity_check()
    assert parity.passed, parity.detail


def test_roundtrip_suite_small():
    res = run_suite("roundtrip", seed=1, count=3)
    assert res.ok and len(res.checks) == 3


def test_rabinowitz_suite_small():
    res = run_suite("appendix-c", seed=1, triples=5)
    assert res.ok and len(res.checks) == 5


def test_suite_results_are_seed_deterministic():
    a = run_suite("appendix-c", seed=2, triples=4).to_json_obj()
    b = run_suite("appendix-c", seed=2, triples=4).to_json_obj()
    assert a == b
    assert a["suite"] == "appendix-c" and a["ok"] is True


def test_result_lines_end_with_tally():
    res = run_suite("roundtrip", seed=0, count=2)
    lines = res.lines()
    assert lines[-1] == "roundtrip: 2/2 checks passed"
    assert all(line.startswith(("PASS", "FAIL")) for line in lines[:-1])


def test_suite_names_all_dispatch():
    assert SUITE_NAMES == ("axioms", "roundtrip", "main-theorem", "appendix-c")


def test_random_snm_path_stays_in_subgroup():
    dims = Dimensions(2, 1)
    path = random_snm_path(np.random.default_rng(5), dims)
    assert isinstance(path, SnmPath)
    flat = path.to_path()
    for t in (0.0, 0.31, 1.0):
        el = SnmElement.from_matrix(flat(t), dims)
        np.testing.assert_allclose(el.to_matrix(), flat(t), atol=1e-9)


def test_stratified_corpus_covers_all_kinds():
    corpus = stratified_corpus(seed=0, count=6)
    assert [inst.label for inst in corpus].count("isotropic") == 2
    assert [inst.label for inst in corpus].count("symplectic") == 2
    assert [inst.label for inst in corpus].count("mixed") == 2
    for inst in corpus:
        basis = inst.family(0.5)
        resid = (inst.path(0.5) - np.eye(inst.path.size)) @ basis
        assert float(np.max(np.abs(resid))) < 1e-8
