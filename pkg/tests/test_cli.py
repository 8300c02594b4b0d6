"""Command-line behaviour: outputs, exit codes, and determinism."""

import json

import numpy as np
import pytest

from sympind.cli import _resolve_config, build_parser, main
from sympind.flows import linearized_flow_path, parametrized_rs_index
from sympind.linalg import ExpCurve, standard_j
from sympind.systems import quadratic_system


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def _shear_file(tmp_path):
    return _write(tmp_path, "shear.json", {
        "kind": "exp_shear",
        "S": [[0.9, 0.0], [0.0, 0.4]],
        "E": [[0.7]],
    })


def test_index_exp_shear_text(tmp_path, capsys):
    rc = main(["index", _shear_file(tmp_path)])
    out = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert out[0] == "index: 3/2"
    assert out[1] == "crossings (1):"
    assert "start" in out[2]


def test_index_json_is_byte_deterministic(tmp_path, capsys):
    argv = ["index", _shear_file(tmp_path), "--json", "--seed", "7"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    body = json.loads(first)
    assert body["format"] == "sympind/1"
    assert body["seed"] == 7
    assert body["index"] == "3/2"
    assert body["crossings"][0]["endpoint"] == "start"


def test_index_constant_identity_is_precondition_error(tmp_path, capsys):
    f = _write(tmp_path, "const.json",
               {"kind": "constant", "matrix": [[1.0, 0.0], [0.0, 1.0]]})
    rc = main(["index", f])
    err = capsys.readouterr().err
    assert rc == 2
    assert err.startswith("error[NON_ISOLATED]")


def test_index_dense_rotation(tmp_path, capsys):
    theta = np.linspace(0.0, 1.0, 65)
    curve = ExpCurve(standard_j(1) @ np.diag([2.0, 2.0]))
    f = _write(tmp_path, "dense.json", {
        "kind": "dense",
        "theta": theta.tolist(),
        "samples": curve(theta).tolist(),
    })
    rc = main(["index", f])
    out = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert out[0] == "index: 2/2"


def test_index_snm_samples(tmp_path, capsys):
    theta = np.linspace(0.0, 1.0, 129)
    psi = ExpCurve(standard_j(1) @ np.diag([0.9, 0.4]))(theta)
    f = _write(tmp_path, "snm.json", {
        "kind": "snm_samples", "n": 1, "m": 1,
        "theta": theta.tolist(),
        "psi": psi.tolist(),
        "x": np.zeros((129, 2, 1)).tolist(),
        "e": (0.7 * theta)[:, None, None].tolist(),
    })
    rc = main(["index", f])
    assert rc == 0
    assert capsys.readouterr().out.splitlines()[0] == "index: 3/2"


def test_index_rabinowitz_kind(tmp_path, capsys):
    f = _write(tmp_path, "rab.json",
               {"kind": "rabinowitz", "lambda": 6.283185307179586,
                "k1": -1.0, "k2": 0.5})
    rc = main(["index", f])
    out = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert out[0] == "index: 0/2"


def test_stratified_flag_needs_family_kind(tmp_path, capsys):
    f = _write(tmp_path, "const2.json",
               {"kind": "constant", "matrix": [[2.0, 0.0], [0.0, 0.5]]})
    rc = main(["index", f, "--stratified"])
    assert rc == 2
    assert "error[INVALID_INPUT]" in capsys.readouterr().err


def test_unknown_path_kind(tmp_path, capsys):
    f = _write(tmp_path, "bogus.json", {"kind": "bogus"})
    rc = main(["index", f])
    assert rc == 2
    assert "error[INVALID_INPUT]" in capsys.readouterr().err


def test_missing_file_json_error_body(tmp_path, capsys):
    rc = main(["index", str(tmp_path / "nope.json"), "--json"])
    captured = capsys.readouterr()
    assert rc == 2
    body = json.loads(captured.out)
    assert body["format"] == "sympind/1"
    assert body["error"]["code"] == "INVALID_INPUT"


def test_paramindex_split_default(capsys):
    rc = main(["paramindex", "split"])
    out = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert out[0] == "system: split"
    assert out[1] == "index: -3/2"


def test_paramindex_rabinowitz_flat(capsys):
    rc = main(["paramindex", "rabinowitz_flat"])
    out = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert out[1] == "index: 0/2"


def test_paramindex_quadratic_matches_library(tmp_path, capsys):
    kb = [[0.9, 0.1], [0.1, 0.4]]
    gb = [[0.2, 0.1]]
    fb = [[0.7]]
    f = _write(tmp_path, "params.json", {"K": kb, "G": gb, "F": fb})
    rc = main(["paramindex", "quadratic", "--params", f, "--json"])
    assert rc == 0
    body = json.loads(capsys.readouterr().out)
    want = parametrized_rs_index(
        linearized_flow_path(*quadratic_system(np.array(kb), np.array(gb),
                                               np.array(fb))))
    assert body["index"] == str(want.value)


def test_spectralflow_split_tanh(tmp_path, capsys):
    cfg = _write(tmp_path, "cfg.json", {"sample_hint": 128})
    fam = _write(tmp_path, "tanh.json", {"kind": "split_tanh", "m": 1})
    rc = main(["spectralflow", fam, "--config", cfg, "--modes", "8", "--json"])
    assert rc == 0
    body = json.loads(capsys.readouterr().out)
    assert body["matrix"] == 1 and body["galerkin"] == 1
    assert body["agree"] is True
    assert len(body["crossings"]) == 1


def test_verify_roundtrip_subcommand(capsys):
    rc = main(["verify", "roundtrip", "--count", "2", "--json", "--seed", "1"])
    assert rc == 0
    body = json.loads(capsys.readouterr().out)
    assert body["suite"] == "roundtrip" and body["ok"] is True
    assert len(body["checks"]) == 2


def test_verify_appendix_subcommand(capsys):
    rc = main(["verify", "appendix-c", "--count", "4"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.strip().endswith("appendix-c: 4/4 checks passed")


def test_rabinowitz_subcommand(capsys):
    rc = main(["rabinowitz", "--lambda", "1.0", "--k1", "-1.0",
               "--k2", "0.5", "--mu-reeb", "3/2"])
    out = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert out[0] == "block index: 0/2"
    assert out[1] == "grading: 3/2"


def test_rabinowitz_rejects_bad_orbit_index(capsys):
    rc = main(["rabinowitz", "--lambda", "1.0", "--k1", "-1.0",
               "--k2", "0.5", "--mu-reeb", "3/4"])
    assert rc == 2
    assert "error[INVALID_INPUT]" in capsys.readouterr().err


def test_config_flag_precedence(tmp_path):
    cfg_file = _write(tmp_path, "cfg2.json",
                      {"tol_sv": 1e-7, "sample_hint": 128})
    parser = build_parser()
    args = parser.parse_args(["index", "x.json", "--config", cfg_file,
                              "--tol-sv", "1e-9", "--seed", "4"])
    cfg = _resolve_config(args)
    assert cfg.tol_sv == 1e-9       # explicit flag beats the file
    assert cfg.sample_hint == 128   # file beats the default
    assert cfg.seed == 4


def test_argparse_rejects_unknown_choices():
    with pytest.raises(SystemExit):
        main(["verify", "nonsense"])
    with pytest.raises(SystemExit):
        main(["paramindex", "unknown-system"])
