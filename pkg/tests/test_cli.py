"""The ``ymbv`` command line: exit codes, reports and determinism."""
from __future__ import annotations

import json
import random

import pytest

from ymbv.amplitudes import null_kinematics
from ymbv.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def _run(tmp_path, name, *argv):
    out = tmp_path / f"{name}.json"
    code = main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_solve_h_reports_both_identities(tmp_path):
    code, rep = _run(tmp_path, "h", "solve-h")
    assert code == EXIT_OK
    assert rep["verify"]["ok"] and rep["verify"]["h_squared_zero"] and rep["verify"]["dh_plus_hd_box"]
    assert rep["h"]["hash"]


def test_homology_null_and_off_shell(tmp_path):
    code, rep = _run(tmp_path, "null", "homology", "--momentum", "1,1,0,0")
    assert code == EXIT_OK and rep["dims"] == [0, 2, 2, 0] and rep["null"]
    assert rep["iso"]["ok"]
    code, rep = _run(tmp_path, "off", "homology", "--momentum", "1/2,1,I,3")
    assert code == EXIT_OK and rep["dims"] == [0, 0, 0, 0]


@pytest.mark.parametrize(
    "argv",
    [
        ["homology", "--momentum", "0,0,0,0"],
        ["homology", "--momentum", "1,2,3"],
        ["homology", "--momentum", "1,x,0,0"],
        ["bcj", "--n", "2"],
        ["bcj", "--n", "6"],
        ["recheck", "/nonexistent/cert.json"],
        ["vanishing", "--n", "3"],
        ["vanishing", "--ell-range=a:b"],
        ["cobar-check", "--max-letters", "5"],
        ["no-such-command"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    assert code == EXIT_USAGE


def test_bcj_is_deterministic(tmp_path):
    a = _run(tmp_path, "a", "bcj", "--n", "4", "--seed", "7", "--configs", "2")
    b = _run(tmp_path, "b", "bcj", "--n", "4", "--seed", "7", "--configs", "2")
    assert a[0] == EXIT_OK and a == b
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_verify_axioms_then_recheck(tmp_path):
    code, cert = _run(tmp_path, "cert", "verify-axioms", "--max-arity", "3")
    assert code == EXIT_OK and cert["ok"]
    code, rep = _run(tmp_path, "re", "recheck", str(tmp_path / "cert.json"))
    assert code == EXIT_OK and rep["matches_stored"]


def test_recheck_catches_a_tampered_theta(tmp_path):
    code, cert = _run(tmp_path, "cert", "verify-axioms", "--max-arity", "3")
    entry = next(e for e in cert["theta"]["3"]["entries"] if e[1])
    entry[1][0][1] = {"re": "7", "im": "0"}
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cert))
    code, rep = _run(tmp_path, "re", "recheck", str(bad))
    assert code == EXIT_FAIL and not rep["ok"]


def test_amplitude_from_kinematics_file(tmp_path):
    rng = random.Random(3)
    ks = null_kinematics(rng, 3)
    legs = [{"momentum": [str(c) for c in k.k], "coords": ["1", str(i - 1)]} for i, k in enumerate(ks)]
    path = tmp_path / "kin.json"
    path.write_text(json.dumps({"legs": legs}))
    code, rep = _run(tmp_path, "amp", "amplitude", str(path))
    assert code == EXIT_OK
    assert rep["gauge_independent"] and rep["amplitude"] == rep["amplitude_alt_h"]
    legs[0]["momentum"] = ["1", "2", "0", "0"]  # not null
    path.write_text(json.dumps({"legs": legs}))
    assert main(["amplitude", str(path)]) == EXIT_USAGE


def test_vanishing_range_with_the_boundary(tmp_path):
    code, rep = _run(tmp_path, "v", "vanishing", "--ell-range=-3:-1")
    assert code == EXIT_OK
    by_ell = {(r["case"], r["ell"]): r for r in rep["results"]}
    assert by_ell[(1, -1)]["dimH1"] == 4 and not by_ell[(1, -1)]["asserted"]["H1"]
    assert by_ell[(2, -3)]["dimH0"] == 0 == by_ell[(2, -3)]["dimH1"]
    assert rep["w_injectivity"]["case2"]["rank"] == 9


def test_cobar_check_small(tmp_path):
    code, rep = _run(tmp_path, "c", "cobar-check", "--max-letters", "3", "--samples", "8", "--seed", "2")
    assert code == EXIT_OK
    assert all(v["ok"] for v in rep["checks"].values())
