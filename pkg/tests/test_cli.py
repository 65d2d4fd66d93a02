from __future__ import annotations

import json
import subprocess
import sys

import pytest

from nuclei import gompf_nucleus, homology, log_transform, steinify, strip_corks, w_modify
from nuclei.cli import run
from nuclei.exotica import build_data_set, certify_family
from nuclei.manifest import canonical_json, to_manifest

from conftest import g2_plus_trefoil


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(canonical_json(doc) + "\n")
    return str(p)


@pytest.fixture
def g2_file(tmp_path):
    return _write(tmp_path, "g2.json", to_manifest(gompf_nucleus(2)))


def test_build_matches_library(tmp_path, capsys):
    assert run(["build", "gompf", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert out == canonical_json(to_manifest(gompf_nucleus(2))) + "\n"
    assert run(["build", "gompf", "--n", "2"]) == 0
    assert capsys.readouterr().out == out


def test_homology_json(g2_file, capsys):
    assert run(["homology", g2_file, "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == homology(gompf_nucleus(2)).as_dict()


def test_transforms_match_library(g2_file, tmp_path, capsys):
    assert run(["log-transform", g2_file, "--p", "3"]) == 0
    assert json.loads(capsys.readouterr().out) == to_manifest(log_transform(gompf_nucleus(2), "N", 3).manifold)
    assert run(["w-modify", g2_file, "--target", "fiber", "--sign", "+", "--p", "2"]) == 0
    wm = w_modify(gompf_nucleus(2), "fiber", "+", 2)
    assert json.loads(capsys.readouterr().out) == to_manifest(wm)
    wfile = _write(tmp_path, "w.json", to_manifest(wm))
    assert run(["strip", wfile, "--all"]) == 0
    stripped = strip_corks(wm, ["W1"])
    assert json.loads(capsys.readouterr().out) == to_manifest(stripped)
    assert stripped == gompf_nucleus(2)
    assert run(["steinify", wfile]) == 0
    assert json.loads(capsys.readouterr().out) == to_manifest(steinify(wm))


def test_family_and_check(g2_file, tmp_path, capsys):
    led = _write(tmp_path, "led.json", {"schema": "nf-ledger/1", "bounds": {"S_5": 5}})
    cert = str(tmp_path / "cert.json")
    assert run(["gen-family", g2_file, "--n", "3", "--ledger", led, "--out", cert]) == 0
    doc = json.loads(open(cert).read())
    assert doc["parameters"]["p"] == [1, 5, 13]
    lib = certify_family(build_data_set(gompf_nucleus(2)), (1, 5, 13), ledger={"S_5": 5}).as_dict()
    assert doc == lib
    assert run(["check-cert", cert]) == 0
    doc["obligations"][1]["lhs"] += 1
    bad = _write(tmp_path, "bad.json", doc)
    assert run(["check-cert", bad]) == 1
    capsys.readouterr()
    assert run(["certify", g2_file, "--sequence", "1,3", "--ledger", led]) == 1


def test_exit_codes(g2_file, tmp_path, capsys):
    assert run(["obstruct-stein", g2_file, "--p", "3"]) == 0
    assert run(["obstruct-stein", g2_file, "--p", "1"]) == 1
    assert run(["gen-family", g2_file, "--n", "3"]) == 3
    assert "LedgerIncomplete" in capsys.readouterr().err
    assert run(["log-transform", g2_file]) == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run(["homology", str(junk)]) == 2
    assert run(["homology", _write(tmp_path, "x.json", {"schema": "wrong"})]) == 2
    assert run(["check-cert", _write(tmp_path, "c.json", {"schema": "wrong"})]) == 2
    assert run(["stein-check", g2_file]) == 0


def test_pipeline_cli(tmp_path, capsys):
    x = _write(tmp_path, "x.json", to_manifest(g2_plus_trefoil()))
    led = _write(tmp_path, "led.json", {"schema": "nf-ledger/1", "bounds": {"S_5": 5, "u:fiber_2": 1}})
    out = str(tmp_path / "p.json")
    assert run(["pipeline", x, "--ledger", led, "--out", out]) == 0
    assert run(["check-cert", out]) == 0


def test_module_entry_point(g2_file):
    r = subprocess.run([sys.executable, "-m", "nuclei", "homology", g2_file], capture_output=True, text=True, timeout=60)
    assert r.returncode == 0 and "H2 = Z^2" in r.stdout
