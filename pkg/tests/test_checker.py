from __future__ import annotations

import copy

import pytest

from nuclei import gompf_nucleus
from nuclei.checker import check_certificate
from nuclei.errors import MalformedCertificate
from nuclei.exotica import build_data_set, certify_family, stein_nonstein_pipeline

from conftest import g2_plus_trefoil

LEDGER = {"S_1": 1, "S_5": 5}


@pytest.fixture(scope="module")
def family_doc():
    ds = build_data_set(gompf_nucleus(2))
    return certify_family(ds, (1, 5, 13), ledger=LEDGER).as_dict()


@pytest.fixture(scope="module")
def pipeline_doc():
    res = stein_nonstein_pipeline(g2_plus_trefoil(), n=2, ledger={"S_5": 5, "u:fiber_2": 1})
    return res.certificate.as_dict()


def _bump(v):
    if isinstance(v, bool):
        return not v
    if isinstance(v, int):
        return v + 1
    return [v, 0]


def test_accepts(family_doc, pipeline_doc):
    assert check_certificate(family_doc).verdict == "accept"
    assert check_certificate(pipeline_doc).verdict == "accept"


@pytest.mark.parametrize("side", ["lhs", "rhs"])
def test_each_tampered_obligation_rejects(family_doc, side):
    for i, ob in enumerate(family_doc["obligations"]):
        doc = copy.deepcopy(family_doc)
        doc["obligations"][i][side] = _bump(ob[side])
        res = check_certificate(doc)
        assert res.verdict == "reject", ob["id"]
        assert ob["id"] in res.failing


def test_pipeline_tamper_rejects(pipeline_doc):
    for i, ob in enumerate(pipeline_doc["obligations"]):
        doc = copy.deepcopy(pipeline_doc)
        doc["obligations"][i]["lhs"] = _bump(ob["lhs"])
        res = check_certificate(doc)
        assert res.verdict == "reject" and ob["id"] in res.failing
    nested = pipeline_doc["nested"][0]
    for i, ob in enumerate(nested["obligations"]):
        doc = copy.deepcopy(pipeline_doc)
        doc["nested"][0]["obligations"][i]["lhs"] = _bump(ob["lhs"])
        assert check_certificate(doc).verdict == "reject", ob["id"]


def test_flipped_holds_rejects(family_doc):
    doc = copy.deepcopy(family_doc)
    doc["obligations"][0]["holds"] = False
    assert check_certificate(doc).verdict == "reject"


def test_failed_assumption_rejects(family_doc):
    doc = copy.deepcopy(family_doc)
    doc["assumptions"][0]["status"] = "failed"
    res = check_certificate(doc)
    assert res.verdict == "reject"
    assert any(f.startswith("assumption[") for f in res.failing)


@pytest.mark.parametrize("index,value,oid", [(1, 3, "log.iii[n=2]"), (2, 11, "log.iii[n=3]")])
def test_parity_legal_decrement(family_doc, index, value, oid):
    doc = copy.deepcopy(family_doc)
    doc["parameters"]["p"][index] = value
    res = check_certificate(doc)
    assert res.verdict == "reject" and oid in res.failing


def test_stored_verdict_mismatch(family_doc):
    ds = build_data_set(gompf_nucleus(2))
    bad = certify_family(ds, (1, 3), ledger=LEDGER).as_dict()
    assert bad["verdict"] == "reject"
    bad["verdict"] = "accept"
    assert check_certificate(bad).verdict == "reject"


@pytest.mark.parametrize("mutate", [
    lambda d: d.__setitem__("schema", "other/1"),
    lambda d: d.pop("obligations"),
    lambda d: d.pop("parameters"),
])
def test_malformed(family_doc, mutate):
    doc = copy.deepcopy(family_doc)
    mutate(doc)
    with pytest.raises(MalformedCertificate):
        check_certificate(doc)


def test_not_a_dict():
    with pytest.raises(MalformedCertificate):
        check_certificate([1, 2])
