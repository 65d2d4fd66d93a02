from __future__ import annotations

import json

import pytest

from nuclei.errors import MalformedDiagram
from nuclei.manifest import canonical_json, dumps, from_manifest, loads, sha256_of, to_manifest
from nuclei.surgery import log_transform, w_modify

from conftest import g2_plus_trefoil


def test_round_trip_byte_stable(g2t):
    for x in (g2t, w_modify(g2t, "fiber", "+", 2), log_transform(g2t, "N", 3).manifold):
        text = dumps(x)
        y = loads(text)
        assert y == x
        assert dumps(y) == text
        assert sha256_of(to_manifest(y)) == sha256_of(json.loads(text))


def test_canonical_json_sorted():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_front_fills_and_checks_legendrian():
    doc = to_manifest(g2_plus_trefoil())
    doc["two_handles"][2]["legendrian"] = None
    assert from_manifest(doc).handle("fiber_2").legendrian.tb == 1
    doc["two_handles"][2]["legendrian"] = {"tb": 5, "r": 0}
    with pytest.raises(MalformedDiagram):
        from_manifest(doc)


def test_bad_documents():
    with pytest.raises(MalformedDiagram):
        from_manifest({"schema": "other"})
    with pytest.raises(MalformedDiagram):
        loads("{not json")
    with pytest.raises(MalformedDiagram):
        from_manifest({"schema": "nf-manifest/1", "two_handles": [{"framing": 0}]})
