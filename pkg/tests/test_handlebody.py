from __future__ import annotations

import pytest

from nuclei.errors import BadParameter, InconsistentMarker, MalformedDiagram, UnknownCork, UnknownHandle
from nuclei.handlebody import (
    Handlebody,
    NucleusMarker,
    boundary_sum,
    build,
    cusp_neighborhood,
    gompf_nucleus,
    homology,
    intersect,
    is_cycle,
    make_handle,
    rename,
    verify_nucleus,
)


@pytest.mark.parametrize("n", range(1, 8))
def test_gompf_nucleus_ledger(n):
    rep = homology(gompf_nucleus(n))
    assert rep.H1 == ()
    assert rep.H2_free_rank == 2
    assert rep.boundary_H1 == ()
    assert rep.form_matrix.tolist() == [[0, 1], [1, -n]]
    assert rep.form.parity == ("even" if n % 2 == 0 else "odd")
    assert rep.form.unimodular and rep.form.signature == 0


@pytest.mark.parametrize("n", [1, 2, 5])
def test_gompf_is_nucleus(n):
    x = gompf_nucleus(n)
    r = verify_nucleus(x, x.markers["N"])
    assert r.verdict == "nucleus"
    assert r.divisor == 1
    assert all(c.status == "proved" for c in r.conditions.values())


def test_gompf_rejects_bad_index():
    with pytest.raises(BadParameter):
        gompf_nucleus(0)


def test_cusp_neighborhood():
    rep = homology(cusp_neighborhood())
    assert rep.H2_free_rank == 1 and rep.form_matrix.tolist() == [[0]] and rep.boundary_H1 == (0,)


def test_one_handle_homology():
    # a 2-handle running twice over a 1-handle: H1 = Z/2, no H2
    x = build(["a"], [make_handle("k", word=[("a", 1), ("a", 1)], framing=0)])
    rep = homology(x)
    assert rep.H1 == (2,) and rep.H2_free_rank == 0
    assert not is_cycle(x, {"k": 1})


def test_boundary_sum_block_form():
    x = boundary_sum(gompf_nucleus(2), gompf_nucleus(2))
    assert x.names() == ("fiber", "sphere", "fiber_2", "sphere_2")
    assert set(x.markers) == {"N", "N_2"}
    rep = homology(x)
    assert rep.H2_free_rank == 4 and rep.form.signature == 0 and rep.form.parity == "even"
    assert intersect(x, {"fiber": 1}, {"sphere_2": 1}) == 0


def test_validation_errors():
    a = make_handle("a", linking={"b": 1})
    b = make_handle("b", linking={"a": 2})
    with pytest.raises(MalformedDiagram):
        Handlebody((), (a, b))
    with pytest.raises(MalformedDiagram):
        build([], [make_handle("a", word=[("z", 1)])])
    with pytest.raises(MalformedDiagram):
        build([], [make_handle("a"), make_handle("a")])
    with pytest.raises(MalformedDiagram):
        build([], [make_handle("a", seifert_genus=-1)])


def test_lookup_errors(g2):
    with pytest.raises(UnknownHandle):
        g2.handle("nope")
    with pytest.raises(UnknownCork):
        g2.cork("W9")


def test_verify_nucleus_failures():
    x = gompf_nucleus(2)
    bad_div = NucleusMarker(("fiber", "sphere"), ("fiber",), {"fiber": 1}, {"sphere": 1}, divisor_dT=2, pi1_status="proved")
    assert verify_nucleus(x, bad_div).conditions["iv"].status == "failed"
    no_cusp = NucleusMarker(("fiber", "sphere"), (), {"fiber": 1}, {"sphere": 1}, pi1_status="proved")
    assert verify_nucleus(x, no_cusp).verdict == "not_nucleus"
    unknown = NucleusMarker(("fiber", "sphere"), ("fiber",), {"fiber": 1}, {"sphere": 1})
    assert verify_nucleus(x, unknown).verdict == "nucleus_with_assumptions"
    outside = NucleusMarker(("fiber",), ("fiber",), {"fiber": 1}, {"sphere": 1})
    with pytest.raises(InconsistentMarker):
        verify_nucleus(x, outside)


def test_rename_keeps_homology(g2):
    y = rename(g2, {"fiber": "T", "sphere": "S"})
    assert y.markers["N"].class_T == {"T": 1}
    assert homology(y) == homology(g2)


def test_report_ledger_drops_matrix(g2):
    led = homology(g2).ledger()
    assert "form_matrix" not in led and led["H2_free_rank"] == 2
