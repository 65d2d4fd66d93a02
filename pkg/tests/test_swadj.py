from __future__ import annotations

import pytest

from nuclei.errors import BadCoefficient, BadParameter, DimensionMismatch, EmptyBasicSet, NonSquare, TorsionClass
from nuclei.laurent import LaurentPoly
from nuclei.swadj import (
    BasicClassSet,
    KnotSpec,
    adjunction_check,
    alexander,
    genus_lower_bound,
    log_multiplier,
    sw_knot_surgery,
    sw_log_transform,
)


def test_trefoil_hand_expansion():
    # det([[-1+t, 1], [-t, -1+t]]) = t^2 - t + 1, centred to t - 1 + t^-1
    assert alexander([[-1, 1], [0, -1]]) == LaurentPoly.from_dict({1: 1, 0: -1, -1: 1})
    assert str(KnotSpec.parse("trefoil").alexander) == "t - 1 + t^-1"


def test_unknot_and_twist_knots():
    assert KnotSpec.unknot().alexander == LaurentPoly.one()
    assert alexander([]) == LaurentPoly.one()
    assert KnotSpec.twist(1).alexander == LaurentPoly.from_dict({1: -1, 0: 3, -1: -1})
    with pytest.raises(NonSquare):
        alexander([[1, 2]])


@pytest.mark.parametrize("k", range(0, 21))
def test_torus_knot_family(k):
    d = KnotSpec.torus(k).alexander
    assert d.is_palindromic()
    assert abs(d(1)) == 1
    assert d.degree() == k
    assert d == LaurentPoly.from_dict({k - i: (-1) ** i for i in range(2 * k + 1)})


def test_knot_parse():
    assert KnotSpec.parse("T(2,5)") == KnotSpec.torus(2)
    assert KnotSpec.parse("unknot").label == "unknot"
    assert KnotSpec.from_dict(KnotSpec.twist(3).as_dict()) == KnotSpec.twist(3)
    for bad in ("T(2,4)", "figure8", "T(2,-1)"):
        with pytest.raises(BadParameter):
            KnotSpec.parse(bad)


@pytest.mark.parametrize("p", range(1, 51))
def test_log_multiplier(p):
    m = log_multiplier(p)
    assert m.is_palindromic()
    assert len(m.terms) == p and all(c == 1 for _, c in m.terms)
    assert (m.min_exp(), m.max_exp()) == (-(p - 1), p - 1)
    assert m(1) == p


def test_log_multiplier_rejects():
    with pytest.raises(BadCoefficient):
        log_multiplier(0)


def test_sw_transforms():
    seed = BasicClassSet.from_pairs(3, [((0, 0, 0), 1)])
    assert sw_log_transform(seed, (1, 0, 0), 1) == seed
    assert sw_knot_surgery(seed, (1, 0, 0), LaurentPoly.one()) == seed
    three = sw_log_transform(seed, (2, 0, 0), 3)
    assert three.classes == (((-4, 0, 0), 1), ((0, 0, 0), 1), ((4, 0, 0), 1))
    tre = sw_knot_surgery(seed, (1, 0, 0), KnotSpec.torus(1).alexander)
    assert tre.classes == (((-2, 0, 0), 1), ((0, 0, 0), -1), ((2, 0, 0), 1))
    with pytest.raises(TorsionClass):
        sw_log_transform(seed, (0, 0, 0), 2)
    with pytest.raises(DimensionMismatch):
        sw_log_transform(seed, (1, 0), 2)


def test_basic_class_collisions_cancel():
    s = BasicClassSet.from_pairs(1, [((1,), 1), ((1,), -1), ((2,), 3)])
    assert s.classes == (((2,), 3),)
    assert BasicClassSet.from_dict(s.as_dict()) == s


def test_adjunction():
    q = [[0, 1], [1, -2]]
    assert adjunction_check((4, 0), (1, 0), q, 1, True) == "violated"
    assert adjunction_check((0, 0), (1, 0), q, 1, True) == "satisfied"
    assert adjunction_check((0, 0), (0, 1), q, 0, False) == "not_applicable"
    assert genus_lower_bound(BasicClassSet.from_pairs(2, [((4, 0), 1)]), (1, 0), q, True) == 3
    assert genus_lower_bound(BasicClassSet.from_pairs(2, [((0, 0), 1)]), (0, 1), q, False) == 0
    with pytest.raises(EmptyBasicSet):
        genus_lower_bound(BasicClassSet.from_pairs(2, []), (1, 0), q, True)
    with pytest.raises(TorsionClass):
        genus_lower_bound(BasicClassSet.from_pairs(2, [((0, 0), 1)]), (0, 0), q, True)
