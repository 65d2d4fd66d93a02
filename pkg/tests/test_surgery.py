from __future__ import annotations

import random
from math import gcd

import pytest

from nuclei.errors import BadCoefficient, BadParameter, DivisorNotOne, GcdViolation, InvalidMarker, SelfSlide
from nuclei.handlebody import gompf_nucleus, homology, intersect, verify_nucleus
from nuclei.legendrian import stein_check
from nuclei.surgery import cork_twist, knot_surgery, log_parity, log_transform, slide, strip_corks, w_modify
from nuclei.swadj import KnotSpec

from conftest import random_handlebody


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_log_transform_of_gompf_is_nucleus(n, p):
    x = gompf_nucleus(n)
    res = log_transform(x, "N", p)
    y = res.manifold
    rep = verify_nucleus(y, y.markers["N"])
    assert rep.verdict == "nucleus"
    assert rep.divisor == p
    assert res.s_prime == p * p * (-n) + (p - 1)
    assert intersect(y, res.class_Shat, res.class_Shat) == res.s_prime
    assert intersect(y, res.class_Shat, res.class_Tp) == 1
    assert homology(y).form.parity == res.parity


def test_log_parity_grid():
    for s in range(-5, 6):
        for d in range(1, 5):
            for p in range(1, 8):
                if gcd(p, d) != 1:
                    continue
                sp = p * p * s + d * d * (p - 1)
                assert log_parity(s, d, p) == ("even" if sp % 2 == 0 else "odd")
                same = (s % 2 == 0) and (p % 2 == 1 or d % 2 == 0)
                assert (sp % 2 == 0 and s % 2 == 0) == same


def test_log_transform_identity_and_errors(g2):
    assert log_transform(g2, "N", 1).manifold is g2
    with pytest.raises(BadCoefficient):
        log_transform(g2, "N", 0)
    with pytest.raises(InvalidMarker):
        log_transform(g2, "M", 2)
    y = log_transform(g2, "N", 2).manifold
    with pytest.raises(GcdViolation):
        log_transform(y, "N", 4)


def test_knot_surgery(g2):
    res = knot_surgery(g2, "N", KnotSpec.torus(1))
    assert homology(res.manifold) == homology(g2)
    assert res.manifold.notes[-1].kind == "knot_surgery"
    assert str(res.multiplier) == "t - 1 + t^-1"
    y = log_transform(g2, "N", 3).manifold
    with pytest.raises(DivisorNotOne):
        knot_surgery(y, "N", KnotSpec.torus(1))


def test_w_modify_and_twist(g2t):
    y = w_modify(g2t, "fiber_2", "+", 3)
    assert y.handle("fiber_2").legendrian.tb == 4
    assert y.handle("fiber_2").front is None
    assert homology(y) == homology(g2t)
    z = cork_twist(y, "W1")
    assert z.handle("fiber_2").legendrian.tb == 1
    assert cork_twist(z, "W1") == y
    assert strip_corks(y, ["W1"]) == g2t
    assert w_modify(g2t, "fiber", "-", 0) is g2t
    with pytest.raises(BadCoefficient):
        w_modify(g2t, "fiber", "-", -1)
    with pytest.raises(BadParameter):
        w_modify(g2t, "fiber", "*", 1)


def test_strip_restores_front_with_stacked_corks(g2t):
    y = w_modify(w_modify(g2t, "fiber", "-", 1), "fiber", "+", 2)
    assert strip_corks(y, ["W1"]).handle("fiber").front is None
    assert strip_corks(y, ["W1", "W2"]) == g2t
    assert strip_corks(y, ["W2", "W1"]) == g2t


def test_slide(g2):
    y = slide(g2, "fiber", "sphere")
    f = y.handle("fiber")
    assert f.framing == 0 + (-2) + 2 * 1
    assert y.markers["N"].class_T == {"fiber": 1, "sphere": -1}
    assert homology(y) == homology(g2)
    back = slide(y, "fiber", "sphere", -1)
    assert back.handle("fiber").framing == 0 and back.handle("fiber").lk("sphere") == 1
    with pytest.raises(SelfSlide):
        slide(g2, "fiber", "fiber")


def test_random_invariance():
    rng = random.Random(7)
    for _ in range(200):
        x = random_handlebody(rng)
        rep = homology(x)
        names = x.names()
        t = rng.choice(names)
        y = w_modify(x, t, rng.choice("+-"), rng.randint(1, 4))
        assert homology(y) == rep
        cid = y.corks[-1].id
        assert cork_twist(cork_twist(y, cid), cid) == y
        assert homology(cork_twist(y, cid)) == rep
        assert strip_corks(y, [cid]) == x
        if len(names) >= 2:
            a, b = rng.sample(names, 2)
            assert homology(slide(x, a, b, rng.choice((1, -1)))) == rep


def test_stein_after_w_plus(g2t):
    from nuclei.legendrian import steinify

    y = steinify(w_modify(g2t, "fiber_2", "+", 1))
    assert stein_check(y) == ()


def test_strip_nested_corks(g2t):
    y = w_modify(g2t, "fiber", "+", 1)
    z = w_modify(y, "gamma_W1", "+", 2)
    assert strip_corks(z, ["W1", "W2"]) == g2t
    assert strip_corks(z, ["W2"]) == y
    with pytest.raises(BadParameter):
        strip_corks(z, ["W1"])
