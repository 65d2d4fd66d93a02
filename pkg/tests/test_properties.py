from __future__ import annotations

import random
from dataclasses import replace
from math import gcd

from hypothesis import given, settings, strategies as st

from nuclei import cork_twist, gompf_nucleus, homology, slide, strip_corks, verify_nucleus, w_modify
from nuclei.exotica import build_data_set, gen_p_sequence, log_obligations
from nuclei.intlat import IntMatrix, smith_normal_form
from nuclei.laurent import LaurentPoly
from nuclei.surgery import log_parity, log_transform

from conftest import random_handlebody

small = st.integers(-9, 9)


@st.composite
def matrices(draw):
    r, c = draw(st.integers(1, 5)), draw(st.integers(1, 5))
    return [[draw(small) for _ in range(c)] for _ in range(r)]


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_snf_invariants(a):
    res = smith_normal_form(a)
    d = (res.left_transform @ IntMatrix.from_rows(a) @ res.right_transform).tolist()
    for i, row in enumerate(d):
        for j, v in enumerate(row):
            assert v == (res.diagonal[i] if i == j and i < len(res.diagonal) else 0)
    nz = [x for x in res.diagonal if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert res.diagonal[len(nz):] == (0,) * (len(res.diagonal) - len(nz))
    assert abs(res.left_transform.det()) == 1 and abs(res.right_transform.det()) == 1


@given(st.integers(1, 6), st.integers(1, 9))
@settings(max_examples=60, deadline=None)
def test_log_transform_algebra(n, p):
    x = gompf_nucleus(n)
    res = log_transform(x, "N", p)
    assert res.s_prime == p * p * (-n) + (p - 1)
    assert res.parity == log_parity(-n, 1, p)
    assert homology(res.manifold).form.parity == res.parity
    assert homology(res.manifold).boundary_H1 == ()


@given(st.integers(1, 5), st.integers(2, 5), st.integers(2, 9))
@settings(max_examples=60, deadline=None)
def test_log_transform_on_divisible_torus(n, d, p):
    if gcd(p, d) != 1:
        return
    x = gompf_nucleus(n)
    mk = replace(x.markers["N"], class_T={"fiber": d}, divisor_dT=d)
    y = replace(x, markers={"N": mk})
    res = log_transform(y, "N", p)
    assert res.s_prime == p * p * (-n) + d * d * (p - 1)
    assert res.parity == log_parity(-n, d, p)
    assert homology(res.manifold).form.parity == res.parity
    assert verify_nucleus(res.manifold, res.manifold.markers["N"]).divisor == p * d


@given(st.integers(1, 6), st.integers(2, 6), st.booleans())
@settings(max_examples=40, deadline=None)
def test_p_sequence_invariants(n, length, strong):
    ds = build_data_set(gompf_nucleus(n))
    led = {f"S_{p}": p for p in range(1, 400)}
    r = gen_p_sequence(ds, length, strengthened=strong, ledger=led)
    ps = r.values
    assert ps[0] == 1 and all(a < b for a, b in zip(ps, ps[1:]))
    assert all(gcd(p, ds.d_T) == 1 for p in ps)
    if ds.s % 2 == 0:
        assert all(p % 2 == 1 for p in ps)
    assert all(o.holds for o in r.obligations)
    assert [o.as_dict() for o in log_obligations(ds, ps, led, strong)] == [o.as_dict() for o in r.obligations]
    # minimality: one less than any p_n breaks a condition
    for k in range(1, len(ps)):
        if ps[k] - 1 > ps[k - 1]:
            trial = ps[: k] + (ps[k] - 1,)
            assert not all(o.holds for o in log_obligations(ds, trial, led, strong))


@given(st.integers(0, 10**6), st.integers(1, 4))
@settings(max_examples=80, deadline=None)
def test_w_modification_invariance(seed, steps):
    rng = random.Random(seed)
    x = random_handlebody(rng)
    rep = homology(x)
    y = x
    for _ in range(steps):
        y = w_modify(y, rng.choice(y.names()), rng.choice("+-"), rng.randint(1, 3))
    assert homology(y) == rep
    ids = [c.id for c in y.corks]
    t = y
    for cid in ids:
        t = cork_twist(t, cid)
    assert homology(t) == rep
    for cid in reversed(ids):
        t = cork_twist(t, cid)
    assert t == y
    assert strip_corks(y, ids) == x
    names = x.names()
    if len(names) > 1:
        a, b = rng.sample(names, 2)
        assert slide(slide(x, a, b, 1), a, b, -1).linking_matrix() == x.linking_matrix()


laurent = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=5).map(LaurentPoly.from_dict)


@given(laurent, laurent, laurent, st.sampled_from([1, -1, 2]))
@settings(max_examples=100, deadline=None)
def test_laurent_ring(a, b, c, t):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b)(t) == a(t) * b(t)
    assert (a * b).mirror() == a.mirror() * b.mirror()
