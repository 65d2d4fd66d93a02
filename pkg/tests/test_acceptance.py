"""The ten acceptance criteria, one test each. Every test prints a single
PASS/FAIL line with its runtime, then asserts."""

from __future__ import annotations

import copy
import random
import time
from math import gcd

import pytest

from nuclei import (
    check_certificate,
    cork_twist,
    gompf_nucleus,
    homology,
    log_multiplier,
    slide,
    smith_normal_form,
    stein_check,
    steinify,
    strip_corks,
    sw_knot_surgery,
    sw_log_transform,
    w_modify,
)
from nuclei.errors import FramingTooHigh
from nuclei.exotica import build_data_set, certify_family, gen_p_sequence, stein_nonstein_pipeline, pair_unsatisfiable, nonstein_obstruction
from nuclei.handlebody import make_handle, build
from nuclei.laurent import LaurentPoly
from nuclei.surgery import log_parity
from nuclei.swadj import BasicClassSet, KnotSpec, alexander

from conftest import g2_plus_trefoil, random_handlebody
from test_exotica import scan_oracle
from test_intlat import cofactor_det


def _criterion(capsys, k: int, title: str, limit: float, body) -> None:
    t0 = time.perf_counter()
    err = None
    try:
        body()
    except Exception as e:  # reported below, then re-raised
        err = e
    dt = time.perf_counter() - t0
    ok = err is None and dt < limit
    why = "" if ok else (f": {type(err).__name__}: {err}" if err else f": took {dt:.2f}s, limit {limit}s")
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {k}: {title} ({dt:.3f}s){why}")
    if err is not None:
        raise err
    assert dt < limit, f"criterion {k} took {dt:.2f}s, limit {limit}s"


def test_criterion_01_gompf_ledger(capsys):
    def body():
        for n in range(1, 11):
            rep = homology(gompf_nucleus(n))
            assert rep.H1 == ()
            assert rep.H2_free_rank == 2 and rep.H2_torsion == ()
            assert rep.boundary_H1 == ()
            assert rep.form_matrix.tolist() == [[0, 1], [1, -n]]
            assert rep.form.unimodular
            assert rep.form.parity == ("even" if n % 2 == 0 else "odd")

    _criterion(capsys, 1, "G(n) homology ledger, n = 1..10", 1.0, body)


def test_criterion_02_log_algebra(capsys):
    def body():
        from nuclei.surgery import log_transform
        from dataclasses import replace

        count = 0
        for s in range(-5, 6):
            for d in range(1, 5):
                for p in range(1, 8):
                    if gcd(p, d) != 1:
                        continue
                    sp = p * p * s + d * d * (p - 1)
                    predicted = s % 2 == 0 and (p % 2 == 1 or d % 2 == 0)
                    assert (sp % 2 == 0) == predicted
                    assert log_parity(s, d, p) == ("even" if predicted else "odd")
                    count += 1
        assert count > 0
        # the construction itself, on nuclei with s = -n and T = d * fiber
        for n in range(1, 6):
            x = gompf_nucleus(n)
            for d in range(1, 5):
                y = replace(x, markers={"N": replace(x.markers["N"], class_T={"fiber": d}, divisor_dT=d)})
                for p in range(1, 8):
                    if gcd(p, d) == 1:
                        assert log_transform(y, "N", p).s_prime == p * p * (-n) + d * d * (p - 1)

    _criterion(capsys, 2, "log-transform square and parity, exhaustive grid", 1.0, body)


def test_criterion_03_sw_multipliers(capsys):
    def body():
        for p in range(1, 51):
            m = log_multiplier(p)
            assert m.is_palindromic()
            assert len(m.terms) == p and all(c == 1 for _, c in m.terms)
            assert (m.min_exp(), m.max_exp()) == (-(p - 1), p - 1)
            assert m(1) == p
        seed = BasicClassSet.from_pairs(3, [((0, 0, 0), 1), ((2, 0, 2), -1)])
        assert sw_log_transform(seed, (1, 0, 0), 1) == seed
        assert sw_knot_surgery(seed, (1, 0, 0), LaurentPoly.one()) == seed

    _criterion(capsys, 3, "SW multipliers and identities", 1.0, body)


def test_criterion_04_alexander(capsys):
    def body():
        assert KnotSpec.unknot().alexander == LaurentPoly.one()
        # det(V - tV^T) for V = [[-1, 1], [0, -1]] is t^2 - t + 1 by hand
        assert alexander([[-1, 1], [0, -1]]) == LaurentPoly.from_dict({1: 1, 0: -1, -1: 1})
        for k in range(0, 21):
            d = KnotSpec.torus(k).alexander
            assert d.is_palindromic() and abs(d(1)) == 1 and d.degree() == k

    _criterion(capsys, 4, "Alexander polynomials", 1.0, body)


def test_criterion_05_sequence(capsys):
    def body():
        ledger = {"S_1": 1, "S_5": 5}
        ds = build_data_set(gompf_nucleus(2))
        got = gen_p_sequence(ds, 3, ledger=ledger).values
        assert got == (1, 5, 13)
        assert got == scan_oracle(ds.s, ds.d_T, ds.u_squares, ds.g_u, {"S_1": 0, "S_5": 5}, 3)
        doc = certify_family(ds, got, ledger=ledger).as_dict()
        assert check_certificate(doc).accepted
        for i in range(1, len(got)):
            step = 2 if ds.s % 2 == 0 and ds.d_T % 2 == 1 else 1
            mutated = copy.deepcopy(doc)
            mutated["parameters"]["p"][i] = got[i] - step
            res = check_certificate(mutated)
            assert res.verdict == "reject"
            assert f"log.iii[n={i + 1}]" in res.failing, res.failing

    _criterion(capsys, 5, "p-sequence (1, 5, 13) and mutation rejection", 1.0, body)


def test_criterion_06_w_invariance(capsys):
    def body():
        rng = random.Random(2024)
        for _ in range(200):
            x = random_handlebody(rng)
            rep = homology(x)
            names = x.names()
            y = w_modify(x, rng.choice(names), rng.choice("+-"), rng.randint(1, 5))
            cid = y.corks[-1].id
            assert homology(y) == rep
            assert homology(cork_twist(y, cid)) == rep
            assert cork_twist(cork_twist(y, cid), cid) == y
            assert strip_corks(y, [cid]) == x
            if len(names) > 1:
                a, b = rng.sample(names, 2)
                assert homology(slide(x, a, b, rng.choice((1, -1)))) == rep

    _criterion(capsys, 6, "W-modification invariance on 200 random handlebodies", 10.0, body)


def test_criterion_07_stein(capsys):
    def body():
        rng = random.Random(77)
        for n in range(2, 11):
            assert stein_check(gompf_nucleus(n)) == ()
        for _ in range(100):
            x = random_handlebody(rng)
            try:
                y = steinify(x)
            except FramingTooHigh as e:
                h = x.handle(e.handle)
                assert e.required_p == h.framing - h.legendrian.tb + 1
                continue
            assert stein_check(y) == ()
            assert steinify(y) == y
        x = build((), [make_handle("k", framing=4, legendrian=(1, 0))])
        with pytest.raises(FramingTooHigh) as e:
            steinify(x)
        assert e.value.required_p == 4 - 1 + 1

    _criterion(capsys, 7, "Stein checks, idempotent steinify, FramingTooHigh", 1.0, body)


def test_criterion_08_nonstein(capsys):
    def body():
        x = gompf_nucleus(2)
        for p in range(2, 11):
            for m in range(3, 7):
                q = p - 1
                assert 2 * q * m > 4 and pair_unsatisfiable(q, m)["unsatisfiable"]
                assert nonstein_obstruction(x, "N", ("log", p), m_val=m).obstructed
        assert not nonstein_obstruction(x, "N", ("log", 1)).obstructed
        assert not nonstein_obstruction(x, "N", ("knot", KnotSpec.unknot())).obstructed

    _criterion(capsys, 8, "non-Stein obstruction grid", 1.0, body)


def test_criterion_09_pipeline(capsys):
    def body():
        res = stein_nonstein_pipeline(g2_plus_trefoil(), n=2, ledger={"S_5": 5, "u:fiber_2": 1})
        assert len(res.stein_members) == 2
        assert all(stein_check(y) == () for y in res.stein_members)
        assert len(res.tail) >= 2 and all(t.obstruction.obstructed for t in res.tail[:2])
        ledgers = [homology(y).ledger() for y in (res.x0, *res.stein_members)]
        assert all(l == ledgers[0] for l in ledgers)
        doc = res.certificate.as_dict()
        assert check_certificate(doc).accepted
        assert check_certificate(res.family.as_dict()).accepted
        for i, ob in enumerate(doc["obligations"]):
            bad = copy.deepcopy(doc)
            v = ob["lhs"]
            bad["obligations"][i]["lhs"] = (not v) if isinstance(v, bool) else (v + 1 if isinstance(v, int) else [v])
            assert check_certificate(bad).verdict == "reject", ob["id"]
        fam = res.family.as_dict()
        for i, ob in enumerate(fam["obligations"]):
            bad = copy.deepcopy(fam)
            v = ob["lhs"]
            bad["obligations"][i]["lhs"] = (not v) if isinstance(v, bool) else (v + 1 if isinstance(v, int) else [v])
            assert check_certificate(bad).verdict == "reject", ob["id"]

    _criterion(capsys, 9, "Stein/non-Stein pipeline on G(2) plus a trefoil handle", 30.0, body)


def test_criterion_10_snf(capsys):
    def body():
        rng = random.Random(10)
        for _ in range(500):
            a = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
            res = smith_normal_form(a)
            prod = 1
            for d in res.diagonal:
                prod *= d
            assert abs(prod) == abs(cofactor_det(a))
            assert abs(res.left_transform.det()) == 1 and abs(res.right_transform.det()) == 1

    _criterion(capsys, 10, "SNF against the cofactor determinant, 500 matrices", 5.0, body)
