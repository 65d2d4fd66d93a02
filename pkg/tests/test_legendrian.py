from __future__ import annotations

import pytest

from nuclei.errors import FramingTooHigh, InconsistentFront, MalformedDiagram, MissingLegendrianData, MultiComponent, NoLegendrianData, OpenFront
from nuclei.handlebody import TREFOIL_FRONT, UNKNOT_FRONT, LegendrianData, build, gompf_nucleus, make_handle
from nuclei.legendrian import (
    add_zigzag,
    invariants_of_traversal,
    parse_front,
    stein_check,
    steinify,
    steinify_handle,
    tb_rotation,
    traversal,
    zigzag_front,
)


def test_standard_fronts():
    assert tb_rotation(UNKNOT_FRONT) == LegendrianData(-1, 0)
    assert tb_rotation(TREFOIL_FRONT) == LegendrianData(1, 0)
    assert tb_rotation("LC 0\nRCd 0") == LegendrianData(-1, 0)


def test_front_errors():
    with pytest.raises(OpenFront):
        tb_rotation("LC 0")
    with pytest.raises(OpenFront):
        tb_rotation("RCd 0")
    with pytest.raises(MultiComponent):
        tb_rotation("LC 0\nLC 2\nRCd 0\nRCd 0")
    with pytest.raises(InconsistentFront):
        tb_rotation("LC 0\nLC 2\nX- 1\nX+ 1\nX+ 1\nRCd 0\nRCu 0")
    with pytest.raises(MalformedDiagram):
        parse_front("LC x")
    with pytest.raises(MalformedDiagram):
        parse_front("Q 0")


@pytest.mark.parametrize("front", [UNKNOT_FRONT, TREFOIL_FRONT])
@pytest.mark.parametrize("direction", ["up", "down"])
def test_zigzag_front_shifts_invariants(front, direction):
    before = tb_rotation(front)
    after = tb_rotation(zigzag_front(front, direction))
    assert after.tb == before.tb - 1
    assert after.r == before.r + (1 if direction == "up" else -1)


def test_traversal_rotation_invariance():
    front = TREFOIL_FRONT
    for _ in range(3):
        front = zigzag_front(front, "down")
    direct = tb_rotation(front)
    rcs = sum(1 for t in front if t.startswith("RC"))
    n = len(traversal(front))
    for k in range(n):
        assert invariants_of_traversal(traversal(front, k), rcs) == direct


def test_add_zigzag_on_handle():
    h = make_handle("k", framing=-3, legendrian=tb_rotation(UNKNOT_FRONT), front=UNKNOT_FRONT)
    h2 = add_zigzag(h, "up")
    assert h2.legendrian == LegendrianData(-2, 1)
    assert tb_rotation(h2.front) == h2.legendrian
    with pytest.raises(NoLegendrianData):
        add_zigzag(make_handle("z"), "up")
    with pytest.raises(MalformedDiagram):
        add_zigzag(h, "sideways")


@pytest.mark.parametrize("n", range(2, 11))
def test_gompf_models_are_stein(n):
    x = gompf_nucleus(n)
    assert stein_check(x) == ()
    for h in x.two_handles:
        assert tb_rotation(h.front) == h.legendrian


def test_steinify_idempotent_and_stein():
    h = make_handle("k", framing=-4, legendrian=tb_rotation(TREFOIL_FRONT), front=TREFOIL_FRONT)
    x = build([], [h])
    y = steinify(x)
    assert stein_check(y) == ()
    assert steinify(y) is y
    assert tb_rotation(y.handle("k").front) == y.handle("k").legendrian


def test_framing_too_high():
    h = make_handle("k", framing=3, legendrian=(1, 0))
    with pytest.raises(FramingTooHigh) as ei:
        steinify_handle(h)
    assert ei.value.required_p == 3
    (v,) = stein_check(build([], [h]))
    assert v.required_p == 3


def test_missing_legendrian():
    with pytest.raises(MissingLegendrianData):
        stein_check(gompf_nucleus(1))
