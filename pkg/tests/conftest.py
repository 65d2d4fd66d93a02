from __future__ import annotations

import random

import pytest

from nuclei import boundary_sum, build, gompf_nucleus, make_handle, tb_rotation
from nuclei.handlebody import TREFOIL_FRONT


def trefoil_handle(name: str = "fiber", framing: int = 0) -> object:
    return make_handle(
        name, framing=framing, legendrian=tb_rotation(TREFOIL_FRONT), seifert_genus=1, front=TREFOIL_FRONT
    )


def g2_plus_trefoil(framing: int = 0, name: str = "fiber"):
    return boundary_sum(gompf_nucleus(2), build((), [trefoil_handle(name, framing)]))


def random_handlebody(rng: random.Random, legendrian: bool = True):
    """Random diagram with at most 4 one-handles and 6 two-handles."""
    ones = [f"a{i}" for i in range(rng.randint(0, 4))]
    n = rng.randint(1, 6)
    names = [f"h{i}" for i in range(n)]
    handles = []
    lk = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-2, 2)
            if v:
                lk[(i, j)] = v
    for i, nm in enumerate(names):
        word = [(rng.choice(ones), rng.choice((1, -1))) for _ in range(rng.randint(0, 3))] if ones else []
        links = {names[j]: v for (a, j), v in lk.items() if a == i}
        links.update({names[a]: v for (a, j), v in lk.items() if j == i})
        leg = (rng.randint(-3, 3), rng.randint(-2, 2)) if legendrian else None
        handles.append(
            make_handle(nm, word=word, framing=rng.randint(-4, 4), linking=links, legendrian=leg, seifert_genus=rng.randint(0, 3))
        )
    return build(ones, handles)


@pytest.fixture
def g2():
    return gompf_nucleus(2)


@pytest.fixture
def g2t():
    return g2_plus_trefoil()


@pytest.fixture
def rng():
    return random.Random(20240611)
