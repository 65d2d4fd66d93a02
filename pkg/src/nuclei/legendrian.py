"""Legendrian fronts, zig-zags and the Stein framing condition.

A front is described by a left-to-right sweep. At each moment the front
meets a stack of strands, numbered from 0 at the top. Events:

``LC i``
    a left cusp opens two new strands at positions ``i`` (upper) and ``i+1``
``RCu i`` / ``RCd i``
    a right cusp closes strands ``i`` and ``i+1``; ``u``/``d`` says whether
    the knot orientation passes through the cusp from the lower branch to
    the upper one (up) or the reverse (down)
``X+ i`` / ``X- i``
    strands ``i`` and ``i+1`` cross; the sign is checked against the
    orientation

Then ``tb = writhe - #right cusps`` and ``r = (#down cusps - #up cusps) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import (
    FramingTooHigh,
    InconsistentFront,
    MalformedDiagram,
    MissingLegendrianData,
    MultiComponent,
    NoLegendrianData,
    OpenFront,
)
from .handlebody import Handlebody, LegendrianData, TwoHandle

DIRECTIONS = ("up", "down")


@dataclass(frozen=True)
class FrontEvent:
    kind: str  # "LC", "RC", "X"
    index: int
    tag: str = ""  # "u"/"d" for RC, "+"/"-" for X

    def token(self) -> str:
        return f"{self.kind}{self.tag} {self.index}"


@dataclass(frozen=True)
class FrontDiagram:
    events: tuple[FrontEvent, ...]

    def tokens(self) -> tuple[str, ...]:
        return tuple(e.token() for e in self.events)

    def text(self) -> str:
        return "\n".join(self.tokens())


def parse_front(src: str | Iterable[str] | FrontDiagram) -> FrontDiagram:
    """Parse newline-separated tokens (or a sequence of token strings)."""
    if isinstance(src, FrontDiagram):
        return src
    lines = src.splitlines() if isinstance(src, str) else list(src)
    events = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedDiagram(f"bad front token {line!r}")
        head, idx = parts
        try:
            i = int(idx)
        except ValueError:
            raise MalformedDiagram(f"bad strand index in {line!r}") from None
        if i < 0:
            raise MalformedDiagram(f"negative strand index in {line!r}")
        if head == "LC":
            events.append(FrontEvent("LC", i))
        elif head in ("RCu", "RCd"):
            events.append(FrontEvent("RC", i, head[2]))
        elif head in ("X+", "X-"):
            events.append(FrontEvent("X", i, head[1]))
        else:
            raise MalformedDiagram(f"unknown front event {head!r}")
    return FrontDiagram(tuple(events))


@dataclass
class _Sweep:
    lcs: list  # (top strand, bottom strand)
    rcs: list  # (upper strand, lower strand, tag)
    crossings: list  # (upper strand, lower strand, tag)
    direction: dict  # strand -> +1 (rightward) / -1 (leftward)
    lc_at: list  # (event index, top strand) for each LC in order


def _sweep(front: FrontDiagram) -> _Sweep:
    stack: list[int] = []
    nxt = 0
    lcs, rcs, crossings, lc_at = [], [], [], []
    partner: dict[int, list[int]] = {}
    for k, ev in enumerate(front.events):
        i = ev.index
        if ev.kind == "LC":
            if i > len(stack):
                raise OpenFront(f"event {k}: left cusp at {i} beyond {len(stack)} strands")
            a, b = nxt, nxt + 1
            nxt += 2
            stack[i:i] = [a, b]
            lcs.append((a, b))
            lc_at.append((k, a))
            partner.setdefault(a, []).append(b)
            partner.setdefault(b, []).append(a)
        else:
            if i + 1 >= len(stack):
                raise OpenFront(f"event {k}: {ev.token()} needs strands {i}, {i + 1} of {len(stack)}")
            u, l_ = stack[i], stack[i + 1]
            if ev.kind == "RC":
                del stack[i:i + 2]
                rcs.append((u, l_, ev.tag))
                partner.setdefault(u, []).append(l_)
                partner.setdefault(l_, []).append(u)
            else:
                stack[i], stack[i + 1] = l_, u
                crossings.append((u, l_, ev.tag))
    if stack:
        raise OpenFront(f"{len(stack)} strands still open at the right end")
    if not lcs:
        raise OpenFront("empty front")
    # connectivity: each strand meets one left and one right cusp
    seen = {0}
    stack = [0]
    while stack:
        s = stack.pop()
        for t in partner[s]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    if len(seen) != nxt:
        raise MultiComponent("front has more than one component")
    # orientation from the first right cusp, propagated through cusps
    u0, _, tag0 = rcs[0]
    direction = {u0: 1 if tag0 == "d" else -1}
    stack = [u0]
    while stack:
        s = stack.pop()
        for t in partner[s]:
            if t not in direction:
                direction[t] = -direction[s]
                stack.append(t)
            elif direction[t] == direction[s]:
                raise InconsistentFront("cusp joins two strands with the same direction")
    for u, l_, tag in rcs:
        want = "d" if direction[u] == 1 else "u"
        if tag != want:
            raise InconsistentFront("right cusp orientations disagree")
    for u, l_, tag in crossings:
        want = "+" if direction[u] == direction[l_] else "-"
        if tag != want:
            raise InconsistentFront(f"crossing declared {tag} but orientation makes it {want}")
    return _Sweep(lcs, rcs, crossings, direction, lc_at)


def tb_rotation(front) -> LegendrianData:
    """Thurston-Bennequin and rotation numbers of a one-component front."""
    sw = _sweep(parse_front(front))
    writhe = sum(1 if tag == "+" else -1 for _, _, tag in sw.crossings)
    down = sum(1 for _, _, tag in sw.rcs if tag == "d") + sum(1 for a, _ in sw.lcs if sw.direction[a] == -1)
    up = len(sw.rcs) + len(sw.lcs) - down
    if (down - up) % 2:
        raise InconsistentFront("odd cusp imbalance")
    return LegendrianData(writhe - len(sw.rcs), (down - up) // 2)


def traversal(front, start: int = 0) -> tuple[tuple[str, str], ...]:
    """Cusps and crossings in the order the oriented knot meets them.

    Each entry is ``("cusp", "up"|"down")`` or ``("crossing", "+"|"-")``;
    each crossing appears twice (once per strand), so invariants computed
    from a traversal halve the crossing count. ``start`` rotates the cycle.
    """
    f = parse_front(front)
    sw = _sweep(f)
    # along each strand, record events in sweep order, tagged by strand
    on: dict[int, list] = {s: [] for s in sw.direction}
    stack: list[int] = []
    nxt = 0
    rc_by_strand, lc_by_strand = {}, {}
    for ev in f.events:
        i = ev.index
        if ev.kind == "LC":
            a, b = nxt, nxt + 1
            nxt += 2
            stack[i:i] = [a, b]
            lc_by_strand[a] = lc_by_strand[b] = (a, b)
        elif ev.kind == "RC":
            u, l_ = stack[i], stack[i + 1]
            del stack[i:i + 2]
            rc_by_strand[u] = rc_by_strand[l_] = (u, l_)
        else:
            u, l_ = stack[i], stack[i + 1]
            stack[i], stack[i + 1] = l_, u
            on[u].append(("crossing", ev.tag))
            on[l_].append(("crossing", ev.tag))
    out = []
    s = next(iter(sw.lcs))[0]
    for _ in range(len(sw.direction)):
        d = sw.direction[s]
        out.extend(on[s] if d == 1 else reversed(on[s]))
        if d == 1:
            u, l_ = rc_by_strand[s]
            out.append(("cusp", "down" if s == u else "up"))
            nxt_s = l_ if s == u else u
        else:
            a, b = lc_by_strand[s]
            out.append(("cusp", "down" if s == a else "up"))
            nxt_s = b if s == a else a
        s = nxt_s
    k = start % len(out)
    return tuple(out[k:] + out[:k])


def invariants_of_traversal(events: Sequence[tuple[str, str]], right_cusps: int) -> LegendrianData:
    writhe2 = sum(1 if t == "+" else -1 for kind, t in events if kind == "crossing")
    down = sum(1 for kind, t in events if kind == "cusp" and t == "down")
    up = sum(1 for kind, t in events if kind == "cusp" and t == "up")
    return LegendrianData(writhe2 // 2 - right_cusps, (down - up) // 2)


def zigzag_front(front, direction: str) -> tuple[str, ...]:
    """Insert one zig-zag on the upper strand of the first left cusp.

    ``"up"`` raises the rotation number by one, ``"down"`` lowers it.
    """
    if direction not in DIRECTIONS:
        raise MalformedDiagram(f"zig-zag direction must be up or down, got {direction!r}")
    f = parse_front(front)
    sw = _sweep(f)
    k, top = sw.lc_at[0]
    i = f.events[k].index
    rightward = sw.direction[top] == 1
    # a Z below the strand has both cusps oriented down when the strand runs rightward
    want_z = (direction == "up") == rightward
    if want_z:
        ins = [FrontEvent("LC", i + 1), FrontEvent("RC", i, "d" if rightward else "u")]
    else:
        ins = [FrontEvent("LC", i), FrontEvent("RC", i + 1, "u" if rightward else "d")]
    return FrontDiagram(f.events[: k + 1] + tuple(ins) + f.events[k + 1:]).tokens()


def add_zigzag(h: TwoHandle, direction: str) -> TwoHandle:
    """One stabilization: tb drops by one, r moves by +1 (up) or -1 (down)."""
    if direction not in DIRECTIONS:
        raise MalformedDiagram(f"zig-zag direction must be up or down, got {direction!r}")
    if h.legendrian is None:
        raise NoLegendrianData(f"handle {h.name!r} has no Legendrian data")
    dr = 1 if direction == "up" else -1
    leg = LegendrianData(h.legendrian.tb - 1, h.legendrian.r + dr)
    front = zigzag_front(h.front, direction) if h.front is not None else None
    return replace(h, legendrian=leg, front=front)


@dataclass(frozen=True)
class SteinViolation:
    handle: str
    framing: int
    tb: int

    @property
    def required_p(self) -> int:
        """W+ coefficient needed when the framing is too high (else 0)."""
        return max(0, self.framing - self.tb + 1)


def _require_legendrian(x: Handlebody) -> None:
    missing = [h.name for h in x.two_handles if h.legendrian is None]
    if missing:
        raise MissingLegendrianData(missing)


def stein_check(x: Handlebody) -> tuple[SteinViolation, ...]:
    """Handles whose framing is not tb - 1. Empty means the diagram is Stein."""
    _require_legendrian(x)
    return tuple(
        SteinViolation(h.name, h.framing, h.legendrian.tb)
        for h in x.two_handles
        if h.framing != h.legendrian.tb - 1
    )


def steinify_handle(h: TwoHandle) -> TwoHandle:
    if h.legendrian is None:
        raise MissingLegendrianData([h.name])
    k = h.legendrian.tb - 1 - h.framing
    if k < 0:
        raise FramingTooHigh(h.name, h.framing, h.legendrian.tb)
    for j in range(k):
        h = add_zigzag(h, "down" if j % 2 == 0 else "up")
    return h


def steinify(x: Handlebody) -> Handlebody:
    """Add zig-zags until every framing equals tb - 1.

    Directions alternate per handle, starting with ``down``.
    """
    _require_legendrian(x)
    hs = tuple(steinify_handle(h) for h in x.two_handles)
    if hs == x.two_handles:
        return x
    added = {h.name: h.legendrian.tb - 1 - h.framing for h in x.two_handles if h.legendrian.tb - 1 != h.framing}
    return replace(x, two_handles=hs).with_log("steinify", zigzags=added, policy="alternate-from-down")
