"""Canonical JSON encoding of handlebodies ("nf-manifest/1")."""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .errors import MalformedDiagram
from .handlebody import CorkRecord, Handlebody, LegendrianData, NucleusMarker, SurgeryNote, TwoHandle

SCHEMA = "nf-manifest/1"


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_of(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


def pretty_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _front_text(front):
    return None if front is None else "\n".join(front)


def _handle_dict(h: TwoHandle) -> dict:
    return {
        "name": h.name,
        "word": [[g, e] for g, e in h.word],
        "framing": h.framing,
        "linking": {k: v for k, v in sorted(h.linking.items()) if v},
        "legendrian": None if h.legendrian is None else {"tb": h.legendrian.tb, "r": h.legendrian.r},
        "seifert_genus": h.seifert_genus,
        "front": _front_text(h.front),
    }


def _marker_dict(m: NucleusMarker) -> dict:
    return {
        "handles": list(m.handles),
        "one_handles": list(m.one_handles),
        "torus_handles": list(m.torus_handles),
        "class_T": {k: v for k, v in sorted(m.class_T.items()) if v},
        "class_S": {k: v for k, v in sorted(m.class_S.items()) if v},
        "divisor_dT": m.divisor_dT,
        "pi1_status": m.pi1_status,
    }


def to_manifest(x: Handlebody) -> dict:
    return {
        "schema": SCHEMA,
        "one_handles": list(x.one_handles),
        "two_handles": [_handle_dict(h) for h in x.two_handles],
        "markers": {k: _marker_dict(m) for k, m in sorted(x.markers.items())},
        "corks": [
            {
                "id": c.id,
                "sign": c.sign,
                "coefficient": c.coefficient,
                "target": c.target,
                "auxiliary": c.auxiliary,
                "one_handle": c.one_handle,
                "saved_front": _front_text(c.saved_front),
            }
            for c in x.corks
        ],
        "notes": [{"kind": n.kind, "marker": n.marker, "params": n.params} for n in x.notes],
        "log": list(x.log),
    }


def _split_front(text):
    if text is None:
        return None
    return tuple(line.strip() for line in text.splitlines() if line.strip())


def from_manifest(doc: dict) -> Handlebody:
    """Parse a manifest. Fronts are checked against declared (tb, r) or fill them in."""
    from .legendrian import tb_rotation

    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise MalformedDiagram(f"expected schema {SCHEMA!r}")
    try:
        hs = []
        for d in doc.get("two_handles", []):
            front = _split_front(d.get("front"))
            leg = d.get("legendrian")
            leg = None if leg is None else LegendrianData(int(leg["tb"]), int(leg["r"]))
            if front is not None:
                computed = tb_rotation(front)
                if leg is None:
                    leg = computed
                elif leg != computed:
                    raise MalformedDiagram(f"handle {d['name']!r}: front gives {computed}, declared {leg}")
            sg = d.get("seifert_genus")
            hs.append(
                TwoHandle(
                    name=str(d["name"]),
                    word=tuple((str(g), int(e)) for g, e in d.get("word", [])),
                    framing=int(d.get("framing", 0)),
                    linking={str(k): int(v) for k, v in d.get("linking", {}).items() if int(v)},
                    legendrian=leg,
                    seifert_genus=None if sg is None else int(sg),
                    front=front,
                )
            )
        markers = {
            str(k): NucleusMarker(
                handles=tuple(m["handles"]),
                torus_handles=tuple(m.get("torus_handles", ())),
                class_T={str(a): int(b) for a, b in m["class_T"].items()},
                class_S={str(a): int(b) for a, b in m["class_S"].items()},
                divisor_dT=int(m.get("divisor_dT", 1)),
                one_handles=tuple(m.get("one_handles", ())),
                pi1_status=str(m.get("pi1_status", "unknown")),
            )
            for k, m in doc.get("markers", {}).items()
        }
        corks = tuple(
            CorkRecord(
                id=str(c["id"]),
                sign=str(c["sign"]),
                coefficient=int(c["coefficient"]),
                target=str(c["target"]),
                auxiliary=str(c["auxiliary"]),
                one_handle=str(c["one_handle"]),
                saved_front=_split_front(c.get("saved_front")),
            )
            for c in doc.get("corks", [])
        )
        notes = tuple(SurgeryNote(n["kind"], n["marker"], n.get("params", {})) for n in doc.get("notes", []))
        return Handlebody(tuple(str(g) for g in doc.get("one_handles", [])), tuple(hs), markers, corks, notes, tuple(doc.get("log", [])))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, MalformedDiagram):
            raise
        raise MalformedDiagram(f"bad manifest: {e}") from None


def dumps(x: Handlebody) -> str:
    return canonical_json(to_manifest(x))


def loads(text: str) -> Handlebody:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedDiagram(f"manifest is not JSON: {e}") from None
    return from_manifest(doc)
