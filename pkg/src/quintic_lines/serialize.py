"""File formats: heights JSON, census JSON-lines, summaries, OBJ, graphs.

All rationals travel as exact ``p/q`` strings (``str(Fraction)``); floats
appear only in OBJ files, which feed viewers rather than computations.
External records use 1-indexed facets (1..5) and legs/curves (1..4) to
match the C_ij naming; everything in-process is 0-indexed.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import __version__
from .curves import RAYS, QuinticCurveSet, lift
from .search import LegIncidence, TropicalLine

META_KEY = "meta"


def meta_dict(heights, extra=None):
    d = {
        "seed": heights.seed,
        "magnitude": str(heights.magnitude),
        "version": __version__,
    }
    if extra:
        d.update(extra)
    return d


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- heights ----------------------------------------------------------------

def heights_to_json(heights) -> str:
    d = heights.to_json_dict()
    d["version"] = __version__
    return json.dumps(d, sort_keys=True, indent=1)


def heights_from_json(text: str):
    from .polytope import HeightFunction
    return HeightFunction.from_json_dict(json.loads(text))


# -- census records ---------------------------------------------------------

def line_record(line: TropicalLine, mult=None) -> dict:
    rec = {
        "facet": line.facet + 1,
        "type": line.line_type,
        "V1": [str(x) for x in line.v1],
        "V2": [str(x) for x in line.v2],
        "t": str(line.t),
        "direction": list(line.direction),
        "legs": [{
            "leg": inc.leg + 1,
            "curve": inc.leg + 1,
            "dir": list(RAYS[inc.leg]),
            "vertex": "V1" if inc.at_v1 else "V2",
            "edge": inc.edge_index,
            "edge_kind": inc.edge_kind,
            "landing": [str(z) for z in inc.landing],
        } for inc in line.legs],
        "flags": {"rigid": True},
    }
    if mult is not None:
        rec["mult"] = mult.value
        rec["topology"] = mult.topology
        rec["admissible"] = all(inc.edge_kind == "internal"
                                for inc in line.legs)
    return rec


def line_from_record(rec: dict) -> tuple:
    """(TropicalLine, mult_value or None) back from a census record."""
    legs = tuple(LegIncidence(
        leg=l["leg"] - 1,
        at_v1=l["vertex"] == "V1",
        edge_index=l["edge"],
        edge_kind=l["edge_kind"],
        landing=tuple(Fraction(z) for z in l["landing"]),
    ) for l in sorted(rec["legs"], key=lambda l: l["leg"]))
    line = TropicalLine(
        facet=rec["facet"] - 1,
        line_type=rec["type"],
        v1=tuple(Fraction(x) for x in rec["V1"]),
        v2=tuple(Fraction(x) for x in rec["V2"]),
        t=Fraction(rec["t"]),
        direction=tuple(rec["direction"]),
        legs=legs,
    )
    return line, rec.get("mult")


def census_to_jsonl(heights, records) -> str:
    lines = [dump_json({META_KEY: meta_dict(heights)})]
    lines.extend(dump_json(r) for r in records)
    return "\n".join(lines) + "\n"


def census_from_jsonl(text: str):
    meta = None
    records = []
    for raw in text.splitlines():
        raw = raw.strip()
        if not raw:
            continue
        d = json.loads(raw)
        if META_KEY in d:
            meta = d[META_KEY]
        else:
            records.append(d)
    return meta, records


# -- OBJ export ---------------------------------------------------------------

class ObjWriter:
    def __init__(self):
        self.chunks = []
        self.nv = 0

    def obj(self, name):
        self.chunks.append(f"o {name}")

    def polyline(self, points):
        start = self.nv + 1
        for p in points:
            x, y, z = (float(c) for c in p)
            self.chunks.append(f"v {x:.9g} {y:.9g} {z:.9g}")
            self.nv += 1
        idx = " ".join(str(i) for i in range(start, start + len(points)))
        self.chunks.append(f"l {idx}")

    def text(self):
        return "\n".join(self.chunks) + "\n"


def facet_obj(curveset: QuinticCurveSet, facet: int, lines,
              radius: Fraction = Fraction(50)) -> str:
    """Lines of one facet plus its four curves, legs truncated at radius.

    Curves live at infinity; for the picture each is embedded in its leg
    plane pushed out to distance ``radius`` along the leg direction."""
    w = ObjWriter()
    w.obj(f"facet{facet + 1}_lines")
    for line in lines:
        w.polyline([line.v1, line.v2])
        for inc in line.legs:
            base = line.v1 if inc.at_v1 else line.v2
            tip = tuple(Fraction(b) + radius * d
                        for b, d in zip(base, RAYS[inc.leg]))
            w.polyline([base, tip])
    for j in range(4):
        curve = curveset.curves[(facet, j)]
        w.obj(f"facet{facet + 1}_curve{j + 1}")
        offset = tuple(radius * d for d in RAYS[j])
        scale = curve.scale

        def embed(z):
            p = lift(j, (Fraction(z[0], scale), Fraction(z[1], scale)))
            return tuple(p[i] + offset[i] for i in range(3))

        for e in curve.edges:
            if e.kind == "internal":
                w.polyline([embed(e.endpoints[0]), embed(e.endpoints[1])])
            else:
                base = e.endpoints[0]
                tip = (Fraction(base[0], scale) + radius * e.direction[0],
                       Fraction(base[1], scale) + radius * e.direction[1])
                tip3 = lift(j, tip)
                tip3 = tuple(tip3[i] + offset[i] for i in range(3))
                w.polyline([embed(base), tip3])
    return w.text()
