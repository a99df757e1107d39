"""JSON encoding of surfaces, curves, covers, tracks, and embeddings.

Every writer emits plain dict/list trees ready for ``json.dumps``; every
reader accepts the tree produced by the matching writer, so a dump/load
round trip reproduces an equal object.  Readers validate shape eagerly
and raise InputError with the offending key, never KeyError.
"""

from __future__ import annotations

import json

from .covers import CoverSpec
from .curves import Branch, Component, MultiCurve, Region, Switch, TrainTrack
from .errors import InputError
from .stretch import Placement, SubsurfaceEmbedding
from .surface import FlatSurface, Gluing

_GLUING_KINDS = ("translation", "halfturn")


def _need(data, key, what):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"{what} is missing required key {key!r}")
    return data[key]


def _pair(value, what):
    try:
        a, b = value
        return int(a), int(b)
    except (TypeError, ValueError):
        raise InputError(f"{what} must be a pair of integers, got {value!r}")


# -- surfaces ------------------------------------------------------------


def surface_to_dict(surface: FlatSurface) -> dict:
    data = {
        "polygons": [
            [[v.real, v.imag] for v in poly] for poly in surface.polygons
        ],
        "gluings": [
            {"a": list(g.a), "b": list(g.b), "type": g.kind}
            for g in surface.gluings
        ],
        "punctures": [list(p) for p in surface.punctures],
        "tol": surface.tol,
        "named_curves": {
            name: curve_to_dict(c) for name, c in sorted(surface.named_curves.items())
        },
    }
    if surface.periodic_directions:
        data["periodic_directions"] = [
            [d.real, d.imag] for d in surface.periodic_directions
        ]
    return data


def surface_from_dict(data: dict) -> FlatSurface:
    polys = []
    for poly in _need(data, "polygons", "surface"):
        verts = []
        for v in poly:
            try:
                x, y = v
            except (TypeError, ValueError):
                raise InputError(f"polygon vertex must be [x, y], got {v!r}")
            verts.append(complex(float(x), float(y)))
        polys.append(verts)
    gluings = []
    for k, g in enumerate(data.get("gluings", ())):
        kind = _need(g, "type", f"gluing {k}")
        if kind not in _GLUING_KINDS:
            raise InputError(f"gluing {k} has unknown type {kind!r}")
        gluings.append(
            Gluing(
                _pair(_need(g, "a", f"gluing {k}"), f"gluing {k} side a"),
                _pair(_need(g, "b", f"gluing {k}"), f"gluing {k} side b"),
                kind,
            )
        )
    punctures = [_pair(p, "puncture") for p in data.get("punctures", ())]
    directions = [
        complex(float(d[0]), float(d[1]))
        for d in data.get("periodic_directions", ())
    ]
    surface = FlatSurface(
        polys,
        gluings,
        punctures=punctures,
        tol=float(data.get("tol", 1e-9)),
        periodic_directions=directions,
    )
    named = {}
    for name, cdata in data.get("named_curves", {}).items():
        named[name] = curve_from_dict(surface, cdata)
    surface.named_curves.update(named)
    return surface


# -- curves --------------------------------------------------------------


def curve_to_dict(curve: MultiCurve) -> dict:
    comps = []
    for comp in curve:
        entry = {
            "kind": comp.kind,
            "crossings": [[p, i, 1] for p, i in comp.crossings],
            "weight": comp.weight,
        }
        comps.append(entry)
    return {"components": comps}


def curve_from_dict(surface: FlatSurface, data: dict) -> MultiCurve:
    comps = []
    for ci, cdata in enumerate(_need(data, "components", "curve")):
        kind = cdata.get("kind", "loop")
        if kind not in ("loop", "arc"):
            raise InputError(f"component {ci} has unknown kind {kind!r}")
        crossings = []
        for entry in _need(cdata, "crossings", f"component {ci}"):
            if len(entry) == 2:
                (p, i), orient = _pair(entry, "crossing"), 1
            elif len(entry) == 3:
                p, i = _pair(entry[:2], "crossing")
                orient = int(entry[2])
            else:
                raise InputError(f"crossing must be [poly, edge, orient], got {entry!r}")
            if orient == -1:
                # Recorded from the far side of the gluing; normalize to
                # the near-side edge so downstream code sees one form.
                partner = surface.partner(p, i)
                if partner is None:
                    raise InputError(
                        f"crossing ({p}, {i}) has orient -1 on a boundary edge"
                    )
                p, i = partner
            elif orient != 1:
                raise InputError(f"crossing orient must be 1 or -1, got {orient}")
            crossings.append((p, i))
        comps.append(Component(kind, tuple(crossings), float(cdata.get("weight", 1.0))))
    return MultiCurve(tuple(comps))


# -- covers --------------------------------------------------------------


def cover_to_dict(spec: CoverSpec) -> dict:
    ident = tuple(range(spec.degree))
    monodromy = {
        str(k): list(perm)
        for k, perm in enumerate(spec.monodromy)
        if perm != ident
    }
    return {"degree": spec.degree, "monodromy": monodromy}


def cover_from_dict(surface: FlatSurface, data: dict) -> CoverSpec:
    degree = _need(data, "degree", "cover")
    table = {}
    for key, perm in data.get("monodromy", {}).items():
        try:
            k = int(key)
        except ValueError:
            raise InputError(f"monodromy key {key!r} is not a gluing index")
        table[k] = tuple(int(s) for s in perm)
    return CoverSpec(surface, int(degree), table)


# -- train tracks ----------------------------------------------------------


def track_to_dict(track: TrainTrack) -> dict:
    return {
        "branches": [{"path": [list(c) for c in b.path]} for b in track.branches],
        "switches": [
            {"left": [list(e) for e in sw.left], "right": [list(e) for e in sw.right]}
            for sw in track.switches
        ],
        "regions": [{"kind": r.kind, "cusps": r.cusps} for r in track.regions],
    }


def track_from_dict(surface: FlatSurface, data: dict) -> TrainTrack:
    branches = tuple(
        Branch(tuple(_pair(c, "branch path entry") for c in b.get("path", ())))
        for b in _need(data, "branches", "track")
    )
    switches = tuple(
        Switch(
            tuple(_pair(e, "switch end") for e in _need(sw, "left", "switch")),
            tuple(_pair(e, "switch end") for e in _need(sw, "right", "switch")),
        )
        for sw in _need(data, "switches", "track")
    )
    regions = tuple(
        Region(_need(r, "kind", "region"), int(_need(r, "cusps", "region")))
        for r in data.get("regions", ())
    )
    return TrainTrack(surface, branches, switches, regions)


# -- embeddings ------------------------------------------------------------


def embedding_to_dict(e: SubsurfaceEmbedding) -> dict:
    placement = []
    for r, pl in enumerate(e.placements):
        (a, b), (c, d) = pl.matrix
        placement.append(
            {
                "poly": r,
                "host": pl.host,
                "map": [[a, b, pl.offset.real], [c, d, pl.offset.imag]],
            }
        )
    return {
        "domain": surface_to_dict(e.domain),
        "codomain": surface_to_dict(e.codomain),
        "placement": placement,
        "flags": {"strict": e.strict, "annular": e.annular},
    }


def embedding_from_dict(data: dict) -> SubsurfaceEmbedding:
    domain = surface_from_dict(_need(data, "domain", "embedding"))
    codomain = surface_from_dict(_need(data, "codomain", "embedding"))
    table = {}
    for entry in _need(data, "placement", "embedding"):
        r = int(_need(entry, "poly", "placement"))
        rows = _need(entry, "map", f"placement of polygon {r}")
        try:
            (a, b, tx), (c, d, ty) = rows
        except (TypeError, ValueError):
            raise InputError(
                f"placement map for polygon {r} must be [[a,b,tx],[c,d,ty]]"
            )
        table[r] = Placement(
            int(_need(entry, "host", "placement")),
            ((float(a), float(b)), (float(c), float(d))),
            complex(float(tx), float(ty)),
        )
    missing = [r for r in range(len(domain.polygons)) if r not in table]
    if missing:
        raise InputError(f"placement missing for domain polygons {missing}")
    flags = data.get("flags", {})
    return SubsurfaceEmbedding(
        domain,
        codomain,
        [table[r] for r in range(len(domain.polygons))],
        strict=flags.get("strict"),
        annular=flags.get("annular"),
    )


# -- file plumbing ----------------------------------------------------------


def dumps(tree) -> str:
    """Deterministic JSON text: sorted keys, no trailing whitespace."""
    return json.dumps(tree, sort_keys=True, indent=2) + "\n"


def load_path(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")


def save_path(path: str, tree):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(tree))
