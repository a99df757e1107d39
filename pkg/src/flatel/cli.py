"""Command-line front end.

One subcommand per module, JSON reports by default, CSV for tabular
output.  Exit status: 0 on success, 1 when a requested certification
fails (an invariant check, a bound comparison, a validation report), 2
on malformed input.  Reports are deterministic: keys are sorted, floats
use repr, and wall-clock timing appears only behind --timing.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time

from . import io as iolib
from .covers import CoverSpec, build_cover, el_cover_check, pullback_curve
from .curves import (
    capped_class,
    intersection_number,
    pants_class,
    pushforward_reduce,
    reduce as reduce_curve,
    scale as scale_curve,
    slope_curve,
)
from .cylinders import cylinder_decomposition
from .errors import FlatelError, InputError
from .examples import make_example_surface
from .extremal import el_cylinder, el_interval
from .qdisk import (
    DiskDifferential,
    area_q_with_error,
    concentration_experiment,
    parse_region,
    squaring_pullback_check,
    subharmonic_ring_check,
    verify_small_area,
)
from .stretch import (
    Placement,
    SubsurfaceEmbedding,
    branched_strip_lift,
    default_candidates,
    sf_cover_report,
    sf_lower,
    sf_upper_loose,
    sf_upper_qc,
)

EXIT_OK = 0
EXIT_UNCERTIFIED = 1
EXIT_BAD_INPUT = 2


# -- output helpers ---------------------------------------------------------


def _print_json(tree):
    sys.stdout.write(json.dumps(tree, sort_keys=True, indent=2) + "\n")


def _print_csv(header, rows):
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(_csv_cell(v) for v in row))
    sys.stdout.write("\n".join(out) + "\n")


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit(args, tree, csv_table=None):
    if getattr(args, "csv", False):
        if csv_table is None:
            raise InputError("csv output is not available for this command")
        _print_csv(*csv_table)
    else:
        _print_json(tree)


def _digest(tree) -> str:
    blob = json.dumps(tree, sort_keys=True).encode("utf-8")
    return "sha256:" + hashlib.sha256(blob).hexdigest()


# -- input helpers ----------------------------------------------------------


def _load_surface(path):
    return iolib.surface_from_dict(iolib.load_path(path))


def _load_curve(surface, path):
    return iolib.curve_from_dict(surface, iolib.load_path(path))


def _load_embedding(path):
    return iolib.embedding_from_dict(iolib.load_path(path))


def _load_candidates(args, embedding):
    if getattr(args, "candidates", None):
        tree = iolib.load_path(args.candidates)
        if isinstance(tree, dict):
            tree = tree.get("candidates", tree)
        if not isinstance(tree, list):
            raise InputError("candidates file must hold a list of curves")
        return [iolib.curve_from_dict(embedding.domain, c) for c in tree]
    return default_candidates(embedding.domain)


def _parse_direction(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"direction must be 'dx,dy', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise InputError(f"direction must be numeric, got {text!r}")


def _parse_coefficients(text: str):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--q must be a JSON list of coefficients: {exc}")
    if not isinstance(raw, list) or not raw:
        raise InputError("--q must be a non-empty JSON list")
    coeffs = []
    for c in raw:
        if isinstance(c, (int, float)):
            coeffs.append(complex(c))
        elif isinstance(c, list) and len(c) == 2:
            coeffs.append(complex(float(c[0]), float(c[1])))
        else:
            raise InputError(f"coefficient must be a number or [re, im], got {c!r}")
    return tuple(coeffs)


def _differential(args) -> DiskDifferential:
    return DiskDifferential(_parse_coefficients(args.q), pole=bool(args.pole))


def _quad_tol(args) -> float:
    return args.tol if args.tol is not None else 1e-8


def _interval_dict(iv) -> dict:
    return {"lower": iv.lower, "upper": iv.upper}


def _bound_dict(b) -> dict:
    out = {"lower": b.lower, "witness": b.lower_witness}
    if math.isfinite(b.upper):
        out["upper"] = b.upper
        out["upper_kind"] = b.upper_kind
    return out


# -- surface ---------------------------------------------------------------


def cmd_surface_validate(args):
    report = _load_surface(args.file).validate()
    _emit(args, {"ok": report.ok, "violations": report.violations})
    return report.ok


def cmd_surface_area(args):
    s = _load_surface(args.file)
    _emit(args, {"area": s.area}, (["area"], [(s.area,)]))
    return True


def cmd_surface_angles(args):
    s = _load_surface(args.file)
    rows = [
        {
            "corners": [list(c) for c in vc.corners],
            "angle": vc.angle,
            "boundary": vc.boundary,
            "puncture": vc.puncture,
        }
        for vc in s.vertex_classes
    ]
    csv_rows = [
        (f"({vc.corners[0][0]} {vc.corners[0][1]})", vc.angle, vc.boundary, vc.puncture)
        for vc in s.vertex_classes
    ]
    _emit(
        args,
        {"vertices": rows},
        (["first_corner", "angle", "boundary", "puncture"], csv_rows),
    )
    return True


def cmd_surface_cylinders(args):
    s = _load_surface(args.file)
    d = _parse_direction(args.dir)
    deco = cylinder_decomposition(s, d)
    rows = [
        {
            "circumference": c.circumference,
            "height": c.height,
            "modulus": c.modulus,
            "extremal_length": c.extremal_length,
        }
        for c in deco.cylinders
    ]
    csv_rows = [
        (c.circumference, c.height, c.modulus, c.extremal_length)
        for c in deco.cylinders
    ]
    _emit(
        args,
        {"direction": [d.real, d.imag], "cylinders": rows},
        (["circumference", "height", "modulus", "extremal_length"], csv_rows),
    )
    return True


# -- curve -------------------------------------------------------------------


def cmd_curve_reduce(args):
    s = _load_surface(args.surface)
    c = reduce_curve(s, _load_curve(s, args.file))
    _emit(args, iolib.curve_to_dict(c))
    return True


def cmd_curve_intersect(args):
    s = _load_surface(args.surface)
    a = _load_curve(s, args.files[0])
    b = _load_curve(s, args.files[1])
    _emit(args, {"intersection": intersection_number(s, a, b)})
    return True


def cmd_curve_slope(args):
    s = _load_surface(args.surface)
    _emit(args, iolib.curve_to_dict(slope_curve(s, args.p, args.q)))
    return True


def cmd_curve_push(args):
    e = _load_embedding(args.embedding)
    c = _load_curve(e.domain, args.file)
    _emit(args, iolib.curve_to_dict(pushforward_reduce(e, c)))
    return True


# -- el ----------------------------------------------------------------------


def cmd_el(args):
    s = _load_surface(args.surface)
    c = _load_curve(s, args.curve)
    if args.dir:
        iv = el_cylinder(s, c, _parse_direction(args.dir))
    else:
        iv = el_interval(s, c, args.level or 0)
    lo_m = (iv.lower_witness or {}).get("method", "none")
    up_m = (iv.upper_witness or {}).get("method", "none")
    if lo_m.startswith("cylinder") and up_m.startswith("cylinder"):
        method = "cylinder-decomposition"
    else:
        method = lo_m if lo_m == up_m else f"{lo_m}/{up_m}"
    tree = {"lower": iv.lower, "upper": iv.upper, "method": method}
    _emit(args, tree, (["lower", "upper", "method"], [(iv.lower, iv.upper, method)]))
    return True


# -- cover -------------------------------------------------------------------


def _load_cover(path, base) -> CoverSpec:
    return iolib.cover_from_dict(base, iolib.load_path(path))


def cmd_cover_build(args):
    s = _load_surface(args.surface)
    spec = _load_cover(args.cover, s)
    _emit(args, iolib.surface_to_dict(build_cover(spec)))
    return True


def cmd_cover_pullback(args):
    s = _load_surface(args.surface)
    spec = _load_cover(args.cover, s)
    c = _load_curve(s, args.curve)
    _emit(args, iolib.curve_to_dict(pullback_curve(spec, c)))
    return True


def cmd_cover_check(args):
    s = _load_surface(args.surface)
    spec = _load_cover(args.cover, s)
    c = _load_curve(s, args.curve)
    rep = el_cover_check(spec, c, args.level or 0)
    _emit(
        args,
        {
            "degree": rep.degree,
            "components": rep.components,
            "base": _interval_dict(rep.base_interval),
            "cover": _interval_dict(rep.cover_interval),
            "consistent": rep.consistent,
            "exact": rep.exact,
        },
    )
    return rep.consistent


# -- sf ----------------------------------------------------------------------


def cmd_sf_lower(args):
    e = _load_embedding(args.embedding)
    b = sf_lower(e, _load_candidates(args, e), args.level or 0)
    _emit(args, _bound_dict(b))
    return True


def cmd_sf_upper_qc(args):
    e = _load_embedding(args.embedding)
    _emit(args, {"upper": sf_upper_qc(e), "kind": "qc-constant"})
    return True


def cmd_sf_upper_loose(args):
    paths = args.embedding
    if len(paths) < 2:
        raise InputError("upper-loose needs at least two --embedding files")
    trees = [iolib.load_path(p) for p in paths]
    first = trees[0]
    fs = [iolib.embedding_from_dict(first)]
    for tree in trees[1:]:
        for key in ("domain", "codomain"):
            if tree.get(key) != first.get(key):
                raise InputError(f"all embeddings must share the same {key}")
        table = {int(e["poly"]): e for e in tree["placement"]}
        placements = []
        for r in range(len(fs[0].domain.polygons)):
            entry = table[r]
            (a, b, tx), (c, d, ty) = entry["map"]
            placements.append(
                Placement(int(entry["host"]), ((a, b), (c, d)), complex(tx, ty))
            )
        fs.append(SubsurfaceEmbedding(fs[0].domain, fs[0].codomain, placements))
    upper = sf_upper_loose(fs)
    _emit(args, {"n": len(fs), "upper": upper, "kind": "n-loose"})
    return True


def cmd_sf_cover_report(args):
    e = _load_embedding(args.embedding)
    spec = _load_cover(args.cover, e.codomain)
    rep = sf_cover_report(e, spec, _load_candidates(args, e), args.level or 0)
    _emit(
        args,
        {
            "degree": rep.degree,
            "base": _bound_dict(rep.base),
            "cover": _bound_dict(rep.cover),
            "monotone": rep.monotone,
            "gap": rep.gap,
        },
    )
    return rep.monotone


# -- qdisk -------------------------------------------------------------------


def cmd_qdisk_area(args):
    q = _differential(args)
    region = parse_region(args.region)
    value, err = area_q_with_error(q, region, tol=_quad_tol(args))
    _emit(
        args,
        {"area": value, "quadrature_error": err},
        (["area", "quadrature_error"], [(value, err)]),
    )
    return True


def cmd_qdisk_small_area(args):
    rep = verify_small_area(_differential(args), args.radius)
    _emit(
        args,
        {
            "radius": rep.radius,
            "inner": rep.inner,
            "total": rep.total,
            "bound": rep.bound,
            "passed": rep.passed,
        },
    )
    return rep.passed


def cmd_qdisk_rings(args):
    rep = subharmonic_ring_check(_differential(args), args.inner, args.outer)
    _emit(
        args,
        {
            "inner_radius": rep.inner_radius,
            "outer_radius": rep.outer_radius,
            "inner_mean": rep.inner_mean,
            "outer_mean": rep.outer_mean,
            "passed": rep.passed,
        },
    )
    return rep.passed


def _standard_concentration(args):
    omega = parse_region(getattr(args, "omega", None) or "annulus(0.5,1)")
    small = parse_region(getattr(args, "a", None) or "disk(0,0,0.4)")
    band = parse_region(getattr(args, "b", None) or "annulus(0.9,1)")
    ws = [1.0 - 2.0 ** (-n) for n in range(1, args.n + 1)]
    return omega, small, band, ws


def cmd_qdisk_concentrate(args):
    omega, small, band, ws = _standard_concentration(args)
    rows = concentration_experiment(omega, small, band, ws)
    tree = {"rows": [{"n": n, "omega_ratio": om, "b_ratio": bb} for n, om, bb in rows]}
    _emit(args, tree, (["n", "omega_ratio", "b_ratio"], rows))
    return True


def cmd_qdisk_square(args):
    rep = squaring_pullback_check(_differential(args), parse_region(args.region))
    _emit(
        args,
        {
            "pulled": rep.pulled,
            "doubled": rep.doubled,
            "relative_error": rep.relative_error,
            "consistent": rep.consistent,
        },
    )
    return rep.consistent


# -- examples ----------------------------------------------------------------


def _run_report(args, name, params, results, certified, started):
    report = {
        "command": "examples " + name,
        "inputs": {"name": name, "params": params, "digest": _digest(params)},
        "results": results,
        "flags": {"certified": certified},
        "seed": args.seed,
    }
    if args.timing:
        report["wall_clock"] = time.time() - started
    return report


def _examples_ex4_3(args):
    limit = args.max
    dom = make_example_surface("four_holed_sphere")
    cod = make_example_surface("capped_sphere")
    e = SubsurfaceEmbedding(dom, cod, [Placement(r) for r in range(len(dom.polygons))])
    rows, ok = [], True
    for p in range(1, limit + 1):
        for q in range(1, limit + 1):
            if math.gcd(p, q) != 1:
                continue
            expect = "a" if (p % 2 and q % 2) else ("b" if p % 2 else "c")
            curve = scale_curve(slope_curve(dom, p, q), 1.0 / q)
            label, weight = pants_class(cod, pushforward_reduce(e, curve))
            domestic, _ = capped_class(dom, curve)
            good = label == expect == domestic and abs(weight - 1.0 / q) <= 1e-12
            ok = ok and good
            rows.append({"p": p, "q": q, "class": label, "weight": weight})
    csv_rows = [(r["p"], r["q"], r["class"], r["weight"]) for r in rows]
    return {"rows": rows}, ok, (["p", "q", "class", "weight"], csv_rows)


def _examples_ex6_5(args):
    rows, ok = [], True
    for t in (1.0, 2.0, 4.0, 8.0, 16.0):
        surface = make_example_surface("double_rectangle", t=t)
        iv = el_interval(surface, surface.named_curves["C1"])
        expected = 2.0 / t
        good = abs(iv.lower - expected) <= 1e-9 and abs(iv.upper - expected) <= 1e-9
        ok = ok and good
        rows.append(
            {"t": t, "lower": iv.lower, "upper": iv.upper, "expected": expected}
        )
    csv_rows = [(r["t"], r["lower"], r["upper"], r["expected"]) for r in rows]
    return {"rows": rows}, ok, (["t", "lower", "upper", "expected"], csv_rows)


def _examples_ex6_6(args):
    s, t = float(args.s), float(args.t)
    level = args.level if args.level is not None else 3
    f, spec, lifted = branched_strip_lift(s, t)
    base_curve = f.domain.named_curves["C1"]
    ratio = t / s
    affine = SubsurfaceEmbedding(
        f.domain,
        f.codomain,
        [Placement(pl.host, ((ratio, 0.0), (0.0, 1.0))) for pl in f.placements],
    )
    lifted_curve = lifted.domain.named_curves["C2"]
    report = sf_cover_report(
        f,
        spec,
        [base_curve],
        level=level,
        lifted=lifted,
        lifted_candidates=[lifted_curve],
    )
    expected = s / t
    qc = sf_upper_qc(affine)
    certified = (
        abs(report.base.lower - expected) <= 1e-9
        and qc >= report.base.lower
        and report.monotone
    )
    results = {
        "s": s,
        "t": t,
        "sf_lower": report.base.lower,
        "expected": expected,
        "qc_upper": qc,
        "cover": {
            "degree": report.degree,
            "lower": report.cover.lower,
            "monotone": report.monotone,
            "gap": report.gap,
        },
    }
    return results, certified, None


def _examples_loose(args):
    big = make_example_surface("cylinder", circumference=2.0, height=1.0)
    thin = make_example_surface("cylinder", circumference=2.0, height=0.3)
    strips = [
        SubsurfaceEmbedding(thin, big, [Placement(0, offset=complex(0.0, y))])
        for y in (0.0, 0.35, 0.7)
    ]
    upper = sf_upper_loose(strips)
    candidates = default_candidates(thin)
    lowers = [sf_lower(e, candidates).lower for e in strips]
    certified = abs(upper - 2.0 / 3.0) <= 1e-12 and all(
        lo <= upper + 1e-12 for lo in lowers
    )
    results = {"n": 3, "upper": upper, "sf_lowers": lowers}
    return results, certified, None


def _examples_concentration(args):
    omega, small, band, ws = _standard_concentration(args)
    rows = concentration_experiment(omega, small, band, ws)
    om = [r[1] for r in rows]
    bb = [r[2] for r in rows]
    tail = range(2, len(rows) - 1)
    certified = (
        len(rows) >= 3
        and all(om[i + 1] >= om[i] - 1e-12 for i in tail)
        and all(bb[i + 1] >= bb[i] - 1e-12 for i in tail)
        and om[-1] > 0.9
        and bb[-1] > 0.9
    )
    results = {
        "rows": [{"n": n, "omega_ratio": o, "b_ratio": b} for n, o, b in rows]
    }
    return results, certified, (["n", "omega_ratio", "b_ratio"], rows)


def cmd_examples(args):
    started = time.time()
    drivers = {
        "ex4_3": (_examples_ex4_3, {"max": args.max}),
        "ex6_5": (_examples_ex6_5, {}),
        "ex6_6": (_examples_ex6_6, {"s": args.s, "t": args.t, "level": args.level}),
        "loose": (_examples_loose, {}),
        "concentration": (_examples_concentration, {"n": args.n}),
    }
    driver, params = drivers[args.name]
    results, certified, csv_table = driver(args)
    report = _run_report(args, args.name, params, results, certified, started)
    _emit(args, report, csv_table)
    return certified


# -- parser ------------------------------------------------------------------


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON output (default)")
    common.add_argument("--csv", action="store_true", help="CSV output where tabular")
    common.add_argument("--seed", type=int, default=0, help="seed echoed in reports")
    common.add_argument("--tol", type=float, default=None, help="quadrature tolerance")
    common.add_argument("--level", type=int, default=None, help="refinement level")
    common.add_argument(
        "--timing", action="store_true", help="include wall-clock in reports"
    )

    parser = argparse.ArgumentParser(
        prog="flatel",
        description="Flat surfaces, extremal length bounds, and stretch factors.",
    )
    sub = parser.add_subparsers(dest="group", required=True)

    p = sub.add_parser("surface", help="surface file operations")
    ssub = p.add_subparsers(dest="action", required=True)
    for action, handler in (
        ("validate", cmd_surface_validate),
        ("area", cmd_surface_area),
        ("angles", cmd_surface_angles),
    ):
        q = ssub.add_parser(action, parents=[common])
        q.add_argument("file")
        q.set_defaults(func=handler)
    q = ssub.add_parser("cylinders", parents=[common])
    q.add_argument("--dir", required=True, help="direction dx,dy")
    q.add_argument("file")
    q.set_defaults(func=cmd_surface_cylinders)

    p = sub.add_parser("curve", help="curve file operations")
    csub = p.add_subparsers(dest="action", required=True)
    q = csub.add_parser("reduce", parents=[common])
    q.add_argument("--surface", required=True)
    q.add_argument("file")
    q.set_defaults(func=cmd_curve_reduce)
    q = csub.add_parser("intersect", parents=[common])
    q.add_argument("--surface", required=True)
    q.add_argument("files", nargs=2)
    q.set_defaults(func=cmd_curve_intersect)
    q = csub.add_parser("slope", parents=[common])
    q.add_argument("--surface", required=True)
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--q", type=int, required=True)
    q.set_defaults(func=cmd_curve_slope)
    q = csub.add_parser("push", parents=[common])
    q.add_argument("--embedding", required=True)
    q.add_argument("file")
    q.set_defaults(func=cmd_curve_push)

    q = sub.add_parser("el", parents=[common], help="extremal length bracket")
    q.add_argument("--surface", required=True)
    q.add_argument("--curve", required=True)
    q.add_argument("--dir", default=None, help="optional cylinder direction dx,dy")
    q.set_defaults(func=cmd_el)

    p = sub.add_parser("cover", help="covering space operations")
    vsub = p.add_subparsers(dest="action", required=True)
    for action, handler, needs_curve in (
        ("build", cmd_cover_build, False),
        ("pullback", cmd_cover_pullback, True),
        ("check", cmd_cover_check, True),
    ):
        q = vsub.add_parser(action, parents=[common])
        q.add_argument("--surface", required=True)
        q.add_argument("--cover", required=True)
        if needs_curve:
            q.add_argument("--curve", required=True)
        q.set_defaults(func=handler)

    p = sub.add_parser("sf", help="stretch factor bounds")
    fsub = p.add_subparsers(dest="action", required=True)
    q = fsub.add_parser("lower", parents=[common])
    q.add_argument("--embedding", required=True)
    q.add_argument("--candidates", default=None)
    q.set_defaults(func=cmd_sf_lower)
    q = fsub.add_parser("upper-qc", parents=[common])
    q.add_argument("--embedding", required=True)
    q.set_defaults(func=cmd_sf_upper_qc)
    q = fsub.add_parser("upper-loose", parents=[common])
    q.add_argument(
        "--embedding",
        action="append",
        required=True,
        help="repeat once per embedding in the loose family",
    )
    q.set_defaults(func=cmd_sf_upper_loose)
    q = fsub.add_parser("cover-report", parents=[common])
    q.add_argument("--embedding", required=True)
    q.add_argument("--cover", required=True)
    q.add_argument("--candidates", default=None)
    q.set_defaults(func=cmd_sf_cover_report)

    p = sub.add_parser("qdisk", help="disk differential quadrature")
    qsub = p.add_subparsers(dest="action", required=True)

    def qcommon(name):
        q = qsub.add_parser(name, parents=[common])
        q.add_argument("--q", required=True, help="JSON list of coefficients")
        q.add_argument("--pole", action="store_true", help="simple pole at 0")
        return q

    q = qcommon("area")
    q.add_argument("--region", required=True)
    q.set_defaults(func=cmd_qdisk_area)
    q = qcommon("small-area")
    q.add_argument("--radius", type=float, required=True)
    q.set_defaults(func=cmd_qdisk_small_area)
    q = qcommon("rings")
    q.add_argument("--inner", type=float, required=True)
    q.add_argument("--outer", type=float, required=True)
    q.set_defaults(func=cmd_qdisk_rings)
    q = qsub.add_parser("concentrate", parents=[common])
    q.add_argument("--n", type=int, default=10)
    q.add_argument("--omega", default=None, help="region spec, default annulus(0.5,1)")
    q.add_argument("--a", default=None, help="region spec, default disk(0,0,0.4)")
    q.add_argument("--b", default=None, help="region spec, default annulus(0.9,1)")
    q.set_defaults(func=cmd_qdisk_concentrate)
    q = qcommon("square")
    q.add_argument("--region", required=True)
    q.set_defaults(func=cmd_qdisk_square)

    q = sub.add_parser("examples", parents=[common], help="stock reproductions")
    q.add_argument(
        "name", choices=["ex4_3", "ex6_5", "ex6_6", "loose", "concentration"]
    )
    q.add_argument("--max", type=int, default=7, help="ex4_3 slope bound")
    q.add_argument("--s", type=float, default=2.0, help="ex6_6 inner length")
    q.add_argument("--t", type=float, default=8.0, help="ex6_6 outer length")
    q.add_argument("--n", type=int, default=10, help="concentration row count")
    q.set_defaults(func=cmd_examples)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_BAD_INPUT
    try:
        ok = args.func(args)
    except InputError as exc:
        _print_json({"error": type(exc).__name__, "detail": str(exc)})
        return EXIT_BAD_INPUT
    except FlatelError as exc:
        _print_json({"error": type(exc).__name__, "detail": str(exc)})
        return EXIT_UNCERTIFIED
    return EXIT_OK if ok else EXIT_UNCERTIFIED


if __name__ == "__main__":
    sys.exit(main())
