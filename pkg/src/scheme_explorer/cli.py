"""scheme-explorer: run workbench scripts and one-shot queries.

Usage:

    scheme-explorer run --script FILE [--format text|json]
    scheme-explorer exec "ring A = ZZ[X]/(6*X^2+18*X-3); specialize A over QQ, GF(2);"
    scheme-explorer spec describe "ZZ[T]" --bound 7
    scheme-explorer fiber --map "ZZ->ZZ[T]" --at p=7
    scheme-explorer normalize --ring "QQ[X,Y]" --ideal "(X*Y-1)"
    scheme-explorer proj segre --p "[1:2]" --q "[3:5]"
    scheme-explorer sheaf check --space "spec(ZZ/12)"

Exit status: 0 on success, 1 if any query errored, 2 on a parse error.
JSON reports carry a stable top-level {"schema": 1} tag and sorted keys, so
byte-identical output is reproducible across runs.
"""

from __future__ import annotations

import json
import sys

from . import algebra as alg
from . import arith
from . import dsl
from . import morphism as mor
from . import noether
from . import proj as pj
from . import sheaf as sh
from . import spectrum as sp
from .errors import DslSyntaxError, SchemeError

SCHEMA_VERSION = 1


class Environment:
    def __init__(self):
        self.rings = {}
        self.ideals = {}

    def resolve_ring(self, ref):
        if isinstance(ref, str):
            if ref not in self.rings:
                raise SchemeError(f"undefined ring {ref!r}")
            return self.rings[ref]
        return dsl.build_ring(ref)


def run_script(script: dsl.Script):
    """Execute statements in order; returns (records, had_error)."""
    env = Environment()
    records = []
    had_error = False
    for stmt in script.statements:
        text = stmt.to_text()
        try:
            data = _execute(stmt, env)
            records.append({"statement": text, "ok": True, "data": data})
        except SchemeError as err:
            had_error = True
            records.append({
                "statement": text,
                "ok": False,
                "error": {"code": err.code, "message": str(err)},
            })
    return records, had_error


def _execute(stmt, env):
    if isinstance(stmt, dsl.RingDef):
        algebra = dsl.build_ring(stmt.ring)
        env.rings[stmt.name] = algebra
        return {"kind": "ring-def", "name": stmt.name, "ring": repr(algebra)}
    if isinstance(stmt, dsl.IdealDef):
        ambient = env.resolve_ring(stmt.ring)
        gens = [dsl.eval_poly(g, ambient.ring) for g in stmt.generators]
        handle = alg.IdealHandle(ambient, gens)
        env.ideals[stmt.name] = handle
        record = {
            "kind": "ideal-def",
            "name": stmt.name,
            "generators": [str(g) for g in handle.generators],
            "ambient": repr(ambient),
        }
        if ambient.base.is_field:
            record["groebner_basis"] = [str(g) for g in handle.groebner()]
        return record
    if isinstance(stmt, dsl.PolyStmt):
        ambient = env.resolve_ring(stmt.ring)
        poly = dsl.eval_poly(stmt.poly, ambient.ring)
        return {"kind": "poly", "ring": repr(ambient), "printed": str(poly)}
    if isinstance(stmt, dsl.SpecializeCmd):
        return _run_specialize(stmt, env)
    if isinstance(stmt, dsl.Command):
        return _run_command(stmt, env)
    raise SchemeError(f"unhandled statement {stmt!r}")


def _run_specialize(stmt, env):
    source = env.resolve_ring(stmt.ring)
    table = []
    for dexpr in stmt.domains:
        target = dsl.build_domain(dexpr)
        spec = alg.specialize(source, target)
        verdict = spec.classify_univariate()
        table.append({
            "over": dexpr.to_text(),
            "ring": repr(spec),
            "verdict": verdict,
        })
    return {"kind": "specialization-table", "source": repr(source), "table": table}


def _run_command(cmd, env):
    group, action = cmd.group, cmd.action
    if group == "spec" and action == "describe":
        return _spec_describe(cmd, env)
    if group == "spec" and action == "closure":
        return _spec_closure(cmd, env)
    if group == "fiber":
        return _fiber(cmd, env)
    if group == "normalize":
        return _normalize(cmd, env)
    if group == "proj":
        return _proj(cmd, env)
    if group == "sheaf":
        return _sheaf(cmd, env)
    raise SchemeError(f"unknown command {group} {action}")


def _spec_describe(cmd, env):
    if not cmd.positional:
        raise SchemeError("spec describe needs a ring")
    algebra = env.resolve_ring(cmd.positional[0])
    bound = cmd.flag("bound", 10)
    cat = sp.SpecCatalogue.recognize(algebra)
    points = sp.enumerate_points(cat, bound)
    return {
        "kind": "spec-describe",
        "ring": repr(algebra),
        "bound": bound,
        "family": cat.kind,
        "points": [pt.as_record() for pt in points],
    }


def _spec_closure(cmd, env):
    ring_text = cmd.flag("ring", "ZZ[T]")
    algebra = env.resolve_ring(dsl.parse_ring_text(ring_text))
    point_text = cmd.flag("point")
    if point_text is None:
        raise SchemeError("spec closure needs --point")
    fibers = cmd.flag("fibers", 0)
    label, poly_text = point_text.split(",", 1)
    poly_ast = dsl.parse_poly_text(poly_text.strip().strip("()"))
    P0 = dsl.eval_poly(poly_ast, algebra.ring)
    record = {
        "kind": "spec-closure",
        "ring": repr(algebra),
        "point": point_text,
        "closure": f"V({P0})",
    }
    if fibers:
        table = []
        for p in sp._primes_upto(fibers):
            pts = sp.closure_fiber_points(P0, p)
            table.append({
                "p": p,
                "points": [
                    {"point": pt.label, "multiplicity": m, "residue": repr(pt.residue)}
                    for pt, m in pts
                ],
            })
        record["fibers"] = table
    return record


def _parse_map(text, env):
    left, right = text.split("->")
    source = env.resolve_ring(dsl.parse_ring_text(left.strip()))
    target = env.resolve_ring(dsl.parse_ring_text(right.strip()))
    images = [target.ring.gen(n) for n in source.names]
    return mor.RingMorphism(source, target, images)


def _fiber(cmd, env):
    map_text = cmd.flag("map")
    if map_text is None:
        raise SchemeError("fiber needs --map \"A->B\"")
    phi = _parse_map(map_text, env)
    at = cmd.flag("at", "p=2")
    key, _, val = at.partition("=")
    bound = cmd.flag("bound", 6)
    src_cat = sp.SpecCatalogue.recognize(phi.source)
    if key == "p":
        p = int(val)
        point = sp.SpecPoint(src_cat, ("principal", p), arith.Zmod(p), label=f"x_{p}")
    else:
        raise SchemeError(f"unsupported fiber location {at!r}")
    description = mor.fiber(phi, point, bound=bound)
    return {"kind": "fiber", "map": map_text, **description.as_record()}


def _normalize(cmd, env):
    ring_text = cmd.flag("ring")
    ideal_text = cmd.flag("ideal")
    if ring_text is None or ideal_text is None:
        raise SchemeError("normalize needs --ring and --ideal")
    ambient = env.resolve_ring(dsl.parse_ring_text(ring_text))
    gens = []
    for part in ideal_text.strip().strip("()").split(","):
        gens.append(dsl.eval_poly(dsl.parse_poly_text(part.strip()), ambient.ring))
    handle = alg.IdealHandle(ambient, gens)
    result = noether.noether_normalize(handle)
    record = result.as_record()
    record["kind"] = "normalize"
    record["ring"] = repr(ambient)
    record["verified"] = result.verify()
    return record


def _parse_raw_coords(text, field):
    body = text.strip().strip("[]")
    coords = []
    for part in body.split(":"):
        part = part.strip()
        if "/" in part:
            num, den = part.split("/")
            value = field.mul(
                field.from_int(int(num)), field.inv(field.from_int(int(den)))
            )
        else:
            value = field.from_int(int(part))
        coords.append(value)
    return coords


def _coords_str(field, coords):
    return "[" + ":".join(field.format(c) for c in coords) + "]"


def _parse_proj_point(text, field):
    return pj.point_normalize(field, _parse_raw_coords(text, field))


def _proj(cmd, env):
    action = cmd.action
    field = dsl.build_domain(dsl.parse_ring_text(cmd.flag("field", "QQ")).domain)
    if action == "charts":
        graded_text = cmd.flag("graded")
        if graded_text is None:
            raise SchemeError("proj charts needs --graded")
        expr = dsl.parse_ring_text(graded_text)
        algebra = dsl.build_ring(expr)
        graded = pj.GradedAlgebra(algebra.base, algebra.names, algebra.relations)
        charts = []
        for i in range(len(graded.names)):
            chart = pj.proj_chart(graded, i)
            charts.append({"index": i, "ring": repr(chart.algebra)})
        return {"kind": "proj-charts", "graded": repr(graded), "charts": charts}
    if action == "points":
        space_text = cmd.flag("space", "P^1(GF(2))")
        n, field = _parse_proj_space(space_text)
        points = pj.enumerate_points(field, n)
        return {
            "kind": "proj-points",
            "space": space_text,
            "count": len(points),
            "expected": (field.order() ** (n + 1) - 1) // (field.order() - 1),
            "points": [repr(p) for p in points],
        }
    if action == "segre":
        k = field
        p_raw = _parse_raw_coords(cmd.flag("p", "[1:0]"), k)
        q_raw = _parse_raw_coords(cmd.flag("q", "[1:0]"), k)
        raw = [k.mul(a, b) for a in p_raw for b in q_raw]
        image = pj.point_normalize(k, raw)
        check = k.sub(k.mul(raw[0], raw[3]), k.mul(raw[1], raw[2]))
        return {
            "kind": "proj-segre",
            "p": repr(pj.point_normalize(k, p_raw)),
            "q": repr(pj.point_normalize(k, q_raw)),
            "raw_image": _coords_str(k, raw),
            "image": repr(image),
            "quadric_check": field.format(check),
        }
    if action == "conic":
        k = field
        s0, s1 = _parse_raw_coords(cmd.flag("p", "[1:0]"), k)
        raw = [k.mul(s0, s0), k.mul(s0, s1), k.mul(s1, s1)]
        image = pj.point_normalize(k, raw)
        check = k.sub(k.mul(raw[0], raw[2]), k.mul(raw[1], raw[1]))
        return {
            "kind": "proj-conic",
            "p": repr(pj.point_normalize(k, [s0, s1])),
            "raw_image": _coords_str(k, raw),
            "image": repr(image),
            "conic_check": field.format(check),
        }
    if action == "veronese":
        k = field
        s0, s1 = _parse_raw_coords(cmd.flag("p", "[1:0]"), k)
        raw = [k.mul(s0, s0), k.mul(s0, s1), k.mul(s1, s0), k.mul(s1, s1)]
        image = pj.point_normalize(k, raw)
        sym = k.sub(raw[1], raw[2])
        quad = k.sub(k.mul(raw[0], raw[3]), k.mul(raw[1], raw[2]))
        return {
            "kind": "proj-veronese",
            "p": repr(pj.point_normalize(k, [s0, s1])),
            "raw_image": _coords_str(k, raw),
            "image": repr(image),
            "symmetry_check": field.format(sym),
            "quadric_check": field.format(quad),
        }
    if action == "sections":
        n = cmd.flag("n", 1)
        d = cmd.flag("d", 1)
        sections = pj.twist_sections(n, d, field)
        return {
            "kind": "proj-sections",
            "n": n,
            "d": d,
            "rank": sections.rank,
            "basis": sections.basis_strings(),
        }
    raise SchemeError(f"unknown proj action {action!r}")


def _parse_proj_space(text):
    # P^n(DOMAIN)
    text = text.strip()
    if not text.startswith("P^") or not text.endswith(")"):
        raise SchemeError(f"bad projective space {text!r}")
    caret, rest = text[2:].split("(", 1)
    n = int(caret)
    domain = dsl.build_domain(dsl.parse_ring_text(rest[:-1]).domain)
    return n, domain


def _parse_finite_ring(text):
    text = text.strip()
    if text.startswith("spec(") and text.endswith(")"):
        text = text[5:-1]
    expr = dsl.parse_ring_text(text)
    if expr.domain.kind == "Zmod" and not expr.names:
        return sh.ZmodFinite(expr.domain.modulus)
    if expr.domain.kind in ("GF",) and expr.names and len(expr.names) == 1:
        base = sh.ZmodFinite(expr.domain.modulus)
        from .multipoly import PolyRing

        ring = PolyRing(arith.GF(expr.domain.modulus), expr.names)
        if len(expr.relations) != 1:
            raise SchemeError("finite quotient needs exactly one relation")
        rel = dsl.eval_poly(expr.relations[0], ring)
        dense = [0] * (rel.total_degree() + 1)
        for e, c in rel.terms:
            dense[e[0]] = int(c)
        return sh.QuotientPolyRing(base, tuple(dense), var=expr.names[0])
    raise SchemeError(f"unsupported sheaf space {text!r}")


def _sheaf(cmd, env):
    action = cmd.action
    space_text = cmd.flag("space", "spec(ZZ/12)")
    ring = _parse_finite_ring(space_text)
    report = sh.structure_sheaf(ring)
    if action == "check":
        opens = report.space.opens_sorted()
        return {
            "kind": "sheaf-check",
            "space": space_text,
            "topology": {
                "points": [str(x) for x in report.space.points],
                "opens": [sorted(map(str, u)) for u in opens],
            },
            "is_sheaf": report.sheaf.is_sheaf(),
            "stalks_preserved": sh.stalks_preserved(
                report.presheaf, report.sheaf, report.pi
            ),
            "sections_per_open": [
                {"open": sorted(map(str, u)), "count": len(report.sheaf.sections[u])}
                for u in opens
            ],
        }
    if action == "sections":
        f = cmd.flag("at", 1)
        if isinstance(f, str):
            raise SchemeError("--at expects a ring element written as an integer")
        elem = f % getattr(ring, "n", f + 1) if isinstance(ring, sh.ZmodFinite) else f
        d = report.basic_open(elem)
        loc = report.localization(elem)
        return {
            "kind": "sheaf-sections",
            "space": space_text,
            "at": f,
            "basic_open": sorted(map(str, d)),
            "gamma_size": len(report.gamma(d)),
            "localization_size": len(loc.elements()),
            "isomorphic": report.compare_gamma_with_localization(elem),
        }
    if action == "twist":
        cover_text = cmd.flag("cover", "X,X")
        unit_val = cmd.flag("cocycle", 1)
        cover = []
        for part in cover_text.split(","):
            part = part.strip()
            if part == "X":
                cover.append(frozenset(report.space.points))
            elif part.startswith("D(") and part.endswith(")"):
                cover.append(report.basic_open(int(part[2:-1])))
            else:
                raise SchemeError(f"bad cover member {part!r}")
        if len(cover) != 2:
            raise SchemeError("twist covers use exactly two opens")
        w = cover[0] & cover[1]
        rw = report.local_rings[w]
        unit = rw.make(rw.ring.one() if unit_val == 1 else rw.ring.neg(rw.ring.one()))
        if unit_val not in (1, -1):
            unit = rw.make(unit_val % rw.ring.n)
        units = {
            (0, 0): report.local_rings[cover[0]].one(),
            (1, 1): report.local_rings[cover[1]].one(),
            (0, 1): unit,
            (1, 0): rw.inverse(unit),
        }
        cocycle = sh.UnitCocycle(report, cover, units)
        twisted = sh.twist_structure_sheaf(cocycle)
        recovered = sh.recover_cocycle(twisted, report, cover)
        return {
            "kind": "sheaf-twist",
            "space": space_text,
            "cover": cover_text,
            "cocycle": unit_val,
            "sections_global": len(
                twisted.sections[frozenset(report.space.points)]
            ),
            "is_coboundary": sh.is_coboundary(report, cover, cocycle),
            "round_trip_class_ok": sh.cocycles_equal_mod_coboundary(
                report, cover, cocycle, recovered
            ),
        }
    raise SchemeError(f"unknown sheaf action {action!r}")


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_json(records):
    return json.dumps(
        {"schema": SCHEMA_VERSION, "results": records},
        indent=2,
        sort_keys=True,
    ) + "\n"


def render_text(records):
    lines = []
    for rec in records:
        lines.append(f"$ {rec['statement']}")
        if rec["ok"]:
            lines.extend(_text_block(rec["data"], "  "))
        else:
            err = rec["error"]
            lines.append(f"  error [{err['code']}]: {err['message']}")
    return "\n".join(lines) + "\n"


def _text_block(data, indent):
    lines = []
    for key in sorted(data):
        value = data[key]
        if isinstance(value, list):
            lines.append(f"{indent}{key}:")
            for item in value:
                if isinstance(item, dict):
                    lines.append(f"{indent}  -")
                    lines.extend(_text_block(item, indent + "    "))
                else:
                    lines.append(f"{indent}  - {item}")
        elif isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_text_block(value, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {value}")
    return lines


# ---------------------------------------------------------------------------
# argv entry point
# ---------------------------------------------------------------------------

_USAGE = (
    "usage: scheme-explorer [--format text|json] [--seed N] "
    "(run --script FILE | exec TEXT | <statement words...>)"
)


def _statement_from_words(words):
    """Rebuild one DSL statement from shell words, re-quoting values that
    need it (projective points, ring expressions with punctuation)."""
    parts = []
    for word in words:
        if word.startswith("--"):
            parts.append(word)
        elif word.isidentifier() or word.isdigit() or word.lstrip("-").isdigit():
            parts.append(word)
        else:
            parts.append(f'"{word}"')
    return " ".join(parts) + ";"


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "text"
    if "--format" in argv:
        k = argv.index("--format")
        if k + 1 >= len(argv):
            print(_USAGE, file=sys.stderr)
            return 2
        fmt = argv[k + 1]
        del argv[k:k + 2]
    if "--seed" in argv:
        k = argv.index("--seed")
        del argv[k:k + 2]  # reserved for randomized subcommands
    if not argv or argv[0] in ("-h", "--help"):
        print(_USAGE, file=sys.stderr)
        return 2 if not argv else 0
    mode = argv[0]
    if mode == "run":
        if len(argv) < 3 or argv[1] != "--script":
            print("usage: scheme-explorer run --script FILE", file=sys.stderr)
            return 2
        with open(argv[2], "r", encoding="utf-8") as handle:
            source = handle.read()
    elif mode == "exec":
        source = argv[1] if len(argv) > 1 else ""
    else:
        source = _statement_from_words(argv)
    try:
        script = dsl.parse(source)
    except DslSyntaxError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 2
    records, had_error = run_script(script)
    output = render_json(records) if fmt == "json" else render_text(records)
    sys.stdout.write(output)
    return 1 if had_error else 0


if __name__ == "__main__":
    sys.exit(main())
