"""Batch command-line interface over the coloured-fan engine.

Input is a single JSON document describing a horospherical datum, a coloured
fan (its members, listed explicitly; the trivial coloured cone is always an
implied member), and optionally named divisors.  Every command prints a human
summary, a sentinel line, and a machine-readable JSON block, in that order,
with deterministic ordering throughout.  Exit codes: 0 success, 1 validation
failure, 2 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from .dictionary import (
    classify_variety,
    closure_contains,
    morphism_check,
    orbit_closure,
    orbit_table,
    regularity_report,
    weight_monoid_generators,
)
from .divisors import (
    BInvariantDivisor,
    NotCompleteError,
    anticanonical,
    cartier_data,
    class_group,
    invariant_ray_generators,
    make_divisor,
    picard_group,
    positivity_check,
)
from .horo import (
    ColouredCone,
    ColouredFan,
    HorosphericalDatum,
    InvalidDatumError,
    build_coloured_lattice,
    coloured_lattice_map,
    trivial_coloured_cone,
    validate_coloured_fan,
)
from .intlin import IntMatrix
from .polyhedra import Cone
from .rootsys import RootDatum

SENTINEL = "---JSON---"

_TOP_KEYS = {"group", "torus_rank", "I", "M", "fan", "divisors"}
_CONE_KEYS = {"generators", "colours"}
_DIVISOR_KEYS = {"rays", "colours"}


class ParseError(ValueError):
    """Schema or content error in an input document, with a field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class InputDocument:
    datum: HorosphericalDatum
    fan: ColouredFan
    divisors: dict[str, BInvariantDivisor]
    listed_cones: int


def _expect(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise ParseError(path, message)


def _int_vector(value, path: str, length: int) -> tuple[int, ...]:
    _expect(isinstance(value, list), path, "expected a list of integers")
    _expect(
        all(isinstance(x, int) and not isinstance(x, bool) for x in value),
        path,
        "entries must be integers",
    )
    _expect(len(value) == length, path, f"expected {length} entries, got {len(value)}")
    return tuple(value)


def parse_input(text: str) -> InputDocument:
    """Strictly parse and validate a JSON document into datum + fan + divisors."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc
    _expect(isinstance(raw, dict), "document", "top level must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    _expect(not unknown, "document", f"unknown keys: {sorted(unknown)}")
    _expect("group" in raw, "group", "missing required key")
    _expect(isinstance(raw["group"], str), "group", "expected a Dynkin descriptor string")
    torus_rank = raw.get("torus_rank", 0)
    _expect(
        isinstance(torus_rank, int) and not isinstance(torus_rank, bool) and torus_rank >= 0,
        "torus_rank",
        "expected a nonnegative integer",
    )
    try:
        group = RootDatum.parse(raw["group"], central_torus_rank=torus_rank)
    except ValueError as exc:
        raise ParseError("group", str(exc)) from exc

    labels = {group.label(i): i for i in range(group.simple_count)}
    parabolic = set()
    raw_parabolic = raw.get("I", [])
    _expect(isinstance(raw_parabolic, list), "I", "expected a list of simple-root labels")
    for pos, label in enumerate(raw_parabolic):
        _expect(isinstance(label, str) and label in labels, f"I[{pos}]", f"no such simple root {label!r}")
        parabolic.add(labels[label])

    raw_m = raw.get("M")
    _expect(isinstance(raw_m, list), "M", "expected a list of character basis vectors")
    columns = [
        _int_vector(col, f"M[{i}]", group.character_rank) for i, col in enumerate(raw_m)
    ]
    try:
        datum = HorosphericalDatum(
            group, frozenset(parabolic), IntMatrix.from_columns(columns, rows=group.character_rank)
        )
    except InvalidDatumError as exc:
        raise ParseError("M", str(exc)) from exc
    lattice = build_coloured_lattice(datum)
    colour_labels = {c.label: c.root for c in lattice.colours}

    raw_fan = raw.get("fan", [])
    _expect(isinstance(raw_fan, list), "fan", "expected a list of coloured cones")
    cones = []
    for i, raw_cone in enumerate(raw_fan):
        path = f"fan[{i}]"
        _expect(isinstance(raw_cone, dict), path, "expected an object")
        unknown = set(raw_cone) - _CONE_KEYS
        _expect(not unknown, path, f"unknown keys: {sorted(unknown)}")
        gens_raw = raw_cone.get("generators", [])
        _expect(isinstance(gens_raw, list), f"{path}.generators", "expected a list of vectors")
        gens = [
            _int_vector(g, f"{path}.generators[{j}]", lattice.rank)
            for j, g in enumerate(gens_raw)
        ]
        roots = set()
        raw_colours = raw_cone.get("colours", [])
        _expect(isinstance(raw_colours, list), f"{path}.colours", "expected a list of labels")
        for j, label in enumerate(raw_colours):
            _expect(
                isinstance(label, str) and label in colour_labels,
                f"{path}.colours[{j}]",
                f"no such simple root {label!r} in S minus I",
            )
            roots.add(colour_labels[label])
        cones.append(ColouredCone(Cone.from_generators(lattice.rank, gens), frozenset(roots)))
    listed = len(cones)
    trivial = trivial_coloured_cone(lattice)
    if trivial not in cones:
        cones.append(trivial)
    fan = ColouredFan(lattice, tuple(cones))

    divisors: dict[str, BInvariantDivisor] = {}
    raw_divisors = raw.get("divisors", {})
    _expect(isinstance(raw_divisors, dict), "divisors", "expected an object of named divisors")
    ray_gens = set(invariant_ray_generators(fan))
    for name, raw_div in sorted(raw_divisors.items()):
        path = f"divisors.{name}"
        _expect(isinstance(raw_div, dict), path, "expected an object")
        unknown = set(raw_div) - _DIVISOR_KEYS
        _expect(not unknown, path, f"unknown keys: {sorted(unknown)}")
        rays = {}
        for key, value in raw_div.get("rays", {}).items():
            try:
                gen = tuple(int(part) for part in key.split(","))
            except ValueError:
                raise ParseError(f"{path}.rays", f"bad ray key {key!r}") from None
            _expect(
                gen in ray_gens,
                f"{path}.rays",
                f"{key!r} is not a non-coloured ray of the fan",
            )
            _expect(isinstance(value, int) and not isinstance(value, bool), f"{path}.rays", "coefficients must be integers")
            rays[gen] = value
        colours = {}
        for key, value in raw_div.get("colours", {}).items():
            _expect(
                isinstance(key, str) and key in colour_labels,
                f"{path}.colours",
                f"no such simple root {key!r} in S minus I",
            )
            _expect(isinstance(value, int) and not isinstance(value, bool), f"{path}.colours", "coefficients must be integers")
            colours[colour_labels[key]] = value
        divisors[name] = make_divisor(fan, rays=rays, colours=colours)
    return InputDocument(datum, fan, divisors, listed)


def serialize(doc: InputDocument) -> str:
    """Canonical JSON for a document (deterministic member ordering)."""
    datum, fan = doc.datum, doc.fan
    group = datum.group
    descriptor = "x".join(f"{letter}{rank}" for letter, rank in group.components)
    labels = fan.lattice.labels()
    cones = []
    for cc in sorted(
        fan.cones, key=lambda c: (c.dim(), c.cone.generators, sorted(c.colours))
    ):
        if cc.dim() == 0 and not cc.colours:
            continue  # the trivial coloured cone is implied
        cones.append(
            {
                "generators": [list(g) for g in cc.cone.generators],
                "colours": [labels[r] for r in sorted(cc.colours)],
            }
        )
    body = {
        "group": descriptor,
        "torus_rank": group.central_torus_rank,
        "I": [group.label(i) for i in sorted(datum.parabolic)],
        "M": [list(col) for col in datum.characters.columns()],
        "fan": cones,
    }
    if doc.divisors:
        body["divisors"] = {
            name: {
                "rays": {",".join(map(str, g)): a for g, a in div.ray_coeffs if a},
                "colours": {labels[r]: a for r, a in div.colour_coeffs if a},
            }
            for name, div in sorted(doc.divisors.items())
        }
    return json.dumps(body, indent=2, sort_keys=True)


def _describe_cone(fan: ColouredFan, index: int) -> str:
    cc = fan.cones[index]
    labels = fan.lattice.labels()
    gens = " ".join("(" + ",".join(map(str, g)) + ")" for g in cc.cone.generators) or "0"
    cols = ",".join(labels[r] for r in sorted(cc.colours)) or "-"
    return f"{gens} | colours {cols}"


def _report(lines: list[str], payload: dict) -> str:
    text = "\n".join(lines + [SENTINEL, json.dumps(payload, indent=2, sort_keys=True)])
    return text + "\n"


def _require_valid(fan: ColouredFan) -> Optional[str]:
    report = validate_coloured_fan(fan)
    if report.valid:
        return None
    lines = ["invalid coloured fan:"] + [f"  - {v}" for v in report.violations]
    return _report(lines, {"valid": False, "violations": list(report.violations)})


def _group_payload(g) -> dict:
    return {"free_rank": g.free_rank, "torsion": list(g.torsion), "name": str(g)}


def _divisor_arg(doc: InputDocument, name: Optional[str]) -> BInvariantDivisor:
    if name is None:
        raise ParseError("--divisor", "this command needs --divisor NAME")
    if name not in doc.divisors:
        raise ParseError("--divisor", f"document has no divisor named {name!r}")
    return doc.divisors[name]


def _cone_arg(doc: InputDocument, index: Optional[int]) -> int:
    if index is None:
        raise ParseError("--cone", "this command needs --cone INDEX")
    if not 0 <= index < len(doc.fan.cones):
        raise ParseError("--cone", f"cone index {index} out of range (fan has {len(doc.fan.cones)} members)")
    return index


def execute(command: str, doc: InputDocument, *, divisor: Optional[str] = None,
            cone: Optional[int] = None, target: Optional[InputDocument] = None) -> tuple[int, str]:
    """Run one command against a parsed document; returns (exit_code, text)."""
    fan, datum = doc.fan, doc.datum
    if command == "validate":
        report = validate_coloured_fan(fan)
        if report.valid:
            lines = [f"coloured fan with {len(fan.cones)} members: valid"]
            return 0, _report(lines, {"valid": True, "violations": []})
        lines = ["invalid coloured fan:"] + [f"  - {v}" for v in report.violations]
        return 1, _report(lines, {"valid": False, "violations": list(report.violations)})

    invalid = _require_valid(fan)
    if invalid is not None:
        return 1, invalid

    if command == "orbits":
        table = orbit_table(fan, datum)
        maximal = set(fan.maximal())
        lines = [f"{'cone':>4}  {'dim':>3}  {'closed':>6}  cone description"]
        rows = []
        for rec in table:
            closed = fan.cones[rec.cone_index] in maximal
            lines.append(
                f"{rec.cone_index:>4}  {rec.dimension:>3}  {str(closed).lower():>6}  "
                + _describe_cone(fan, rec.cone_index)
            )
            rows.append(
                {
                    "cone": rec.cone_index,
                    "generators": [list(g) for g in fan.cones[rec.cone_index].cone.generators],
                    "colours": [
                        fan.lattice.labels()[r] for r in sorted(fan.cones[rec.cone_index].colours)
                    ],
                    "dimension": rec.dimension,
                    "closed": closed,
                    "closure_contains": sorted(
                        other.cone_index
                        for other in table
                        if closure_contains(fan, rec.cone_index, other.cone_index)
                    ),
                }
            )
        return 0, _report(lines, {"orbits": rows})

    if command == "classify":
        rep = classify_variety(fan, datum)
        payload = {
            "simple": rep.is_simple,
            "affine": rep.is_affine,
            "complete": rep.is_complete,
            "toroidal": rep.is_toroidal,
            "projective": rep.is_projective,
            "simplicial": rep.is_simplicial,
            "regular": rep.is_regular,
            "factorial": rep.is_factorial,
            "q_factorial": rep.is_q_factorial,
            "smooth": rep.is_smooth,
            "notes": list(rep.diagnostics),
        }
        lines = [f"{key:>12}: {str(value).lower()}" for key, value in payload.items() if key != "notes"]
        lines += [f"note: {note}" for note in rep.diagnostics]
        return 0, _report(lines, payload)

    if command == "class-group":
        result = class_group(fan, datum)
        lines = [f"Cl(X) = {result.group}", f"left exact: {str(result.left_exact).lower()}"]
        generators = {}
        for name, cls in result.generator_classes:
            generators[name] = {"free": list(cls.free), "torsion": list(cls.torsion)}
            lines.append(f"  class {name}: free {list(cls.free)} torsion {list(cls.torsion)}")
        payload = {
            "class_group": _group_payload(result.group),
            "left_exact": result.left_exact,
            "generator_classes": generators,
        }
        return 0, _report(lines, payload)

    if command == "picard":
        result = picard_group(fan, datum)
        lines = [
            f"Pic(X) = {result.group}",
            f"PLF/LF = {result.plf_mod_lf}",
            f"exact sequence rank check: {str(result.report.rank_consistent).lower()}",
        ]
        payload = {
            "picard": _group_payload(result.group),
            "plf_mod_lf": _group_payload(result.plf_mod_lf),
            "report": {
                "span_perp_rank": result.report.span_perp_rank,
                "unused_colour_count": result.report.unused_colour_count,
                "span_perp_image_rank": result.report.span_perp_image_rank,
                "plf_rank": result.report.plf_rank,
                "pic_rank": result.report.pic_rank,
                "rank_consistent": result.report.rank_consistent,
            },
        }
        return 0, _report(lines, payload)

    if command == "cartier":
        delta = _divisor_arg(doc, divisor)
        data = cartier_data(delta, fan)
        if data is None:
            return 0, _report([f"divisor {divisor!r} is not Cartier"], {"cartier": False, "data": None})
        lines = [f"divisor {divisor!r} is Cartier"]
        pieces = {}
        for idx, m in data.pieces:
            lines.append(f"  m on cone {idx} = {list(m)}")
            pieces[str(idx)] = list(m)
        return 0, _report(lines, {"cartier": True, "data": pieces})

    if command == "positivity":
        delta = _divisor_arg(doc, divisor)
        try:
            cartier, bpf, ample = positivity_check(delta, fan, datum)
        except NotCompleteError as exc:
            return 1, _report([f"error: {exc}"], {"error": str(exc)})
        lines = [
            f"cartier: {str(cartier).lower()}",
            f"basepoint free: {str(bpf).lower()}",
            f"ample: {str(ample).lower()}",
        ]
        return 0, _report(lines, {"cartier": cartier, "basepoint_free": bpf, "ample": ample})

    if command == "anticanonical":
        k = anticanonical(fan, datum)
        labels = fan.lattice.labels()
        lines = ["-K ="]
        for g, a in k.ray_coeffs:
            lines.append(f"  {a} * D[{','.join(map(str, g))}]")
        for r, a in k.colour_coeffs:
            lines.append(f"  {a} * D_{labels[r]}")
        payload = {
            "rays": {",".join(map(str, g)): a for g, a in k.ray_coeffs},
            "colours": {labels[r]: a for r, a in k.colour_coeffs},
        }
        return 0, _report(lines, payload)

    if command == "smooth":
        rep = classify_variety(fan, datum)
        regs = regularity_report(fan, datum)
        lines = [f"smooth: {str(rep.is_smooth).lower()}"]
        rows = []
        for r in regs:
            lines.append(
                f"  cone {r.cone_index}: simplicial {str(r.simplicial).lower()}, "
                f"regular {str(r.regular).lower()}, smooth {str(r.smooth).lower()} ({r.diagnostic})"
            )
            rows.append(
                {
                    "cone": r.cone_index,
                    "multiset": [list(v) for v in r.multiset],
                    "simplicial": r.simplicial,
                    "regular": r.regular,
                    "smooth": r.smooth,
                    "diagnostic": r.diagnostic,
                }
            )
        return 0, _report(lines, {"smooth": rep.is_smooth, "cones": rows})

    if command == "decolour":
        from .dictionary import decolouration

        stripped = decolouration(fan)
        out = InputDocument(datum, stripped, {}, len(stripped.cones))
        text = serialize(out)
        return 0, _report(["decolouration:"], json.loads(text))

    if command == "orbit-closure":
        index = _cone_arg(doc, cone)
        closure, closure_datum = orbit_closure(fan, index, datum)
        out = InputDocument(closure_datum, closure, {}, len(closure.cones))
        lines = [
            f"orbit closure of cone {index}",
            f"quotient lattice rank {closure.lattice.rank}",
            f"I' = {[closure_datum.group.label(i) for i in sorted(closure_datum.parabolic)]}",
        ]
        return 0, _report(lines, json.loads(serialize(out)))

    if command == "weight-monoid":
        index = _cone_arg(doc, cone)
        gens = weight_monoid_generators(fan.cones[index], datum)
        lines = [f"weight monoid generators for cone {index}:"] + [
            f"  {list(g)}" for g in gens
        ]
        return 0, _report(lines, {"generators": [list(g) for g in gens]})

    if command == "morphism":
        if target is None:
            raise ParseError("--target", "this command needs --target FILE")
        invalid_target = _require_valid(target.fan)
        if invalid_target is not None:
            return 1, invalid_target
        phi = coloured_lattice_map(datum, target.datum)
        compatible, proper = morphism_check(phi, fan, target.fan)
        labels = fan.lattice.labels()
        lines = [
            f"compatible: {str(compatible).lower()}",
            f"proper: {str(proper).lower()}",
        ]
        payload = {
            "compatible": compatible,
            "proper": proper,
            "matrix": [list(phi.matrix.row(i)) for i in range(phi.matrix.rows)],
            "dominantly_mapped": [labels[r] for r in sorted(phi.dominantly_mapped)],
        }
        return 0, _report(lines, payload)

    raise ParseError("command", f"unknown command {command!r}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="horofan",
        description="exact combinatorics of horospherical varieties via coloured fans",
    )
    parser.add_argument(
        "command",
        choices=[
            "validate",
            "orbits",
            "classify",
            "class-group",
            "picard",
            "cartier",
            "positivity",
            "anticanonical",
            "smooth",
            "decolour",
            "orbit-closure",
            "morphism",
            "weight-monoid",
        ],
    )
    parser.add_argument("file", help="input JSON document, or - for stdin")
    parser.add_argument("--divisor", help="named divisor from the document")
    parser.add_argument("--cone", type=int, help="index of a fan member")
    parser.add_argument("--target", help="target document for morphism checks")
    args = parser.parse_args(argv)
    try:
        doc = parse_input(_read(args.file))
        target = parse_input(_read(args.target)) if args.target else None
        code, text = execute(
            args.command, doc, divisor=args.divisor, cone=args.cone, target=target
        )
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
