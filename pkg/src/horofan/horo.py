"""Coloured lattices, coloured cones, and coloured fans.

A horospherical homogeneous space is presented by a pair (I, M): a parabolic
subset I of the simple roots and a sublattice M of the character lattice of
the maximal torus, given by an explicit ordered basis.  Characters live in
the coordinates (fundamental weights per simple component) + (standard basis
of the central torus character lattice), where pairing a character against a
simple coroot just reads off a coordinate.

The coloured lattice N is the dual of M in the dual basis; the colour point
of a colour alpha in S \\ I is the functional m -> <m, alpha^vee>, i.e. the
alpha-row of the basis matrix of M.  This coroot-restriction rule is the
unique linear rule reproducing the primary lattice, where the colour points
are part of a Z-basis; the tests pin it against an independently coded
pairing oracle and every stated small-group value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .intlin import (
    IntMatrix,
    column_hermite,
    hermite_normal_form,
    kernel_basis,
    lattice_coordinates,
    rank,
    saturate,
    solve_integer_affine,
)
from .polyhedra import Cone, faces, intersect, is_face_of
from .rootsys import RootDatum

Vector = tuple[int, ...]


class InvalidDatumError(ValueError):
    """The pair (I, M) does not present a horospherical subgroup."""


class NotSaturatedError(ValueError):
    """A coloured sublattice must be saturated."""


class ColourOutsideSublatticeError(ValueError):
    """A removed colour's point must lie in the sublattice being collapsed."""


class NotASubdatumError(ValueError):
    """Lattice maps need I_1 <= I_2 and M_2 <= M_1 (i.e. H_1 <= H_2)."""


class GroupMismatchError(ValueError):
    """Both data must present subgroups of the same reductive group."""


@dataclass(frozen=True)
class HorosphericalDatum:
    """Pair (I, M) presenting a horospherical homogeneous space G/H.

    `characters` has one row per character coordinate of the maximal torus and
    one column per basis element of M.  Every column must pair to zero with
    every simple root in `parabolic` (characters of P_I), and the columns must
    be linearly independent.
    """

    group: RootDatum
    parabolic: frozenset[int]
    characters: IntMatrix

    def __post_init__(self) -> None:
        if not self.parabolic <= set(self.group.simple_roots()):
            raise InvalidDatumError("parabolic set contains unknown simple roots")
        if self.characters.rows != self.group.character_rank:
            raise InvalidDatumError(
                f"character vectors must have length {self.group.character_rank}, "
                f"got {self.characters.rows}"
            )
        if rank(self.characters) != self.characters.cols:
            raise InvalidDatumError("character basis columns are linearly dependent")
        for alpha in sorted(self.parabolic):
            row = self.characters.row(alpha)
            if any(row):
                raise InvalidDatumError(
                    f"character basis pairs nonzero with {self.group.label(alpha)} in I"
                )

    @property
    def lattice_rank(self) -> int:
        return self.characters.cols

    def colour_roots(self) -> list[int]:
        return [a for a in self.group.simple_roots() if a not in self.parabolic]


@dataclass(frozen=True)
class Colour:
    """A universal colour: its defining simple root, display label, and point."""

    root: int
    label: str
    point: Vector


@dataclass(frozen=True)
class ColouredLattice:
    """Lattice N with its universal colour set and colour-point map."""

    rank: int
    colours: tuple[Colour, ...]
    simple_count: int
    component_count: int

    def colour_by_root(self, root: int) -> Colour:
        for c in self.colours:
            if c.root == root:
                return c
        raise KeyError(f"no colour with simple root index {root}")

    def colour_roots(self) -> frozenset[int]:
        return frozenset(c.root for c in self.colours)

    def point(self, root: int) -> Vector:
        return self.colour_by_root(root).point

    def labels(self) -> dict[int, str]:
        return {c.root: c.label for c in self.colours}


@dataclass(frozen=True)
class ColouredCone:
    """Pair (cone, colour subset); colours are stored by simple-root index."""

    cone: Cone
    colours: frozenset[int]

    def dim(self) -> int:
        return self.cone.dim()


@dataclass(frozen=True)
class ColouredFan:
    """Finite collection of strongly convex coloured cones on a coloured lattice."""

    lattice: ColouredLattice
    cones: tuple[ColouredCone, ...]

    def colour_set(self) -> frozenset[int]:
        out: set[int] = set()
        for cc in self.cones:
            out |= cc.colours
        return frozenset(out)

    def maximal(self) -> list[ColouredCone]:
        out = []
        for cc in self.cones:
            dominated = any(
                other != cc
                and other.cone.contains_cone(cc.cone)
                and cc.colours <= other.colours
                for other in self.cones
            )
            if not dominated:
                out.append(cc)
        return out

    def non_coloured_rays(self) -> list[ColouredCone]:
        return [cc for cc in self.cones if cc.dim() == 1 and not cc.colours]

    def describe(self, cc: ColouredCone) -> str:
        labels = self.lattice.labels()
        cols = ", ".join(labels.get(r, f"root{r}") for r in sorted(cc.colours))
        gens = ", ".join(str(list(g)) for g in cc.cone.generators) or "0"
        return f"(Cone[{gens}], {{{cols}}})"


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[str, ...]


@dataclass(frozen=True)
class ColouredLatticeMap:
    """Lattice map associated to an inclusion of horospherical subgroups."""

    source: ColouredLattice
    target: ColouredLattice
    matrix: IntMatrix
    dominantly_mapped: frozenset[int]

    def apply(self, v: Sequence[int]) -> Vector:
        return self.matrix.apply(v)


def build_coloured_lattice(datum: HorosphericalDatum) -> ColouredLattice:
    """Coloured lattice of G/H_(I,M): N = dual of M, colour points by coroot pairing."""
    colours = tuple(
        Colour(root=a, label=datum.group.label(a), point=datum.characters.row(a))
        for a in datum.colour_roots()
    )
    return ColouredLattice(
        rank=datum.lattice_rank,
        colours=colours,
        simple_count=datum.group.simple_count,
        component_count=len(datum.group.components),
    )


def trivial_coloured_cone(lattice: ColouredLattice) -> ColouredCone:
    return ColouredCone(Cone.zero(lattice.rank), frozenset())


def coloured_faces(lattice: ColouredLattice, cc: ColouredCone) -> list[ColouredCone]:
    """All coloured faces: each face tau gets the colours of cc landing in tau."""
    out = []
    for f in faces(cc.cone):
        induced = frozenset(r for r in cc.colours if f.contains(lattice.point(r)))
        out.append(ColouredCone(f, induced))
    return out


def coloured_intersection(a: ColouredCone, b: ColouredCone) -> ColouredCone:
    return ColouredCone(intersect(a.cone, b.cone), a.colours & b.colours)


def is_coloured_face(lattice: ColouredLattice, tau: ColouredCone, sigma: ColouredCone) -> bool:
    if not is_face_of(tau.cone, sigma.cone):
        return False
    induced = frozenset(r for r in sigma.colours if tau.cone.contains(lattice.point(r)))
    return induced == tau.colours


def close_under_coloured_faces(
    lattice: ColouredLattice, cones: Iterable[ColouredCone]
) -> tuple[ColouredCone, ...]:
    """Face closure, deduped and canonically ordered (small cones first).

    The input cones are kept as members verbatim; for a valid coloured cone
    the face with the full underlying cone is the cone itself, so this only
    differs when the input is invalid, which validation will then flag.
    """
    seen: set[ColouredCone] = set()
    for cc in cones:
        seen.add(cc)
        for f in coloured_faces(lattice, cc):
            seen.add(f)
    return tuple(
        sorted(seen, key=lambda cc: (cc.dim(), cc.cone.generators, sorted(cc.colours)))
    )


def coloured_fan(lattice: ColouredLattice, cones: Iterable[ColouredCone]) -> ColouredFan:
    """Build a fan from maximal cones by coloured-face closure, then validate."""
    fan = ColouredFan(lattice, close_under_coloured_faces(lattice, cones))
    report = validate_coloured_fan(fan)
    if not report.valid:
        raise ValueError("not a coloured fan: " + "; ".join(report.violations))
    return fan


def validate_coloured_fan(fan: ColouredFan) -> ValidationReport:
    """Check every coloured-fan axiom; violations are reported, not raised."""
    violations: list[str] = []
    lattice = fan.lattice
    known_roots = lattice.colour_roots()
    if not fan.cones:
        violations.append("fan has no coloured cones (the trivial coloured cone is required)")
    for cc in fan.cones:
        if cc.cone.ambient_rank != lattice.rank:
            violations.append(f"{fan.describe(cc)}: ambient rank differs from the lattice rank")
            continue
        if not cc.cone.is_strongly_convex():
            violations.append(f"{fan.describe(cc)}: underlying cone is not strongly convex")
        for r in sorted(cc.colours):
            if r not in known_roots:
                violations.append(f"{fan.describe(cc)}: unknown colour index {r}")
                continue
            point = lattice.point(r)
            if not any(point):
                violations.append(
                    f"{fan.describe(cc)}: colour {lattice.labels()[r]} has zero colour point"
                )
            elif not cc.cone.contains(point):
                violations.append(
                    f"{fan.describe(cc)}: colour point {list(point)} of "
                    f"{lattice.labels()[r]} lies outside the cone"
                )
    if violations:
        return ValidationReport(False, tuple(violations))
    underlying: dict[tuple, list[ColouredCone]] = {}
    for cc in fan.cones:
        underlying.setdefault(cc.cone.generators, []).append(cc)
    for gens, ccs in underlying.items():
        if len(ccs) > 1:
            violations.append(
                f"{len(ccs)} coloured cones share the underlying cone "
                f"{[list(g) for g in gens]}"
            )
    members = set(fan.cones)
    for cc in fan.cones:
        for f in coloured_faces(lattice, cc):
            if f not in members:
                violations.append(
                    f"{fan.describe(cc)}: coloured face {fan.describe(f)} is missing from the fan"
                )
    for i, a in enumerate(fan.cones):
        for b in fan.cones[i + 1 :]:
            meet = coloured_intersection(a, b)
            if not is_coloured_face(lattice, meet, a) or not is_coloured_face(lattice, meet, b):
                violations.append(
                    f"intersection of {fan.describe(a)} and {fan.describe(b)} "
                    "is not a coloured face of both"
                )
    return ValidationReport(not violations, tuple(violations))


@dataclass(frozen=True)
class QuotientResult:
    lattice: ColouredLattice
    datum: HorosphericalDatum
    projection: IntMatrix  # the quotient map N -> N/N'


def quotient_coloured_lattice(
    datum: HorosphericalDatum,
    sublattice: IntMatrix,
    removed_colours: Iterable[int],
) -> QuotientResult:
    """Quotient of N by a saturated coloured sublattice N'.

    The universal colours of N/N' are C \\ C' with projected colour points;
    the returned datum has I' = I + C' and M' = (N/N')^vee embedded back into
    the character lattice via M.
    """
    removed = frozenset(removed_colours)
    lattice = build_coloured_lattice(datum)
    if sublattice.rows != lattice.rank:
        raise ValueError("sublattice basis has wrong ambient rank")
    if not removed <= lattice.colour_roots():
        raise ValueError("removed colours must be universal colours of N")
    if sublattice.cols:
        if saturate(sublattice) != column_hermite(sublattice):
            raise NotSaturatedError("sublattice is not saturated in N")
    for r in sorted(removed):
        if lattice_coordinates(lattice.point(r), sublattice) is None:
            raise ColourOutsideSublatticeError(
                f"colour point of {lattice.labels()[r]} lies outside the sublattice"
            )
    proj_rows = kernel_basis(sublattice.transpose())
    projection = IntMatrix.from_rows([list(r) for r in proj_rows], cols=lattice.rank)
    new_characters = datum.characters.mul(projection.transpose())
    new_datum = HorosphericalDatum(
        group=datum.group,
        parabolic=frozenset(datum.parabolic | removed),
        characters=new_characters,
    )
    new_lattice = build_coloured_lattice(new_datum)
    # the construction must reproduce the projected colour points exactly
    for c in new_lattice.colours:
        assert c.point == projection.apply(lattice.point(c.root))
    return QuotientResult(new_lattice, new_datum, projection)


def coloured_lattice_map(
    source: HorosphericalDatum, target: HorosphericalDatum
) -> ColouredLatticeMap:
    """Map of coloured lattices dual to M_2 -> M_1, for H_1 <= H_2."""
    if source.group != target.group:
        raise GroupMismatchError("coloured lattice maps need a common group")
    if not source.parabolic <= target.parabolic:
        raise NotASubdatumError("need I_1 <= I_2")
    coefficient_columns = []
    for col in target.characters.columns():
        sol = solve_integer_affine(source.characters, col)
        if sol is None:
            raise NotASubdatumError("need M_2 <= M_1 inside the character lattice")
        coefficient_columns.append(sol[0])
    a = IntMatrix.from_columns(coefficient_columns, rows=source.characters.cols)
    phi = a.transpose()
    source_lattice = build_coloured_lattice(source)
    target_lattice = build_coloured_lattice(target)
    dominant = frozenset(target.parabolic - source.parabolic)
    for c in source_lattice.colours:
        image = phi.apply(c.point)
        if c.root in dominant:
            assert not any(image)
        else:
            assert image == target_lattice.point(c.root)
    return ColouredLatticeMap(source_lattice, target_lattice, phi, dominant)


def homogeneous_spaces_isomorphic(a: HorosphericalDatum, b: HorosphericalDatum) -> bool:
    """G-equivariant isomorphism test for G/H_1 and G/H_2.

    The colour-divisor stabilizers pin the colour matching to the identity on
    simple roots, so the spaces are isomorphic iff the parabolic sets agree,
    the lattice ranks agree, and one colour-point matrix is carried to the
    other by a unimodular transformation (equal row Hermite forms).
    """
    if a.group != b.group:
        raise GroupMismatchError("uniqueness comparison needs a common group")
    if a.parabolic != b.parabolic or a.lattice_rank != b.lattice_rank:
        return False
    la, lb = build_coloured_lattice(a), build_coloured_lattice(b)
    roots = sorted(la.colour_roots())
    ma = IntMatrix.from_columns([la.point(r) for r in roots], rows=a.lattice_rank)
    mb = IntMatrix.from_columns([lb.point(r) for r in roots], rows=b.lattice_rank)
    return hermite_normal_form(ma)[0] == hermite_normal_form(mb)[0]


_LABEL = re.compile(r"^(?:(\d+)\.)?a(\d+)$")


def _relabel(label: str, component_offset: int, total_components: int) -> str:
    m = _LABEL.match(label)
    if not m:
        raise ValueError(f"unrecognized colour label {label!r}")
    ordinal = int(m.group(1) or 1) + component_offset
    return f"a{m.group(2)}" if total_components <= 1 else f"{ordinal}.a{m.group(2)}"


def product_coloured_lattice(a: ColouredLattice, b: ColouredLattice) -> ColouredLattice:
    total = a.component_count + b.component_count
    colours = [
        Colour(c.root, _relabel(c.label, 0, total), c.point + (0,) * b.rank) for c in a.colours
    ] + [
        Colour(
            c.root + a.simple_count,
            _relabel(c.label, a.component_count, total),
            (0,) * a.rank + c.point,
        )
        for c in b.colours
    ]
    return ColouredLattice(
        rank=a.rank + b.rank,
        colours=tuple(colours),
        simple_count=a.simple_count + b.simple_count,
        component_count=total,
    )


def product_coloured_fan(a: ColouredFan, b: ColouredFan) -> ColouredFan:
    """Componentwise product: cones sigma_1 x sigma_2 with colours F_1 + F_2."""
    lattice = product_coloured_lattice(a.lattice, b.lattice)
    cones = []
    for ca in a.cones:
        for cb in b.cones:
            gens = [g + (0,) * b.lattice.rank for g in ca.cone.generators] + [
                (0,) * a.lattice.rank + g for g in cb.cone.generators
            ]
            colours = frozenset(ca.colours) | frozenset(r + a.lattice.simple_count for r in cb.colours)
            cones.append(ColouredCone(Cone.from_generators(lattice.rank, gens), colours))
    return ColouredFan(lattice, tuple(cones))
