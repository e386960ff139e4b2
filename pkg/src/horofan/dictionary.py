"""The dictionary between coloured fans and geometry.

Orbits and their closures, variety-level properties (simple, affine,
complete, toroidal, projective), per-cone regularity and smoothness,
morphism compatibility and properness, decolouration, affine local
structure, and weight monoids.  Everything consumes a validated
ColouredFan together with the HorosphericalDatum presenting its lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .intlin import (
    IntMatrix,
    invariant_factors,
    kernel_basis,
    rank,
    reduce_mod_lattice,
    saturate,
    solve_integer_affine,
)
from .polyhedra import (
    Cone,
    PlainFan,
    covered_by,
    dual_cone,
    fan_is_complete,
    hilbert_basis,
    intersect,
)
from .horo import (
    ColouredCone,
    ColouredFan,
    ColouredLattice,
    ColouredLatticeMap,
    HorosphericalDatum,
    build_coloured_lattice,
    close_under_coloured_faces,
    is_coloured_face,
    quotient_coloured_lattice,
    trivial_coloured_cone,
)
from .ratlp import maximize
from .rootsys import RootDatum, colour_smoothness_check, flag_dimension

Vector = tuple[int, ...]


class LatticeMismatchError(ValueError):
    """Fan and datum (or map and fans) do not share a coloured lattice."""


class ConeNotInFanError(IndexError):
    """A cone index does not name a member of the fan."""


class NotStronglyConvexError(ValueError):
    """The operation needs a strongly convex coloured cone."""


class CancellationToken:
    """Cooperative cancellation for the long-running polyhedral checks."""

    def __init__(self) -> None:
        self._cancelled = False

    def cancel(self) -> None:
        self._cancelled = True

    def cancelled(self) -> bool:
        return self._cancelled


def _as_callable(cancel: Optional[CancellationToken]):
    return cancel.cancelled if cancel is not None else None


def _require_lattice(fan: ColouredFan, datum: HorosphericalDatum) -> None:
    if fan.lattice != build_coloured_lattice(datum):
        raise LatticeMismatchError("fan is not defined on the datum's coloured lattice")


@dataclass(frozen=True)
class OrbitRecord:
    """One orbit of the variety: its coloured cone and homogeneous datum."""

    cone_index: int
    dimension: int
    homogeneous_datum: HorosphericalDatum


def orbit_table(fan: ColouredFan, datum: HorosphericalDatum) -> list[OrbitRecord]:
    """One record per coloured cone; dimension by the orbit formula.

    dim O(sigma^c) = rank(N) - dim(sigma) + dim(G/P_{I + F(sigma^c)}).
    """
    _require_lattice(fan, datum)
    records = []
    for idx, cc in enumerate(fan.cones):
        dim = (
            fan.lattice.rank
            - cc.dim()
            + flag_dimension(datum.group, datum.parabolic | cc.colours)
        )
        sub = saturate(
            IntMatrix.from_columns(list(cc.cone.generators), rows=fan.lattice.rank)
        )
        quotient = quotient_coloured_lattice(datum, sub, cc.colours)
        records.append(OrbitRecord(idx, dim, quotient.datum))
    return records


def closure_contains(fan: ColouredFan, outer: int, inner: int) -> bool:
    """Whether the closure of orbit `outer` contains orbit `inner`.

    By the orbit correspondence this holds iff the outer coloured cone is a
    coloured face of the inner one.
    """
    return is_coloured_face(fan.lattice, fan.cones[outer], fan.cones[inner])


def orbit_closure(
    fan: ColouredFan, index: int, datum: HorosphericalDatum
) -> tuple[ColouredFan, HorosphericalDatum]:
    """Coloured fan of an orbit closure, on the quotient coloured lattice."""
    _require_lattice(fan, datum)
    if not 0 <= index < len(fan.cones):
        raise ConeNotInFanError(f"no coloured cone with index {index}")
    tau = fan.cones[index]
    sub = saturate(IntMatrix.from_columns(list(tau.cone.generators), rows=fan.lattice.rank))
    quotient = quotient_coloured_lattice(datum, sub, tau.colours)
    cones = []
    for cc in fan.cones:
        if not cc.cone.contains_cone(tau.cone):
            continue
        image = Cone.from_generators(
            quotient.lattice.rank, [quotient.projection.apply(g) for g in cc.cone.generators]
        )
        cones.append(ColouredCone(image, frozenset(cc.colours - tau.colours)))
    ordered = tuple(
        sorted(set(cones), key=lambda cc: (cc.dim(), cc.cone.generators, sorted(cc.colours)))
    )
    return ColouredFan(quotient.lattice, ordered), quotient.datum


@dataclass(frozen=True)
class ConeRegularity:
    """Multiset analysis of one coloured cone."""

    cone_index: int
    multiset: tuple[Vector, ...]
    simplicial: bool
    regular: bool
    smooth: bool
    diagnostic: str


def regularity_report(fan: ColouredFan, datum: HorosphericalDatum) -> list[ConeRegularity]:
    """Per-cone multiset of non-coloured ray generators and colour points.

    Simplicial: the multiset is linearly independent.  Regular: it extends to
    a Z-basis of N.  Smooth: regular plus the Dynkin-diagram condition on the
    cone's colours.
    """
    _require_lattice(fan, datum)
    out = []
    for idx, cc in enumerate(fan.cones):
        multiset = _regularity_multiset(fan.lattice, cc)
        m = IntMatrix.from_columns(list(multiset), rows=fan.lattice.rank)
        simplicial = rank(m) == len(multiset)
        regular = simplicial and all(d == 1 for d in invariant_factors(m))
        dynkin_ok, dynkin_why = colour_smoothness_check(
            datum.group, datum.parabolic, cc.colours
        )
        smooth = regular and dynkin_ok
        if not simplicial:
            why = "multiset is linearly dependent (not simplicial)"
        elif not regular:
            why = "multiset does not extend to a Z-basis (not regular)"
        elif not dynkin_ok:
            why = dynkin_why
        else:
            why = "regular, and the colours satisfy the Dynkin condition"
        out.append(ConeRegularity(idx, multiset, simplicial, regular, smooth, why))
    return out


def _regularity_multiset(lattice: ColouredLattice, cc: ColouredCone) -> tuple[Vector, ...]:
    colour_points = [lattice.point(r) for r in sorted(cc.colours)]
    rays = []
    for ray in cc.cone.rays():
        on_ray = any(ray.contains(p) for p in colour_points if any(p))
        if not on_ray:
            rays.append(ray.generators[0])
    return tuple(rays) + tuple(colour_points)


@dataclass(frozen=True)
class PropertyReport:
    is_simple: bool
    is_affine: bool
    is_complete: bool
    is_toroidal: bool
    is_projective: bool
    is_simplicial: bool
    is_regular: bool
    is_factorial: bool
    is_q_factorial: bool
    is_smooth: bool
    diagnostics: tuple[str, ...]


def classify_variety(
    fan: ColouredFan, datum: HorosphericalDatum, cancel: Optional[CancellationToken] = None
) -> PropertyReport:
    """Variety-level property suite for the horospherical variety of the fan."""
    _require_lattice(fan, datum)
    notes = []
    maximal = fan.maximal()
    simple = len(maximal) == 1
    universal = fan.lattice.colour_roots()
    fan_colours = fan.colour_set()
    affine = simple and fan_colours == universal
    if simple and not affine:
        missing = ", ".join(fan.lattice.labels()[r] for r in sorted(universal - fan_colours))
        notes.append(f"simple but not affine: colours {missing} unused")
    toroidal = fan_colours == frozenset()
    plain = PlainFan.from_cones(fan.lattice.rank, [cc.cone for cc in fan.cones])
    complete = fan_is_complete(plain)
    projective = complete and _strictly_convex_plf_exists(fan, cancel)
    if complete and not projective:
        notes.append("complete but admits no strictly convex piecewise linear function")
    regs = regularity_report(fan, datum)
    simplicial = all(r.simplicial for r in regs)
    regular = all(r.regular for r in regs)
    smooth = all(r.smooth for r in regs)
    for r in regs:
        if not r.smooth:
            notes.append(f"cone {r.cone_index}: {r.diagnostic}")
    return PropertyReport(
        is_simple=simple,
        is_affine=affine,
        is_complete=complete,
        is_toroidal=toroidal,
        is_projective=projective,
        is_simplicial=simplicial,
        is_regular=regular,
        is_factorial=regular,
        is_q_factorial=simplicial,
        is_smooth=smooth,
        diagnostics=tuple(notes),
    )


def _strictly_convex_plf_exists(
    fan: ColouredFan, cancel: Optional[CancellationToken] = None
) -> bool:
    """Exact rational feasibility of a strictly convex PLF on the fan.

    Maximizes a strictness slack eps (capped at 1) subject to the
    face-compatibility equalities and gap inequalities on generators; by
    homogeneity a strictly convex PLF exists iff the optimum is positive.
    """
    maximal = [cc.cone for cc in fan.maximal()]
    k = len(maximal)
    r = fan.lattice.rank
    if k <= 1:
        return True
    # variables: split coordinates of each m_sigma, then eps
    nvars = 2 * k * r + 1
    eps_col = nvars - 1

    def coeff_row(pairs):
        # pairs: list of (cone index, coordinate index, coefficient)
        row = [Fraction(0)] * nvars
        for ci, xi, c in pairs:
            base = 2 * (ci * r + xi)
            row[base] += Fraction(c)
            row[base + 1] -= Fraction(c)
        return row

    a_ub: list[list[Fraction]] = []
    b_ub: list[Fraction] = []
    for i, j in itertools.combinations(range(k), 2):
        shared = intersect(maximal[i], maximal[j])
        for u in shared.generators:
            row = coeff_row(
                [(i, t, u[t]) for t in range(r)] + [(j, t, -u[t]) for t in range(r)]
            )
            a_ub.append(row)
            b_ub.append(Fraction(0))
            a_ub.append([-x for x in row])
            b_ub.append(Fraction(0))
    for i, j in itertools.permutations(range(k), 2):
        for u in maximal[i].generators:
            if maximal[j].contains(u):
                continue
            # <m_i - m_j, u> >= eps
            row = coeff_row(
                [(i, t, -u[t]) for t in range(r)] + [(j, t, u[t]) for t in range(r)]
            )
            row[eps_col] = Fraction(1)
            a_ub.append(row)
            b_ub.append(Fraction(0))
    cap = [Fraction(0)] * nvars
    cap[eps_col] = Fraction(1)
    a_ub.append(cap)
    b_ub.append(Fraction(1))
    objective = [Fraction(0)] * nvars
    objective[eps_col] = Fraction(1)
    result = maximize(objective, a_ub, b_ub, cancelled=_as_callable(cancel))
    return result.status == "optimal" and result.value > 0


def morphism_check(
    phi: ColouredLatticeMap,
    source_fan: ColouredFan,
    target_fan: ColouredFan,
    cancel: Optional[CancellationToken] = None,
) -> tuple[bool, bool]:
    """(compatible, proper) for a coloured lattice map between two fans.

    Compatible: every source coloured cone maps into some target coloured
    cone with its non-dominantly-mapped colours.  Proper: the preimage of the
    target support equals the source support, decided by exact polyhedral
    covering both ways.
    """
    if phi.source != source_fan.lattice or phi.target != target_fan.lattice:
        raise LatticeMismatchError("map endpoints do not match the fans' lattices")
    compatible = True
    for cc in source_fan.cones:
        images = [phi.apply(g) for g in cc.cone.generators]
        needed = cc.colours - phi.dominantly_mapped
        hit = any(
            needed <= target.colours and all(target.cone.contains(v) for v in images)
            for target in target_fan.cones
        )
        if not hit:
            compatible = False
            break
    token = _as_callable(cancel)
    source_max = [cc.cone for cc in source_fan.maximal()]
    preimages = []
    for cc in target_fan.maximal():
        pulled = [phi.matrix.transpose().apply(h) for h in cc.cone.facet_normals()]
        preimages.append(Cone.from_inequalities(source_fan.lattice.rank, pulled))
    proper = all(covered_by(p, source_max, token) for p in preimages) and all(
        covered_by(s, preimages, token) for s in source_max
    )
    return compatible, proper


def decolouration(fan: ColouredFan) -> ColouredFan:
    """The same underlying fan with every colour set erased."""
    stripped = {ColouredCone(cc.cone, frozenset()) for cc in fan.cones}
    ordered = tuple(sorted(stripped, key=lambda cc: (cc.dim(), cc.cone.generators)))
    return ColouredFan(fan.lattice, ordered)


def open_toroidal_subfan(fan: ColouredFan) -> ColouredFan:
    """Sub-coloured fan of the trivial cone and the non-coloured rays."""
    keep = [trivial_coloured_cone(fan.lattice)] + fan.non_coloured_rays()
    ordered = tuple(sorted(set(keep), key=lambda cc: (cc.dim(), cc.cone.generators)))
    return ColouredFan(fan.lattice, ordered)


@dataclass(frozen=True)
class LocalStructure:
    """Affine local model of a simple horospherical variety.

    `parabolic_index` is I + F(sigma^c) in the original group's indices;
    `levi_datum` presents the Levi homogeneous space on the same lattice;
    `root_map` sends original simple-root indices into the Levi's.
    """

    parabolic_index: frozenset[int]
    levi_datum: HorosphericalDatum
    levi_lattice: ColouredLattice
    cone: ColouredCone
    root_map: dict[int, int]


def _classify_subdiagram(group: RootDatum, nodes: list[int]) -> tuple[str, int, list[int]]:
    """Identify a connected induced subdiagram as (letter, rank, Bourbaki order)."""
    size = len(nodes)
    candidates = ["A"]
    if size >= 2:
        candidates += ["B", "C", "G"] if size == 2 else ["B", "C"]
    if size >= 3:
        candidates.append("D")
    if size == 4:
        candidates.append("F")
    if size in (6, 7, 8):
        candidates.append("E")
    for letter in candidates:
        try:
            target = RootDatum.parse(f"{letter}{size}")
        except ValueError:
            continue
        for perm in itertools.permutations(nodes):
            ok = all(
                target.cartan_entry(k, l) == group.cartan_entry(perm[k], perm[l])
                for k in range(size)
                for l in range(size)
            )
            if ok:
                return letter, size, list(perm)
    raise AssertionError("induced subdiagram of a Dynkin diagram must be a Dynkin diagram")


def affine_local_structure(
    sigma: ColouredCone, datum: HorosphericalDatum
) -> LocalStructure:
    """Levi slice of the simple variety of sigma: an affine model on the same N.

    The Levi group is the sub-root-datum on Q = I + F(sigma^c) with the
    central torus enlarged so the character rank is unchanged; the original
    character coordinates are reused, with fundamental-weight coordinates
    outside Q demoted to torus coordinates.
    """
    if not sigma.cone.is_strongly_convex():
        raise NotStronglyConvexError("affine local structure needs a strongly convex cone")
    group = datum.group
    q_index = frozenset(datum.parabolic | sigma.colours)
    components: list[tuple[str, int, list[int]]] = []
    remaining = set(q_index)
    while remaining:
        seed = min(remaining)
        comp = {seed}
        queue = [seed]
        while queue:
            cur = queue.pop()
            for other in list(remaining):
                if other not in comp and group.adjacent(cur, other):
                    comp.add(other)
                    queue.append(other)
        remaining -= comp
        letter, size, order = _classify_subdiagram(group, sorted(comp))
        components.append((letter, size, order))
    components.sort(key=lambda item: min(item[2]))
    levi_group = RootDatum(
        components=tuple((letter, size) for letter, size, _ in components),
        central_torus_rank=group.character_rank - len(q_index),
    )
    root_map: dict[int, int] = {}
    new_row_order: list[int] = []
    position = 0
    for _, _, order in components:
        for old in order:
            root_map[old] = position
            position += 1
            new_row_order.append(old)
    demoted = [i for i in range(group.simple_count) if i not in q_index]
    new_row_order.extend(demoted)
    new_row_order.extend(range(group.simple_count, group.character_rank))
    rows = [list(datum.characters.row(i)) for i in new_row_order]
    levi_datum = HorosphericalDatum(
        group=levi_group,
        parabolic=frozenset(root_map[i] for i in datum.parabolic),
        characters=IntMatrix.from_rows(rows, cols=datum.characters.cols),
    )
    levi_lattice = build_coloured_lattice(levi_datum)
    assert levi_lattice.rank == datum.lattice_rank
    original = build_coloured_lattice(datum)
    z_cone = ColouredCone(sigma.cone, frozenset(root_map[r] for r in sigma.colours))
    for r in sigma.colours:
        assert levi_lattice.point(root_map[r]) == original.point(r)
    return LocalStructure(q_index, levi_datum, levi_lattice, z_cone, root_map)


def weight_monoid_generators(sigma: ColouredCone, datum: HorosphericalDatum) -> list[Vector]:
    """Minimal generators of the weight monoid sigma^vee ∩ N^vee.

    For full-dimensional sigma this is the Hilbert basis of the pointed dual;
    otherwise the +/- basis of the lineality lattice of the dual joins the
    lifted Hilbert basis of its pointed quotient.
    """
    if not sigma.cone.is_strongly_convex():
        raise NotStronglyConvexError("weight monoids are computed for strongly convex cones")
    dual = dual_cone(sigma.cone)
    lin = dual.lineality_basis()
    if not lin:
        return hilbert_basis(dual)
    n = dual.ambient_rank
    lin_matrix = IntMatrix.from_columns(lin, rows=n)
    proj_rows = kernel_basis(lin_matrix.transpose())
    q = IntMatrix.from_rows([list(r) for r in proj_rows], cols=n)
    imaged = [v for v in (q.apply(g) for g in dual.generators) if any(v)]
    pointed = Cone.from_generators(q.rows, imaged)
    lifted = []
    for h in hilbert_basis(pointed):
        sol = solve_integer_affine(q, h)
        assert sol is not None
        lifted.append(reduce_mod_lattice(sol[0], lin_matrix))
    out = {tuple(b) for b in lin} | {tuple(-x for x in b) for b in lin} | set(lifted)
    return sorted(out)
