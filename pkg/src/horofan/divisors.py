"""Divisor theory on horospherical varieties.

B^- -invariant Weil divisors are integer coefficient vectors on the
non-coloured rays and the universal colours.  Cartier divisors are piecewise
linear data: one covector per maximal coloured cone, required to lie in the
dual lattice exactly and to agree on shared faces.  The class group and
Picard group come out of exact integer linear algebra on the principal-
divisor and Cartier systems.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .intlin import (
    AbelianGroup,
    IntMatrix,
    cokernel,
    column_hermite,
    kernel_basis,
    lattice_coordinates,
    rank,
    reduce_mod_lattice,
    smith_normal_form,
    solve_integer_affine,
)
from .polyhedra import PlainFan, dot, fan_is_complete
from .horo import ColouredFan, HorosphericalDatum
from .rootsys import pairing, positive_roots
from .dictionary import _require_lattice

Vector = tuple[int, ...]


class NotCompleteError(ValueError):
    """Positivity criteria assume a complete fan."""


@dataclass(frozen=True)
class BInvariantDivisor:
    """Integer coefficients on the non-coloured rays and on every colour.

    Entries follow the fan's canonical ray order (sorted primitive
    generators) and the lattice's colour order; build through `make_divisor`
    or `principal_divisor` to keep that alignment.
    """

    ray_coeffs: tuple[tuple[Vector, int], ...]
    colour_coeffs: tuple[tuple[int, int], ...]

    def ray_coefficient(self, generator: Vector) -> int:
        for g, a in self.ray_coeffs:
            if g == generator:
                return a
        raise KeyError(f"no invariant ray with generator {generator}")

    def colour_coefficient(self, root: int) -> int:
        for r, a in self.colour_coeffs:
            if r == root:
                return a
        raise KeyError(f"no colour with root index {root}")

    def coordinates(self) -> Vector:
        return tuple(a for _, a in self.ray_coeffs) + tuple(a for _, a in self.colour_coeffs)


def invariant_ray_generators(fan: ColouredFan) -> list[Vector]:
    """Primitive generators of the non-coloured rays, in canonical order."""
    return sorted(cc.cone.generators[0] for cc in fan.non_coloured_rays())


def make_divisor(
    fan: ColouredFan,
    rays: Optional[dict[Vector, int]] = None,
    colours: Optional[dict[int, int]] = None,
) -> BInvariantDivisor:
    rays = dict(rays or {})
    colours = dict(colours or {})
    gens = invariant_ray_generators(fan)
    roots = [c.root for c in fan.lattice.colours]
    unknown_rays = set(rays) - set(gens)
    unknown_colours = set(colours) - set(roots)
    if unknown_rays:
        raise KeyError(f"not non-coloured rays of the fan: {sorted(unknown_rays)}")
    if unknown_colours:
        raise KeyError(f"not universal colours: {sorted(unknown_colours)}")
    return BInvariantDivisor(
        ray_coeffs=tuple((g, rays.get(g, 0)) for g in gens),
        colour_coeffs=tuple((r, colours.get(r, 0)) for r in roots),
    )


def principal_divisor(m: Sequence[int], fan: ColouredFan) -> BInvariantDivisor:
    """div(f_m): coefficient <m, u_D> on every B^- -invariant prime divisor."""
    if len(m) != fan.lattice.rank:
        raise ValueError("covector has wrong rank")
    return BInvariantDivisor(
        ray_coeffs=tuple((g, dot(m, g)) for g in invariant_ray_generators(fan)),
        colour_coeffs=tuple((c.root, dot(m, c.point)) for c in fan.lattice.colours),
    )


@dataclass(frozen=True)
class DivisorClass:
    """A class in the cokernel presentation: free part plus torsion residues."""

    free: Vector
    torsion: Vector


@dataclass(frozen=True)
class ClassGroupResult:
    group: AbelianGroup
    generator_classes: tuple[tuple[str, DivisorClass], ...]
    left_exact: bool


def _principal_matrix(fan: ColouredFan) -> IntMatrix:
    """Columns: principal divisors of the dual basis covectors."""
    r = fan.lattice.rank
    cols = []
    for j in range(r):
        m = tuple(1 if t == j else 0 for t in range(r))
        cols.append(principal_divisor(m, fan).coordinates())
    gens = invariant_ray_generators(fan)
    height = len(gens) + len(fan.lattice.colours)
    return IntMatrix.from_columns(cols, rows=height)


def _divisor_names(fan: ColouredFan) -> list[str]:
    names = [f"D[{','.join(map(str, g))}]" for g in invariant_ray_generators(fan)]
    names += [f"D_{c.label}" for c in fan.lattice.colours]
    return names


def class_group(fan: ColouredFan, datum: HorosphericalDatum) -> ClassGroupResult:
    """Cl(X) as the cokernel of the principal-divisor map N^vee -> Div_{B^-}."""
    _require_lattice(fan, datum)
    p = _principal_matrix(fan)
    group = cokernel(p)
    u, d, _ = smith_normal_form(p)
    n = min(d.rows, d.cols)
    diag = [d.at(i, i) for i in range(n)] + [0] * (d.rows - n)
    free_rows = [i for i in range(d.rows) if diag[i] == 0]
    torsion_rows = [i for i in range(d.rows) if diag[i] > 1]
    classes = []
    for idx, name in enumerate(_divisor_names(fan)):
        basis_vector = tuple(1 if t == idx else 0 for t in range(d.rows))
        y = u.apply(basis_vector)
        classes.append(
            (
                name,
                DivisorClass(
                    free=tuple(y[i] for i in free_rows),
                    torsion=tuple(y[i] % diag[i] for i in torsion_rows),
                ),
            )
        )
    left_exact = rank(p) == fan.lattice.rank
    return ClassGroupResult(group, tuple(classes), left_exact)


@dataclass(frozen=True)
class CartierData:
    """Piecewise linear data: one covector per maximal coloured cone."""

    pieces: tuple[tuple[int, Vector], ...]  # (index into fan.cones, covector)

    def covector(self, cone_index: int) -> Vector:
        for idx, m in self.pieces:
            if idx == cone_index:
                return m
        raise KeyError(f"no maximal cone with index {cone_index}")

    def value(self, fan: ColouredFan, point: Vector) -> int:
        for idx, m in self.pieces:
            if fan.cones[idx].cone.contains(point):
                return dot(m, point)
        raise ValueError(f"point {point} lies outside the fan's support")


def _maximal_indices(fan: ColouredFan) -> list[int]:
    maximal = set(fan.maximal())
    return [i for i, cc in enumerate(fan.cones) if cc in maximal]


def _cartier_system(fan: ColouredFan) -> tuple[IntMatrix, IntMatrix, list[int]]:
    """Rows of (A, B) with A.(stacked m_sigma) = B.(divisor coordinates).

    Value rows pin each piece on its non-coloured rays and colour points;
    compatibility rows glue pieces along shared face generators.
    """
    r = fan.lattice.rank
    max_idx = _maximal_indices(fan)
    gens = invariant_ray_generators(fan)
    roots = [c.root for c in fan.lattice.colours]
    width_x = r * len(max_idx)
    width_d = len(gens) + len(roots)
    a_rows: list[list[int]] = []
    b_rows: list[list[int]] = []

    def value_row(slot: int, vector: Vector, coord: int) -> None:
        row = [0] * width_x
        row[slot * r : (slot + 1) * r] = list(vector)
        a_rows.append(row)
        rhs = [0] * width_d
        rhs[coord] = 1
        b_rows.append(rhs)

    for slot, idx in enumerate(max_idx):
        cc = fan.cones[idx]
        colour_points = [fan.lattice.point(root) for root in cc.colours]
        for ray in cc.cone.rays():
            if any(ray.contains(p) for p in colour_points if any(p)):
                continue
            value_row(slot, ray.generators[0], gens.index(ray.generators[0]))
        for root in sorted(cc.colours):
            value_row(slot, fan.lattice.point(root), len(gens) + roots.index(root))
    from .polyhedra import intersect

    for si, sj in itertools.combinations(range(len(max_idx)), 2):
        shared = intersect(fan.cones[max_idx[si]].cone, fan.cones[max_idx[sj]].cone)
        for u in shared.generators:
            row = [0] * width_x
            row[si * r : (si + 1) * r] = list(u)
            for t in range(r):
                row[sj * r + t] -= u[t]
            a_rows.append(row)
            b_rows.append([0] * width_d)
    a = IntMatrix.from_rows(a_rows, cols=width_x)
    b = IntMatrix.from_rows(b_rows, cols=width_d)
    return a, b, max_idx


def cartier_data(delta: BInvariantDivisor, fan: ColouredFan) -> Optional[CartierData]:
    """Solve for piecewise linear data of delta; None when delta is not Cartier.

    Covectors are required to lie in N^vee exactly.  On cones of non-full
    dimension the representative is canonicalized modulo sigma-perp.
    """
    a, b, max_idx = _cartier_system(fan)
    target = b.apply(delta.coordinates())
    solution = solve_integer_affine(a, target)
    if solution is None:
        return None
    x = solution[0]
    r = fan.lattice.rank
    pieces = []
    for slot, idx in enumerate(max_idx):
        m = x[slot * r : (slot + 1) * r]
        perp = kernel_basis(
            IntMatrix.from_rows([list(g) for g in fan.cones[idx].cone.generators], cols=r)
        )
        if perp:
            m = reduce_mod_lattice(m, IntMatrix.from_columns(perp, rows=r))
        pieces.append((idx, tuple(m)))
    return CartierData(tuple(pieces))


@dataclass(frozen=True)
class ExactSequenceReport:
    """Consistency data for the Picard exact sequence."""

    span_perp_rank: int
    unused_colour_count: int
    span_perp_image_rank: int
    plf_rank: int
    pic_rank: int
    rank_consistent: bool


@dataclass(frozen=True)
class PicardResult:
    group: AbelianGroup
    plf_mod_lf: AbelianGroup
    report: ExactSequenceReport


def _cartier_lattice(fan: ColouredFan) -> IntMatrix:
    """Canonical basis of the lattice of Cartier B^- -invariant divisors."""
    a, b, _ = _cartier_system(fan)
    width_d = b.cols
    width_x = a.cols
    combined_cols = []
    for j in range(width_d):
        combined_cols.append(b.column(j))
    for j in range(width_x):
        combined_cols.append(tuple(-x for x in a.column(j)))
    combined = IntMatrix.from_columns(combined_cols, rows=a.rows)
    kernel = kernel_basis(combined)
    projected = [v[:width_d] for v in kernel if any(v[:width_d])]
    if not projected:
        return IntMatrix.zero(width_d, 0)
    return column_hermite(IntMatrix.from_columns(projected, rows=width_d))


def picard_group(fan: ColouredFan, datum: HorosphericalDatum) -> PicardResult:
    """Pic(X) and PLF/LF, plus the exact-sequence consistency report.

    Pic is computed directly as (Cartier invariant divisors)/(principal
    divisors); the extension of the Picard-group theorem is then re-verified
    at the level of free ranks.
    """
    _require_lattice(fan, datum)
    r = fan.lattice.rank
    cartier = _cartier_lattice(fan)
    principal = _principal_matrix(fan)
    coeff_cols = []
    for j in range(principal.cols):
        coords = lattice_coordinates(principal.column(j), cartier)
        assert coords is not None, "principal divisors are always Cartier"
        coeff_cols.append(coords)
    pic = cokernel(IntMatrix.from_columns(coeff_cols, rows=cartier.cols))

    a, b, max_idx = _cartier_system(fan)
    compat_rows = [a.row(i) for i in range(a.rows) if not any(b.row(i))]
    compat = IntMatrix.from_rows([list(row) for row in compat_rows], cols=a.cols)
    plf_basis = kernel_basis(compat)
    plf_matrix = IntMatrix.from_columns(plf_basis, rows=a.cols) if plf_basis else IntMatrix.zero(a.cols, 0)
    reducers: list[Vector] = []
    for slot, idx in enumerate(max_idx):
        perp = kernel_basis(
            IntMatrix.from_rows([list(g) for g in fan.cones[idx].cone.generators], cols=r)
        )
        for v in perp:
            vec = [0] * a.cols
            vec[slot * r : (slot + 1) * r] = list(v)
            reducers.append(tuple(vec))
    for j in range(r):
        vec = [0] * a.cols
        for slot in range(len(max_idx)):
            vec[slot * r + j] = 1
        reducers.append(tuple(vec))
    coords_cols = []
    for v in reducers:
        coords = lattice_coordinates(v, plf_matrix)
        assert coords is not None, "gauge and linear tuples satisfy compatibility"
        coords_cols.append(coords)
    plf_mod_lf = cokernel(IntMatrix.from_columns(coords_cols, rows=plf_matrix.cols))

    support_gens = [g for cc in fan.cones for g in cc.cone.generators]
    span_rank = rank(IntMatrix.from_rows([list(g) for g in support_gens], cols=r)) if support_gens else 0
    span_perp = kernel_basis(IntMatrix.from_rows([list(g) for g in support_gens], cols=r))
    unused = sorted(fan.lattice.colour_roots() - fan.colour_set())
    image_rows = [[dot(m, fan.lattice.point(root)) for root in unused] for m in span_perp]
    span_perp_image_rank = (
        rank(IntMatrix.from_rows(image_rows, cols=len(unused))) if image_rows else 0
    )
    report = ExactSequenceReport(
        span_perp_rank=r - span_rank,
        unused_colour_count=len(unused),
        span_perp_image_rank=span_perp_image_rank,
        plf_rank=plf_mod_lf.free_rank,
        pic_rank=pic.free_rank,
        rank_consistent=pic.free_rank
        == len(unused) - span_perp_image_rank + plf_mod_lf.free_rank,
    )
    return PicardResult(pic, plf_mod_lf, report)


def positivity_check(
    delta: BInvariantDivisor, fan: ColouredFan, datum: HorosphericalDatum
) -> tuple[bool, bool, bool]:
    """(cartier, basepoint_free, ample) for a divisor on a complete fan.

    Convexity of the associated piecewise linear function is checked on ray
    generators of each maximal cone, strictly on generators outside the other
    cone; colours outside F(Sigma^c) must satisfy phi(u_alpha) <= a_alpha
    (strictly for ample).
    """
    _require_lattice(fan, datum)
    plain = PlainFan.from_cones(fan.lattice.rank, [cc.cone for cc in fan.cones])
    if not fan_is_complete(plain):
        raise NotCompleteError("positivity criteria require a complete fan")
    data = cartier_data(delta, fan)
    if data is None:
        return False, False, False
    max_idx = [idx for idx, _ in data.pieces]
    convex = True
    strictly = True
    for i, j in itertools.permutations(max_idx, 2):
        mi, mj = data.covector(i), data.covector(j)
        other = fan.cones[j].cone
        for u in fan.cones[i].cone.generators:
            gap = dot(mi, u) - dot(mj, u)
            if gap < 0:
                convex = False
            if not other.contains(u) and gap <= 0:
                strictly = False
    bpf, ample = convex, convex and strictly
    for root in sorted(fan.lattice.colour_roots() - fan.colour_set()):
        point = fan.lattice.point(root)
        value = data.value(fan, point)
        bound = delta.colour_coefficient(root)
        if value > bound:
            bpf = False
        if value >= bound:
            ample = False
    return True, bpf, ample


def anticanonical(fan: ColouredFan, datum: HorosphericalDatum) -> BInvariantDivisor:
    """-K_X: every invariant ray with coefficient 1, colours with b_alpha.

    b_alpha sums the coroot pairings of the positive roots outside R_I and is
    always at least 2.
    """
    _require_lattice(fan, datum)
    group = datum.group
    outside = [
        gamma
        for gamma in positive_roots(group)
        if not _supported_on_parabolic(group, gamma, datum.parabolic)
    ]
    colour_coeffs = []
    for colour in fan.lattice.colours:
        b = sum(pairing(group, gamma, colour.root) for gamma in outside)
        assert b >= 2, "anticanonical colour coefficients are at least 2"
        colour_coeffs.append((colour.root, b))
    return BInvariantDivisor(
        ray_coeffs=tuple((g, 1) for g in invariant_ray_generators(fan)),
        colour_coeffs=tuple(colour_coeffs),
    )


def _supported_on_parabolic(group, gamma, parabolic: frozenset[int]) -> bool:
    ci, coords = gamma
    return all(
        coords[k] == 0 or group.global_index(ci, k) in parabolic for k in range(len(coords))
    )
