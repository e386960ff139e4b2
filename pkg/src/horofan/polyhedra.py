"""Rational polyhedral cones and plain fans, all exact.

A cone is stored by canonical primitive generators; the inequality
description (its dual generators) is computed on demand through one
double-description engine and cached.  Cones may be non-pointed and
non-full-dimensional: the inequality description then carries the span
equalities as +/- pairs, and the generator description carries a lineality
basis as +/- pairs.  Ranks here are tiny, so every conversion is done by
exact subset enumeration rather than asymptotically clever methods.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .intlin import (
    IntMatrix,
    kernel_basis,
    rank,
    reduce_mod_lattice,
    solve_integer_affine,
    vector_gcd,
)

Vector = tuple[int, ...]


class NotPointedError(ValueError):
    """Raised when an operation requires a strongly convex cone."""


def primitive(v: Sequence[int]) -> Vector:
    g = vector_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def _unit_vectors(n: int) -> list[Vector]:
    return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _span_basis(vectors: Sequence[Vector], n: int) -> IntMatrix:
    """Canonical basis of the saturated lattice Span_Q(vectors) ∩ Z^n."""
    perp = kernel_basis(IntMatrix.from_rows(list(vectors), cols=n))
    if not perp:
        return IntMatrix.identity(n)
    return IntMatrix.from_columns(
        kernel_basis(IntMatrix.from_columns(perp, rows=n).transpose()), rows=n
    )


def _in_coordinates(vectors: Sequence[Vector], basis: IntMatrix) -> list[Vector]:
    out = []
    for v in vectors:
        sol = solve_integer_affine(basis, v)
        if sol is None:
            raise ValueError("vector outside the saturated span lattice")
        out.append(sol[0])
    return out


def _facet_normals_fulldim(vectors: Sequence[Vector], d: int) -> list[Vector]:
    """Primitive facet normals of a cone spanning R^d, given generators."""
    normals: set[Vector] = set()
    vecs = list(dict.fromkeys(vectors))
    for subset in itertools.combinations(vecs, d - 1):
        m = IntMatrix.from_rows(list(subset), cols=d)
        if rank(m) != d - 1:
            continue
        ker = kernel_basis(m)
        if len(ker) != 1:
            continue
        h = primitive(ker[0])
        vals = [dot(h, v) for v in vecs]
        if all(x >= 0 for x in vals):
            normals.add(h)
        elif all(x <= 0 for x in vals):
            normals.add(tuple(-x for x in h))
    return sorted(normals)


def dual_generators(vectors: Sequence[Vector], n: int) -> list[Vector]:
    """Canonical generators of {m : <m, v> >= 0 for all v in vectors} in Z^n.

    This single engine converts generator descriptions to inequality
    descriptions and back: the dual of Cone(V) is generated by the returned
    vectors, which also serve as an exact inequality description of Cone(V).
    """
    vecs = [tuple(v) for v in vectors if any(v)]
    if not vecs:
        return sorted(u for e in _unit_vectors(n) for u in (e, tuple(-x for x in e)))
    span = _span_basis(vecs, n)
    d = span.cols
    perp = kernel_basis(span.transpose())  # basis of the dual's lineality lattice
    coords = _in_coordinates(vecs, span)
    facets = _facet_normals_fulldim(coords, d) if d > 0 else []
    lift = span.transpose()
    perp_matrix = IntMatrix.from_columns(perp, rows=n) if perp else IntMatrix.zero(n, 0)
    out: set[Vector] = set()
    for hp in facets:
        sol = solve_integer_affine(lift, hp)
        if sol is None:
            raise AssertionError("saturated span lattice must lift covectors")
        out.add(reduce_mod_lattice(sol[0], perp_matrix))
    for p in perp:
        out.add(tuple(p))
        out.add(tuple(-x for x in p))
    return sorted(out)


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone in canonical form.

    Equal cones (as subsets of R^n) have equal generator tuples; equality and
    hashing are therefore structural.  The inequality description is cached
    write-once after first use.
    """

    ambient_rank: int
    generators: tuple[Vector, ...]
    _normals: list = field(default_factory=list, compare=False, repr=False, hash=False)

    @staticmethod
    def from_generators(ambient_rank: int, generators: Iterable[Sequence[int]]) -> "Cone":
        gens = [tuple(int(x) for x in g) for g in generators]
        if any(len(g) != ambient_rank for g in gens):
            raise ValueError("generator has wrong dimension")
        gens = [g for g in gens if any(g)]
        return Cone(ambient_rank, _canonical_generators(gens, ambient_rank))

    @staticmethod
    def from_inequalities(ambient_rank: int, normals: Iterable[Sequence[int]]) -> "Cone":
        hs = [tuple(int(x) for x in h) for h in normals]
        return Cone.from_generators(ambient_rank, dual_generators(hs, ambient_rank))

    @staticmethod
    def zero(ambient_rank: int) -> "Cone":
        return Cone(ambient_rank, ())

    def facet_normals(self) -> tuple[Vector, ...]:
        """Inequality description: the cone is exactly {u : <h, u> >= 0 for all h}."""
        if not self._normals:
            self._normals.append(tuple(dual_generators(self.generators, self.ambient_rank)))
        return self._normals[0]

    def contains(self, v: Sequence[int]) -> bool:
        return all(dot(h, v) >= 0 for h in self.facet_normals())

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators) if other.generators else True

    def dim(self) -> int:
        if not self.generators:
            return 0
        return rank(IntMatrix.from_rows(list(self.generators), cols=self.ambient_rank))

    def lineality_basis(self) -> list[Vector]:
        return kernel_basis(IntMatrix.from_rows(list(self.facet_normals()), cols=self.ambient_rank))

    def is_strongly_convex(self) -> bool:
        return not self.lineality_basis()

    def rays(self) -> list["Cone"]:
        return [c for c in faces(self) if c.dim() == 1]

    def relative_interior_point(self) -> Vector:
        """An integer point in the relative interior (the generator sum)."""
        if not self.generators:
            return (0,) * self.ambient_rank
        return tuple(sum(g[i] for g in self.generators) for i in range(self.ambient_rank))


def _canonical_generators(gens: list[Vector], n: int) -> tuple[Vector, ...]:
    if not gens:
        return ()
    normals = dual_generators(gens, n)
    lin = kernel_basis(IntMatrix.from_rows(normals, cols=n))
    if not lin:
        return _extreme_rays(gens, normals, n)
    lin_matrix = IntMatrix.from_columns(lin, rows=n)
    proj_rows = kernel_basis(lin_matrix.transpose())
    q = IntMatrix.from_rows([list(r) for r in proj_rows], cols=n)
    imaged = [g for g in (q.apply(v) for v in gens) if any(g)]
    quotient_rays = []
    if imaged:
        qnormals = dual_generators(imaged, q.rows)
        quotient_rays = _extreme_rays(imaged, qnormals, q.rows)
    out: set[Vector] = set()
    for b in lin:
        out.add(tuple(b))
        out.add(tuple(-x for x in b))
    for r in quotient_rays:
        sol = solve_integer_affine(q, r)
        if sol is None:
            raise AssertionError("quotient map by a saturated lattice is surjective")
        out.add(reduce_mod_lattice(sol[0], lin_matrix))
    return tuple(sorted(out))


def _extreme_rays(gens: list[Vector], normals: list[Vector], n: int) -> tuple[Vector, ...]:
    rays: set[Vector] = set()
    for g in gens:
        active = [h for h in normals if dot(h, g) == 0]
        m = IntMatrix.from_rows(active, cols=n) if active else IntMatrix.zero(0, n)
        if rank(m) == n - 1:
            rays.add(primitive(g))
    return tuple(sorted(rays))


def dual_cone(sigma: Cone) -> Cone:
    """The dual cone {m : <m, u> >= 0 for all u in sigma}."""
    return Cone.from_generators(sigma.ambient_rank, dual_generators(sigma.generators, sigma.ambient_rank))


def faces(sigma: Cone) -> list[Cone]:
    """All faces of sigma (including sigma and its minimal face), by dimension."""
    gens = sigma.generators
    facet_sets: list[frozenset[Vector]] = []
    for h in sigma.facet_normals():
        on = frozenset(g for g in gens if dot(h, g) == 0)
        if on != frozenset(gens):
            facet_sets.append(on)
    collected = {frozenset(gens)}
    frontier = {frozenset(gens)}
    while frontier:
        nxt = set()
        for s in frontier:
            for f in facet_sets:
                t = s & f
                if t not in collected:
                    collected.add(t)
                    nxt.add(t)
        frontier = nxt
    out = {Cone.from_generators(sigma.ambient_rank, sorted(s)) for s in collected}
    return sorted(out, key=lambda c: (c.dim(), c.generators))


def is_face_of(tau: Cone, sigma: Cone) -> bool:
    """Whether tau = sigma ∩ m⊥ for some m in the dual cone of sigma."""
    if tau.ambient_rank != sigma.ambient_rank:
        return False
    if not sigma.contains_cone(tau):
        return False
    point = tau.relative_interior_point()
    active = [h for h in sigma.facet_normals() if dot(h, point) == 0]
    smallest = [g for g in sigma.generators if all(dot(h, g) == 0 for h in active)]
    return Cone.from_generators(sigma.ambient_rank, smallest) == tau


def intersect(a: Cone, b: Cone) -> Cone:
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("cones live in different ambient ranks")
    return Cone.from_inequalities(a.ambient_rank, list(a.facet_normals()) + list(b.facet_normals()))


def is_strongly_convex(sigma: Cone) -> bool:
    return sigma.is_strongly_convex()


def cone_dim(sigma: Cone) -> int:
    return sigma.dim()


def _parallelepiped_points(basis: list[Vector], d: int) -> list[Vector]:
    lo = [sum(min(0, b[i]) for b in basis) for i in range(d)]
    hi = [sum(max(0, b[i]) for b in basis) for i in range(d)]
    m = [[Fraction(b[i]) for b in basis] for i in range(d)]
    points = []
    for coords in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        t = _solve_fraction_square(m, [Fraction(c) for c in coords])
        if t is not None and all(0 <= x <= 1 for x in t):
            points.append(coords)
    return points


def _solve_fraction_square(m: list[list[Fraction]], b: list[Fraction]) -> Optional[list[Fraction]]:
    n = len(b)
    a = [row[:] + [b[i]] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def hilbert_basis(sigma: Cone) -> list[Vector]:
    """Minimal generating set of the monoid sigma ∩ Z^n for pointed sigma.

    Candidates are enumerated inside the fundamental parallelepipeds of all
    simplicial subcones spanned by generators (Caratheodory covers the cone),
    then reduced to the irreducible elements.
    """
    if not sigma.is_strongly_convex():
        raise NotPointedError("Hilbert basis requires a strongly convex cone")
    if not sigma.generators:
        return []
    n = sigma.ambient_rank
    span = _span_basis(sigma.generators, n)
    d = span.cols
    coords = _in_coordinates(sigma.generators, span)
    normals = dual_generators(coords, d)
    candidates: set[Vector] = set()
    for subset in itertools.combinations(coords, d):
        if rank(IntMatrix.from_rows(list(subset), cols=d)) != d:
            continue
        for p in _parallelepiped_points(list(subset), d):
            if any(p):
                candidates.add(p)
    candidates.update(coords)

    def in_monoid(v: Vector) -> bool:
        return all(dot(h, v) >= 0 for h in normals)

    basis = []
    for h in sorted(candidates, key=lambda v: (sum(map(abs, v)), v)):
        reducible = False
        for c in candidates:
            diff = tuple(x - y for x, y in zip(h, c))
            if any(diff) and c != h and in_monoid(diff):
                reducible = True
                break
        if not reducible:
            basis.append(h)
    return sorted(span.apply(v) for v in basis)


@dataclass(frozen=True)
class PlainFan:
    """Finite face-closed collection of strongly convex cones."""

    ambient_rank: int
    cones: tuple[Cone, ...]

    @staticmethod
    def from_cones(ambient_rank: int, cones: Iterable[Cone]) -> "PlainFan":
        return PlainFan(ambient_rank, tuple(sorted(set(cones), key=lambda c: (c.dim(), c.generators))))

    def maximal_cones(self) -> list[Cone]:
        return [c for c in self.cones if not any(o != c and o.contains_cone(c) for o in self.cones)]


def support_contains(fan: PlainFan, u: Sequence[int]) -> bool:
    return any(c.contains(u) for c in fan.cones)


def fan_is_complete(fan: PlainFan) -> bool:
    """Exact completeness check by facet pairing.

    A fan is complete iff all maximal cones are full-dimensional, every facet
    of a maximal cone lies in exactly two maximal cones, and the facet graph
    is connected.  Rank 0 is trivially complete.
    """
    n = fan.ambient_rank
    if n == 0:
        return len(fan.cones) > 0
    maximal = fan.maximal_cones()
    if not maximal or any(c.dim() < n for c in maximal):
        return False
    facet_members: dict[Cone, list[int]] = {}
    for idx, c in enumerate(maximal):
        for f in faces(c):
            if f.dim() != n - 1:
                continue
            facet_members.setdefault(f, [])
    for f in facet_members:
        facet_members[f] = [i for i, c in enumerate(maximal) if c.contains_cone(f)]
    if any(len(owners) != 2 for owners in facet_members.values()):
        return False
    adjacency: dict[int, set[int]] = {i: set() for i in range(len(maximal))}
    for owners in facet_members.values():
        a, b = owners
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen = {0}
    queue = [0]
    while queue:
        cur = queue.pop()
        for nxt in adjacency[cur]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == len(maximal)


def covered_by(target: Cone, covers: Sequence[Cone], cancelled=None) -> bool:
    """Exact test for target ⊆ union(covers), by recursive facet splitting."""
    if cancelled is not None and cancelled():
        raise InterruptedError("polyhedral covering check cancelled")
    if not target.generators:
        # the zero cone lies in every cone
        return bool(covers)
    for c in covers:
        if c.contains_cone(target):
            return True
    if not covers:
        return False
    first, rest = covers[0], covers[1:]
    if intersect(target, first).dim() < target.dim():
        return covered_by(target, rest, cancelled)
    pieces = []
    region = target
    for h in first.facet_normals():
        if all(dot(h, g) >= 0 for g in region.generators):
            continue
        neg = tuple(-x for x in h)
        outside = intersect(region, Cone.from_inequalities(target.ambient_rank, [neg]))
        if outside.dim() == target.dim():
            pieces.append(outside)
        region = intersect(region, Cone.from_inequalities(target.ambient_rank, [h]))
    return all(covered_by(p, rest, cancelled) for p in pieces)
