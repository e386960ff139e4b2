"""Exact integer linear algebra over arbitrary-precision integers.

Normal forms (Smith, Hermite), integer kernels and solving, lattice
saturation, and finitely generated abelian groups presented by invariant
factors.  Everything here is pure and exact: no floating point, no modular
shortcuts.  Matrices are immutable and row-major; empty matrices (0 rows or
0 columns) are legal everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, entries in row-major order."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        r = len(rows)
        if r == 0:
            return IntMatrix(0, 0 if cols is None else cols, ())
        c = len(rows[0])
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return IntMatrix(r, c, tuple(int(x) for row in rows for x in row))

    @staticmethod
    def from_columns(columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        if len(columns) == 0:
            return IntMatrix(0 if rows is None else rows, 0, ())
        r = len(columns[0])
        if any(len(col) != r for col in columns):
            raise ValueError("ragged columns")
        return IntMatrix(r, len(columns), tuple(int(columns[j][i]) for i in range(r) for j in range(len(columns))))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, (0,) * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)))

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.at(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return self.mul(other)

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch in matrix-vector product")
        return tuple(sum(self.row(i)[k] * v[k] for k in range(self.cols)) for i in range(self.rows))

    def is_diagonal(self) -> bool:
        return all(self.at(i, j) == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> Vector:
        return tuple(self.at(i, i) for i in range(min(self.rows, self.cols)))


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: Z^free_rank x Z/d_1 x ... x Z/d_k.

    The invariant factors satisfy d_1 | d_2 | ... | d_k with every d_i >= 2.
    """

    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(d < 2 for d in self.torsion):
            raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


class _Work:
    """Mutable row-list workspace shared by the normal-form routines."""

    def __init__(self, m: IntMatrix):
        self.a = m.row_list()
        self.rows = m.rows
        self.cols = m.cols

    def freeze(self) -> IntMatrix:
        return IntMatrix.from_rows(self.a, cols=self.cols)

    def swap_rows(self, i: int, j: int) -> None:
        self.a[i], self.a[j] = self.a[j], self.a[i]

    def negate_row(self, i: int) -> None:
        self.a[i] = [-x for x in self.a[i]]

    def add_row(self, dst: int, src: int, factor: int) -> None:
        self.a[dst] = [x + factor * y for x, y in zip(self.a[dst], self.a[src])]

    def combine_rows(self, i: int, j: int, p: int, q: int, r: int, s: int) -> None:
        # rows (i, j) <- (p*row_i + q*row_j, r*row_i + s*row_j); p*s - q*r = ±1
        ri, rj = self.a[i], self.a[j]
        self.a[i] = [p * x + q * y for x, y in zip(ri, rj)]
        self.a[j] = [r * x + s * y for x, y in zip(ri, rj)]

    def swap_cols(self, i: int, j: int) -> None:
        for row in self.a:
            row[i], row[j] = row[j], row[i]

    def negate_col(self, i: int) -> None:
        for row in self.a:
            row[i] = -row[i]

    def add_col(self, dst: int, src: int, factor: int) -> None:
        for row in self.a:
            row[dst] += factor * row[src]

    def combine_cols(self, i: int, j: int, p: int, q: int, r: int, s: int) -> None:
        for row in self.a:
            x, y = row[i], row[j]
            row[i] = p * x + q * y
            row[j] = r * x + s * y


def hermite_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Canonical row-style Hermite normal form.

    Returns (H, U) with H = U*m, U unimodular, H in row echelon form with
    positive pivots and every entry above a pivot reduced into [0, pivot).
    H is the unique such representative of the left-GL_n(Z) orbit of m.
    """
    h = _Work(m)
    u = _Work(IntMatrix.identity(m.rows))
    piv_row = 0
    pivots: list[tuple[int, int]] = []
    for col in range(m.cols):
        # gcd out the entries of this column at and below piv_row
        nz = [i for i in range(piv_row, m.rows) if h.a[i][col] != 0]
        if not nz:
            continue
        if nz[0] != piv_row:
            h.swap_rows(piv_row, nz[0])
            u.swap_rows(piv_row, nz[0])
        for i in range(piv_row + 1, m.rows):
            if h.a[i][col] == 0:
                continue
            a, b = h.a[piv_row][col], h.a[i][col]
            g, x, y = _xgcd(a, b)
            p, q = x, y
            r, s = -(b // g), a // g
            h.combine_rows(piv_row, i, p, q, r, s)
            u.combine_rows(piv_row, i, p, q, r, s)
        if h.a[piv_row][col] < 0:
            h.negate_row(piv_row)
            u.negate_row(piv_row)
        d = h.a[piv_row][col]
        for i in range(piv_row):
            q = h.a[i][col] // d
            if q:
                h.add_row(i, piv_row, -q)
                u.add_row(i, piv_row, -q)
        pivots.append((piv_row, col))
        piv_row += 1
        if piv_row == m.rows:
            break
    return h.freeze(), u.freeze()


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (U, D, V) with U*m*V = D.

    U and V are unimodular and D is diagonal with a divisibility chain
    d_1 | d_2 | ... on its nonnegative diagonal.
    """
    d = _Work(m)
    u = _Work(IntMatrix.identity(m.rows))
    v = _Work(IntMatrix.identity(m.cols))

    def row_step(t: int) -> bool:
        changed = False
        for i in range(t + 1, m.rows):
            if d.a[i][t] == 0:
                continue
            a, b = d.a[t][t], d.a[i][t]
            if b % a == 0:
                q = b // a
                d.add_row(i, t, -q)
                u.add_row(i, t, -q)
            else:
                g, x, y = _xgcd(a, b)
                d.combine_rows(t, i, x, y, -(b // g), a // g)
                u.combine_rows(t, i, x, y, -(b // g), a // g)
                changed = True
        return changed

    def col_step(t: int) -> bool:
        changed = False
        for j in range(t + 1, m.cols):
            if d.a[t][j] == 0:
                continue
            a, b = d.a[t][t], d.a[t][j]
            if b % a == 0:
                q = b // a
                d.add_col(j, t, -q)
                v.add_col(j, t, -q)
            else:
                g, x, y = _xgcd(a, b)
                d.combine_cols(t, j, x, y, -(b // g), a // g)
                v.combine_cols(t, j, x, y, -(b // g), a // g)
                changed = True
        return changed

    n = min(m.rows, m.cols)
    for t in range(n):
        # move a nonzero entry of the trailing block to (t, t)
        pos = None
        best = None
        for i in range(t, m.rows):
            for j in range(t, m.cols):
                e = abs(d.a[i][j])
                if e and (best is None or e < best):
                    best, pos = e, (i, j)
        if pos is None:
            break
        if pos[0] != t:
            d.swap_rows(t, pos[0])
            u.swap_rows(t, pos[0])
        if pos[1] != t:
            d.swap_cols(t, pos[1])
            v.swap_cols(t, pos[1])
        while True:
            r = row_step(t)
            c = col_step(t)
            if not (r or c):
                # both the row and the column are clear; enforce divisibility
                if d.a[t][t] != 0:
                    offender = None
                    for i in range(t + 1, m.rows):
                        for j in range(t + 1, m.cols):
                            if d.a[i][j] % d.a[t][t] != 0:
                                offender = i
                                break
                        if offender is not None:
                            break
                    if offender is not None:
                        d.add_row(t, offender, 1)
                        u.add_row(t, offender, 1)
                        continue
                break
        if d.a[t][t] < 0:
            d.negate_row(t)
            u.negate_row(t)
    return u.freeze(), d.freeze(), v.freeze()


def rank(m: IntMatrix) -> int:
    h, _ = hermite_normal_form(m)
    return sum(1 for i in range(h.rows) if any(h.row(i)))


def determinant(m: IntMatrix) -> int:
    """Exact determinant via fraction-free Bareiss elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.row_list()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m: IntMatrix) -> bool:
    return m.rows == m.cols and determinant(m) in (1, -1)


def invariant_factors(m: IntMatrix) -> Vector:
    _, d, _ = smith_normal_form(m)
    return tuple(x for x in d.diagonal() if x != 0)


def cokernel(m: IntMatrix) -> AbelianGroup:
    """Presentation of Z^rows / (column image of m) by invariant factors."""
    facs = invariant_factors(m)
    return AbelianGroup(free_rank=m.rows - len(facs), torsion=tuple(d for d in facs if d > 1))


def solve_integer_affine(m: IntMatrix, b: Sequence[int]) -> Optional[tuple[Vector, list[Vector]]]:
    """Solve m*x = b over Z.

    Returns (particular solution, basis of the integer kernel of m), or None
    when no integer solution exists.  Unsolvability is a value, not an error.
    """
    if len(b) != m.rows:
        raise ValueError("right-hand side has wrong length")
    u, d, v = smith_normal_form(m)
    ub = u.apply(b)
    n = min(m.rows, m.cols)
    y = [0] * m.cols
    for i in range(m.rows):
        di = d.at(i, i) if i < n else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di != 0:
                return None
            y[i] = ub[i] // di
    x = v.apply(y)
    r = sum(1 for i in range(n) if d.at(i, i) != 0)
    kernel = [v.column(j) for j in range(r, m.cols)]
    return x, kernel


def kernel_basis(m: IntMatrix) -> list[Vector]:
    """Canonical basis of {x in Z^cols : m*x = 0} (a saturated sublattice)."""
    _, d, v = smith_normal_form(m)
    n = min(m.rows, m.cols)
    r = sum(1 for i in range(n) if d.at(i, i) != 0)
    cols = [v.column(j) for j in range(r, m.cols)]
    if not cols:
        return []
    return column_hermite(IntMatrix.from_columns(cols, rows=m.cols)).columns()


def column_hermite(m: IntMatrix) -> IntMatrix:
    """Column-style Hermite normal form (canonical basis of the column lattice).

    Zero columns are dropped, so the result's columns are a basis.
    """
    h, _ = hermite_normal_form(m.transpose())
    cols = [h.row(i) for i in range(h.rows) if any(h.row(i))]
    return IntMatrix.from_columns(cols, rows=m.rows)


def saturate(m: IntMatrix) -> IntMatrix:
    """Saturation Span_Q(columns) ∩ Z^rows, returned as a canonical basis matrix."""
    perp = kernel_basis(m.transpose())
    if not perp:
        # columns span Q^rows: saturation is the full lattice
        return IntMatrix.identity(m.rows)
    sat = kernel_basis(IntMatrix.from_columns(perp, rows=m.rows).transpose())
    return IntMatrix.from_columns(sat, rows=m.rows)


def left_unimodular_equivalent(a: IntMatrix, b: IntMatrix) -> bool:
    """Whether U*a = b for some unimodular U (equal canonical Hermite forms)."""
    if (a.rows, a.cols) != (b.rows, b.cols):
        return False
    return hermite_normal_form(a)[0] == hermite_normal_form(b)[0]


def lattice_coordinates(v: Sequence[int], basis: IntMatrix) -> Optional[Vector]:
    """Coordinates of v in the column lattice of basis, or None if v is outside."""
    sol = solve_integer_affine(basis, v)
    return None if sol is None else sol[0]


def reduce_mod_lattice(v: Sequence[int], basis: IntMatrix) -> Vector:
    """Canonical representative of v modulo the column lattice of basis.

    The basis is put in column Hermite form first, so equal cosets reduce to
    equal representatives.
    """
    if basis.cols == 0:
        return tuple(v)
    h = column_hermite(basis)
    w = list(v)
    for j in range(h.cols):
        col = h.column(j)
        p = next(i for i in range(h.rows) if col[i] != 0)
        q = w[p] // col[p]
        if q:
            for i in range(h.rows):
                w[i] -= q * col[i]
    return tuple(w)


def vector_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g
