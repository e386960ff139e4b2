"""Exact rational linear programming, just enough for strict-feasibility checks.

A small dense simplex over `fractions.Fraction` with Bland's rule, so it
terminates and never sees a rounding error.  Problems are given in the form

    maximize c.x   subject to  A x <= b,  x >= 0,  b >= 0,

which is all the projectivity test needs (free variables are split by the
caller).  With b >= 0 the slack basis is feasible and no phase-1 is required.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" or "unbounded"
    value: Optional[Fraction]
    solution: Optional[tuple[Fraction, ...]]


def maximize(
    c: Sequence[Fraction],
    a_ub: Sequence[Sequence[Fraction]],
    b_ub: Sequence[Fraction],
    cancelled=None,
) -> LpResult:
    n = len(c)
    m = len(a_ub)
    if any(len(row) != n for row in a_ub) or len(b_ub) != m:
        raise ValueError("inconsistent LP dimensions")
    if any(b < 0 for b in b_ub):
        raise ValueError("this solver requires b >= 0 (slack basis start)")

    # tableau rows: [A | I | b]; objective row: [-c | 0 | 0]
    width = n + m + 1
    tab = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(m)] + [Fraction(b_ub[i])] for i, row in enumerate(a_ub)]
    obj = [-Fraction(x) for x in c] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]

    while True:
        if cancelled is not None and cancelled():
            raise InterruptedError("LP cancelled")
        # Bland: entering variable = smallest index with negative reduced cost
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        # ratio test, ties broken by smallest basis variable (Bland)
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][width - 1] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return LpResult("unbounded", None, None)
        pivot = tab[leave][enter]
        tab[leave] = [x / pivot for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, tab[leave])]
        basis[leave] = enter

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tab[i][width - 1]
    return LpResult("optimal", obj[width - 1], tuple(x))
