"""Exact rational LP feasibility for systems  A x = b,  x >= 0.

Phase-I simplex over Fractions with Bland's rule.  Feasible systems yield
an exact basic solution; infeasible ones yield a Farkas vector y with
y.A <= 0 componentwise and y.b > 0, the replayable infeasibility
certificate.  Problem sizes here are group-sized, so a dense tableau is
fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass
class LPResult:
    feasible: bool
    solution: list[Fraction] | None  # length = number of x-variables
    farkas: list[Fraction] | None    # length = number of constraints


def solve_feasibility(a_rows: list[list], b: list) -> LPResult:
    m = len(a_rows)
    if m == 0:
        return LPResult(True, [], None)
    n = len(a_rows[0])
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    signs: list[int] = []
    for i in range(m):
        bi = Fraction(b[i])
        sign = -1 if bi < 0 else 1
        rows.append([sign * Fraction(v) for v in a_rows[i]])
        rhs.append(abs(bi))
        signs.append(sign)

    # artificial starting basis; zrow[j] = zeta . A_j on the x-columns,
    # where zeta = c_B B^{-1} with phase-I costs (x: 0, artificial: 1).
    # Artificial variables never re-enter, so entering columns always have
    # cost 0 and the textbook update rule applies unchanged.
    basis = [n + i for i in range(m)]
    zrow = [sum(rows[i][j] for i in range(m)) for j in range(n)]
    zval = sum(rhs, Fraction(0))

    while True:
        enter = -1
        for j in range(n):
            if zrow[j] > 0 and j not in basis:
                enter = j
                break  # Bland's rule: smallest index
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            if rows[i][enter] > 0:
                ratio = rhs[i] / rows[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            raise RuntimeError("phase-I simplex unbounded; formulation bug")
        piv = rows[leave][enter]
        rows[leave] = [v / piv for v in rows[leave]]
        rhs[leave] /= piv
        for i in range(m):
            if i != leave and rows[i][enter]:
                f = rows[i][enter]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[leave])]
                rhs[i] -= f * rhs[leave]
        f = zrow[enter]
        zrow = [v - f * w for v, w in zip(zrow, rows[leave])]
        zval -= f * rhs[leave]
        basis[leave] = enter

    if zval == 0:
        x = [Fraction(0)] * n
        for i, var in enumerate(basis):
            if var < n:
                x[var] = rhs[i]
        return LPResult(True, x, None)

    # Infeasible: recover zeta by solving zeta . B = c_B on the final
    # basis (columns of the sign-normalized [A | I]), then undo the signs.
    cols = []
    costs = []
    for var in basis:
        if var < n:
            cols.append([signs[i] * Fraction(a_rows[i][var]) for i in range(m)])
            costs.append(Fraction(0))
        else:
            unit = [Fraction(0)] * m
            unit[var - n] = Fraction(1)
            cols.append(unit)
            costs.append(Fraction(1))
    y = _solve_transposed(cols, costs)
    y = [signs[i] * y[i] for i in range(m)]
    if not verify_farkas(a_rows, b, y):
        raise RuntimeError("farkas recovery failed; simplex bug")
    return LPResult(False, None, y)


def _solve_transposed(cols: list[list[Fraction]], costs: list[Fraction]):
    """Solve y . cols[k] = costs[k] for all k (square system, exact)."""
    m = len(cols)
    mat = [[cols[k][i] for i in range(m)] + [costs[k]] for k in range(m)]
    for c in range(m):
        piv = next((r for r in range(c, m) if mat[r][c]), None)
        if piv is None:
            raise RuntimeError("singular basis in farkas recovery")
        mat[c], mat[piv] = mat[piv], mat[c]
        inv = 1 / mat[c][c]
        mat[c] = [v * inv for v in mat[c]]
        for r in range(m):
            if r != c and mat[r][c]:
                f = mat[r][c]
                mat[r] = [v - f * w for v, w in zip(mat[r], mat[c])]
    return [mat[i][m] for i in range(m)]


def verify_farkas(a_rows: list[list], b: list, y: list[Fraction]) -> bool:
    """Replay an infeasibility certificate: y.A <= 0 componentwise, y.b > 0."""
    m = len(a_rows)
    if len(y) != m:
        return False
    n = len(a_rows[0]) if m else 0
    for j in range(n):
        if sum(y[i] * Fraction(a_rows[i][j]) for i in range(m)) > 0:
            return False
    return sum(y[i] * Fraction(b[i]) for i in range(m)) > 0
