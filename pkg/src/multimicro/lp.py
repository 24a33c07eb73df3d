"""Exact rational linear programming.

A dense two-phase primal simplex with Bland's rule over gmpy2 rationals.
Variables are free; constraints are ``a.x >= b`` and ``a.x == b``.
Results are returned as :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

Row = tuple[Sequence, object]

_ZERO = mpq(0)


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _q(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    return mpq(v)


def _pivot(T: list[list], basis: list[int], r: int, c: int) -> None:
    row = T[r]
    inv = 1 / row[c]
    if inv != 1:
        T[r] = row = [v * inv for v in row]
    nz = [j for j, v in enumerate(row) if v]
    for i, other in enumerate(T):
        if i == r:
            continue
        f = other[c]
        if f:
            for j in nz:
                other[j] -= f * row[j]
    basis[r] = c


def _run(T: list[list], basis: list[int], ncols: int, allowed: int) -> str:
    """Maximize the objective stored in the last row (as reduced costs).

    The last row holds ``-c`` style reduced costs: a negative entry means the
    column improves the objective. Only columns ``< allowed`` may enter.
    """
    m = len(T) - 1
    obj = T[m]
    while True:
        enter = -1
        for j in range(allowed):
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        best = None
        leave = -1
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][ncols] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(T, basis, leave, enter)


def solve_lp(
    n: int,
    objective: Sequence | None = None,
    ge: Sequence[Row] = (),
    eq: Sequence[Row] = (),
    maximize: bool = True,
) -> LPResult:
    """Optimize ``objective . x`` over ``{x : a.x >= b (ge), a.x == b (eq)}``.

    With ``objective=None`` only feasibility is decided.
    """
    rows: list[tuple[list, mpq, bool]] = []
    for a, b in ge:
        if len(a) != n:
            raise ValueError("row length does not match variable count")
        rows.append(([_q(v) for v in a], _q(b), True))
    for a, b in eq:
        if len(a) != n:
            raise ValueError("row length does not match variable count")
        rows.append(([_q(v) for v in a], _q(b), False))
    m = len(rows)
    nslack = sum(1 for r in rows if r[2])
    # columns: x+ (n), x- (n), slacks, artificials, rhs
    nx = 2 * n
    ncols = nx + nslack + m
    T: list[list] = []
    basis: list[int] = []
    s = 0
    for i, (a, b, is_ge) in enumerate(rows):
        row = [_ZERO] * (ncols + 1)
        for j, v in enumerate(a):
            if v:
                row[j] = v
                row[n + j] = -v
        if is_ge:
            row[nx + s] = mpq(-1)
            s += 1
        if b < 0:
            row = [-v for v in row]
            b = -b
        row[nx + nslack + i] = mpq(1)
        row[ncols] = b
        T.append(row)
        basis.append(nx + nslack + i)
    # phase 1: minimize sum of artificials == maximize -sum
    obj = [_ZERO] * (ncols + 1)
    for i in range(m):
        for j in range(ncols + 1):
            if j < nx + nslack or j == ncols:
                obj[j] -= T[i][j]
    T.append(obj)
    _run(T, basis, ncols, nx + nslack)
    if T[m][ncols] != 0:
        return LPResult(INFEASIBLE)
    # drive artificials out of the basis
    for i in range(m):
        if basis[i] >= nx + nslack:
            for j in range(nx + nslack):
                if T[i][j]:
                    _pivot(T, basis, i, j)
                    break
    keep = [i for i in range(m) if basis[i] < nx + nslack]
    T = [T[i] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(T)
    if objective is None:
        return LPResult(OPTIMAL, _extract(T, basis, n, ncols), Fraction(0))
    c = [_q(v) for v in objective]
    if len(c) != n:
        raise ValueError("objective length does not match variable count")
    if not maximize:
        c = [-v for v in c]
    full = c + [-v for v in c] + [_ZERO] * (ncols - nx)
    obj = [-v for v in full] + [_ZERO]
    for i in range(m):
        f = obj[basis[i]]
        if f:
            row = T[i]
            obj = [o - f * rv for o, rv in zip(obj, row)]
    T.append(obj)
    status = _run(T, basis, ncols, nx + nslack)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = _extract(T, basis, n, ncols)
    val = sum((Fraction(v) * xi for v, xi in zip(objective, x)), Fraction(0))
    return LPResult(OPTIMAL, x, val)


def _extract(T, basis, n, ncols) -> tuple[Fraction, ...]:
    vals = [_ZERO] * (2 * n)
    for i, b in enumerate(basis):
        if b < 2 * n:
            vals[b] = T[i][ncols]
    return tuple(Fraction(vals[j] - vals[n + j]) for j in range(n))


def feasible_point(n: int, ge: Sequence[Row] = (), eq: Sequence[Row] = ()) -> tuple[Fraction, ...] | None:
    res = solve_lp(n, None, ge, eq)
    return res.x if res.status == OPTIMAL else None


def strict_point(
    n: int,
    ge: Sequence[Row] = (),
    gt: Sequence[Row] = (),
    eq: Sequence[Row] = (),
) -> tuple[Fraction, ...] | None:
    """A point with ``ge`` rows >=, ``gt`` rows strictly >, ``eq`` rows ==, or None."""
    if not gt:
        return feasible_point(n, ge, eq)
    # maximize s subject to a.x - b >= s for strict rows, s <= 1
    ge2 = [(list(a) + [0], b) for a, b in ge]
    ge2 += [(list(a) + [-1], b) for a, b in gt]
    ge2.append(([0] * n + [-1], -1))
    eq2 = [(list(a) + [0], b) for a, b in eq]
    obj = [0] * n + [1]
    res = solve_lp(n + 1, obj, ge2, eq2)
    if res.status != OPTIMAL or res.value <= 0:
        return None
    return res.x[:n]
