"""Exact rational polyhedral cones, polyhedra and finite unions of polyhedra.

Cones carry both descriptions (inequalities/equalities and rays/lines) in a
canonical form, so equal cones serialize identically. Polyhedra are stored by
inequalities ``a.x >= b`` (optionally strict) and equalities ``a.x == b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd, lcm
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import EmptyError, InputError
from .lp import OPTIMAL, UNBOUNDED, feasible_point, solve_lp, strict_point

Vec = tuple[Fraction, ...]


# ---------------------------------------------------------------- vectors


def frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    if hasattr(v, "numerator") and hasattr(v, "denominator"):
        return Fraction(int(v.numerator), int(v.denominator))
    raise InputError(f"not an exact rational: {v!r}")


def vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def primitive(v: Sequence) -> Vec:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    v = [frac(x) for x in v]
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        return tuple(Fraction(0) for _ in v)
    return tuple(Fraction(x // g) for x in ints)


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [[frac(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vec]:
    R, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(tuple(v))
    return basis


def _reduce_mod(v: Sequence[Fraction], R: list[list[Fraction]], piv: list[int]) -> list[Fraction]:
    v = list(v)
    for row, p in zip(R, piv):
        if v[p] != 0:
            f = v[p]
            v = [x - f * y for x, y in zip(v, row)]
    return v


def _canon_subspace(rows: Sequence[Sequence], d: int) -> tuple[tuple[Vec, ...], list, list]:
    R, piv = rref(rows, d)
    out = []
    for r in R:
        out.append(primitive(r))
    return tuple(sorted(out)), R, piv


def _canon_half(rows: Iterable[Sequence], R, piv) -> tuple[Vec, ...]:
    seen = set()
    for r in rows:
        v = primitive(_reduce_mod(r, R, piv))
        if any(v):
            seen.add(v)
    return tuple(sorted(seen))


# ------------------------------------------------------ double description


def _dd(d: int, ineqs: Sequence[Sequence], eqs: Sequence[Sequence]) -> tuple[list[list], list[list]]:
    """Extreme rays and a lineality basis of ``{A x >= 0, B x = 0}``."""
    lines = [[mpq(x.numerator, x.denominator) for x in v] for v in nullspace(eqs, d)]
    rays: list[list] = []
    zsets: list[frozenset] = []
    A = [[mpq(frac(x).numerator, frac(x).denominator) for x in a] for a in ineqs]

    def dp(a, v):
        s = mpq(0)
        for x, y in zip(a, v):
            if x and y:
                s += x * y
        return s

    for k, a in enumerate(A):
        vals = [dp(a, l) for l in lines]
        j0 = next((j for j, v in enumerate(vals) if v != 0), None)
        if j0 is not None:
            l0 = lines[j0]
            a0 = vals[j0]
            new_lines = []
            for j, l in enumerate(lines):
                if j == j0:
                    continue
                f = vals[j] / a0
                new_lines.append([x - f * y for x, y in zip(l, l0)] if f else l)
            new_rays = []
            for r in rays:
                f = dp(a, r) / a0
                new_rays.append([x - f * y for x, y in zip(r, l0)] if f else r)
            rays = new_rays
            zsets = [z | {k} for z in zsets]
            lines = new_lines
            rays.append(l0 if a0 > 0 else [-x for x in l0])
            zsets.append(frozenset(range(k)))
            continue
        vr = [dp(a, r) for r in rays]
        pos = [i for i, v in enumerate(vr) if v > 0]
        neg = [i for i, v in enumerate(vr) if v < 0]
        zer = [i for i, v in enumerate(vr) if v == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_z = [zsets[i] for i in pos] + [zsets[i] | {k} for i in zer]
        for p in pos:
            for q in neg:
                common = zsets[p] & zsets[q]
                adjacent = True
                for i in range(len(rays)):
                    if i != p and i != q and common <= zsets[i]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                r = [vr[p] * y - vr[q] * x for x, y in zip(rays[p], rays[q])]
                new_rays.append(_prim_q(r))
                new_z.append(common | {k})
        rays = new_rays
        zsets = new_z
    return rays, lines


def _prim_q(v: list) -> list:
    den = reduce(lcm, (int(x.denominator) for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints), 0) or 1
    return [mpq(x // g) for x in ints]


def _to_vecs(vs) -> list[Vec]:
    return [tuple(Fraction(int(x.numerator), int(x.denominator)) for x in v) for v in vs]


# ------------------------------------------------------------------- cones


@dataclass(frozen=True)
class Cone:
    """Closed polyhedral cone ``{x : a.x >= 0 (ineqs), b.x == 0 (eqs)}``."""

    dim: int
    ineqs: tuple[Vec, ...]
    eqs: tuple[Vec, ...]
    rays: tuple[Vec, ...]
    lines: tuple[Vec, ...]

    @property
    def is_zero(self) -> bool:
        return not self.rays and not self.lines

    @property
    def dimension(self) -> int:
        return self.dim - len(self.eqs)

    @property
    def is_pointed(self) -> bool:
        return not self.lines

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        return all(dot(a, x) >= 0 for a in self.ineqs) and all(dot(b, x) == 0 for b in self.eqs)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "hrep": {"ineqs": [_ser(v) for v in self.ineqs], "eqs": [_ser(v) for v in self.eqs]},
            "vrep": {"rays": [_ser(v) for v in self.rays], "lines": [_ser(v) for v in self.lines]},
        }


def _ser(v: Sequence[Fraction]) -> list[str]:
    return [str(x) for x in v]


def _check_rows(rows, d):
    out = []
    for r in rows:
        r = vec(r)
        if len(r) != d:
            raise InputError(f"row of length {len(r)} in dimension {d}")
        out.append(r)
    return out


def _finish(d: int, rays: list[Vec], lines: list[Vec], ineqs: list[Vec], eqs: list[Vec]) -> Cone:
    clines, LR, Lp = _canon_subspace(lines, d)
    crays = _canon_half(rays, LR, Lp)
    ceqs, ER, Ep = _canon_subspace(eqs, d)
    cineqs = _canon_half(ineqs, ER, Ep)
    return Cone(d, cineqs, ceqs, crays, clines)


def cone_from_h(d: int, ineqs: Sequence[Sequence] = (), eqs: Sequence[Sequence] = ()) -> Cone:
    ineqs = _check_rows(ineqs, d)
    eqs = _check_rows(eqs, d)
    rays, lines = _dd(d, ineqs, eqs)
    return cone_from_v(d, _to_vecs(rays), _to_vecs(lines))


def cone_from_v(d: int, rays: Sequence[Sequence] = (), lines: Sequence[Sequence] = ()) -> Cone:
    rays = [r for r in _check_rows(rays, d) if any(r)]
    lines = [l for l in _check_rows(lines, d) if any(l)]
    facets, eqlines = _dd(d, rays, lines)
    ineqs = _to_vecs(facets)
    eqs = _to_vecs(eqlines)
    # minimal generators: extreme rays of the cone itself
    r2, l2 = _dd(d, ineqs, eqs)
    return _finish(d, _to_vecs(r2), _to_vecs(l2), ineqs, eqs)


def hv_convert(cone: Cone) -> Cone:
    """Complete and canonicalize whichever description is present."""
    if cone.ineqs or cone.eqs or not (cone.rays or cone.lines):
        if cone.ineqs or cone.eqs:
            return cone_from_h(cone.dim, cone.ineqs, cone.eqs)
        if not (cone.rays or cone.lines):
            return cone_from_h(cone.dim)
    return cone_from_v(cone.dim, cone.rays, cone.lines)


def cone_from_json(obj: dict) -> Cone:
    """Parse cone JSON with an ``hrep`` and/or a ``vrep`` (``hrep`` wins when both appear)."""
    try:
        d = int(obj["dim"])
    except (KeyError, TypeError, ValueError):
        raise InputError("cone JSON needs an integer 'dim'") from None
    h, v = obj.get("hrep"), obj.get("vrep")
    if h is not None:
        return cone_from_h(d, h.get("ineqs", []), h.get("eqs", []))
    if v is not None:
        return cone_from_v(d, v.get("rays", []), v.get("lines", []))
    raise InputError("cone JSON needs 'hrep' or 'vrep'")


def zero_cone(d: int) -> Cone:
    return cone_from_v(d)


def full_cone(d: int) -> Cone:
    return cone_from_h(d)


def polar(A: Cone) -> Cone:
    """``{y : <x, y> >= 0 for all x in A}``."""
    return cone_from_h(A.dim, A.rays, A.lines)


def antipode(A: Cone) -> Cone:
    neg = lambda vs: [tuple(-x for x in v) for v in vs]
    return cone_from_v(A.dim, neg(A.rays), A.lines)


def minkowski_sum(cones: Sequence[Cone]) -> Cone:
    if not cones:
        raise InputError("empty list of cones")
    d = cones[0].dim
    if any(c.dim != d for c in cones):
        raise InputError("dimension mismatch")
    rays = [r for c in cones for r in c.rays]
    lines = [l for c in cones for l in c.lines]
    return cone_from_v(d, rays, lines)


def intersect_cones(cones: Sequence[Cone]) -> Cone:
    d = cones[0].dim
    if any(c.dim != d for c in cones):
        raise InputError("dimension mismatch")
    return cone_from_h(d, [a for c in cones for a in c.ineqs], [b for c in cones for b in c.eqs])


def is_proper_wrt(A: Cone, xi: Sequence) -> bool:
    """True iff every nonzero point of ``A`` pairs strictly positively with ``xi``."""
    xi = vec(xi)
    if len(xi) != A.dim:
        raise InputError("dimension mismatch")
    if not any(xi):
        raise InputError("direction must be nonzero")
    return not A.lines and all(dot(r, xi) > 0 for r in A.rays)


def cone_subset(A: Cone, B: Cone) -> bool:
    return all(B.contains(r) for r in A.rays) and all(
        B.contains(l) and B.contains(tuple(-x for x in l)) for l in A.lines
    )


def cone_equal(A: Cone, B: Cone) -> bool:
    return A == B


def cone_rel_int_point(A: Cone) -> Vec:
    """Sum of generators: lies in the relative interior."""
    v = [Fraction(0)] * A.dim
    for r in A.rays:
        v = [x + y for x, y in zip(v, r)]
    return tuple(v)


def embed(A: Cone, d: int, coords: Sequence[int]) -> Cone:
    """Place cone ``A`` on the given coordinates of R^d (zero elsewhere)."""

    def lift(v):
        out = [Fraction(0)] * d
        for c, x in zip(coords, v):
            out[c] = x
        return tuple(out)

    return cone_from_v(d, [lift(r) for r in A.rays], [lift(l) for l in A.lines])


# ----------------------------------------------------------------- polyhedra


@dataclass(frozen=True)
class Polyhedron:
    """``{x : a.x >= b (ineqs), a.x > b where strict, a.x == b (eqs)}``."""

    dim: int
    ineqs: tuple[tuple[Vec, Fraction], ...] = ()
    eqs: tuple[tuple[Vec, Fraction], ...] = ()
    strict: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        if not self.strict:
            object.__setattr__(self, "strict", tuple(False for _ in self.ineqs))
        if len(self.strict) != len(self.ineqs):
            raise InputError("strict flags do not match inequalities")
        for a, _ in self.ineqs + self.eqs:
            if len(a) != self.dim:
                raise InputError(f"row of length {len(a)} in dimension {self.dim}")

    # construction helpers
    @staticmethod
    def make(d: int, ineqs: Iterable = (), eqs: Iterable = (), strict: Iterable | None = None) -> "Polyhedron":
        I = tuple((vec(a), frac(b)) for a, b in ineqs)
        E = tuple((vec(a), frac(b)) for a, b in eqs)
        S = tuple(bool(s) for s in strict) if strict is not None else tuple(False for _ in I)
        return Polyhedron(d, I, E, S)

    @staticmethod
    def from_cone(A: Cone) -> "Polyhedron":
        z = Fraction(0)
        return Polyhedron(A.dim, tuple((a, z) for a in A.ineqs), tuple((b, z) for b in A.eqs))

    @staticmethod
    def whole(d: int) -> "Polyhedron":
        return Polyhedron(d)

    @property
    def is_closed(self) -> bool:
        return not any(self.strict)

    def closure(self) -> "Polyhedron":
        return Polyhedron(self.dim, self.ineqs, self.eqs)

    def _lp_rows(self):
        ge = [(a, b) for (a, b), s in zip(self.ineqs, self.strict) if not s]
        gt = [(a, b) for (a, b), s in zip(self.ineqs, self.strict) if s]
        return ge, gt, list(self.eqs)

    def point(self) -> Vec | None:
        ge, gt, eq = self._lp_rows()
        return strict_point(self.dim, ge, gt, eq)

    def is_empty(self) -> bool:
        return self.point() is None

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        if len(x) != self.dim:
            raise InputError("dimension mismatch")
        for (a, b), s in zip(self.ineqs, self.strict):
            v = dot(a, x)
            if v < b or (s and v == b):
                return False
        return all(dot(a, x) == b for a, b in self.eqs)

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        if other.dim != self.dim:
            raise InputError("dimension mismatch")
        return Polyhedron(self.dim, self.ineqs + other.ineqs, self.eqs + other.eqs, self.strict + other.strict)

    def add(self, ineqs: Iterable = (), eqs: Iterable = (), strict: bool = False) -> "Polyhedron":
        I = tuple((vec(a), frac(b)) for a, b in ineqs)
        E = tuple((vec(a), frac(b)) for a, b in eqs)
        return Polyhedron(self.dim, self.ineqs + I, self.eqs + E, self.strict + tuple(strict for _ in I))

    def negate(self) -> "Polyhedron":
        return Polyhedron(
            self.dim,
            tuple((tuple(-x for x in a), b) for a, b in self.ineqs),
            tuple((tuple(-x for x in a), b) for a, b in self.eqs),
            self.strict,
        )

    def homogenized(self) -> Cone:
        """Cone over ``cl(self) x {1}`` together with ``x0 >= 0``."""
        d = self.dim
        rows = [tuple(a) + (-b,) for a, b in self.ineqs]
        rows.append(tuple([Fraction(0)] * d) + (Fraction(1),))
        eqs = [tuple(a) + (-b,) for a, b in self.eqs]
        return cone_from_h(d + 1, rows, eqs)

    def vrep(self) -> tuple[list[Vec], list[Vec], list[Vec]]:
        """(vertices-or-points, rays, lines) of the closure; empty lists if empty."""
        H = self.homogenized()
        pts, rays = [], []
        for r in H.rays:
            if r[-1] > 0:
                pts.append(tuple(x / r[-1] for x in r[:-1]))
            else:
                rays.append(r[:-1])
        lines = [l[:-1] for l in H.lines]
        # lines of H have x0 == 0 because x0 >= 0 is valid
        if not pts:
            return [], [], []
        return pts, rays, lines

    def canonical(self) -> "Polyhedron":
        """Minimal canonical closed description (empty sets map to a fixed form)."""
        H = self.homogenized()
        d = self.dim
        if not any(r[-1] > 0 for r in H.rays):
            return empty_polyhedron(d)
        top = tuple([Fraction(0)] * d) + (Fraction(1),)
        I = tuple((a[:-1], -a[-1]) for a in H.ineqs if a != top)
        E = tuple((b[:-1], -b[-1]) for b in H.eqs)
        return Polyhedron(d, I, E)

    def relative_interior_point(self) -> Vec:
        ge, gt, eq = self._lp_rows()
        implicit = []
        loose = []
        for a, b in ge:
            res = solve_lp(self.dim, a, ge + gt, eq, maximize=True)
            if res.status == OPTIMAL and res.value == b:
                implicit.append((a, b))
            elif res.status != OPTIMAL and res.status != UNBOUNDED:
                raise EmptyError("empty polyhedron")
            else:
                loose.append((a, b))
        p = strict_point(self.dim, [], gt + loose, eq + implicit)
        if p is None:
            raise EmptyError("empty polyhedron")
        return p

    def dimension(self) -> int:
        """Affine dimension; -1 when empty."""
        if self.is_empty():
            return -1
        ge, gt, eq = self._lp_rows()
        implicit = [a for a, b in eq]
        for a, b in ge:
            res = solve_lp(self.dim, a, ge + gt, eq, maximize=True)
            if res.status == OPTIMAL and res.value == b:
                implicit.append(a)
        return self.dim - rank(implicit, self.dim)

    def to_json(self) -> dict:
        out = {
            "dim": self.dim,
            "ineqs": [_ser(a) for a, _ in self.ineqs],
            "rhs": [str(b) for _, b in self.ineqs],
            "eqs": [_ser(a) for a, _ in self.eqs],
            "eq_rhs": [str(b) for _, b in self.eqs],
        }
        if any(self.strict):
            out["strict"] = list(self.strict)
        return out

    @staticmethod
    def from_json(obj: dict) -> "Polyhedron":
        d = int(obj["dim"])
        ineqs = obj.get("ineqs", [])
        rhs = obj.get("rhs", ["0"] * len(ineqs))
        eqs = obj.get("eqs", [])
        erhs = obj.get("eq_rhs", ["0"] * len(eqs))
        if len(rhs) != len(ineqs) or len(erhs) != len(eqs):
            raise InputError("rhs length mismatch")
        return Polyhedron.make(d, zip(ineqs, rhs), zip(eqs, erhs), obj.get("strict"))


def empty_polyhedron(d: int) -> Polyhedron:
    z = tuple([Fraction(0)] * d)
    return Polyhedron(d, ((z, Fraction(1)),))


def poly_key(P: Polyhedron):
    return (P.ineqs, P.eqs, P.strict)


def poly_subset(P: Polyhedron, Q: Polyhedron) -> bool:
    """``P ⊆ Q`` for closed ``Q`` (``P`` may carry strict rows)."""
    if P.is_empty():
        return True
    ge, gt, eq = P.closure()._lp_rows()
    for (a, b), s in zip(Q.ineqs, Q.strict):
        res = solve_lp(P.dim, a, ge, eq, maximize=False)
        if res.status == UNBOUNDED or res.value < b:
            return False
        if s and res.value == b:
            # touching the boundary: fine only if P avoids it (P open there)
            if not P.add(eqs=[(a, b)]).is_empty():
                return False
    for a, b in Q.eqs:
        lo = solve_lp(P.dim, a, ge, eq, maximize=False)
        hi = solve_lp(P.dim, a, ge, eq, maximize=True)
        if lo.status != OPTIMAL or hi.status != OPTIMAL or lo.value != b or hi.value != b:
            return False
    return True


def project(P: Polyhedron, keep: Sequence[int]) -> Polyhedron:
    """Closure of the image of ``P`` under the coordinate projection onto ``keep``."""
    pts, rays, lines = P.closure().vrep()
    if not pts:
        return empty_polyhedron(len(keep))
    d = len(keep)
    gens = [tuple(p[i] for i in keep) + (Fraction(1),) for p in pts]
    gens += [tuple(r[i] for i in keep) + (Fraction(0),) for r in rays]
    lgens = [tuple(l[i] for i in keep) + (Fraction(0),) for l in lines]
    H = cone_from_v(d + 1, gens, lgens)
    top = tuple([Fraction(0)] * d) + (Fraction(1),)
    I = tuple((a[:-1], -a[-1]) for a in H.ineqs if a != top)
    E = tuple((b[:-1], -b[-1]) for b in H.eqs)
    return Polyhedron(d, I, E)


# ------------------------------------------------------------------ PolySet


@dataclass(frozen=True)
class PolySet:
    """Finite union of polyhedra of a common dimension."""

    dim: int
    members: tuple[Polyhedron, ...] = ()

    @staticmethod
    def of(members: Iterable[Polyhedron], dim: int | None = None) -> "PolySet":
        ms = tuple(members)
        if dim is None:
            if not ms:
                raise InputError("dimension needed for an empty union")
            dim = ms[0].dim
        if any(m.dim != dim for m in ms):
            raise InputError("dimension mismatch in union")
        return PolySet(dim, ms)

    def contains(self, x: Sequence) -> bool:
        return any(m.contains(x) for m in self.members)

    def is_empty(self) -> bool:
        return all(m.is_empty() for m in self.members)

    def union(self, other: "PolySet") -> "PolySet":
        if other.dim != self.dim:
            raise InputError("dimension mismatch")
        return PolySet(self.dim, self.members + other.members)

    def intersect(self, other: "PolySet | Polyhedron") -> "PolySet":
        others = other.members if isinstance(other, PolySet) else (other,)
        out = []
        for a in self.members:
            for b in others:
                c = a.intersect(b)
                if not c.is_empty():
                    out.append(c)
        return PolySet(self.dim, tuple(out))

    def canonical(self) -> "PolySet":
        """Drop empty and redundant members; canonical closed forms, sorted."""
        ms = []
        for m in self.members:
            if m.is_empty():
                continue
            ms.append(m.canonical() if m.is_closed else m)
        uniq = {poly_key(m): m for m in ms}
        ms = sorted(uniq.values(), key=lambda m: _sort_key(m))
        keep = []
        for i, m in enumerate(ms):
            if any(j != i and poly_subset(m, o) and not (poly_subset(o, m) and j > i) for j, o in enumerate(ms) if o.is_closed):
                continue
            keep.append(m)
        return PolySet(self.dim, tuple(keep))

    def to_json(self) -> dict:
        return {"dim": self.dim, "members": [m.to_json() for m in self.members]}

    @staticmethod
    def from_json(obj: dict) -> "PolySet":
        d = int(obj["dim"])
        return PolySet.of((Polyhedron.from_json({"dim": d, **m}) for m in obj.get("members", [])), d)


def _sort_key(P: Polyhedron):
    return (
        [([str(x) for x in a], str(b)) for a, b in P.ineqs],
        [([str(x) for x in a], str(b)) for a, b in P.eqs],
        P.strict,
    )


def as_polyset(A) -> PolySet:
    if isinstance(A, PolySet):
        return A
    if isinstance(A, Polyhedron):
        return PolySet(A.dim, (A,))
    if isinstance(A, Cone):
        return PolySet(A.dim, (Polyhedron.from_cone(A),))
    raise InputError(f"not a set: {type(A).__name__}")


def member(A, x: Sequence) -> bool:
    return as_polyset(A).contains(x)


def _complement_pieces(P: Polyhedron, Q: Polyhedron) -> list[Polyhedron]:
    """``P ∖ Q`` as a disjoint list of (possibly non-closed) polyhedra."""
    pieces = []
    acc = P
    for (a, b), s in zip(Q.ineqs, Q.strict):
        neg = tuple(-x for x in a)
        # outside: a.x < b (or <= b when Q's row is strict)
        pieces.append(acc.add([(neg, -b)], strict=not s))
        acc = acc.add([(a, b)], strict=s)
    for a, b in Q.eqs:
        neg = tuple(-x for x in a)
        pieces.append(acc.add([(a, b)], strict=True))
        pieces.append(acc.add([(neg, -b)], strict=True))
        acc = acc.add(eqs=[(a, b)])
    return [p for p in pieces if not p.is_empty()]


def _covered(P: Polyhedron, Qs: Sequence[Polyhedron]) -> bool:
    if P.is_empty():
        return True
    if not Qs:
        return False
    Q, rest = Qs[0], Qs[1:]
    if Q.is_closed and poly_subset(P, Q):
        return True
    return all(_covered(piece, rest) for piece in _complement_pieces(P, Q))


def subset(A, B) -> bool:
    """Exact containment of finite unions of polyhedra."""
    A, B = as_polyset(A), as_polyset(B)
    if A.dim != B.dim:
        raise InputError("dimension mismatch")
    Qs = [q for q in B.members if not q.is_empty()]
    return all(_covered(P, Qs) for P in A.members)


def set_equal(A, B) -> bool:
    return subset(A, B) and subset(B, A)


def intersect(A, B) -> PolySet:
    A, B = as_polyset(A), as_polyset(B)
    if A.dim != B.dim:
        raise InputError("dimension mismatch")
    return A.intersect(B)


def dimension(A) -> int:
    A = as_polyset(A)
    return max((m.dimension() for m in A.members), default=-1)


def relative_interior_point(A) -> Vec:
    if isinstance(A, Cone):
        return cone_rel_int_point(A)
    A = as_polyset(A)
    best = None
    for m in A.members:
        if m.is_empty():
            continue
        dm = m.dimension()
        if best is None or dm > best[0]:
            best = (dm, m)
    if best is None:
        raise EmptyError("empty set has no relative interior point")
    return best[1].relative_interior_point()


def box(d: int, center: Sequence, radius, strict: bool = False) -> Polyhedron:
    center = vec(center)
    radius = frac(radius)
    rows = []
    for i in range(d):
        e = [Fraction(0)] * d
        e[i] = Fraction(1)
        rows.append((tuple(e), center[i] - radius))
        e2 = tuple(-x for x in e)
        rows.append((e2, -center[i] - radius))
    return Polyhedron.make(d, rows, strict=[strict] * len(rows))


def l1_rows(coeff_blocks: Sequence[tuple[Sequence[int], Fraction]], d: int) -> list[Vec]:
    """Rows ``sum_j w_j * sum_{i in S_j} s_i x_i`` for every sign choice.

    Used to expand ``sum_j w_j |x_{S_j}|_1 <= (linear)`` into linear rows; the
    caller adds its own linear part.
    """
    coords = [(i, w) for S, w in coeff_blocks for i in S]
    out = []
    for signs in product((1, -1), repeat=len(coords)):
        v = [Fraction(0)] * d
        for (i, w), s in zip(coords, signs):
            v[i] += s * w
        out.append(tuple(v))
    return out
