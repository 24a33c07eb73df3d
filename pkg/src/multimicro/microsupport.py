"""Microsupport and support estimates, non-characteristic and hyperbolicity checks.

Conic sets live in ``T*X = R^{2n}`` with coordinates ``(x; xi)``: positions
``0..n-1`` are the base and ``n..2n-1`` the fiber, both in the original order.
Every estimate is a multi-normal cone under the dual scaling scheme.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cones import PolySet, Polyhedron, Vec, as_polyset, vec
from .deformation import MonomialScheme, apply_scheme, scheme_for_dual
from .errors import InputError, InternalConsistencyError
from .indices import IndexFamily, derive
from .multinormal import (
    IN,
    MembershipCertificate,
    SeparationCertificate,
    curve_point,
    mnc_describe,
    mnc_member,
    verify_membership,
    verify_separation,
)


@dataclass(frozen=True)
class ConicInput:
    """A union of polyhedra in ``(x; xi)``, invariant under ``xi -> c xi`` for ``c > 0``."""

    set: PolySet
    n: int

    def __post_init__(self):
        if self.set.dim != 2 * self.n:
            raise InputError(f"conic set has dimension {self.set.dim}, expected {2 * self.n}")
        for P in self.set.members:
            for (a, b) in list(P.ineqs) + list(P.eqs):
                if any(a[self.n :]) and (any(a[: self.n]) or b != 0):
                    raise InputError("a row mixes base and fiber variables or has a nonzero constant with fiber terms")

    @staticmethod
    def of(members, n: int) -> "ConicInput":
        if isinstance(members, (list, tuple)):
            return ConicInput(PolySet.of(list(members)), n)
        return ConicInput(as_polyset(members), n)

    def to_json(self) -> dict:
        out = self.set.to_json()
        out["fiber_coords"] = list(range(self.n + 1, 2 * self.n + 1))
        return out

    @staticmethod
    def from_json(obj: dict) -> "ConicInput":
        S = PolySet.from_json(obj)
        if S.dim % 2:
            raise InputError("a cotangent set needs even dimension")
        n = S.dim // 2
        fib = obj.get("fiber_coords", list(range(n + 1, 2 * n + 1)))
        if sorted(fib) != sorted(set(fib)) or len(fib) != n or not all(1 <= i <= 2 * n for i in fib):
            raise InputError("fiber_coords must list n distinct coordinates")
        base = [i for i in range(1, 2 * n + 1) if i not in fib]
        order = [i - 1 for i in base + list(fib)]
        if order != list(range(2 * n)):
            S = _permute(S, order)
        return ConicInput(S, n)


def _permute(S: PolySet, order: Sequence[int]) -> PolySet:
    """New coordinate ``k`` is old coordinate ``order[k]``."""

    def row(a):
        return tuple(a[i] for i in order)

    ms = []
    for P in S.members:
        ms.append(
            Polyhedron(P.dim, tuple((row(a), b) for a, b in P.ineqs), tuple((row(a), b) for a, b in P.eqs), P.strict)
        )
    return PolySet(S.dim, tuple(ms))


def zero_section(n: int) -> ConicInput:
    eqs = []
    for i in range(n, 2 * n):
        e = [0] * (2 * n)
        e[i] = 1
        eqs.append((e, 0))
    return ConicInput(PolySet(2 * n, (Polyhedron.make(2 * n, [], eqs),)), n)


def conormal(n: int, I: Sequence[int]) -> ConicInput:
    """``T*_Y X`` for ``Y = {x_i = 0, i in I}`` (1-based ``I``)."""
    I = set(I)
    eqs = []
    for i in range(1, n + 1):
        e = [0] * (2 * n)
        if i in I:
            e[i - 1] = 1
        else:
            e[n + i - 1] = 1
        eqs.append((e, 0))
    return ConicInput(PolySet(2 * n, (Polyhedron.make(2 * n, [], eqs),)), n)


def _as_conic(SSin, family: IndexFamily) -> ConicInput:
    if isinstance(SSin, ConicInput):
        c = SSin
    else:
        S = as_polyset(SSin)
        c = ConicInput(S, S.dim // 2)
    if c.n != family.n:
        raise InputError(f"conic set lives over R^{c.n}, family over R^{family.n}")
    return c


def ss_estimate(family: IndexFamily, SSin, guard: dict | None = None) -> PolySet:
    """The limit cone of ``SSin`` under the dual scheme."""
    c = _as_conic(SSin, family)
    g = {"ell": 3, "dim": 6} if guard is None else guard
    return mnc_describe(scheme_for_dual(family), c.set, g).cone


def s_star_slice(family: IndexFamily) -> Polyhedron:
    """``{x^(j) = 0 for j >= 1, xi^(0) = 0}`` in the dual coordinates."""
    d = derive(family)
    n = family.n
    eqs = []
    for i in range(1, n + 1):
        e = [0] * (2 * n)
        if i in d.I0:
            e[n + i - 1] = 1
        else:
            e[i - 1] = 1
        eqs.append((e, 0))
    return Polyhedron.make(2 * n, [], eqs)


def support_bound(family: IndexFamily, SSin, guard: dict | None = None) -> PolySet:
    est = ss_estimate(family, SSin, guard)
    return est.intersect(s_star_slice(family)).canonical()


# --------------------------------------------------------------- witnesses


@dataclass(frozen=True)
class SequenceWitness:
    """``c_{j,k} = 1/t_j(tau_k)``, original points ``z_k`` in ``SSin`` and their rescalings."""

    taus: tuple[Fraction, ...]
    c: tuple[tuple[Fraction, ...], ...]
    points: tuple[Vec, ...]
    scaled: tuple[Vec, ...]
    certificate: MembershipCertificate

    def to_json(self) -> dict:
        s = lambda v: [str(x) for x in v]
        return {
            "tau": s(self.taus),
            "c": [s(r) for r in self.c],
            "points": [s(r) for r in self.points],
            "scaled": [s(r) for r in self.scaled],
            "certificate": self.certificate.to_json(),
        }


@dataclass(frozen=True)
class WitnessResult:
    witness: SequenceWitness | None
    separation: SeparationCertificate | None = None

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        if self.witness is not None:
            return {"witness": self.witness.to_json()}
        return {"witness": None, "separation": self.separation.to_json()}


def seq_witness(family: IndexFamily, SSin, p0: Sequence, count: int = 8) -> WitnessResult:
    c = _as_conic(SSin, family)
    sch = scheme_for_dual(family)
    p0 = vec(p0)
    res = mnc_member(sch, c.set, p0)
    if res.verdict != IN:
        return WitnessResult(None, res.certificate)
    cert = res.certificate
    taus, cs, pts, sc = [], [], [], []
    for k in range(1, count + 1):
        tau = cert.tau0 / 2**k
        t, x = curve_point(sch, p0, cert, tau)
        taus.append(tau)
        cs.append(tuple(1 / tj for tj in t))
        pts.append(apply_scheme(sch, x, t))
        sc.append(x)
    return WitnessResult(SequenceWitness(tuple(taus), tuple(cs), tuple(pts), tuple(sc), cert))


def verify_witness(family: IndexFamily, SSin, p0: Sequence, w: SequenceWitness) -> bool:
    """Exact check of finitely many terms: membership, divergence of ``c`` and convergence."""
    c = _as_conic(SSin, family)
    sch = scheme_for_dual(family)
    p0 = vec(p0)
    closed = PolySet(c.set.dim, tuple(P.closure() for P in c.set.members))
    if not verify_membership(sch, closed, p0, w.certificate):
        return False
    bound = sum((max(abs(x) for x in v) for _, v in w.certificate.perturbation), Fraction(0))
    prev = None
    for tau, cj, z, x in zip(w.taus, w.c, w.points, w.scaled):
        if not 0 < tau < w.certificate.tau0 or not closed.contains(z):
            return False
        t = tuple(1 / v for v in cj)
        if apply_scheme(sch, x, t) != tuple(z):
            return False
        if max(abs(a - b) for a, b in zip(x, p0)) > bound * tau:
            return False
        if prev is not None and not all(a > b for a, b in zip(cj, prev)):
            return False
        prev = cj
    return len(w.taus) >= 2 and all(w.taus[i + 1] < w.taus[i] for i in range(len(w.taus) - 1))


# --------------------------------------------------- non-characteristic


@dataclass(frozen=True)
class NoncharResult:
    ok: bool
    pieces: PolySet
    witness_point: Vec | None = None
    membership: MembershipCertificate | None = None
    separations: tuple[tuple[Vec, SeparationCertificate], ...] = field(default=())

    def to_json(self) -> dict:
        out = {"noncharacteristic": self.ok, "slice": self.pieces.to_json()}
        if self.witness_point is not None:
            out["witness"] = [str(x) for x in self.witness_point]
            out["membership"] = self.membership.to_json()
        if self.separations:
            out["separations"] = [
                {"point": [str(x) for x in q], "certificate": s.to_json()} for q, s in self.separations
            ]
        return out


def _dotted_point(P: Polyhedron, fiber: Sequence[int]) -> Vec | None:
    """A point of ``P`` with some listed fiber coordinate nonzero."""
    for i in fiber:
        for s in (1, -1):
            e = [Fraction(0)] * P.dim
            e[i] = Fraction(s)
            q = P.add([(e, 0)], strict=True).point()
            if q is not None:
                return q
    return None


def noncharacteristic_check(family: IndexFamily, Ch, guard: dict | None = None) -> NoncharResult:
    """Whether the punctured ``S*`` misses the limit cone of ``Ch``.

    A ``False`` answer carries a dotted point with a membership certificate;
    ``True`` carries the slice pieces (all inside the zero covectors) and
    separation certificates at the unit covectors as an independent check.
    """
    c = _as_conic(Ch, family)
    n = family.n
    d = derive(family)
    sch = scheme_for_dual(family)
    D = support_bound(family, c, guard)
    fiber = [n + i - 1 for i in sorted(set(range(1, n + 1)) - d.I0)]
    for P in D.members:
        q = _dotted_point(P, fiber)
        if q is not None:
            res = mnc_member(sch, c.set, q)
            if res.verdict != IN:
                raise InternalConsistencyError("dotted point of the described cone failed membership")
            return NoncharResult(False, D, q, res.certificate)
    seps = []
    for i in fiber:
        for s in (1, -1):
            q = [Fraction(0)] * (2 * n)
            q[i] = Fraction(s)
            res = mnc_member(sch, c.set, q)
            if res.verdict == IN:
                raise InternalConsistencyError("unit covector is in the cone although the description misses it")
            if not verify_separation(sch, c.set, res.certificate):
                raise InternalConsistencyError("separation certificate failed")
            seps.append((tuple(q), res.certificate))
    return NoncharResult(True, D, separations=tuple(seps))


# ------------------------------------------------------- iota sharp


def iota_scheme(a: int, b: int) -> MonomialScheme:
    """One parameter scaling ``(y, xi)`` in ``(x, y; xi, eta)`` with ``x, xi in R^a``, ``y, eta in R^b``."""
    ex = [(0,)] * a + [(1,)] * b + [(1,)] * a + [(0,)] * b
    return MonomialScheme(1, tuple(ex))


def iota_sharp(A, a: int, b: int | None = None, guard: dict | None = None) -> PolySet:
    """``T*M ∩ C_{T*_M X}(A)`` returned in the coordinates ``(x; xi)``."""
    b = a if b is None else b
    S = as_polyset(A)
    dim = 2 * (a + b)
    if S.dim != dim:
        raise InputError(f"set has dimension {S.dim}, expected {dim}")
    g = {"ell": 1, "dim": max(6, dim)} if guard is None else guard
    D = mnc_describe(iota_scheme(a, b), S, g).cone
    keep = list(range(a)) + list(range(a + b, 2 * a + b))
    drop = [i for i in range(dim) if i not in keep]
    out = []
    for P in D.members:
        Q = P
        for i in drop:
            e = [0] * dim
            e[i] = 1
            Q = Q.add(eqs=[(e, 0)])
        if Q.is_empty():
            continue
        row = lambda v: tuple(v[i] for i in keep)
        out.append(
            Polyhedron(
                2 * a,
                tuple((row(v), r) for v, r in Q.ineqs if any(row(v)) or r != 0),
                tuple((row(v), r) for v, r in Q.eqs if any(row(v)) or r != 0),
                tuple(s for (v, r), s in zip(Q.ineqs, Q.strict) if any(row(v)) or r != 0),
            )
        )
    return PolySet(2 * a, tuple(out)).canonical()


def hyperbolicity_check(family: IndexFamily, Ch, guard: dict | None = None) -> bool:
    """``Ṫ*_N M ∩ ι^#(Ch) = ∅`` with ``N = {x_i = 0, i in ∪ I_j}`` inside ``M = R^n``."""
    n = family.n
    derive(family)
    I = set().union(*family.members)
    img = iota_sharp(Ch, n, n, guard)
    eqs = []
    for i in range(1, n + 1):
        e = [0] * (2 * n)
        e[(i - 1) if i in I else (n + i - 1)] = 1
        eqs.append((e, 0))
    conorm = Polyhedron.make(2 * n, [], eqs)
    fiber = [n + i - 1 for i in sorted(I)]
    return all(_dotted_point(P.intersect(conorm), fiber) is None for P in img.members)


def complexified_conormal(n: int, I: Sequence[int]) -> PolySet:
    """Conormal of ``{z_i = 0, i in I}`` in ``(x, y; xi, eta)``."""
    I = set(I)
    eqs = []
    for i in range(1, n + 1):
        for off_in, off_out in ((0, 2 * n), (n, 3 * n)):
            e = [0] * (4 * n)
            e[(off_in if i in I else off_out) + i - 1] = 1
            eqs.append((e, 0))
    return PolySet(4 * n, (Polyhedron.make(4 * n, [], eqs),))


def complexified_zero_section(n: int) -> PolySet:
    eqs = []
    for i in range(2 * n, 4 * n):
        e = [0] * (4 * n)
        e[i] = 1
        eqs.append((e, 0))
    return PolySet(4 * n, (Polyhedron.make(4 * n, [], eqs),))
