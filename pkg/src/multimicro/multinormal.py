"""Multi-normal cones of finite unions of polyhedra under monomial scaling.

For a scheme ``y_i = t^{m_i} x_i`` and a closed set ``Z``, a point ``p`` is in
the limit cone when there are ``x -> p`` and ``t -> 0`` (every coordinate of
``t``) with ``y(t, x)`` in ``Z``.

Membership is decided on monomial curves ``t_j = kappa_j tau^{w_j}``: the weight
vector ``w`` ranges over the chambers of the degree functions of the distinct
monomials, and for each chamber a lexicographic cascade of exact LPs (one per
degree level) looks for the perturbation terms. Failure everywhere is backed
by an explicit separating set. ``describe`` enumerates faces of the same
cascade symbolically, and ``oracle_member`` is an independent brute-force
check along a ladder of scales.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import lcm
from typing import Sequence

from .cones import (
    PolySet,
    Polyhedron,
    Vec,
    as_polyset,
    dot,
    frac,
    project,
    rank,
    rref,
    vec,
)
from .deformation import MonomialScheme
from .errors import (
    ConstructionError,
    InputError,
    InternalConsistencyError,
    NonPolyhedralError,
    ResourceError,
)
from .lp import OPTIMAL, solve_lp, strict_point

IN = "IN"
OUT = "OUT"
LIKELY_IN = "LIKELY_IN"
LIKELY_OUT = "LIKELY_OUT"
INCONCLUSIVE = "INCONCLUSIVE"

Mono = tuple[int, ...]

DEFAULT_GUARD = {"ell": 3, "dim": 6}


class CouplingError(NonPolyhedralError):
    """Tied monomials whose coefficients are multiplicatively coupled."""


# ------------------------------------------------------------ small helpers


def _zero(n: int) -> list[Fraction]:
    return [Fraction(0)] * n


def _deg(m: Mono, w: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(m, w))


def relint_point(nv: int, rows: Sequence[tuple[Sequence, Fraction]], eqs: Sequence[tuple[Sequence, Fraction]] = ()):
    """Point in the relative interior of ``{a.v >= b (rows), eqs}`` and its implicit rows.

    Returns ``(point, implicit)`` where ``implicit`` is the set of row indices
    that vanish on the whole set, or ``None`` when the set is empty.
    """
    rows = [(list(a), frac(b)) for a, b in rows]
    unknown = list(range(len(rows)))
    pts = []
    last = None
    while True:
        k = len(unknown)
        # variables: v (nv), s (k)
        ge = []
        for a, b in rows:
            ge.append((a + [0] * k, b))
        for idx, r in enumerate(unknown):
            a, b = rows[r]
            s = [0] * k
            s[idx] = -1
            ge.append((a + s, b))
            s2 = [0] * k
            s2[idx] = 1
            ge.append(([0] * nv + s2, 0))
            ge.append(([0] * nv + [-x for x in s2], -1))
        eq = [(list(a) + [0] * k, b) for a, b in eqs]
        obj = [0] * nv + [1] * k
        res = solve_lp(nv + k, obj if k else None, ge, eq)
        if res.status != OPTIMAL:
            return None
        last = res.x[:nv]
        if not k or res.value == 0:
            break
        pts.append(last)
        unknown = [r for idx, r in enumerate(unknown) if res.x[nv + idx] == 0]
    if pts:
        pt = tuple(sum((p[i] for p in pts), Fraction(0)) / len(pts) for i in range(nv))
    else:
        pt = tuple(last)
    return pt, frozenset(unknown)


# ----------------------------------------------------------- scheme shapes


@dataclass(frozen=True)
class SchemeShape:
    scheme: MonomialScheme
    zero: tuple[int, ...]  # coordinates with the zero monomial
    groups: tuple[Mono, ...]  # distinct nonzero monomials
    members: dict  # mono -> tuple of coordinates

    def coords(self, g: Mono) -> tuple[int, ...]:
        return self.members[g]


@lru_cache(maxsize=256)
def shape(scheme: MonomialScheme) -> SchemeShape:
    zero = tuple(i for i, m in enumerate(scheme.exponents) if not any(m))
    members: dict[Mono, list[int]] = {}
    for i, m in enumerate(scheme.exponents):
        if any(m):
            members.setdefault(m, []).append(i)
    groups = tuple(sorted(members))
    return SchemeShape(scheme, zero, groups, {g: tuple(c) for g, c in members.items()})


def tree_edges(scheme: MonomialScheme) -> dict[Mono, tuple[Mono, int]] | None:
    """Parent edges when every parameter refines exactly one group, else ``None``."""
    sh = shape(scheme)
    S = set(sh.groups)
    ell = scheme.ell
    edges: dict[Mono, tuple[Mono, int]] = {}
    used: dict[int, Mono] = {}
    for g in sh.groups:
        if any(e not in (0, 1) for e in g):
            return None
        cands = []
        for j in range(ell):
            if g[j] == 1:
                par = tuple(x - (1 if i == j else 0) for i, x in enumerate(g))
                if not any(par) or par in S:
                    cands.append((par, j))
        if len(cands) != 1:
            return None
        par, j = cands[0]
        if j in used:
            return None
        used[j] = g
        edges[g] = (par, j)
    return edges


# ---------------------------------------------------------------- chambers


@dataclass(frozen=True)
class Chamber:
    """Ordered degree levels of the nonzero monomials and a realizing weight."""

    levels: tuple[tuple[Mono, ...], ...]
    w: tuple[int, ...]
    basis: tuple[Mono, ...]  # monomials whose coefficients are chosen freely
    determined: dict  # mono -> integer exponent vector over basis
    coupled: frozenset  # monomials tied multiplicatively inside their level
    R: tuple[tuple[int, ...], ...]  # l x len(basis) integer right inverse

    def descriptor(self) -> list[list[list[int]]]:
        return [[list(g) for g in lv] for lv in self.levels]


def _weight_lp(ell: int, placed: list[list[Mono]], remaining: list[Mono]):
    ge = []
    eq = []
    for j in range(ell):
        e = [0] * ell
        e[j] = 1
        ge.append((e, 1))
    for lv in placed:
        for g in lv[1:]:
            eq.append(([a - b for a, b in zip(g, lv[0])], 0))
    for a, b in zip(placed, placed[1:]):
        ge.append(([x - y for x, y in zip(b[0], a[0])], 1))
    if placed:
        last = placed[-1][0]
        for g in remaining:
            ge.append(([x - y for x, y in zip(g, last)], 1))
    res = solve_lp(ell, None, ge, eq)
    return res.x if res.status == OPTIMAL else None


def _int_right_inverse(M: list[Mono], ell: int) -> tuple[tuple[int, ...], ...] | None:
    r = len(M)
    if r == 0:
        return tuple(() for _ in range(ell))
    for S in combinations(range(ell), r):
        sub = [[Fraction(row[c]) for c in S] for row in M]
        # invert by Gauss-Jordan
        aug = [row + [Fraction(1 if i == k else 0) for k in range(r)] for i, row in enumerate(sub)]
        R, piv = rref(aug, 2 * r)
        if piv[:r] != list(range(r)) or len(piv) < r:
            continue
        inv = [row[r:] for row in R[:r]]
        if any(x.denominator != 1 for row in inv for x in row):
            continue
        out = [[0] * r for _ in range(ell)]
        for a, c in enumerate(S):
            for b in range(r):
                out[c][b] = int(inv[a][b])
        return tuple(tuple(row) for row in out)
    return None


def _solve_int_combo(basis: list[Mono], R, g: Mono) -> tuple[int, ...]:
    return tuple(sum(g[j] * R[j][b] for j in range(len(g))) for b in range(len(basis)))


def _analyze(ell: int, levels: list[list[Mono]], w: tuple[int, ...]) -> Chamber:
    basis: list[Mono] = []
    determined_raw: list[Mono] = []
    coupled = set()
    for lv in levels:
        earlier = list(basis)
        r0 = rank(earlier, ell) if earlier else 0
        new_here: list[Mono] = []
        for g in lv:
            if earlier and rank(earlier + [g], ell) == r0:
                determined_raw.append(g)
            elif rank(earlier + new_here + [g], ell) > r0 + len(new_here):
                new_here.append(g)
            else:
                coupled.add(g)
        basis.extend(new_here)
    R = _int_right_inverse(basis, ell)
    if R is None:
        # no integral inverse: every non-basis coefficient becomes unrealizable
        return Chamber(tuple(tuple(lv) for lv in levels), w, tuple(basis), {}, frozenset(
            g for lv in levels for g in lv), tuple())
    det = {g: _solve_int_combo(basis, R, g) for g in determined_raw}
    return Chamber(tuple(tuple(lv) for lv in levels), w, tuple(basis), det, frozenset(coupled), R)


@lru_cache(maxsize=128)
def chambers(scheme: MonomialScheme) -> tuple[Chamber, ...]:
    """All realizable orderings (with ties) of the nonzero monomial degrees for ``w > 0``."""
    sh = shape(scheme)
    ell = scheme.ell
    out: list[Chamber] = []

    def rec(placed: list[list[Mono]], remaining: list[Mono]):
        if not remaining:
            x = _weight_lp(ell, placed, [])
            if x is None:
                return
            den = lcm(*(v.denominator for v in x)) if x else 1
            w = tuple(int(v * den) for v in x)
            out.append(_analyze(ell, [list(lv) for lv in placed], w))
            return
        k = len(remaining)
        for size in range(1, k + 1):
            for idx in combinations(range(k), size):
                lv = [remaining[i] for i in idx]
                rest = [remaining[i] for i in range(k) if i not in idx]
                trial = placed + [lv]
                if _weight_lp(ell, trial, rest) is not None:
                    rec(trial, rest)

    rec([], list(sh.groups))
    if not sh.groups:
        out.append(Chamber((), tuple([1] * ell), (), {}, frozenset(), tuple(() for _ in range(ell))))
    return tuple(out)


# ---------------------------------------------------------- certificates


@dataclass(frozen=True)
class MembershipCertificate:
    """Monomial curve ``t_j = kappa_j tau^{w_j}``, ``x(tau) = p + sum tau^e v_e``."""

    member: int
    w: tuple[int, ...]
    kappa: tuple[Fraction, ...]
    perturbation: tuple[tuple[int, Vec], ...]
    tau0: Fraction
    chamber: tuple = ()

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "weights": list(self.w),
            "kappa": [str(k) for k in self.kappa],
            "perturbation": [{"exponent": e, "direction": [str(x) for x in v]} for e, v in self.perturbation],
            "tau0": str(self.tau0),
            "chamber": [[list(g) for g in lv] for lv in self.chamber],
        }

    @staticmethod
    def from_json(obj: dict) -> "MembershipCertificate":
        return MembershipCertificate(
            int(obj["member"]),
            tuple(int(x) for x in obj["weights"]),
            vec(obj["kappa"]),
            tuple((int(d["exponent"]), vec(d["direction"])) for d in obj["perturbation"]),
            frac(obj["tau0"]),
            tuple(tuple(tuple(g) for g in lv) for lv in obj.get("chamber", [])),
        )


@dataclass(frozen=True)
class GRow:
    """One row of a separating set.

    ``kind == "lin"``: ``a.y >= b`` (``> b`` when strict).
    ``kind == "dom"``: ``c * s * y_k - |y_a| >= 0``.
    """

    kind: str
    a: Vec = ()
    b: Fraction = Fraction(0)
    strict: bool = False
    k: int = -1
    s: int = 1
    target: int = -1
    c: Fraction = Fraction(0)

    def to_json(self) -> dict:
        if self.kind == "lin":
            return {"kind": "lin", "a": [str(x) for x in self.a], "b": str(self.b), "strict": self.strict}
        return {"kind": "dom", "leader": self.k, "sign": self.s, "target": self.target, "c": str(self.c),
                "strict": self.strict}

    @staticmethod
    def from_json(obj: dict) -> "GRow":
        if obj["kind"] == "lin":
            return GRow("lin", vec(obj["a"]), frac(obj["b"]), bool(obj.get("strict", False)))
        return GRow("dom", strict=bool(obj.get("strict", False)), k=int(obj["leader"]), s=int(obj["sign"]),
                    target=int(obj["target"]), c=frac(obj["c"]))


@dataclass(frozen=True)
class SeparationCertificate:
    """``Z ∩ G ∩ B_r = ∅`` with ``B_r = {|y_i| <= r, i in ball}``.

    When ``p``, ``eps`` and ``T`` are present, ``G`` must also be invariant under
    the scaling for ``t`` in ``(0,1]^l`` and contain ``D(T)`` of the box of
    radius ``eps`` around ``p``: then no curve from near ``p`` can enter ``Z``.
    """

    rows: tuple[GRow, ...]
    r: Fraction
    ball: tuple[int, ...] | None = None
    p: Vec | None = None
    eps: Fraction | None = None
    T: Fraction | None = None

    def to_json(self) -> dict:
        out = {"rows": [g.to_json() for g in self.rows], "r": str(self.r)}
        if self.ball is not None:
            out["ball"] = list(self.ball)
        if self.p is not None:
            out.update({"p": [str(x) for x in self.p], "eps": str(self.eps), "T": str(self.T)})
        return out

    @staticmethod
    def from_json(obj: dict) -> "SeparationCertificate":
        return SeparationCertificate(
            tuple(GRow.from_json(g) for g in obj["rows"]),
            frac(obj["r"]),
            tuple(obj["ball"]) if "ball" in obj else None,
            vec(obj["p"]) if "p" in obj else None,
            frac(obj["eps"]) if "eps" in obj else None,
            frac(obj["T"]) if "T" in obj else None,
        )

    @staticmethod
    def from_polyhedron(G: Polyhedron, r) -> "SeparationCertificate":
        rows = tuple(GRow("lin", a, b, s) for (a, b), s in zip(G.ineqs, G.strict))
        rows += tuple(GRow("lin", a, b) for a, b in G.eqs)
        rows += tuple(GRow("lin", tuple(-x for x in a), -b) for a, b in G.eqs)
        return SeparationCertificate(rows, frac(r))


# ------------------------------------------------------- membership cascade


@dataclass
class _Level:
    coords: list[int]
    groups: list[Mono]


def _levels_of(sh: SchemeShape, ch: Chamber) -> list[_Level]:
    out = [_Level(list(sh.zero), [])]
    for lv in ch.levels:
        cs = sorted(i for g in lv for i in sh.coords(g))
        out.append(_Level(cs, list(lv)))
    return out


def _member_rows(P: Polyhedron):
    """(ineq rows, strict flags, eq rows) of a polyhedron."""
    return list(P.ineqs), list(P.strict), list(P.eqs)


def _cascade(sh: SchemeShape, ch: Chamber, P: Polyhedron, p: Vec):
    """Run the level-by-level feasibility cascade; return curve data or ``None``."""
    n = sh.scheme.dim
    levels = _levels_of(sh, ch)
    ineqs, strict, eqs = _member_rows(P)
    nonzero = {g: any(p[i] != 0 for i in sh.coords(g)) for g in sh.groups}
    for g in ch.coupled:
        if nonzero.get(g) and (not ch.R or not _in_lattice(ch, g)):
            raise CouplingError(f"monomial {g} is tied multiplicatively within its level")
    # level 0: evaluate
    y0 = _zero(n)
    for i in levels[0].coords:
        y0[i] = p[i]
    active = []
    for r, (a, b) in enumerate(ineqs):
        v = dot(a, y0) - b
        if v < 0:
            return None
        if v == 0:
            active.append(r)
    for a, b in eqs:
        if dot(a, y0) != b:
            return None
    u_levels: list[list[Fraction]] = [y0]
    sigma: dict[Mono, Fraction] = {}
    free: list[int] = list(levels[0].coords)
    for lv in levels[1:]:
        cur = lv.groups
        nz = [g for g in cur if nonzero[g]]
        nv_u = len(free)
        nv = nv_u + len(nz)

        def row_vec(a):
            v = [a[i] for i in free]
            for g in nz:
                v.append(sum((a[i] * p[i] for i in sh.coords(g)), Fraction(0)))
            return v

        rows = [(row_vec(ineqs[r][0]), Fraction(0)) for r in active]
        # positivity of the nonzero group coefficients
        for idx in range(len(nz)):
            e = [Fraction(0)] * nv
            e[nv_u + idx] = Fraction(1)
            rows.append((e, Fraction(0)))
        eq_rows = [(row_vec(a), Fraction(0)) for a, _ in eqs]
        det_nz = [g for g in nz if g in ch.determined]
        vals = {}
        for g in det_nz:
            vals[g] = _det_value(ch, sigma, g)
        for g, h in zip(det_nz, det_nz[1:]):
            e = [Fraction(0)] * nv
            e[nv_u + nz.index(g)] = vals[h]
            e[nv_u + nz.index(h)] = -vals[g]
            eq_rows.append((e, Fraction(0)))
        for g in nz:
            if g in ch.coupled:
                col = nv_u + nz.index(g)
                for v, _ in rows[: len(active)] + eq_rows[: len(eqs)]:
                    if v[col] != 0 and any(x != 0 for k, x in enumerate(v) if k != col):
                        raise CouplingError(f"monomial {g} is tied multiplicatively within its level")
        res = relint_point(nv, rows, eq_rows)
        if res is None:
            return None
        pt, implicit = res
        na = len(active)
        if any(na + idx in implicit for idx in range(len(nz))):
            return None
        scale = Fraction(1)
        if det_nz:
            g = det_nz[0]
            scale = vals[g] / pt[nv_u + nz.index(g)]
        pt = [x * scale for x in pt]
        y = _zero(n)
        for i, v in zip(free, pt[:nv_u]):
            y[i] = v
        for idx, g in enumerate(nz):
            if g not in ch.coupled:
                sigma[g] = pt[nv_u + idx]
        for g in cur:
            if g not in sigma and not (g in ch.coupled and g in nz):
                sigma[g] = _det_value(ch, sigma, g) if g in ch.determined else Fraction(1)
        for g in nz:
            if g in ch.coupled:
                # isolated rows only see the sign, so the forced positive value is as good
                sigma[g] = _lattice_value(ch, sigma, g)
            for i in sh.coords(g):
                y[i] = sigma[g] * p[i]
        u_levels.append(y)
        active = [active[k] for k in range(na) if k in implicit]
        free = free + lv.coords
    return levels, u_levels, sigma


def _in_lattice(ch: Chamber, g: Mono) -> bool:
    c = _solve_int_combo(list(ch.basis), ch.R, g)
    back = [sum(c[b] * ch.basis[b][j] for b in range(len(ch.basis))) for j in range(len(g))]
    return tuple(back) == tuple(g)


def _lattice_value(ch: Chamber, sigma: dict, g: Mono) -> Fraction:
    v = Fraction(1)
    for b, c in zip(ch.basis, _solve_int_combo(list(ch.basis), ch.R, g)):
        if c:
            v *= sigma[b] ** c
    return v


def _det_value(ch: Chamber, sigma: dict, g: Mono) -> Fraction:
    v = Fraction(1)
    for b, c in zip(ch.basis, ch.determined[g]):
        if c:  # later-level basis monomials carry exponent 0 and have no value yet
            v *= sigma[b] ** c
    return v


def _kappa(ch: Chamber, sigma: dict, ell: int) -> tuple[Fraction, ...]:
    out = []
    for j in range(ell):
        v = Fraction(1)
        for b, g in enumerate(ch.basis):
            v *= sigma[g] ** ch.R[j][b]
        out.append(v)
    return tuple(out)


def _curve_certificate(scheme: MonomialScheme, ch: Chamber, member_idx: int, p: Vec, data) -> MembershipCertificate:
    sh = shape(scheme)
    levels, u_levels, sigma = data
    kappa = _kappa(ch, sigma, scheme.ell)
    w = ch.w
    lev_deg = [0] + [_deg(lv.groups[0], w) for lv in levels[1:]]
    n = scheme.dim
    d = [_deg(scheme.exponents[i], w) for i in range(n)]
    kpow = []
    for i in range(n):
        v = Fraction(1)
        for kj, e in zip(kappa, scheme.exponents[i]):
            v *= kj**e
        kpow.append(v)
    pert: dict[int, list[Fraction]] = {}
    for L, y in enumerate(u_levels):
        e = lev_deg[L]
        for i in range(n):
            if e > d[i] and y[i] != 0:
                pert.setdefault(e - d[i], _zero(n))[i] += y[i] / kpow[i]
    perturbation = tuple((e, tuple(v)) for e, v in sorted(pert.items()))
    return MembershipCertificate(member_idx, w, kappa, perturbation, Fraction(1), ch.levels)


def _row_poly(scheme: MonomialScheme, a: Sequence[Fraction], b: Fraction, p: Vec, cert: MembershipCertificate):
    """Coefficients (exponent -> value) of ``a . y(tau) - b``."""
    n = scheme.dim
    coeffs: dict[int, Fraction] = {}
    for i in range(n):
        if a[i] == 0:
            continue
        m = scheme.exponents[i]
        kp = Fraction(1)
        for kj, e in zip(cert.kappa, m):
            kp *= kj**e
        di = _deg(m, cert.w)
        base = a[i] * kp
        coeffs[di] = coeffs.get(di, Fraction(0)) + base * p[i]
        for e, v in cert.perturbation:
            if v[i] != 0:
                coeffs[di + e] = coeffs.get(di + e, Fraction(0)) + base * v[i]
    coeffs[0] = coeffs.get(0, Fraction(0)) - b
    return {e: c for e, c in coeffs.items() if c != 0}


def _row_margin(coeffs: dict[int, Fraction]):
    """``(c0, S)`` with leading coefficient ``c0`` and the absolute tail sum ``S``."""
    if not coeffs:
        return None
    e0 = min(coeffs)
    c0 = coeffs[e0]
    S = sum((abs(c) for e, c in coeffs.items() if e != e0), Fraction(0))
    return c0, S


def _find_tau0(scheme: MonomialScheme, P: Polyhedron, p: Vec, cert: MembershipCertificate) -> Fraction | None:
    tau0 = Fraction(1, 2)
    for (a, b), s in zip(P.ineqs, P.strict):
        co = _row_poly(scheme, a, b, p, cert)
        mg = _row_margin(co)
        if mg is None:
            if s:
                return None
            continue
        c0, S = mg
        if c0 < 0:
            return None
        while S * tau0 >= c0:
            tau0 /= 2
    for a, b in P.eqs:
        if _row_poly(scheme, a, b, p, cert):
            return None
    return tau0


def verify_membership(scheme: MonomialScheme, Z, p: Sequence, cert: MembershipCertificate) -> bool:
    """Exact leading-term check that the certified curve stays in ``Z`` for ``0 < tau < tau0``."""
    Z = as_polyset(Z)
    p = vec(p)
    if not 0 <= cert.member < len(Z.members):
        return False
    if len(cert.w) != scheme.ell or any(w < 1 for w in cert.w):
        return False
    if len(cert.kappa) != scheme.ell or any(k <= 0 for k in cert.kappa):
        return False
    if any(e < 1 for e, _ in cert.perturbation) or not 0 < cert.tau0 <= 1:
        return False
    if any(len(v) != scheme.dim for _, v in cert.perturbation):
        return False
    P = Z.members[cert.member]
    for (a, b), s in zip(P.ineqs, P.strict):
        mg = _row_margin(_row_poly(scheme, a, b, p, cert))
        if mg is None:
            if s:
                return False
            continue
        c0, S = mg
        if c0 <= 0 or S * cert.tau0 >= c0:
            return False
    for a, b in P.eqs:
        if _row_poly(scheme, a, b, p, cert):
            return False
    return True


def curve_point(scheme: MonomialScheme, p: Sequence, cert: MembershipCertificate, tau) -> tuple[Vec, Vec]:
    """``(t(tau), x(tau))`` on the certified curve."""
    tau = frac(tau)
    t = tuple(k * tau**w for k, w in zip(cert.kappa, cert.w))
    x = list(vec(p))
    for e, v in cert.perturbation:
        f = tau**e
        x = [xi + f * vi for xi, vi in zip(x, v)]
    return t, tuple(x)


# ------------------------------------------------------------ separation


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def build_separation(scheme: MonomialScheme, p: Sequence, k: int) -> SeparationCertificate | None:
    """Invariant multi-cone around ``p`` at resolution ``2^-k``."""
    p = vec(p)
    sh = shape(scheme)
    n = scheme.dim
    eps = Fraction(1, 2**k)
    T = eps
    pmax = max((abs(x) for x in p), default=Fraction(0))
    r = T * (pmax + 1)
    mono = scheme.exponents
    rows: list[GRow] = []
    leaders = []
    all_groups = ([()] if sh.zero else []) + list(sh.groups)
    for g in all_groups:
        cs = sh.zero if g == () else sh.coords(g)
        mu = (0,) * scheme.ell if g == () else g
        pk = max(cs, key=lambda i: (abs(p[i]), -i))
        if p[pk] == 0:
            continue
        if eps > abs(p[pk]) / 2:
            return None
        s = _sgn(p[pk])
        eta = 4 * eps / abs(p[pk])
        lead = [Fraction(0)] * n
        lead[pk] = Fraction(s)
        rows.append(GRow("lin", tuple(lead), Fraction(0), True))
        for i in cs:
            if i == pk:
                continue
            ratio = p[i] / p[pk]
            for sign in (1, -1):
                a = [Fraction(0)] * n
                a[pk] = eta * s + sign * ratio
                a[i] = -Fraction(sign)
                rows.append(GRow("lin", tuple(a), Fraction(0)))
        leaders.append((pk, s, mu))
    for pk, s, mu in leaders:
        for a in range(n):
            ma = mono[a]
            if a == pk or ma == mu or any(x < y for x, y in zip(ma, mu)):
                continue
            gap = sum(ma) - sum(mu)
            c = 2 * T**gap * (abs(p[a]) + eps) / (abs(p[pk]) - eps)
            rows.append(GRow("dom", k=pk, s=s, target=a, c=c))
    for i in sh.zero:
        for sign in (1, -1):
            a = [Fraction(0)] * n
            a[i] = Fraction(sign)
            rows.append(GRow("lin", tuple(a), sign * p[i] - 2 * eps))
    ball = tuple(i for i in range(n) if any(mono[i]))
    return SeparationCertificate(tuple(rows), r, ball, p, eps, T)


def _g_polyhedron_parts(cert: SeparationCertificate, n: int):
    """Rows over ``(y, v)`` where ``v`` holds one auxiliary per dominance row."""
    doms = [g for g in cert.rows if g.kind == "dom"]
    na = len(doms)
    N = n + na
    ge, gt = [], []
    for g in cert.rows:
        if g.kind == "lin":
            (gt if g.strict else ge).append((tuple(g.a) + (Fraction(0),) * na, g.b))
    for idx, g in enumerate(doms):
        for sign in (1, -1):
            a = [Fraction(0)] * N
            a[n + idx] = Fraction(1)
            a[g.target] -= sign
            ge.append((tuple(a), Fraction(0)))
        a = [Fraction(0)] * N
        a[g.k] += g.c * g.s
        a[n + idx] -= 1
        (gt if g.strict else ge).append((tuple(a), Fraction(0)))
    ball = range(n) if cert.ball is None else cert.ball
    for i in ball:
        for sign in (1, -1):
            a = [Fraction(0)] * N
            a[i] = Fraction(-sign)
            ge.append((tuple(a), -cert.r))
    return N, ge, gt


def _empty_intersection(P: Polyhedron, cert: SeparationCertificate) -> bool:
    n = P.dim
    N, ge, gt = _g_polyhedron_parts(cert, n)
    pad = (Fraction(0),) * (N - n)
    for (a, b), s in zip(P.closure().ineqs, P.strict):
        ge.append((tuple(a) + pad, b))
    eq = [(tuple(a) + pad, b) for a, b in P.eqs]
    return strict_point(N, ge, gt, eq) is None


def _invariant(scheme: MonomialScheme, g: GRow) -> bool:
    mono = scheme.exponents
    if g.kind == "dom":
        return g.c >= 0 and all(x >= y for x, y in zip(mono[g.target], mono[g.k])) and g.s in (1, -1)
    support = [i for i, x in enumerate(g.a) if x != 0]
    if not support:
        return g.b <= 0 if not g.strict else g.b < 0
    mus = {mono[i] for i in support}
    if len(mus) != 1:
        return False
    mu = mus.pop()
    return (not any(mu)) or g.b <= 0


def _box_contained(scheme: MonomialScheme, cert: SeparationCertificate) -> bool:
    """``D(T)`` maps the box of radius ``eps`` around ``p`` into ``G ∩ B_r``."""
    p, eps, T = cert.p, cert.eps, cert.T
    n = scheme.dim
    scale = [T ** sum(m) for m in scheme.exponents]
    lo = [scale[i] * (p[i] - eps) for i in range(n)]
    hi = [scale[i] * (p[i] + eps) for i in range(n)]
    for g in cert.rows:
        if g.kind == "lin":
            v = sum((a * (lo[i] if a > 0 else hi[i]) for i, a in enumerate(g.a) if a), Fraction(0))
            if v < g.b or (g.strict and v == g.b):
                return False
        else:
            k, a = g.k, g.target
            lead_min = min(g.s * lo[k], g.s * hi[k])
            amax = max(abs(lo[a]), abs(hi[a]))
            v = g.c * lead_min - amax
            if v < 0 or (g.strict and v == 0):
                return False
    ball = range(n) if cert.ball is None else cert.ball
    return all(max(abs(lo[i]), abs(hi[i])) <= cert.r for i in ball)


def verify_separation(scheme: MonomialScheme | None, Z, cert: SeparationCertificate) -> bool:
    Z = as_polyset(Z)
    n = Z.dim
    for g in cert.rows:
        if g.kind == "lin" and len(g.a) != n:
            raise InputError("certificate row dimension mismatch")
    if cert.r <= 0:
        return False
    if cert.p is not None:
        if scheme is None or scheme.dim != n:
            return False
        if cert.eps is None or cert.T is None or cert.eps <= 0 or not 0 < cert.T <= 1:
            return False
        if not all(_invariant(scheme, g) for g in cert.rows):
            return False
        if not _box_contained(scheme, cert):
            return False
    return all(_empty_intersection(P, cert) for P in Z.members)


# --------------------------------------------------------------- member


@dataclass(frozen=True)
class MemberResult:
    verdict: str
    certificate: MembershipCertificate | SeparationCertificate

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "certificate": self.certificate.to_json()}


SEPARATION_LADDER = (2, 4, 6, 8, 12, 16, 24, 32, 48, 64)


def _check_dims(scheme: MonomialScheme, Z: PolySet, p: Vec | None = None):
    if Z.dim != scheme.dim:
        raise InputError(f"set dimension {Z.dim} does not match scheme dimension {scheme.dim}")
    if p is not None and len(p) != scheme.dim:
        raise InputError(f"point dimension {len(p)} does not match scheme dimension {scheme.dim}")


def _closed(Z) -> PolySet:
    Z = as_polyset(Z)
    return PolySet(Z.dim, tuple(P.closure() for P in Z.members))


def find_curve(scheme: MonomialScheme, Z, p: Sequence) -> MembershipCertificate | None:
    Z = _closed(Z)
    p = vec(p)
    _check_dims(scheme, Z, p)
    for idx, P in enumerate(Z.members):
        if P.is_empty():
            continue
        for ch in chambers(scheme):
            data = _cascade(shape(scheme), ch, P, p)
            if data is None:
                continue
            cert = _curve_certificate(scheme, ch, idx, p, data)
            tau0 = _find_tau0(scheme, P, p, cert)
            if tau0 is None:
                raise ConstructionError("cascade produced a curve whose leading terms fail")
            cert = MembershipCertificate(cert.member, cert.w, cert.kappa, cert.perturbation, tau0, cert.chamber)
            if not verify_membership(scheme, Z, p, cert):
                raise ConstructionError("membership certificate failed verification")
            return cert
    return None


def find_separation(scheme: MonomialScheme, Z, p: Sequence, ladder: Sequence[int] = SEPARATION_LADDER):
    Z = _closed(Z)
    for k in ladder:
        cert = build_separation(scheme, p, k)
        if cert is not None and verify_separation(scheme, Z, cert):
            return cert
    return None


def mnc_member(scheme: MonomialScheme, Z, p: Sequence) -> MemberResult:
    """Decide ``p in C(Z)`` with a certificate for either answer.

    The limit cone of a set equals that of its closure, so strict rows of ``Z``
    are relaxed.
    """
    Z = _closed(Z)
    p = vec(p)
    _check_dims(scheme, Z, p)
    cert = find_curve(scheme, Z, p)
    if cert is not None:
        return MemberResult(IN, cert)
    sep = find_separation(scheme, Z, p)
    if sep is None:
        raise InternalConsistencyError(
            f"no monomial curve reaches {[str(x) for x in p]} and no separating set was found"
        )
    return MemberResult(OUT, sep)


# -------------------------------------------------------------- describe


@dataclass(frozen=True)
class ChamberPiece:
    chamber: Chamber
    pieces: PolySet

    def to_json(self) -> dict:
        return {"order": self.chamber.descriptor(), "weights": list(self.chamber.w), "pieces": self.pieces.to_json()}


@dataclass(frozen=True)
class Description:
    cone: PolySet
    chambers: tuple[ChamberPiece, ...]

    def to_json(self) -> dict:
        return {"cone": self.cone.to_json(), "chambers": [c.to_json() for c in self.chambers]}


def _faces(nv: int, rows: list[tuple[list, Fraction]], eqs: list[tuple[list, Fraction]]):
    """Implicit-equality sets of all nonempty faces of ``{a.v >= b (rows), eqs}``."""
    seen: dict[frozenset, None] = {}
    stack = [frozenset()]
    visited = set()
    while stack:
        T = stack.pop()
        if T in visited:
            continue
        visited.add(T)
        extra = [rows[r] for r in T]
        res = relint_point(nv, rows, list(eqs) + extra)
        if res is None:
            continue
        _, implicit = res
        implicit = frozenset(implicit) | T
        if implicit in seen:
            continue
        seen[implicit] = None
        for r in range(len(rows)):
            if r not in implicit:
                stack.append(implicit | {r})
    return list(seen)


def _sign_pieces(Y: Polyhedron, dim: int) -> list[Polyhedron]:
    """Closed orthant faces whose open sign pattern meets ``Y``'s relative interior data."""
    out = []
    for signs in product((-1, 0, 1), repeat=dim):
        ge, gt, eq = [], [], []
        for i, s in enumerate(signs):
            e = [Fraction(0)] * dim
            e[i] = Fraction(1)
            if s == 0:
                eq.append((tuple(e), Fraction(0)))
            else:
                gt.append((tuple(x * s for x in e), Fraction(0)))
        pt = Y.add(eqs=eq).add(gt, strict=True)
        if not pt.is_empty():
            ineqs = [(a, b) for a, b in gt]
            out.append(Polyhedron.make(dim, ineqs, eq))
    return out


def _saturate(Y: Polyhedron, groups_local: list[list[int]], rel_open: Polyhedron) -> list[Polyhedron]:
    """Closure of the union of per-group positive rescalings of ``Y``."""
    dim = Y.dim
    if len(groups_local) <= 1:
        return [Y]
    pts, rays, lines = Y.vrep()
    gens = [(v, False) for v in pts + rays] + [(l, True) for l in lines]
    ok = True
    for v, is_line in gens:
        for cs in groups_local:
            part = tuple(v[i] if i in cs else Fraction(0) for i in range(dim))
            if not Y.contains(part) or (is_line and not Y.contains(tuple(-x for x in part))):
                ok = False
                break
        if not ok:
            break
    if ok:
        return [Y]
    if all(len(cs) == 1 for cs in groups_local):
        return _sign_pieces(rel_open, dim)
    raise NonPolyhedralError("tied multi-coordinate groups produce a non-polyhedral limit")


def _mixed(sh: SchemeShape, special: list[Mono], lv, touched: list[set[int]]) -> bool:
    """Whether some row touches a ``special`` group together with another group of ``lv``."""
    for row in touched:
        hit = [g for g in lv if row & set(sh.coords(g))]
        if len(hit) >= 2 and any(g in special for g in hit):
            return True
    return False


def _describe_member(sh: SchemeShape, ch: Chamber, P: Polyhedron) -> list[Polyhedron]:
    n = sh.scheme.dim
    levels = _levels_of(sh, ch)
    ineqs, strict, eqs = _member_rows(P.closure())
    touched = [set(i for i, x in enumerate(a) if x) for a, _ in list(ineqs) + list(eqs)]
    for lv in ch.levels:
        # fixed coefficient ratios only matter inside a row that mixes the tied groups
        det = [g for g in lv if g in ch.determined]
        if len(det) >= 2 and _mixed(sh, det, lv, touched):
            raise NonPolyhedralError("several determined monomials share a degree level")
        cpl = [g for g in lv if g in ch.coupled]
        if cpl and _mixed(sh, cpl, lv, touched):
            raise CouplingError("tied monomials are multiplicatively coupled")

    memo: dict[tuple[int, frozenset], list[list[tuple[list[int], Polyhedron]]]] = {}

    def level_sets(L: int, active: frozenset):
        """List of (Y on level coords, next active set)."""
        lv = levels[L]
        cs = lv.coords
        if L == 0:
            nv = len(cs)
            rows = [([a[i] for i in cs], b) for a, b in ineqs]
            eqr = [([a[i] for i in cs], b) for a, b in eqs]
            out = []
            for T in _faces(nv, rows, eqr):
                Y = Polyhedron.make(nv, [(a, b) for r, (a, b) in enumerate(rows) if r not in T],
                                    eqr + [rows[r] for r in T])
                out.append(([Y], T))
            return out
        free = [i for l2 in levels[:L] for i in l2.coords]
        nu = len(free)
        nv = nu + len(cs)
        act = sorted(active)
        rows = [([ineqs[r][0][i] for i in free] + [ineqs[r][0][i] for i in cs], Fraction(0)) for r in act]
        eqr = [([a[i] for i in free] + [a[i] for i in cs], Fraction(0)) for a, _ in eqs]
        out = []
        local_groups = [[cs.index(i) for i in sh.coords(g)] for g in lv.groups]
        for Tl in _faces(nv, rows, eqr):
            face = Polyhedron.make(nv, [(a, b) for r, (a, b) in enumerate(rows) if r not in Tl],
                                   eqr + [rows[r] for r in Tl])
            Yfull = project(face, list(range(nu, nv)))
            strict_face = Polyhedron.make(nv, [(a, b) for r, (a, b) in enumerate(rows) if r not in Tl],
                                          eqr + [rows[r] for r in Tl],
                                          strict=[True] * (len(rows) - len(Tl)))
            # sign realizability is read from the relatively open face
            rel_open = _project_open(strict_face, nu, nv)
            Ys = _saturate(Yfull, local_groups, rel_open)
            out.append((Ys, frozenset(act[r] for r in Tl)))
        return out

    def tails(L: int, active: frozenset) -> list[list[Polyhedron]]:
        key = (L, active)
        if key in memo:
            return memo[key]
        if L == len(levels):
            memo[key] = [[]]
            return memo[key]
        res = []
        for Ys, nxt in level_sets(L, active):
            for tail in tails(L + 1, nxt):
                for Y in Ys:
                    res.append([Y] + tail)
        memo[key] = res
        return res

    out = []
    for combo in tails(0, frozenset(range(len(ineqs)))):
        out.append(_assemble(n, levels, combo))
    return out


def _project_open(strict_face: Polyhedron, nu: int, nv: int):
    """Oracle object answering ``is_empty`` for intersections with sign conditions on the last block."""
    return _LiftedOpen(strict_face, nu, nv)


@dataclass(frozen=True)
class _LiftedOpen:
    face: Polyhedron
    nu: int
    nv: int

    @property
    def dim(self) -> int:
        return self.nv - self.nu

    def add(self, ineqs=(), eqs=(), strict=False):
        pad = lambda a: (Fraction(0),) * self.nu + tuple(a)
        return _LiftedOpen(
            self.face.add([(pad(a), b) for a, b in ineqs], [(pad(a), b) for a, b in eqs], strict), self.nu, self.nv
        )

    def is_empty(self) -> bool:
        return self.face.is_empty()


def _assemble(n: int, levels: list[_Level], parts: list[Polyhedron]) -> Polyhedron:
    ineqs, eqs = [], []
    for lv, Y in zip(levels, parts):
        for a, b in Y.ineqs:
            v = [Fraction(0)] * n
            for i, x in zip(lv.coords, a):
                v[i] = x
            ineqs.append((tuple(v), b))
        for a, b in Y.eqs:
            v = [Fraction(0)] * n
            for i, x in zip(lv.coords, a):
                v[i] = x
            eqs.append((tuple(v), b))
    return Polyhedron.make(n, ineqs, eqs)


def mnc_describe(scheme: MonomialScheme, Z, guard: dict | None = None) -> Description:
    """The limit cone as a union of closed polyhedra, with its chamber decomposition."""
    g = dict(DEFAULT_GUARD)
    g.update(guard or {})
    Z = as_polyset(Z)
    _check_dims(scheme, Z)
    if scheme.ell > g["ell"] or scheme.dim > g["dim"]:
        raise ResourceError(
            f"size guard exceeded: ell={scheme.ell} (max {g['ell']}), dim={scheme.dim} (max {g['dim']})"
        )
    sh = shape(scheme)
    per: list[ChamberPiece] = []
    allp: list[Polyhedron] = []
    for ch in chambers(scheme):
        ps = []
        for P in Z.members:
            if P.is_empty():
                continue
            ps.extend(_describe_member(sh, ch, P))
        pieces = PolySet(scheme.dim, tuple(ps)).canonical()
        per.append(ChamberPiece(ch, pieces))
        allp.extend(pieces.members)
    cone = PolySet(scheme.dim, tuple(allp)).canonical()
    return Description(cone, tuple(per))


# ---------------------------------------------------------------- oracle


@dataclass(frozen=True)
class OracleVerdict:
    verdict: str
    mode: str
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "mode": self.mode, "detail": self.detail}


def _tree_feasible(scheme, edges, P: Polyhedron, p: Vec, eps: Fraction, c: Fraction) -> bool:
    sh = shape(scheme)
    n = scheme.dim
    gs = list(sh.groups)
    N = n + len(gs)
    col = {g: n + k for k, g in enumerate(gs)}
    ge, gt = [], []
    pad = (Fraction(0),) * len(gs)
    for (a, b), s in zip(P.ineqs, P.strict):
        (gt if s else ge).append((tuple(a) + pad, b))
    eq = [(tuple(a) + pad, b) for a, b in P.eqs]
    for i in sh.zero:
        e = [Fraction(0)] * N
        e[i] = Fraction(1)
        ge.append((tuple(e), p[i] - eps))
        ge.append((tuple(-x for x in e), -p[i] - eps))
    for g in gs:
        for i in sh.coords(g):
            a = [Fraction(0)] * N
            a[i] = Fraction(1)
            a[col[g]] = -(p[i] - eps)
            ge.append((tuple(a), Fraction(0)))
            a = [Fraction(0)] * N
            a[i] = Fraction(-1)
            a[col[g]] = p[i] + eps
            ge.append((tuple(a), Fraction(0)))
        par, _ = edges[g]
        a = [Fraction(0)] * N
        a[col[g]] = Fraction(-1)
        if any(par):
            a[col[par]] = 1 / c
            ge.append((tuple(a), Fraction(0)))
        else:
            ge.append((tuple(a), -1 / c))
        e = [Fraction(0)] * N
        e[col[g]] = Fraction(1)
        gt.append((tuple(e), Fraction(0)))
    return strict_point(N, ge, gt, eq) is not None


def _grid_feasible(scheme, P: Polyhedron, p: Vec, eps: Fraction, c: Fraction, w: Sequence[int]) -> bool:
    n = scheme.dim
    t = [c ** (-x) for x in w]
    scale = []
    for m in scheme.exponents:
        v = Fraction(1)
        for tj, e in zip(t, m):
            v *= tj**e
        scale.append(v)
    ge, gt = [], []
    for (a, b), s in zip(P.ineqs, P.strict):
        (gt if s else ge).append((tuple(x * f for x, f in zip(a, scale)), b))
    eq = [(tuple(x * f for x, f in zip(a, scale)), b) for a, b in P.eqs]
    for i in range(n):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        ge.append((tuple(e), p[i] - eps))
        ge.append((tuple(-x for x in e), -p[i] - eps))
    return strict_point(n, ge, gt, eq) is not None


def oracle_member(
    scheme: MonomialScheme,
    Z,
    p: Sequence,
    ladder: tuple = (2, (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)), 20),
) -> OracleVerdict:
    """Brute-force ladder check of ``p in C(Z)``.

    For schemes whose monomials form a tree (each parameter refines exactly one
    monomial) the monomial values are LP unknowns and the per-rung check is
    exact, so a single infeasible rung proves non-membership. Other schemes
    sample ``t_j = c^{-w_j}`` on a small weight grid; that mode cannot see
    limits that need a specific ratio between tied monomials.
    """
    base, epss, steps = ladder
    base = frac(base)
    epss = sorted((frac(e) for e in epss), reverse=True)
    if base <= 1 or steps < 1 or any(e <= 0 for e in epss):
        raise InputError("ladder needs base > 1, positive radii and at least one step")
    Z = as_polyset(Z)
    p = vec(p)
    _check_dims(scheme, Z, p)
    members = [P for P in Z.members if not P.is_empty()]
    edges = tree_edges(scheme)
    if edges is not None:
        def feas(eps, m):
            c = base**m
            return any(_tree_feasible(scheme, edges, P, p, eps, c) for P in members)

        eps_min = epss[-1]
        if feas(eps_min, steps):
            return OracleVerdict(LIKELY_IN, "tree-exact", {"steps": steps, "eps": str(eps_min)})
        # locate the first failing rung for reporting
        for eps in epss:
            lo, hi = 0, steps
            if not feas(eps, hi):
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    if feas(eps, mid):
                        lo = mid
                    else:
                        hi = mid
                return OracleVerdict(LIKELY_OUT, "tree-exact", {"eps": str(eps), "first_infeasible_step": hi})
        return OracleVerdict(LIKELY_OUT, "tree-exact", {})
    grid = list(product((1, 2, 3), repeat=scheme.ell))
    eps_min = epss[-1]

    def any_w(m):
        c = base**m
        return any(_grid_feasible(scheme, P, p, eps_min, c, w) for P in members for w in grid)

    a, b = any_w(steps), any_w(max(1, steps - 1))
    if a and b:
        return OracleVerdict(LIKELY_IN, "grid", {"steps": steps})
    if not a and not b:
        return OracleVerdict(LIKELY_OUT, "grid", {"steps": steps})
    return OracleVerdict(INCONCLUSIVE, "grid", {"steps": steps})


def agrees(member_verdict: str, oracle_verdict: str) -> bool:
    if oracle_verdict == INCONCLUSIVE:
        return True
    return (member_verdict == IN) == (oracle_verdict == LIKELY_IN)
