"""Cone families of the stalk formulas at a covector over the origin.

Everything lives in the normal space ``N``: the coordinates of the union of the
``I_j``, ordered increasingly, split into the blocks ``x^(1), ..., x^(l)``
(block ``k`` holds the coordinates of ``Î_k``). Norms are ℓ¹ inside estimates
and ℓ∞ for balls, so every set stays polyhedral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Mapping, Sequence

from .cones import (
    as_polyset,
    Cone,
    PolySet,
    Polyhedron,
    Vec,
    box,
    cone_from_h,
    cone_from_v,
    cone_subset,
    dot,
    frac,
    is_proper_wrt,
    minkowski_sum,
    poly_subset,
    polar,
    subset,
    vec,
    zero_cone,
)
from .deformation import MonomialScheme
from .errors import ConstructionError, InputError, SearchFailure
from .indices import DerivedIndices, IndexFamily, derive, preceq
from .multinormal import mnc_describe


class StalkContext:
    """Coordinates of ``N`` and the block structure of a valid family."""

    def __init__(self, family: IndexFamily):
        self.family = family
        self.d: DerivedIndices = derive(family)
        self.coords: list[int] = sorted(set().union(*family.members))
        self.pos = {c: i for i, c in enumerate(self.coords)}
        self.dim = len(self.coords)
        self.ell = family.ell

    def block(self, k: int) -> list[int]:
        """Positions in ``N`` of the block ``x^(k)``."""
        return [self.pos[c] for c in sorted(self.d.hatI[k - 1])]

    def blocks(self, ks) -> list[int]:
        return sorted(i for k in ks for i in self.block(k))

    def I_positions(self, k: int) -> list[int]:
        return sorted(self.pos[c] for c in self.family.I(k))

    def check_k(self, k: int):
        if not 1 <= k <= self.ell:
            raise InputError(f"block index {k} outside 1..{self.ell}")

    def unit(self, i: int, s=1) -> Vec:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(s)
        return tuple(v)

    def lift(self, positions: Sequence[int], v: Sequence) -> Vec:
        out = [Fraction(0)] * self.dim
        for i, x in zip(positions, v):
            out[i] = frac(x)
        return tuple(out)


@dataclass(frozen=True)
class CovectorPoint:
    """Blocks ``xi^(1), ..., xi^(l)`` over the origin, stored flat in ``N`` order."""

    xi: Vec

    @staticmethod
    def from_blocks(ctx: StalkContext, blocks: Mapping[int, Sequence] | Sequence[Sequence]) -> "CovectorPoint":
        if not isinstance(blocks, Mapping):
            blocks = {k + 1: b for k, b in enumerate(blocks)}
        out = [Fraction(0)] * ctx.dim
        for k in range(1, ctx.ell + 1):
            vals = vec(blocks.get(k, blocks.get(str(k), [0] * len(ctx.block(k)))))
            if len(vals) != len(ctx.block(k)):
                raise InputError(f"block {k} has size {len(vals)}, expected {len(ctx.block(k))}")
            for i, v in zip(ctx.block(k), vals):
                out[i] = v
        return CovectorPoint(tuple(out))

    def block(self, ctx: StalkContext, k: int) -> Vec:
        return tuple(self.xi[i] for i in ctx.block(k))

    def to_json(self, ctx: StalkContext) -> dict:
        return {"blocks": {str(k): [str(x) for x in self.block(ctx, k)] for k in range(1, ctx.ell + 1)}}


def _ctx(family) -> StalkContext:
    return family if isinstance(family, StalkContext) else StalkContext(family)


def _cov(ctx: StalkContext, p) -> CovectorPoint:
    if isinstance(p, CovectorPoint):
        if len(p.xi) != ctx.dim:
            raise InputError("covector dimension mismatch")
        return p
    if isinstance(p, Mapping):
        return CovectorPoint.from_blocks(ctx, p)
    v = vec(p)
    if len(v) != ctx.dim:
        raise InputError(f"covector has length {len(v)}, expected {ctx.dim}")
    return CovectorPoint(v)


def _pair_row(ctx: StalkContext, k: int, xi: CovectorPoint, scale=1) -> Vec:
    """Row of ``<x^(k), xi^(k)>``."""
    out = [Fraction(0)] * ctx.dim
    for i in ctx.block(k):
        out[i] = xi.xi[i] * scale
    return tuple(out)


def _l1_rows(ctx: StalkContext, positions: Sequence[int], weight=1) -> list[Vec]:
    """``-weight * sum s_i x_i`` over every sign choice (for ``... - weight*|x|_1 >= 0``)."""
    out = []
    for signs in product((1, -1), repeat=len(positions)):
        v = [Fraction(0)] * ctx.dim
        for i, s in zip(positions, signs):
            v[i] = Fraction(-s) * weight
        out.append(tuple(v))
    return out


def _add(*vs: Sequence) -> Vec:
    return tuple(sum(xs, Fraction(0)) for xs in zip(*vs))


# ------------------------------------------------------------------ gamma


def gamma(family, k: int, p) -> Polyhedron:
    """``{x^(j) = 0 (j ≺ k or j ∦ k), <x^(k), xi^(k)> > 0}``; empty when ``xi^(k) = 0``."""
    ctx = _ctx(family)
    ctx.check_k(k)
    xi = _cov(ctx, p)
    zero_blocks = ctx.d.prec[k - 1] | ctx.d.incomp[k - 1]
    eqs = [(ctx.unit(i), 0) for i in ctx.blocks(zero_blocks)]
    row = _pair_row(ctx, k, xi)
    return Polyhedron.make(ctx.dim, [(row, 0)], eqs, strict=[True])


# ------------------------------------------------------------------ sharp


@dataclass(frozen=True)
class SharpSet:
    """``p_k^# = R^{I_k} minus {eta : eta off Î_k is 0, <eta, xi^(k)> <= 0}``.

    ``positions`` are the ``N`` positions of ``I_k``; points are given on them.
    """

    positions: tuple[int, ...]
    hat_positions: tuple[int, ...]
    xi_k: Vec

    @property
    def removed(self) -> Polyhedron:
        """Closed set ``τ_k(p_k^{∘a})`` in the ``I_k`` coordinates."""
        n = len(self.positions)
        eqs, row = [], [Fraction(0)] * n
        for a, i in enumerate(self.positions):
            e = [Fraction(0)] * n
            e[a] = Fraction(1)
            if i in self.hat_positions:
                row[a] = -self.xi_k[self.hat_positions.index(i)]
            else:
                eqs.append((tuple(e), 0))
        return Polyhedron.make(n, [(tuple(row), 0)], eqs)

    def contains(self, eta: Sequence) -> bool:
        eta = vec(eta)
        if len(eta) != len(self.positions):
            raise InputError("point dimension mismatch")
        return not self.removed.contains(eta)

    def to_json(self) -> dict:
        R = self.removed
        return {"coords": [i + 1 for i in self.positions], "removed": R.to_json()}


def sharp(family, k: int, p) -> SharpSet:
    ctx = _ctx(family)
    ctx.check_k(k)
    xi = _cov(ctx, p)
    return SharpSet(tuple(ctx.I_positions(k)), tuple(ctx.block(k)), xi.block(ctx, k))


# --------------------------------------------------------------- G-ladder


def g_cone(family, k: int, p, m) -> Cone:
    """``G_{k,m}``; ``{0}`` when ``xi^(k) = 0``."""
    ctx = _ctx(family)
    ctx.check_k(k)
    xi = _cov(ctx, p)
    m = frac(m)
    if m <= 0:
        raise InputError("ladder index must be positive")
    if not any(xi.block(ctx, k)):
        return zero_cone(ctx.dim)
    d = ctx.d
    eqs = [ctx.unit(i) for i in ctx.blocks(d.prec[k - 1] | d.incomp[k - 1])]
    pair = _pair_row(ctx, k, xi)
    ineqs = [_add(pair, r) for r in _l1_rows(ctx, ctx.block(k), 1 / m)]
    for j in sorted(d.succ[k - 1]):
        big = _pair_row(ctx, k, xi, m)
        ineqs += [_add(big, r) for r in _l1_rows(ctx, ctx.block(j))]
    return cone_from_h(ctx.dim, ineqs, eqs)


@dataclass(frozen=True)
class ConeLadder:
    m: int
    radius: Fraction
    parts: tuple[Cone, ...]
    G: Cone

    def U(self, dim: int) -> Polyhedron:
        return box(dim, [0] * dim, self.radius, strict=True)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "radius": str(self.radius),
            "G": self.G.to_json(),
            "parts": [c.to_json() for c in self.parts],
        }


def g_ladder(family, p, m: int) -> ConeLadder:
    ctx = _ctx(family)
    if m < 1:
        raise InputError("ladder index must be at least 1")
    parts = tuple(g_cone(ctx, k, p, m) for k in range(1, ctx.ell + 1))
    return ConeLadder(m, Fraction(1, 2**m), parts, minkowski_sum(list(parts)))


def g_part_in_gamma(family, k: int, p, G: Cone) -> bool:
    """``G ∖ {0} ⊂ γ_k`` decided exactly."""
    ctx = _ctx(family)
    gam = gamma(ctx, k, p)
    if G.is_zero:
        return True
    if gam.is_empty():
        return False
    if not poly_subset(Polyhedron.from_cone(G), gam.closure()):
        return False
    row = _pair_row(ctx, k, _cov(ctx, p))
    return cone_from_h(ctx.dim, list(G.ineqs), list(G.eqs) + [row]).is_zero


# ---------------------------------------------------------------- Z-family


@dataclass(frozen=True)
class ZFamilyItem:
    k: int
    Gamma: Cone  # in the block coordinates of x^(k)
    eps: Fraction | None  # None when no ε-part appears
    Z_Gamma: PolySet
    Z_eps: PolySet | None

    @property
    def Z(self) -> PolySet:
        return self.Z_Gamma if self.Z_eps is None else self.Z_Gamma.union(self.Z_eps)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "Gamma": self.Gamma.to_json(),
            "eps": None if self.eps is None else str(self.eps),
            "Z": self.Z.to_json(),
        }


def aperture_cone(xi: Sequence[Fraction], rho: Fraction) -> Cone:
    """Cone spanned by ``xi ± rho |xi|_∞ e_i``: proper around ``xi`` for ``rho < 1``."""
    xi = vec(xi)
    n = len(xi)
    top = max(abs(x) for x in xi)
    gens = []
    for i in range(n):
        for s in (1, -1):
            g = list(xi)
            g[i] += s * rho * top
            gens.append(tuple(g))
    return cone_from_v(n, gens)


def _z_eps(ctx: StalkContext, k: int, eps: Fraction) -> PolySet:
    """``eps |x^(k)|_1 <= sum_{j ≺ k} |x^(j)|_1`` as a union over sign patterns."""
    low = ctx.blocks(ctx.d.prec[k - 1])
    pieces = []
    for signs in product((1, -1), repeat=len(low)):
        rhs = [Fraction(0)] * ctx.dim
        ineqs = []
        for i, s in zip(low, signs):
            rhs[i] = Fraction(s)
            ineqs.append((ctx.unit(i, s), 0))
        for r in _l1_rows(ctx, ctx.block(k), eps):
            ineqs.append((_add(rhs, r), 0))
        pieces.append(Polyhedron.make(ctx.dim, ineqs))
    return PolySet(ctx.dim, tuple(pieces))


def _z_gamma(ctx: StalkContext, k: int, Gam: Cone) -> PolySet:
    blk = ctx.block(k)
    ineqs = [(ctx.lift(blk, a), 0) for a in Gam.ineqs]
    eqs = [(ctx.lift(blk, a), 0) for a in Gam.eqs]
    return PolySet(ctx.dim, (Polyhedron.make(ctx.dim, ineqs, eqs),))


def make_z_family(family, p, m: int) -> list[ZFamilyItem]:
    """``Z_k = Z_{k,Γ} ∪ Z_{k,ε}`` with aperture ``1/(m+1)`` and ``ε = 1/m``."""
    ctx = _ctx(family)
    if m < 1:
        raise InputError("family index must be at least 1")
    xi = _cov(ctx, p)
    out = []
    for k in range(1, ctx.ell + 1):
        xk = xi.block(ctx, k)
        nb = len(xk)
        Gam = aperture_cone(xk, Fraction(1, m + 1)) if any(xk) else zero_cone(nb)
        has_eps = bool(ctx.d.prec[k - 1])
        eps = Fraction(1, m) if has_eps else None
        out.append(ZFamilyItem(k, Gam, eps, _z_gamma(ctx, k, Gam), _z_eps(ctx, k, eps) if has_eps else None))
    return out


def _normal_scheme(ctx: StalkContext, k: int) -> MonomialScheme:
    Ik = set(ctx.I_positions(k))
    return MonomialScheme(1, tuple((1,) if i in Ik else (0,) for i in range(ctx.dim)))


def normal_cone_fiber(family, k: int, Z) -> PolySet:
    """``C_{M_k}(Z)_0`` in ``N`` coordinates (coordinates off ``I_k`` vanish)."""
    ctx = _ctx(family)
    ctx.check_k(k)
    Z = as_polyset(Z)
    D = mnc_describe(_normal_scheme(ctx, k), Z, {"dim": max(6, ctx.dim)}).cone
    Ik = set(ctx.I_positions(k))
    sl = Polyhedron.make(ctx.dim, [], [(ctx.unit(i), 0) for i in range(ctx.dim) if i not in Ik])
    return D.intersect(sl)


def check_normal_condition(family, p, Z_k, k: int) -> bool:
    """``C_{M_k}(Z_k)_0 ⊂ p_k^# ∪ {0}``."""
    ctx = _ctx(family)
    xi = _cov(ctx, p)
    C = normal_cone_fiber(ctx, k, Z_k)
    sh = sharp(ctx, k, xi)
    removed = _lift_from(ctx, sh.positions, sh.removed)
    origin = Polyhedron.make(ctx.dim, [], [(ctx.unit(i), 0) for i in range(ctx.dim)])
    return all(poly_subset(P.intersect(removed), origin) for P in C.members)


def _lift_from(ctx: StalkContext, positions: Sequence[int], P: Polyhedron) -> Polyhedron:
    ineqs = [(ctx.lift(positions, a), b) for a, b in P.ineqs]
    eqs = [(ctx.lift(positions, a), b) for a, b in P.eqs]
    return Polyhedron.make(ctx.dim, ineqs, eqs, P.strict)


def check_g_condition(family, p, G: Cone) -> bool:
    ctx = _ctx(family)
    if G.dim != ctx.dim:
        raise InputError("cone dimension does not match the normal space")
    return all(check_normal_condition(ctx, p, G, k) for k in range(1, ctx.ell + 1))


# ---------------------------------------------------------------- enclose


@dataclass(frozen=True)
class WedgeCertificate:
    T: tuple[Cone | None, ...]
    delta: Fraction
    table: tuple[tuple[str, bool], ...]  # (sigma word, K_sigma ⊂ V°)
    m2: int
    G: Cone

    def to_json(self) -> dict:
        return {
            "T": [None if t is None else t.to_json() for t in self.T],
            "delta": str(self.delta),
            "sigma_table": [{"sigma": s, "ok": ok} for s, ok in self.table],
            "m": self.m2,
            "G": self.G.to_json(),
        }


def v_cone(ctx: StalkContext, xi: CovectorPoint, k: int, T: Cone, delta: Fraction) -> Cone:
    """``V_k = {y^(k) ∈ T_k, sum_{j ≻ k} |y^(j)|_1 <= delta <y^(k), xi^(k)>}``."""
    blk = ctx.block(k)
    ineqs = [ctx.lift(blk, a) for a in T.ineqs]
    eqs = [ctx.lift(blk, a) for a in T.eqs]
    up = ctx.blocks(ctx.d.succ[k - 1])
    if up:
        pair = _pair_row(ctx, k, xi, delta)
        ineqs += [_add(pair, r) for r in _l1_rows(ctx, up)]
    return cone_from_h(ctx.dim, ineqs, eqs)


def _sigma_words(items: Sequence[ZFamilyItem]):
    choices = [("G",) + (("e",) if it.Z_eps is not None else ()) for it in items]
    return list(product(*choices))


def _k_sigma(ctx: StalkContext, items: Sequence[ZFamilyItem], word) -> PolySet:
    acc = PolySet(ctx.dim, (Polyhedron.whole(ctx.dim),))
    for it, s in zip(items, word):
        part = it.Z_Gamma if s == "G" else it.Z_eps
        acc = acc.intersect(part)
    return acc


def enclose(family, p, Z: Sequence[ZFamilyItem], max_halvings: int = 24, max_m: int = 2**20) -> WedgeCertificate:
    """Find ``T_k``, ``delta`` with every ``K_σ ⊂ V°`` and ``m''`` with ``V_k° ⊂ G_{k,m''}``."""
    ctx = _ctx(family)
    xi = _cov(ctx, p)
    if len(Z) != ctx.ell:
        raise InputError("need one Z-family item per block")
    words = _sigma_words(Z)
    ks = [k for k in range(1, ctx.ell + 1) if any(xi.block(ctx, k))]
    rho = Fraction(1, 2)
    for _ in range(max_halvings):
        Ts = {k: aperture_cone(xi.block(ctx, k), rho) for k in ks}
        Vs = {k: v_cone(ctx, xi, k, Ts[k], rho) for k in ks}
        if Vs:
            V = cone_from_h(ctx.dim, [a for v in Vs.values() for a in v.ineqs], [a for v in Vs.values() for a in v.eqs])
        else:
            V = cone_from_h(ctx.dim)
        Vpol = Polyhedron.from_cone(polar(V))
        table = []
        for wd in words:
            K = _k_sigma(ctx, Z, wd)
            table.append(("".join("Γ" if s == "G" else "ε" for s in wd), subset(K, Vpol)))
        if all(ok for _, ok in table):
            m2 = _fit_ladder(ctx, xi, {k: polar(v) for k, v in Vs.items()}, max_m)
            G = g_ladder(ctx, xi, m2).G
            Zall = PolySet(ctx.dim, (Polyhedron.whole(ctx.dim),))
            for it in Z:
                Zall = Zall.intersect(it.Z)
            if not subset(Zall, Polyhedron.from_cone(G)):
                raise ConstructionError("intersection of the Z-family escapes the fitted G")
            return WedgeCertificate(tuple(Ts.get(k) for k in range(1, ctx.ell + 1)), rho, tuple(table), m2, G)
        rho /= 2
    raise ConstructionError("no (T, delta) found: some K_sigma is not inside the polar of V")


def verify_wedge(family, p, Z: Sequence[ZFamilyItem], cert: WedgeCertificate) -> bool:
    """Recheck a wedge certificate from its ``T_k`` and ``delta`` alone."""
    ctx = _ctx(family)
    xi = _cov(ctx, p)
    if len(Z) != ctx.ell or len(cert.T) != ctx.ell or cert.delta <= 0:
        return False
    Vs = {}
    for k in range(1, ctx.ell + 1):
        b = xi.block(ctx, k)
        T = cert.T[k - 1]
        if not any(b):
            if T is not None:
                return False
            continue
        if T is None or not T.contains(b) or not is_proper_wrt(T, b):
            return False
        Vs[k] = v_cone(ctx, xi, k, T, cert.delta)
    ineqs = [a for v in Vs.values() for a in v.ineqs]
    eqs = [a for v in Vs.values() for a in v.eqs]
    Vpol = Polyhedron.from_cone(polar(cone_from_h(ctx.dim, ineqs, eqs)))
    words = _sigma_words(Z)
    if len(cert.table) != len(words):
        return False
    for wd in words:
        if not subset(_k_sigma(ctx, Z, wd), Vpol):
            return False
    for k, v in Vs.items():
        if not cone_subset(polar(v), g_cone(ctx, k, xi, cert.m2)):
            return False
    G = g_ladder(ctx, xi, cert.m2).G
    if not (cone_subset(G, cert.G) and cone_subset(cert.G, G)):
        return False
    Zall = PolySet(ctx.dim, (Polyhedron.whole(ctx.dim),))
    for it in Z:
        Zall = Zall.intersect(it.Z)
    return subset(Zall, Polyhedron.from_cone(G))


def _fit_ladder(ctx: StalkContext, xi: CovectorPoint, Vpolars: dict, max_m: int) -> int:
    m = 1
    while m <= max_m:
        if all(cone_subset(Vp, g_cone(ctx, k, xi, m)) for k, Vp in Vpolars.items()):
            return m
        m *= 2
    raise SearchFailure(f"no ladder index up to {max_m} contains the polar cones")


# --------------------------------------------------------------- multicone


def multicone(family, direction, m) -> PolySet:
    """``m``-th member of a decreasing cofinal family of multi-cones around ``direction``.

    For each block ``j`` with ``p^(j) != 0``:
    ``|x_{I_j ∖ Î_j}|_1 + |P^⊥ x^(j)|_1 < (1/m) <x^(j), p^(j)>``, where ``P^⊥``
    removes the component along ``p^(j)``.
    """
    ctx = _ctx(family)
    p = _cov(ctx, direction)
    m = frac(m)
    if m <= 0:
        raise InputError("family index must be positive")
    eps = 1 / m
    rows = []
    for j in range(1, ctx.ell + 1):
        pj = p.block(ctx, j)
        if not any(pj):
            continue
        blk = ctx.block(j)
        below = [i for i in ctx.I_positions(j) if i not in blk]
        pair = _pair_row(ctx, j, p, eps)
        # orthogonal part of x^(j): x_i - <x, p> p_i / |p|^2
        nrm = dot(pj, pj)
        perp = []
        if len(blk) > 1:
            for a, i in enumerate(blk):
                v = [Fraction(0)] * ctx.dim
                v[i] += 1
                for b, i2 in enumerate(blk):
                    v[i2] -= pj[a] * pj[b] / nrm
                perp.append(tuple(v))
        terms = [ctx.unit(i) for i in below] + perp
        for signs in product((1, -1), repeat=len(terms)):
            row = list(pair)
            for t, s in zip(terms, signs):
                row = [r - s * x for r, x in zip(row, t)]
            rows.append(tuple(row))
    uniq = list(dict.fromkeys(rows))
    return PolySet(ctx.dim, (Polyhedron.make(ctx.dim, [(r, 0) for r in uniq], strict=[True] * len(uniq)),))


def mixed_ladder(family, I: Sequence[int], J: Sequence[int], p, m: int) -> tuple[PolySet, Cone]:
    """``W_m`` (multi-cone with ``J``-blocks zeroed, in the ball ``2^-m``) and ``G_m`` over ``J``."""
    ctx = _ctx(family)
    I, J = set(I), set(J)
    if I & J or I | J != set(range(1, ctx.ell + 1)):
        raise InputError("I and J must partition 1..l")
    xi = _cov(ctx, p)
    dir_ = list(xi.xi)
    for j in J:
        for i in ctx.block(j):
            dir_[i] = Fraction(0)
    W = multicone(ctx, dir_, m).intersect(box(ctx.dim, [0] * ctx.dim, Fraction(1, 2**m), strict=True))
    parts = [g_cone(ctx, k, xi, m) for k in sorted(J)]
    G = minkowski_sum(parts) if parts else zero_cone(ctx.dim)
    return W, G


# ------------------------------------------------------------------- ξ_G


def xi_G(family, p, G_parts: Sequence[Cone], sigma=2, max_sigma=2**64) -> tuple[Vec, Fraction]:
    """``(σ^{#J≻1} xi^(1), ..., σ^{#J≻l} xi^(l))`` with ``ΣG_k`` proper w.r.t. it."""
    ctx = _ctx(family)
    xi = _cov(ctx, p)
    sigma = frac(sigma)
    if sigma <= 0:
        raise InputError("sigma must be positive")
    Gs = minkowski_sum(list(G_parts))
    exps = {k: len(ctx.d.succ[k - 1]) for k in range(1, ctx.ell + 1)}
    while sigma <= max_sigma:
        v = [Fraction(0)] * ctx.dim
        for k in range(1, ctx.ell + 1):
            for i in ctx.block(k):
                v[i] = sigma ** exps[k] * xi.xi[i]
        v = tuple(v)
        if Gs.is_zero:
            return v, sigma
        if any(v) and is_proper_wrt(Gs, v):
            return v, sigma
        sigma *= 2
    raise SearchFailure(f"sum of cones not proper for any sigma up to {max_sigma}")


def sigma_exponents(family) -> dict[int, int]:
    ctx = _ctx(family)
    return {k: len(ctx.d.succ[k - 1]) for k in range(1, ctx.ell + 1)}


# ------------------------------------------------------------------ J*, L


@dataclass(frozen=True)
class LJStar:
    Jstar: frozenset[int]
    L: Cone
    G_in_L: bool
    full_in_L: bool

    def to_json(self) -> dict:
        return {
            "J_star": sorted(self.Jstar),
            "L": self.L.to_json(),
            "G_in_L": self.G_in_L,
            "G_full_dimensional_in_L": self.full_in_L,
        }


def jstar(family, p) -> frozenset[int]:
    ctx = _ctx(family)
    xi = _cov(ctx, p)
    return frozenset(
        j for j in range(1, ctx.ell + 1) if all(not any(xi.block(ctx, a)) for a in preceq(ctx.d, j))
    )


def L_and_Jstar(family, p, m: int = 2) -> LJStar:
    ctx = _ctx(family)
    Js = jstar(ctx, p)
    L = cone_from_h(ctx.dim, [], [ctx.unit(i) for i in ctx.blocks(Js)])
    G = g_ladder(ctx, p, m).G
    return LJStar(Js, L, cone_subset(G, L), G.dimension == L.dimension)
