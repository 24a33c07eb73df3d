"""Cellular local cohomology ``H^k_G(U; k_W)`` for polyhedral data in dimension at most 3.

A hyperplane arrangement clipped to a box gives a regular cell complex. Its
face poset carries the Alexandrov topology in which open sets are the sets of
cells closed under passing to cofaces, and a sheaf constant on cells becomes
a functor on the poset. Cohomology on an open union of cells is the derived
limit of that functor, computed from strictly increasing chains of cells:

    C^k = ⊕_{σ0 < ... < σk} F(σk),
    (δc)(σ0..σk) = Σ_{i<k} (-1)^i c(..σ̂i..) + (-1)^k F(σ_{k-1} < σk) c(σ0..σ_{k-1}).

``H_G(U)`` is the kernel of restricting to ``U ∖ G``: the chains with
``σ0 ∈ G``. Ranks are computed modulo two large primes; the larger rank of
each differential is kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .cones import PolySet, Polyhedron, Vec, as_polyset, box, dot, frac, nullspace, primitive, rank, vec
from .errors import InputError, PreconditionError, ResourceError
from .indices import IndexFamily
from .lp import strict_point

PRIMES = (2_147_483_647, 2_305_843_009_213_693_951)
MAX_DIM = 3


# ------------------------------------------------------------ arrangement


def _normalize(a: Sequence, b) -> tuple[Vec, Fraction] | None:
    a, b = vec(a), frac(b)
    if not any(a):
        return None
    scale = None
    for x in a:
        if x:
            scale = abs(x)
            break
    v = tuple(x / scale for x in a)
    b = b / scale
    # fix orientation so that the first nonzero coefficient is positive
    if next(x for x in v if x) < 0:
        v, b = tuple(-x for x in v), -b
    return v, b


@dataclass(frozen=True)
class Cell:
    signs: tuple[int, ...]
    dim: int
    point: Vec
    basis: tuple[Vec, ...]


@dataclass
class CellComplex:
    d: int
    hyperplanes: tuple[tuple[Vec, Fraction], ...]
    n_box: int  # the first n_box hyperplanes bound the box
    cells: tuple[Cell, ...]
    flags: dict[str, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.cells)
        self.up: list[list[int]] = [[] for _ in range(n)]
        self.facets: list[list[int]] = [[] for _ in range(n)]
        for i, s in enumerate(self.cells):
            for j, t in enumerate(self.cells):
                if i != j and t.dim < s.dim and _is_face(t.signs, s.signs):
                    self.up[j].append(i)
                    if t.dim == s.dim - 1:
                        self.facets[i].append(j)

    def counts(self) -> list[int]:
        out = [0] * (self.d + 1)
        for c in self.cells:
            out[c.dim] += 1
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts()))

    def incidence(self, s: int, t: int) -> int:
        """``[σ : τ]`` for a facet ``τ`` of ``σ`` with the stored orientations."""
        S, T = self.cells[s], self.cells[t]
        nvec = tuple(a - b for a, b in zip(T.point, S.point))
        vs = (nvec,) + T.basis
        M = [[dot(v, b) for b in S.basis] for v in vs]
        det = _det(M)
        if det == 0:
            raise InputError("degenerate incidence")
        return 1 if det > 0 else -1

    def boundary_matrix(self, k: int) -> dict[tuple[int, int], int]:
        """Entries ``(σ, τ) -> [σ:τ]`` with ``dim σ = k``."""
        out = {}
        for s, c in enumerate(self.cells):
            if c.dim == k:
                for t in self.facets[s]:
                    out[(s, t)] = self.incidence(s, t)
        return out

    def flag(self, name: str, region) -> frozenset[int]:
        S = as_polyset(region)
        if S.dim != self.d:
            raise InputError(f"region {name} has dimension {S.dim}, complex has {self.d}")
        known = set(self.hyperplanes)
        for P in S.members:
            for a, b in list(P.ineqs) + list(P.eqs):
                h = _normalize(a, b)
                if h is not None and h not in known:
                    raise InputError(f"region {name} has a boundary hyperplane missing from the arrangement")
        idx = frozenset(i for i, c in enumerate(self.cells) if S.contains(c.point))
        self.flags[name] = idx
        return idx

    def to_json(self) -> dict:
        return {
            "dim": self.d,
            "counts": self.counts(),
            "euler_characteristic": self.euler_characteristic(),
            "flags": {k: sorted(v) for k, v in self.flags.items()},
        }


def _is_face(t: Sequence[int], s: Sequence[int]) -> bool:
    return all(a == 0 or a == b for a, b in zip(t, s))


def _det(M: list[list[Fraction]]) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = [list(r) for r in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def _orient(d: int, zero_rows: list[Vec]) -> tuple[Vec, ...]:
    return tuple(primitive(v) for v in nullspace(zero_rows, d)) if zero_rows else tuple(
        tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)
    )


def arrangement_complex(hyperplanes: Iterable, bbox: Polyhedron) -> CellComplex:
    """Cells of the box cut by the hyperplanes ``a.x = b`` (given as ``(a, b)`` pairs)."""
    d = bbox.dim
    if d > MAX_DIM:
        raise ResourceError(f"cell complexes are limited to dimension {MAX_DIM}")
    if bbox.eqs or any(bbox.strict):
        raise InputError("the bounding box must be closed and full-dimensional")
    box_h = []
    for a, b in bbox.ineqs:
        h = _normalize(a, b)
        if h is None:
            continue
        box_h.append((tuple(a), frac(b), h))
    planes: list[tuple[Vec, Fraction]] = []
    allowed: list[tuple[int, ...]] = []
    seen = set()
    for a, b, h in box_h:
        if h in seen:
            continue
        seen.add(h)
        planes.append(h)
        # box interior side keeps the sign of ``a.x - b`` after normalization
        flip = 1 if dot(h[0], a) > 0 else -1
        allowed.append((0, flip))
    n_box = len(planes)
    for a, b in hyperplanes:
        h = _normalize(a, b)
        if h is None or h in seen:
            continue
        seen.add(h)
        planes.append(h)
        allowed.append((1, 0, -1))
    cells: list[Cell] = []

    def rows_for(signs):
        ge, gt, eq = [], [], []
        for (a, b), s in zip(planes, signs):
            if s == 0:
                eq.append((a, b))
            elif s > 0:
                gt.append((a, b))
            else:
                gt.append((tuple(-x for x in a), -b))
        return ge, gt, eq

    def dfs(signs: list[int]):
        k = len(signs)
        if k == len(planes):
            ge, gt, eq = rows_for(signs)
            pt = strict_point(d, ge, gt, eq)
            zero_rows = [planes[i][0] for i, s in enumerate(signs) if s == 0]
            dim = d - rank(zero_rows, d) if zero_rows else d
            cells.append(Cell(tuple(signs), dim, pt, _orient(d, zero_rows)))
            return
        for s in allowed[k]:
            trial = signs + [s]
            ge, gt, eq = rows_for(trial)
            if strict_point(d, ge, gt, eq) is not None:
                dfs(trial)

    dfs([])
    return CellComplex(d, tuple(planes), n_box, tuple(cells))


def complex_for_regions(d: int, radius, regions: Mapping[str, object], extra: Iterable = ()) -> CellComplex:
    """Arrangement in ``[-radius, radius]^d`` refining every region; regions are flagged."""
    hs = list(extra)
    for R in regions.values():
        for P in as_polyset(R).members:
            hs.extend(P.ineqs)
            hs.extend(P.eqs)
    cx = arrangement_complex(hs, box(d, [0] * d, radius))
    for name, R in regions.items():
        cx.flag(name, R)
    return cx


# ------------------------------------------------------------ cochains


@dataclass(frozen=True)
class CohomologyTable:
    ranks: tuple[int, ...]
    stabilized: bool = True
    m: int | None = None

    def to_json(self) -> dict:
        out = {"ranks": {str(k): r for k, r in enumerate(self.ranks)}, "stabilized": self.stabilized}
        if self.m is not None:
            out["m"] = self.m
        return out

    @property
    def is_zero(self) -> bool:
        return not any(self.ranks)


def _up_closed(cx: CellComplex, S: frozenset[int]) -> bool:
    return all(u in S for s in S for u in cx.up[s])


def _locally_closed(cx: CellComplex, W: frozenset[int]) -> bool:
    for s in W:
        for u in cx.up[s]:
            if u in W:
                continue
            if any(v in W for v in cx.up[u]):
                return False
    return True


def _region(cx: CellComplex, R) -> frozenset[int]:
    if isinstance(R, str):
        if R not in cx.flags:
            raise InputError(f"unknown region {R!r}")
        return cx.flags[R]
    return frozenset(R)


class RelativeComplex:
    """Cochains of ``(U, U ∖ G)`` with coefficients in ``k_W``."""

    def __init__(self, cx: CellComplex, U, G, W):
        self.cx = cx
        self.U, self.G, self.W = _region(cx, U), _region(cx, G), _region(cx, W)
        if not _up_closed(cx, self.U):
            raise PreconditionError("U is not open in the cell complex")
        if not _up_closed(cx, self.U - self.G):
            raise PreconditionError("G is not closed in U")
        if not _locally_closed(cx, self.W):
            raise PreconditionError("W is not locally closed")
        self.chains: list[list[tuple[int, ...]]] = [[] for _ in range(cx.d + 1)]
        for s in sorted(self.U & self.G):
            self._grow((s,))
        self.index = [{c: i for i, c in enumerate(cs)} for cs in self.chains]

    def _grow(self, ch: tuple[int, ...]):
        if ch[-1] in self.W:
            self.chains[len(ch) - 1].append(ch)
        for u in sorted(self.cx.up[ch[-1]]):
            if u in self.U:
                self._grow(ch + (u,))

    def differential(self, k: int) -> list[dict[int, int]]:
        """Rows indexed by ``(k+1)``-chains, as sparse maps from ``k``-chain positions."""
        if k + 1 >= len(self.chains):
            return []
        idx = self.index[k]
        rows = []
        for ch in self.chains[k + 1]:
            r: dict[int, int] = {}
            for i in range(k + 2):
                face = ch[:i] + ch[i + 1 :]
                j = idx.get(face)
                if j is None:
                    continue
                # the last face needs the map W(σ_k) -> W(σ_{k+1}); both lie in W here
                r[j] = r.get(j, 0) + (-1) ** i
            rows.append({j: v for j, v in r.items() if v})
        return rows

    def sizes(self) -> list[int]:
        return [len(c) for c in self.chains]


def _rank_mod(rows: list[dict[int, int]], p: int) -> int:
    piv: dict[int, dict[int, int]] = {}
    r = 0
    for row in rows:
        v = {j: x % p for j, x in row.items() if x % p}
        while v:
            c = min(v)
            if c in piv:
                pr = piv[c]
                f = v[c]
                for j, x in pr.items():
                    y = (v.get(j, 0) - f * x) % p
                    if y:
                        v[j] = y
                    else:
                        v.pop(j, None)
            else:
                inv = pow(v[c], p - 2, p)
                piv[c] = {j: (x * inv) % p for j, x in v.items()}
                r += 1
                break
    return r


def _rank(rows: list[dict[int, int]]) -> int:
    return max(_rank_mod(rows, p) for p in PRIMES)


def _ranks_of(rc: RelativeComplex) -> tuple[int, ...]:
    n = rc.cx.d + 1
    dr = [_rank(rc.differential(k)) for k in range(n)]
    sz = rc.sizes()
    return tuple(sz[k] - dr[k] - (dr[k - 1] if k else 0) for k in range(n))


def rel_cohomology(cx: CellComplex, U, G, W) -> CohomologyTable:
    return CohomologyTable(_ranks_of(RelativeComplex(cx, U, G, W)))


def euler_of(cx: CellComplex, U, W) -> int:
    """Euler characteristic of ``RΓ(U; k_W)`` from the chain counts."""
    rc = RelativeComplex(cx, U, U, W)
    return sum((-1) ** k * s for k, s in enumerate(rc.sizes()))


# ------------------------------------------------------- connecting maps


def _kernel_mod(rows: list[dict[int, int]], ncols: int, p: int) -> list[dict[int, int]]:
    """Basis of ``{c : M c = 0}`` modulo ``p``."""
    piv: dict[int, dict[int, int]] = {}
    order: list[int] = []
    for row in rows:
        v = {j: x % p for j, x in row.items() if x % p}
        for c in order:
            if c in v:
                f = v[c]
                for j, x in piv[c].items():
                    y = (v.get(j, 0) - f * x) % p
                    if y:
                        v[j] = y
                    else:
                        v.pop(j, None)
        if not v:
            continue
        c = min(v)
        inv = pow(v[c], p - 2, p)
        new = {j: (x * inv) % p for j, x in v.items()}
        for c2 in order:
            if c in piv[c2]:
                f = piv[c2][c]
                for j, x in new.items():
                    y = (piv[c2].get(j, 0) - f * x) % p
                    if y:
                        piv[c2][j] = y
                    else:
                        piv[c2].pop(j, None)
        piv[c] = new
        order.append(c)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = {f: 1}
        for c, r in piv.items():
            if f in r:
                v[c] = (-r[f]) % p
        basis.append(v)
    return basis


def _transpose(rows: list[dict[int, int]]) -> list[dict[int, int]]:
    cols: dict[int, dict[int, int]] = {}
    for i, r in enumerate(rows):
        for j, v in r.items():
            cols.setdefault(j, {})[i] = v
    return [cols[j] for j in sorted(cols)]


def map_ranks(A: RelativeComplex, B: RelativeComplex) -> tuple[int, ...]:
    """Ranks of ``H^k(A) -> H^k(B)`` induced by restricting cochains to the chains of ``B``."""
    if A.cx is not B.cx:
        raise InputError("both complexes must share a cell complex")
    out = []
    for k in range(A.cx.d + 1):
        best = 0
        for p in PRIMES:
            Z = _kernel_mod(A.differential(k), len(A.chains[k]), p)
            img = []
            for z in Z:
                v = {}
                for j, x in z.items():
                    jb = B.index[k].get(A.chains[k][j])
                    if jb is not None:
                        v[jb] = x
                img.append(v)
            bnd = _transpose(B.differential(k - 1)) if k else []
            r = _rank_mod(img + bnd, p) - _rank_mod(bnd, p)
            best = max(best, r)
        out.append(best)
    return tuple(out)


# --------------------------------------------------------- stalk limits


@dataclass(frozen=True)
class StalkResult:
    table: CohomologyTable
    trajectory: tuple[tuple[int, ...], ...]
    maps: tuple[tuple[int, ...], ...]

    @property
    def stabilized(self) -> bool:
        return self.table.stabilized

    def to_json(self) -> dict:
        out = self.table.to_json()
        out["trajectory"] = [list(t) for t in self.trajectory]
        out["connecting_map_ranks"] = [list(t) for t in self.maps]
        return out


def _lift(family: IndexFamily, positions: Sequence[int], P: Polyhedron) -> Polyhedron:
    """Polyhedron over ``N`` as a cylinder in ``R^n`` (``I_0`` coordinates free)."""
    n = family.n

    def row(a):
        out = [Fraction(0)] * n
        for c, x in zip(positions, a):
            out[c - 1] = x
        return tuple(out)

    return Polyhedron(n, tuple((row(a), b) for a, b in P.ineqs), tuple((row(a), b) for a, b in P.eqs), P.strict)


def _lift_set(family: IndexFamily, coords: Sequence[int], S) -> PolySet:
    S = as_polyset(S)
    return PolySet(family.n, tuple(_lift(family, coords, P) for P in S.members))


def _ball(n: int, m: int) -> Polyhedron:
    return box(n, [0] * n, Fraction(1, 2**m), strict=True)


def _pair(n: int, W: PolySet, steps: Sequence[tuple[int, PolySet]]) -> tuple[list[CohomologyTable], tuple[int, ...] | None]:
    """Tables at consecutive steps on one common complex, plus the connecting-map ranks."""
    regions: dict[str, object] = {"W": W}
    for i, (m, S) in enumerate(steps):
        regions[f"U{i}"] = _ball(n, m)
        regions[f"G{i}"] = S
    cx = complex_for_regions(n, 1, regions)
    rcs = [RelativeComplex(cx, f"U{i}", f"G{i}", "W") for i in range(len(steps))]
    tables = [CohomologyTable(_ranks_of(rc), m=m) for rc, (m, _) in zip(rcs, steps)]
    maps = map_ranks(rcs[0], rcs[1]) if len(rcs) == 2 else None
    return tables, maps


def _check_input(family: IndexFamily, W) -> PolySet:
    if family.n > MAX_DIM:
        raise ResourceError(f"stalk computations are limited to ambient dimension {MAX_DIM}")
    W = as_polyset(W)
    if W.dim != family.n:
        raise InputError(f"coefficient region has dimension {W.dim}, expected {family.n}")
    return W


def stalk_limit(family: IndexFamily, p, W, m_max: int = 4) -> StalkResult:
    """``H^k_{G_m ∩ U_m}(U_m; k_W)`` along the G-ladder until two steps agree through an isomorphism."""
    from .stalk import StalkContext, g_ladder

    W = _check_input(family, W)
    if m_max < 2:
        raise InputError("need at least two ladder steps")
    ctx = StalkContext(family)
    Gs = {m: _lift_set(family, ctx.coords, Polyhedron.from_cone(g_ladder(ctx, p, m).G)) for m in range(1, m_max + 1)}
    traj, maps = [], []
    for m in range(1, m_max):
        (t0, t1), mp = _pair(family.n, W, [(m, Gs[m]), (m + 1, Gs[m + 1])])
        if not traj:
            traj.append(t0.ranks)
        traj.append(t1.ranks)
        maps.append(mp)
        if t0.ranks == t1.ranks and mp == t1.ranks:
            return StalkResult(CohomologyTable(t1.ranks, True, m + 1), tuple(traj), tuple(maps))
    return StalkResult(CohomologyTable(traj[-1], False, m_max), tuple(traj), tuple(maps))


@dataclass(frozen=True)
class CompareResult:
    agree: bool | None
    g_side: StalkResult
    z_side: tuple[tuple[int, ...], ...]
    z_stabilized: bool
    m_interleave: int | None

    def to_json(self) -> dict:
        return {
            "agree": self.agree,
            "G_ladder": self.g_side.to_json(),
            "Z_family": {"trajectory": [list(t) for t in self.z_side], "stabilized": self.z_stabilized},
            "interleave_m": self.m_interleave,
        }


def compare_families(family: IndexFamily, p, W, m_max: int = 4) -> CompareResult:
    """Stabilized G-ladder table against the table of the Z-family (``None`` if either side is open)."""
    from .stalk import StalkContext, enclose, make_z_family

    W = _check_input(family, W)
    ctx = StalkContext(family)
    g = stalk_limit(family, p, W, m_max)
    zs = []
    for m in range(1, m_max + 1):
        acc = PolySet(ctx.dim, (Polyhedron.whole(ctx.dim),))
        for it in make_z_family(ctx, p, m):
            acc = acc.intersect(it.Z)
        zs.append((m, _lift_set(family, ctx.coords, acc)))
    traj = []
    z_stab = False
    for m, Z in zs:
        (t,), _ = _pair(family.n, W, [(m, Z)])
        traj.append(t.ranks)
        if len(traj) >= 2 and traj[-1] == traj[-2]:
            z_stab = True
            break
    m2 = enclose(ctx, p, make_z_family(ctx, p, 1)).m2
    if not (g.stabilized and z_stab):
        return CompareResult(None, g, tuple(traj), z_stab, m2)
    return CompareResult(g.table.ranks == traj[-1], g, tuple(traj), z_stab, m2)
