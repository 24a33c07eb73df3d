"""Monomial scaling schemes for the multi-normal deformation and its cotangent analogue."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cones import Vec, dot, frac, vec
from .errors import InputError
from .indices import DerivedIndices, IndexFamily, derive

P_PRIME = "P_PRIME"
P_PLUS = "P_PLUS"


@dataclass(frozen=True)
class MonomialScheme:
    """Coordinate ``i`` scales as ``prod_j t_j**exponents[i][j] * x_i``."""

    ell: int
    exponents: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.ell < 1:
            raise InputError("a scheme needs at least one parameter")
        for m in self.exponents:
            if len(m) != self.ell:
                raise InputError(f"exponent vector {m} has length {len(m)}, expected {self.ell}")
            if any((not isinstance(e, int)) or e < 0 for e in m):
                raise InputError(f"exponents must be nonnegative integers: {m}")

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def monomial(self, i: int) -> tuple[int, ...]:
        return self.exponents[i]

    def groups(self) -> dict[tuple[int, ...], list[int]]:
        """Coordinates (0-based) grouped by their exponent vector."""
        out: dict[tuple[int, ...], list[int]] = {}
        for i, m in enumerate(self.exponents):
            out.setdefault(m, []).append(i)
        return out

    def to_json(self) -> dict:
        return {"ell": self.ell, "exponents": [list(m) for m in self.exponents]}

    @staticmethod
    def from_json(obj: dict) -> "MonomialScheme":
        try:
            return MonomialScheme(int(obj["ell"]), tuple(tuple(int(e) for e in m) for m in obj["exponents"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"scheme JSON needs 'ell' and 'exponents': {exc}") from None

    def describe(self, names: Sequence[str] | None = None) -> list[str]:
        """Human-readable monomials, e.g. ``t1*t2*x2``."""
        names = names or [f"x{i + 1}" for i in range(self.dim)]
        out = []
        for m, nm in zip(self.exponents, names):
            parts = []
            for j, e in enumerate(m, 1):
                if e == 1:
                    parts.append(f"t{j}")
                elif e > 1:
                    parts.append(f"t{j}^{e}")
            out.append("*".join(parts + [nm]))
        return out


def _indicator(S: Iterable[int], ell: int) -> tuple[int, ...]:
    S = set(S)
    return tuple(1 if j in S else 0 for j in range(1, ell + 1))


def scheme_from_family(family: IndexFamily, derived: DerivedIndices | None = None) -> MonomialScheme:
    d = derived or derive(family)
    ell = family.ell
    ex = []
    for i in range(1, family.n + 1):
        j = d.block_of(i)
        ex.append(_indicator(d.hatJ[j - 1], ell) if j else (0,) * ell)
    return MonomialScheme(ell, tuple(ex))


def scheme_for_dual(family: IndexFamily, derived: DerivedIndices | None = None) -> MonomialScheme:
    """Scheme on ``(x; xi)`` in R^{2n}: base as for the family, fiber by complements."""
    d = derived or derive(family)
    ell = family.ell
    base = scheme_from_family(family, d).exponents
    fiber = []
    for i in range(1, family.n + 1):
        j = d.block_of(i)
        fiber.append(_indicator(d.hatJc[j - 1], ell) if j else (1,) * ell)
    return MonomialScheme(ell, base + tuple(fiber))


def freeze(scheme: MonomialScheme, K: Iterable[int]) -> MonomialScheme:
    """Set ``t_j = 1`` for ``j`` outside ``K`` (1-based), keeping the other parameters."""
    ks = sorted(set(K))
    if not ks or any(not 1 <= k <= scheme.ell for k in ks):
        raise InputError(f"bad parameter subset {ks}")
    return MonomialScheme(len(ks), tuple(tuple(m[k - 1] for k in ks) for m in scheme.exponents))


def apply_scheme(scheme: MonomialScheme, x: Sequence, t: Sequence) -> Vec:
    x, t = vec(x), vec(t)
    if len(x) != scheme.dim:
        raise InputError(f"point has length {len(x)}, scheme dimension is {scheme.dim}")
    if len(t) != scheme.ell:
        raise InputError(f"parameter vector has length {len(t)}, expected {scheme.ell}")
    if any(v <= 0 for v in t):
        raise InputError("scaling parameters must be positive")
    out = []
    for xi, m in zip(x, scheme.exponents):
        f = Fraction(1)
        for tj, e in zip(t, m):
            f *= tj**e
        out.append(xi * f)
    return tuple(out)


@dataclass(frozen=True)
class CotangentPoint:
    """``(x; xi)`` with both halves in original coordinate order."""

    x: Vec
    xi: Vec

    def __post_init__(self):
        if len(self.x) != len(self.xi):
            raise InputError("base and fiber halves differ in length")

    @staticmethod
    def from_blocks(derived: DerivedIndices, xb: Sequence[Sequence], xib: Sequence[Sequence]) -> "CotangentPoint":
        return CotangentPoint(from_blocks(derived, xb), from_blocks(derived, xib))

    def flat(self) -> Vec:
        return self.x + self.xi


def to_blocks(derived: DerivedIndices, v: Sequence) -> list[Vec]:
    """Split a length-n vector into ``(v^(0), ..., v^(l))``."""
    v = vec(v)
    if len(v) != derived.n:
        raise InputError(f"vector of length {len(v)}, expected {derived.n}")
    return [tuple(v[i - 1] for i in sorted(b)) for b in derived.blocks]


def from_blocks(derived: DerivedIndices, blocks: Sequence[Sequence]) -> Vec:
    if len(blocks) != derived.ell + 1:
        raise InputError(f"expected {derived.ell + 1} blocks, got {len(blocks)}")
    out = [Fraction(0)] * derived.n
    for b, vals in zip(derived.blocks, blocks):
        vals = vec(vals)
        if len(vals) != len(b):
            raise InputError(f"block of size {len(vals)} where {len(b)} expected")
        for i, v in zip(sorted(b), vals):
            out[i - 1] = v
    return tuple(out)


def hamiltonian_relabel(
    family: IndexFamily, I: Iterable[int], J: Iterable[int], point: CotangentPoint
) -> CotangentPoint:
    """For blocks ``j in J`` send position to ``xi^(j)`` and fiber to ``-x^(j)``."""
    I, J = set(I), set(J)
    full = set(range(1, family.ell + 1))
    if I & J or I | J != full:
        raise InputError("I and J must partition 1..l")
    d = derive(family)
    x, xi = list(point.x), list(point.xi)
    for j in J:
        for i in d.hatI[j - 1]:
            x[i - 1], xi[i - 1] = point.xi[i - 1], -point.x[i - 1]
    return CotangentPoint(tuple(x), tuple(xi))


def pairing_class(eta: Sequence[Sequence], xi: Sequence[Sequence]) -> str:
    if len(eta) != len(xi):
        raise InputError("block count mismatch")
    for a, b in zip(eta, xi):
        if len(a) != len(b):
            raise InputError("block size mismatch")
        if dot(vec(a), vec(b)) > 0:
            return P_PLUS
    return P_PRIME


def block_pairings(derived: DerivedIndices, x: Sequence, xi: Sequence) -> list[Fraction]:
    return [dot(a, b) for a, b in zip(to_blocks(derived, x), to_blocks(derived, xi))]


def parse_t(values: Iterable) -> Vec:
    return tuple(frac(v) for v in values)
