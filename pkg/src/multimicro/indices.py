"""Families of coordinate-subspace submanifolds and their index combinatorics.

A family is a list of nonempty index sets ``I_1, ..., I_l`` inside ``{1..n}``;
``M_j = {x_i = 0 : i in I_j}``. All indices are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InputError, PreconditionError


@dataclass(frozen=True)
class IndexFamily:
    n: int
    members: tuple[frozenset[int], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InputError(f"ambient dimension must be a positive integer, got {self.n!r}")
        if not self.members:
            raise InputError("a family needs at least one member")
        for j, I in enumerate(self.members, 1):
            if not I:
                raise InputError(f"member {j} is empty")
            for i in I:
                if not isinstance(i, int) or not 1 <= i <= self.n:
                    raise InputError(f"member {j} has index {i!r} outside 1..{self.n}")

    @staticmethod
    def of(n: int, members: Iterable[Iterable[int]]) -> "IndexFamily":
        return IndexFamily(n, tuple(frozenset(m) for m in members))

    @property
    def ell(self) -> int:
        return len(self.members)

    def I(self, j: int) -> frozenset[int]:
        return self.members[j - 1]

    def to_json(self) -> dict:
        return {"n": self.n, "members": [sorted(m) for m in self.members]}

    @staticmethod
    def from_json(obj: dict) -> "IndexFamily":
        try:
            n = obj["n"]
            members = obj["members"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"family JSON needs 'n' and 'members': {exc}") from None
        if not isinstance(members, list) or not all(isinstance(m, list) for m in members):
            raise InputError("'members' must be a list of integer lists")
        return IndexFamily.of(n, members)


@dataclass(frozen=True)
class Violation:
    tag: str
    where: tuple[int, ...]
    reason: str

    def to_json(self) -> dict:
        return {"condition": self.tag, "where": list(self.where), "reason": self.reason}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def validate(family: IndexFamily) -> ValidationReport:
    """Check distinctness, laminarity and nonempty top parts; report every violation.

    Connectedness of each ``M_j`` is a geometric condition with no index-level
    content, so only distinctness is checked for the first condition.
    """
    out: list[Violation] = []
    ms = family.members
    ell = len(ms)
    for j in range(ell):
        for k in range(j + 1, ell):
            if ms[j] == ms[k]:
                out.append(Violation("H1", (j + 1, k + 1), f"members {j + 1} and {k + 1} coincide"))
    for j in range(ell):
        for k in range(j + 1, ell):
            a, b = ms[j], ms[k]
            if a & b and not (a <= b or b <= a):
                out.append(
                    Violation("H2", (j + 1, k + 1), f"members {j + 1} and {k + 1} are neither nested nor disjoint")
                )
    for j in range(ell):
        below = set()
        for k in range(ell):
            if ms[k] < ms[j]:
                below |= ms[k]
        if not ms[j] - below:
            out.append(Violation("H3", (j + 1,), f"member {j + 1} is the union of its proper subsets"))
    return ValidationReport(tuple(out))


@dataclass(frozen=True)
class DerivedIndices:
    n: int
    ell: int
    hatI: tuple[frozenset[int], ...]  # index j-1 holds Î_j
    I0: frozenset[int]
    J: tuple[frozenset[int], ...]  # index i-1 holds J_i
    hatJ: tuple[frozenset[int], ...]
    hatJc: tuple[frozenset[int], ...]
    prec: tuple[frozenset[int], ...]
    succ: tuple[frozenset[int], ...]
    incomp: tuple[frozenset[int], ...]

    @property
    def blocks(self) -> tuple[frozenset[int], ...]:
        """The partition ``(Î_0, Î_1, ..., Î_l)``."""
        return (self.I0,) + self.hatI

    def block_of(self, i: int) -> int:
        """Block index ``j`` (0 for Î_0) containing coordinate ``i``."""
        for j, b in enumerate(self.blocks):
            if i in b:
                return j
        raise InputError(f"coordinate {i} outside 1..{self.n}")

    def block_coords(self, j: int) -> list[int]:
        return sorted(self.blocks[j])

    def to_json(self) -> dict:
        s = lambda fs: sorted(fs)
        return {
            "hatI": {str(j + 1): s(b) for j, b in enumerate(self.hatI)},
            "I0": s(self.I0),
            "J": {str(i + 1): s(b) for i, b in enumerate(self.J)},
            "hatJ": {str(j + 1): s(b) for j, b in enumerate(self.hatJ)},
            "hatJc": {str(j + 1): s(b) for j, b in enumerate(self.hatJc)},
            "prec": {str(j + 1): s(b) for j, b in enumerate(self.prec)},
            "succ": {str(j + 1): s(b) for j, b in enumerate(self.succ)},
            "incomp": {str(j + 1): s(b) for j, b in enumerate(self.incomp)},
            "blocks": [s(b) for b in self.blocks],
        }


def derive(family: IndexFamily) -> DerivedIndices:
    rep = validate(family)
    if not rep.ok:
        raise PreconditionError("invalid family: " + "; ".join(v.reason for v in rep.violations))
    ms = family.members
    ell = len(ms)
    full = frozenset(range(1, ell + 1))
    hatI = []
    for j in range(ell):
        below = set()
        for k in range(ell):
            if ms[k] < ms[j]:
                below |= ms[k]
        hatI.append(frozenset(ms[j] - below))
    union = frozenset().union(*ms)
    I0 = frozenset(range(1, family.n + 1)) - union
    J = tuple(frozenset(j + 1 for j in range(ell) if i in ms[j]) for i in range(1, family.n + 1))
    hatJ = tuple(frozenset(k + 1 for k in range(ell) if hatI[j] <= ms[k]) for j in range(ell))
    hatJc = tuple(full - h for h in hatJ)
    prec = tuple(frozenset(j + 1 for j in range(ell) if ms[j] < ms[k]) for k in range(ell))
    succ = tuple(frozenset(j + 1 for j in range(ell) if ms[j] > ms[k]) for k in range(ell))
    incomp = tuple(full - prec[k] - succ[k] - {k + 1} for k in range(ell))
    return DerivedIndices(family.n, ell, tuple(hatI), I0, J, hatJ, hatJc, prec, succ, incomp)


def restrict(family: IndexFamily, K: Iterable[int]) -> IndexFamily:
    """The subfamily ``(I_k)_{k in K}`` in increasing order of ``k``."""
    ks = sorted(set(K))
    if not ks:
        raise InputError("restriction set is empty")
    for k in ks:
        if not 1 <= k <= family.ell:
            raise InputError(f"index {k} outside 1..{family.ell}")
    return IndexFamily(family.n, tuple(family.members[k - 1] for k in ks))


def preceq(d: DerivedIndices, j: int) -> frozenset[int]:
    """``J_{≼j} = J_{≺j} ∪ {j}``."""
    return d.prec[j - 1] | {j}


# reference families
def majima(n: int) -> IndexFamily:
    return IndexFamily.of(n, [[i] for i in range(1, n + 1)])


def takeuchi(n: int) -> IndexFamily:
    return IndexFamily.of(n, [list(range(j, n + 1)) for j in range(1, n + 1)])


def mixed_r3() -> IndexFamily:
    return IndexFamily.of(3, [[1, 2, 3], [2], [3]])
