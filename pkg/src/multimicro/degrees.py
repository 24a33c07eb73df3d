"""Concentration degrees of multi-microlocalized holomorphic-type objects.

Index sets count complex coordinates: ``i`` stands for ``z_i``. A split puts
each ``i`` of ``I = ∪ I_j`` either in ``I_R`` (only ``Im z_i`` is constrained)
or in ``I_C``. A covector entry may be a number or a ``[re, im]`` pair; only
whether it vanishes matters here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .cones import frac
from .errors import InputError, InternalConsistencyError
from .indices import IndexFamily, derive, preceq

REAL_COMPLEX = "REAL_COMPLEX"
COMPLEX = "COMPLEX"
REAL = "REAL"


@dataclass(frozen=True)
class RealComplexSplit:
    I_R: frozenset[int]
    I_C: frozenset[int]

    @staticmethod
    def of(I_R: Iterable[int], I_C: Iterable[int]) -> "RealComplexSplit":
        return RealComplexSplit(frozenset(I_R), frozenset(I_C))

    @staticmethod
    def complex_for(family: IndexFamily) -> "RealComplexSplit":
        return RealComplexSplit(frozenset(), frozenset().union(*family.members))

    @staticmethod
    def real_for(family: IndexFamily) -> "RealComplexSplit":
        return RealComplexSplit(frozenset().union(*family.members), frozenset())

    def check(self, family: IndexFamily):
        I = frozenset().union(*family.members)
        if self.I_R & self.I_C:
            raise InputError(f"I_R and I_C overlap in {sorted(self.I_R & self.I_C)}")
        if self.I_R | self.I_C != I:
            raise InputError(f"I_R and I_C must cover exactly {sorted(I)}")

    @property
    def mode(self) -> str:
        if not self.I_R:
            return COMPLEX
        if not self.I_C:
            return REAL
        return REAL_COMPLEX

    def to_json(self) -> dict:
        return {"I_R": sorted(self.I_R), "I_C": sorted(self.I_C)}

    @staticmethod
    def from_json(obj: dict) -> "RealComplexSplit":
        try:
            return RealComplexSplit.of(obj["I_R"], obj["I_C"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"split JSON needs 'I_R' and 'I_C': {exc}") from None


@dataclass(frozen=True)
class DegreeReport:
    J_star: frozenset[int]
    I_star: frozenset[int]
    degree: int
    mode: str
    J_hat: frozenset[int] | None = None

    def to_json(self) -> dict:
        out = {
            "J_star": sorted(self.J_star),
            "I_star": sorted(self.I_star),
            "degree": self.degree,
            "mode": self.mode,
        }
        if self.J_hat is not None:
            out["J_hat_star"] = sorted(self.J_hat)
        return out


def _entry_zero(v) -> bool:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InputError(f"complex entry must be a number or a [re, im] pair, got {v!r}")
        return frac(v[0]) == 0 and frac(v[1]) == 0
    return frac(v) == 0


def block_zero_flags(family: IndexFamily, p) -> dict[int, bool]:
    """``{j: p^(j) == 0}``; ``p`` maps block index to entries or lists the blocks in order."""
    d = derive(family)
    if isinstance(p, Mapping):
        blocks = {int(k): v for k, v in p.items()}
    elif isinstance(p, Sequence):
        if len(p) != family.ell:
            raise InputError(f"expected {family.ell} covector blocks, got {len(p)}")
        blocks = {j: v for j, v in enumerate(p, 1)}
    else:
        raise InputError("covector must be a list of blocks or a block map")
    out = {}
    for j in range(1, family.ell + 1):
        vals = blocks.get(j, [0] * len(d.hatI[j - 1]))
        if len(vals) != len(d.hatI[j - 1]):
            raise InputError(f"block {j} has {len(vals)} entries, expected {len(d.hatI[j - 1])}")
        out[j] = all(_entry_zero(v) for v in vals)
    return out


def j_star(family: IndexFamily, p) -> frozenset[int]:
    d = derive(family)
    zero = block_zero_flags(family, p)
    return frozenset(j for j in range(1, family.ell + 1) if all(zero[a] for a in preceq(d, j)))


def degree_general(family: IndexFamily, split: RealComplexSplit, p) -> DegreeReport:
    """``N = #I + #(I* ∩ I_C)`` with ``I* = ∪_{j in J*} Î_j``."""
    split.check(family)
    d = derive(family)
    Js = j_star(family, p)
    Is = frozenset().union(*(d.hatI[j - 1] for j in Js)) if Js else frozenset()
    I = frozenset().union(*family.members)
    return DegreeReport(Js, Is, len(I) + len(Is & split.I_C), split.mode)


def degree_complex(family: IndexFamily, p) -> DegreeReport:
    """``N = codim Z + sum_{j in Ĵ*} codim Z_j``, checked against the general formula."""
    Js = j_star(family, p)
    ms = family.members
    # minimal under Z_k ⊊ Z_j, i.e. no other member of J* has a strictly larger index set
    hat = frozenset(j for j in Js if not any(ms[k - 1] > ms[j - 1] for k in Js))
    I = frozenset().union(*ms)
    N = len(I) + sum(len(ms[j - 1]) for j in hat)
    gen = degree_general(family, RealComplexSplit.complex_for(family), p)
    if gen.degree != N:
        raise InternalConsistencyError(f"degree formulas disagree: {N} vs {gen.degree}")
    return DegreeReport(Js, gen.I_star, N, COMPLEX, hat)
