"""Seeded random instances shared by the property and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from multimicro.cones import Cone, Polyhedron, PolySet, cone_from_v
from multimicro.indices import IndexFamily, validate


def rand_family(rng: random.Random, n: int, ell: int) -> IndexFamily:
    """A valid family of ``ell`` members in ``R^n`` (rejection sampling)."""
    while True:
        mem: list[frozenset[int]] = []
        for _ in range(ell * 6):
            I = frozenset(rng.sample(range(1, n + 1), rng.randint(1, n)))
            if I in mem:
                continue
            mem.append(I)
            if not validate(IndexFamily(n, tuple(mem))).ok:
                mem.pop()
            if len(mem) == ell:
                return IndexFamily(n, tuple(mem))


def rand_poly(rng: random.Random, n: int, max_rows: int = 4) -> Polyhedron:
    rows = []
    for _ in range(rng.randint(1, max_rows)):
        rows.append(([rng.randint(-2, 2) for _ in range(n)], rng.choice([0, 0, 0, -1, 1])))
    eqs = []
    if rng.random() < 0.2:
        eqs.append(([rng.randint(-1, 1) for _ in range(n)], 0))
    return Polyhedron.make(n, rows, eqs)


def rand_polyset(rng: random.Random, n: int) -> PolySet:
    return PolySet.of([rand_poly(rng, n) for _ in range(rng.randint(1, 2))])


def rand_cone(rng: random.Random, d: int) -> Cone:
    rays = [[rng.randint(-2, 2) for _ in range(d)] for _ in range(rng.randint(0, d + 1))]
    lines = [[rng.randint(-1, 1) for _ in range(d)] for _ in range(rng.randint(0, 1))] if rng.random() < 0.3 else []
    return cone_from_v(d, rays, lines)


def pointed_cone_around(rng: random.Random, xi: list[int]) -> Cone:
    """Random cone whose generators all pair positively with ``xi``."""
    d = len(xi)
    rays = []
    while len(rays) < rng.randint(1, d + 1):
        r = [rng.randint(-2, 2) for _ in range(d)]
        if sum(a * b for a, b in zip(r, xi)) > 0:
            rays.append(r)
    return cone_from_v(d, rays)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def families(draw, max_n: int = 4, max_ell: int = 3) -> IndexFamily:
    n = draw(st.integers(1, max_n))
    ell = draw(st.integers(1, min(max_ell, n)))
    return rand_family(random.Random(draw(seeds)), n, ell)


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def F(x) -> Fraction:
    return Fraction(x)


def describe_or_skip(fn, *args):
    """Call ``fn``; discard the example when the limit is not polyhedral."""
    from hypothesis import assume

    from multimicro.errors import NonPolyhedralError

    try:
        return fn(*args)
    except NonPolyhedralError:
        assume(False)


ACCEPTANCE_LINES: list[str] = []


def report(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok
