from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from multimicro.cohomology import (
    arrangement_complex,
    compare_families,
    complex_for_regions,
    euler_of,
    rel_cohomology,
    stalk_limit,
)
from multimicro.cones import Polyhedron, PolySet, box
from multimicro.errors import InputError, PreconditionError, ResourceError
from multimicro.indices import IndexFamily, majima

from helpers import seeds

F = Fraction
LINE = IndexFamily.of(1, [[1]])
ORIGIN = Polyhedron.make(1, [], [((1,), 0)])
HALF = Polyhedron.make(1, [((1,), 0)])


def _dd_is_zero(cx) -> bool:
    for k in range(2, cx.d + 1):
        hi, lo = cx.boundary_matrix(k), cx.boundary_matrix(k - 1)
        acc: dict[tuple[int, int], int] = {}
        for (s, t), a in hi.items():
            for (t2, u), b in lo.items():
                if t2 == t:
                    acc[(s, u)] = acc.get((s, u), 0) + a * b
        if any(acc.values()):
            return False
    return True


def _interval():
    regions = {
        "U": box(1, [0], F(1, 2), strict=True),
        "origin": ORIGIN,
        "half": HALF,
        "pos": Polyhedron.make(1, [((1,), 0)], strict=[True]),
        "R": Polyhedron.whole(1),
    }
    return complex_for_regions(1, 1, regions)


def test_arrangement_counts():
    sq = box(2, [0, 0], 1)
    assert arrangement_complex([], sq).counts() == [4, 4, 1]
    one = arrangement_complex([((1, 0), 0)], sq)
    assert one.counts() == [6, 7, 2]
    assert one.euler_characteristic() == 1
    axes = arrangement_complex([((1, 0), 0), ((0, 1), 0)], sq)
    assert axes.counts() == [9, 12, 4]
    assert _dd_is_zero(axes)


def test_relative_cohomology_on_interval():
    cx = _interval()
    assert rel_cohomology(cx, "U", "origin", "R").ranks == (0, 1)
    assert rel_cohomology(cx, "U", "half", "R").ranks == (0, 0)
    assert rel_cohomology(cx, "U", "origin", "half").ranks == (0, 0)
    assert rel_cohomology(cx, "U", "origin", "origin").ranks == (1, 0)


def test_open_interval_is_acyclic():
    cx = _interval()
    assert rel_cohomology(cx, "U", "U", "R").ranks == (1, 0)
    assert euler_of(cx, "U", "R") == 1


def test_precondition_checks():
    cx = _interval()
    with pytest.raises(PreconditionError):
        rel_cohomology(cx, "origin", "origin", "R")  # a point is not open
    with pytest.raises(PreconditionError):
        rel_cohomology(cx, "U", "pos", "R")  # an open ray is not closed in U
    U2 = box(2, [0, 0], F(1, 2), strict=True)
    quadrant = Polyhedron.make(2, [((1, 0), 0), ((0, 1), 0)], strict=[True, True])
    corner = Polyhedron.make(2, [], [((1, 0), 0), ((0, 1), 0)])
    cx2 = complex_for_regions(2, 1, {"U": U2, "W": PolySet.of([quadrant, corner])})
    with pytest.raises(PreconditionError):
        rel_cohomology(cx2, "U", "U", "W")  # the point and the open quadrant skip the rays
    with pytest.raises(InputError):
        rel_cohomology(cx, "U", "nowhere", "R")


def test_dimension_guard():
    with pytest.raises(ResourceError):
        arrangement_complex([], box(4, [0] * 4, 1))
    with pytest.raises(ResourceError):
        stalk_limit(IndexFamily.of(4, [[1, 2, 3, 4]]), [1, 0, 0, 0], Polyhedron.whole(4))


def test_stalks_on_the_line():
    assert stalk_limit(LINE, [1], Polyhedron.whole(1)).table.is_zero
    assert stalk_limit(LINE, [1], ORIGIN).table.ranks == (1, 0)
    assert stalk_limit(LINE, [1], HALF).table.ranks == (1, 0)
    assert stalk_limit(LINE, [-1], HALF).table.is_zero
    r = stalk_limit(LINE, [1], HALF)
    assert r.stabilized and r.table.m is not None


def test_majima_plane_constant_sheaf():
    fam = majima(2)
    for p in ([1, 1], [1, -1]):
        assert stalk_limit(fam, p, Polyhedron.whole(2)).table.ranks == (0, 0, 0)
    assert stalk_limit(fam, [0, 0], Polyhedron.whole(2)).table.ranks == (0, 0, 1)


def test_compare_families_skyscraper():
    res = compare_families(LINE, [1], ORIGIN)
    assert res.agree is True
    assert res.to_json()["G_ladder"]["stabilized"]


def test_stalk_needs_two_steps():
    with pytest.raises(InputError):
        stalk_limit(LINE, [1], ORIGIN, m_max=1)


def _random_lines(rng: random.Random, k: int):
    out = []
    for _ in range(k):
        a = (rng.randint(-2, 2), rng.randint(-2, 2))
        if a == (0, 0):
            a = (1, 0)
        out.append((a, F(rng.randint(-2, 2), 4)))
    return out


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_prop_closed_box_is_contractible(seed):
    rng = random.Random(seed)
    cx = arrangement_complex(_random_lines(rng, rng.randint(0, 3)), box(2, [0, 0], 1))
    assert cx.euler_characteristic() == 1
    assert _dd_is_zero(cx)


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_prop_open_square_is_acyclic(seed):
    rng = random.Random(seed)
    U = box(2, [0, 0], F(1, 2), strict=True)
    cx = complex_for_regions(2, 1, {"U": U, "R": Polyhedron.whole(2)}, _random_lines(rng, rng.randint(0, 2)))
    t = rel_cohomology(cx, "U", "U", "R")
    assert t.ranks == (1, 0, 0)
    assert sum((-1) ** k * r for k, r in enumerate(t.ranks)) == euler_of(cx, "U", "R")


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_prop_half_plane_support_vanishes(seed):
    rng = random.Random(seed)
    a = (rng.randint(-2, 2), rng.randint(-2, 2))
    if a == (0, 0):
        a = (0, 1)
    H = Polyhedron.make(2, [(a, 0)])
    U = box(2, [0, 0], F(1, 2), strict=True)
    cx = complex_for_regions(2, 1, {"U": U, "H": H, "R": Polyhedron.whole(2)})
    assert rel_cohomology(cx, "U", "H", "R").is_zero
