from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from multimicro.cones import (
    PolySet,
    Polyhedron,
    antipode,
    as_polyset,
    box,
    cone_equal,
    cone_from_h,
    cone_from_json,
    cone_from_v,
    cone_rel_int_point,
    cone_subset,
    dimension,
    full_cone,
    hv_convert,
    intersect,
    intersect_cones,
    is_proper_wrt,
    member,
    minkowski_sum,
    polar,
    primitive,
    project,
    relative_interior_point,
    set_equal,
    subset,
    zero_cone,
)
from multimicro.errors import EmptyError, InputError

from helpers import pointed_cone_around, rand_cone, rand_poly, seeds


def rows(vs):
    return {tuple(primitive(v)) for v in vs}


def test_orthant_rays():
    A = cone_from_h(2, [[1, 0], [0, 1]])
    assert rows(A.rays) == {(1, 0), (0, 1)} and not A.lines


def test_rays_to_facets():
    A = cone_from_v(2, [[1, 0], [1, 1]])
    assert rows(A.ineqs) == {(0, 1), (1, -1)}


def test_empty_hrep_is_whole_space():
    A = cone_from_h(2)
    assert len(A.lines) == 2 and A.dimension == 2


def test_polar_examples():
    assert polar(zero_cone(3)) == full_cone(3)
    assert polar(cone_from_v(2, [[1, 0]])) == cone_from_h(2, [[1, 0]])
    assert polar(cone_from_v(2, [[1, 0], [1, 1]])) == cone_from_h(2, [[1, 0], [1, 1]])


def test_antipode_examples():
    assert antipode(cone_from_v(2, [[1, 0]])) == cone_from_v(2, [[-1, 0]])
    assert antipode(zero_cone(2)) == zero_cone(2)
    assert antipode(cone_from_h(2, [[1, 0], [0, 1]])) == cone_from_h(2, [[-1, 0], [0, -1]])


def test_sum_examples():
    e1, e2 = cone_from_v(2, [[1, 0]]), cone_from_v(2, [[0, 1]])
    assert minkowski_sum([e1, e2]) == cone_from_h(2, [[1, 0], [0, 1]])
    G = cone_from_v(2, [[1, 2], [3, -1]])
    assert minkowski_sum([G, zero_cone(2)]) == G
    with pytest.raises(InputError):
        minkowski_sum([G, zero_cone(3)])


def test_proper_examples():
    assert is_proper_wrt(cone_from_v(2, [[1, 0], [1, 1]]), [1, 0])
    assert not is_proper_wrt(cone_from_h(2, [[1, 0]]), [1, 0])
    assert is_proper_wrt(zero_cone(2), [0, 1])
    with pytest.raises(InputError):
        is_proper_wrt(zero_cone(2), [0, 0])


def test_membership_examples():
    H = Polyhedron.make(2, [([1, 0], 0)])
    assert member(H, [1, 1])
    assert subset(Polyhedron.from_cone(cone_from_v(2, [[1, 0]])), H)
    P = Polyhedron.make(2, [([1, 0], 0)], [([0, 1], 0)])
    q = relative_interior_point(P)
    assert q[1] == 0 and q[0] > 0
    with pytest.raises(EmptyError):
        relative_interior_point(Polyhedron.make(1, [([1], 1), ([-1], 0)]))


def test_cone_json_routes():
    A = cone_from_v(3, [[1, 0, 0], [0, 1, 1]])
    assert cone_from_json(A.to_json()) == A
    assert cone_from_json({"dim": 3, "vrep": {"rays": [[1, 0, 0], [0, 1, 1]]}}) == A
    with pytest.raises(InputError):
        cone_from_json({"dim": 3})


def test_strict_polyhedra():
    P = Polyhedron.make(1, [([1], 0)], strict=[True])
    assert not P.contains([0]) and P.contains([Fraction(1, 9)])
    assert P.closure().contains([0])
    assert not Polyhedron.make(1, [([1], 0), ([-1], 0)], strict=[True, False]).point()


def test_polyset_union_subset():
    a = Polyhedron.make(1, [([1], 0)])
    b = Polyhedron.make(1, [([-1], 0)])
    U = PolySet.of([a, b])
    assert subset(Polyhedron.whole(1), U)
    assert not subset(Polyhedron.whole(1), PolySet.of([a]))
    assert dimension(intersect(a, b)) == 0


def test_box_and_project():
    B = box(2, [0, 0], 1)
    assert B.contains([1, -1]) and not B.contains([2, 0])
    assert set_equal(project(B, [0]), box(1, [0], 1))


def test_polyhedron_json_round_trip():
    P = Polyhedron.make(3, [([1, -2, 0], Fraction(1, 3))], [([0, 1, 1], 0)], strict=[True])
    assert Polyhedron.from_json(P.to_json()) == P
    S = as_polyset(P)
    assert PolySet.from_json(S.to_json()) == S


@given(seeds)
@settings(max_examples=80, deadline=None)
def test_prop_double_polar(seed):
    rng = random.Random(seed)
    A = rand_cone(rng, rng.randint(2, 5))
    assert polar(polar(A)) == A
    assert hv_convert(A) == A
    assert antipode(antipode(A)) == A


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_prop_sum_polar_duality(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 4)
    Gs = [rand_cone(rng, d) for _ in range(rng.randint(1, 3))]
    assert polar(minkowski_sum(Gs)) == intersect_cones([polar(G) for G in Gs])


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_prop_sum_of_proper_is_proper(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 4)
    xi = [rng.randint(-2, 2) for _ in range(d)]
    if not any(xi):
        xi[0] = 1
    Gs = [pointed_cone_around(rng, xi) for _ in range(rng.randint(1, 3))]
    assert all(is_proper_wrt(G, xi) for G in Gs)
    assert is_proper_wrt(minkowski_sum(Gs), xi)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_prop_blockwise_polar(seed):
    rng = random.Random(seed)
    A, B = rand_cone(rng, 2), rand_cone(rng, 2)

    def prod(X, Y):
        rays = [tuple(r) + (0, 0) for r in X.rays] + [(0, 0) + tuple(r) for r in Y.rays]
        lines = [tuple(r) + (0, 0) for r in X.lines] + [(0, 0) + tuple(r) for r in Y.lines]
        return cone_from_v(4, rays, lines)

    assert polar(prod(A, B)) == prod(polar(A), polar(B))


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_prop_relint_and_subset(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 4)
    A = rand_cone(rng, d)
    assert A.contains(cone_rel_int_point(A))
    assert cone_subset(A, minkowski_sum([A, rand_cone(rng, d)]))
    assert cone_equal(A, cone_from_h(d, A.ineqs, A.eqs))
    P = rand_poly(rng, d)
    if not P.is_empty():
        assert P.contains(relative_interior_point(P))
        assert member(P, P.point())
