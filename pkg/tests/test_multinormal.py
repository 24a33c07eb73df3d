from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from multimicro.cones import Polyhedron, PolySet, set_equal, subset
from multimicro.deformation import MonomialScheme, scheme_from_family
from multimicro.errors import InputError, ResourceError
from multimicro.indices import IndexFamily, derive, restrict
from multimicro.multinormal import (
    IN,
    INCONCLUSIVE,
    LIKELY_IN,
    LIKELY_OUT,
    OUT,
    GRow,
    MembershipCertificate,
    SeparationCertificate,
    agrees,
    curve_point,
    mnc_describe,
    mnc_member,
    oracle_member,
    verify_membership,
    verify_separation,
)

from helpers import describe_or_skip, rand_family, rand_polyset, seeds

F = Fraction
TAK2 = scheme_from_family(IndexFamily.of(2, [[1, 2], [2]]))
ZT = PolySet.of([Polyhedron.make(2, [([-1, 1], 0), ([1, 0], 0)])])
RADIAL1 = MonomialScheme(1, ((1,),))
RADIAL2 = MonomialScheme(1, ((1,), (1,)))
LADDER = (2, (F(1, 2), F(1, 4), F(1, 8)), 20)


def check(scheme, Z, p):
    res = mnc_member(scheme, Z, p)
    if res.verdict == IN:
        assert verify_membership(scheme, Z, p, res.certificate)
    else:
        assert verify_separation(scheme, Z, res.certificate)
    return res.verdict


def test_takeuchi_r2_membership():
    assert check(TAK2, ZT, [0, 1]) == IN
    assert check(TAK2, ZT, [0, -1]) == OUT
    assert check(TAK2, ZT, [1, 0]) == OUT
    assert check(TAK2, ZT, [0, 0]) == IN


def test_invariant_cone_contains_its_points():
    Z = PolySet.of([Polyhedron.make(2, [([-3, 1], 0), ([1, 0], 0)])])
    assert check(RADIAL2, Z, [1, 5]) == IN
    assert check(RADIAL2, Z, [1, 2]) == OUT


def test_far_set_has_empty_cone():
    Z = PolySet.of([Polyhedron.make(1, [([1], 1)])])
    for p in (-2, 0, 1, 7):
        assert check(RADIAL1, Z, [p]) == OUT
    assert oracle_member(RADIAL1, Z, [1], LADDER).verdict == LIKELY_OUT


def test_takeuchi_r2_description():
    D = mnc_describe(TAK2, ZT)
    assert set_equal(D.cone, Polyhedron.make(2, [([0, 1], 0)], [([1, 0], 0)]))
    assert D.chambers


def test_conic_set_describes_itself():
    Z = PolySet.of([Polyhedron.make(2, [([-3, 1], 0), ([1, 0], 0)])])
    assert set_equal(mnc_describe(RADIAL2, Z).cone, Z)


def test_description_distributes_over_unions():
    A = Polyhedron.make(2, [([-3, 1], 0), ([1, 0], 0)])
    B = Polyhedron.make(2, [([0, -1], 0), ([-1, 0], 0)])
    D = mnc_describe(RADIAL2, PolySet.of([A, B])).cone
    assert set_equal(D, PolySet.of([A, B]))


def test_describe_guard():
    s = MonomialScheme(4, ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))
    Z = PolySet.of([Polyhedron.whole(4)])
    with pytest.raises(ResourceError):
        mnc_describe(s, Z)


def test_oracle_on_takeuchi():
    assert oracle_member(TAK2, ZT, [0, 1], LADDER).verdict == LIKELY_IN
    assert oracle_member(TAK2, ZT, [1, 0], LADDER).verdict == LIKELY_OUT
    assert agrees(IN, LIKELY_IN) and agrees(OUT, INCONCLUSIVE) and not agrees(IN, LIKELY_OUT)


def test_separation_examples():
    Z = PolySet.of([Polyhedron.make(2, [([-1, 0], 0)])])
    G = Polyhedron.make(2, [([1, -1], 0), ([1, 1], 0), ([1, 0], 0)], strict=[False, False, True])
    assert verify_separation(None, Z, SeparationCertificate.from_polyhedron(G, 1))
    assert not verify_separation(None, PolySet.of([Polyhedron.whole(2)]), SeparationCertificate.from_polyhedron(G, 1))


def test_certificate_json_round_trip():
    r_in = mnc_member(TAK2, ZT, [0, 1])
    c = MembershipCertificate.from_json(r_in.certificate.to_json())
    assert verify_membership(TAK2, ZT, [0, 1], c)
    r_out = mnc_member(TAK2, ZT, [1, 0])
    s = SeparationCertificate.from_json(r_out.certificate.to_json())
    assert s == r_out.certificate and verify_separation(TAK2, ZT, s)
    assert GRow.from_json(GRow("lin", (F(1), F(0)), F(0), True).to_json()).strict


def test_tampered_certificate_fails():
    res = mnc_member(TAK2, ZT, [0, 1])
    good = res.certificate
    flipped = tuple((e, tuple(-x for x in v)) for e, v in good.perturbation)
    bad = MembershipCertificate(good.member, good.w, good.kappa, flipped, good.tau0)
    assert verify_membership(TAK2, ZT, [0, 1], good)
    assert not verify_membership(TAK2, ZT, [0, 1], bad)
    assert not verify_membership(TAK2, ZT, [1, 1], good)


def test_curve_lands_in_set():
    res = mnc_member(TAK2, ZT, [0, 1])
    t, x = curve_point(TAK2, [0, 1], res.certificate, res.certificate.tau0 / 3)
    from multimicro.deformation import apply_scheme

    assert ZT.contains(apply_scheme(TAK2, x, t))


def test_dimension_mismatch():
    with pytest.raises(InputError):
        mnc_member(TAK2, ZT, [0, 1, 2])


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_prop_member_matches_description(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    fam = rand_family(rng, n, rng.randint(1, n))
    s = scheme_from_family(fam)
    Z = rand_polyset(rng, n)
    if Z.is_empty():
        return
    D = describe_or_skip(mnc_describe, s, Z).cone
    for _ in range(3):
        p = [rng.randint(-2, 2) for _ in range(n)]
        assert D.contains(p) == (check(s, Z, p) == IN)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_prop_monotone(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    s = scheme_from_family(rand_family(rng, n, rng.randint(1, n)))
    Z = rand_polyset(rng, n)
    if Z.is_empty():
        return
    Z2 = Z.union(rand_polyset(rng, n))
    A = describe_or_skip(mnc_describe, s, Z).cone
    B = describe_or_skip(mnc_describe, s, Z2).cone
    assert subset(A, B)
    for P in A.members:
        assert P.is_closed


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_prop_restriction_compatibility(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    fam = rand_family(rng, n, rng.randint(1, min(3, n)))
    K = sorted(rng.sample(range(1, fam.ell + 1), rng.randint(1, fam.ell)))
    Z = rand_polyset(rng, n)
    if Z.is_empty():
        return
    d = derive(fam)
    p = [F(rng.randint(-2, 2)) for _ in range(n)]
    for j in set(range(1, fam.ell + 1)) - set(K):
        for i in d.hatI[j - 1]:
            p[i - 1] = F(0)
    a = check(scheme_from_family(fam), Z, p)
    b = check(scheme_from_family(restrict(fam, K)), Z, p)
    assert a == b


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_prop_oracle_concordance(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    s = scheme_from_family(rand_family(rng, n, rng.randint(1, min(3, n))))
    Z = rand_polyset(rng, n)
    if Z.is_empty():
        return
    p = [rng.randint(-2, 2) for _ in range(n)]
    v = check(s, Z, p)
    assert agrees(v, oracle_member(s, Z, p, (2, tuple(F(1, 2**k) for k in range(1, 8)), 20)).verdict)
