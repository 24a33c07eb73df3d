from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings

from multimicro.cones import (
    Polyhedron,
    PolySet,
    box,
    cone_from_h,
    cone_subset,
    full_cone,
    is_proper_wrt,
    minkowski_sum,
    set_equal,
    subset,
    zero_cone,
)
from multimicro.errors import InputError
from multimicro.indices import IndexFamily, majima, mixed_r3, takeuchi
from multimicro.stalk import (
    CovectorPoint,
    StalkContext,
    check_g_condition,
    check_normal_condition,
    enclose,
    g_ladder,
    g_part_in_gamma,
    gamma,
    jstar,
    L_and_Jstar,
    make_z_family,
    mixed_ladder,
    multicone,
    sharp,
    sigma_exponents,
    verify_wedge,
    xi_G,
)

from helpers import seeds

F = Fraction
STANDARD_FAMILIES = [majima(3), takeuchi(3), mixed_r3()]


def poly(d, ineqs=(), eqs=(), strict=None):
    return Polyhedron.make(d, [(a, 0) for a in ineqs], [(a, 0) for a in eqs], strict)


def test_gamma_takeuchi_k2():
    got = gamma(takeuchi(3), 2, [5, -2, 7])
    assert set_equal(got, poly(3, [[0, -2, 0]], [[0, 0, 1]], [True]))


def test_gamma_mixed_k3():
    got = gamma(mixed_r3(), 3, [1, 4, 3])
    assert set_equal(got, poly(3, [[0, 0, 3]], [[0, 1, 0]], [True]))


def test_gamma_empty_for_zero_block():
    for fam in STANDARD_FAMILIES:
        assert gamma(fam, 2, [1, 0, 1]).is_empty()
    with pytest.raises(InputError):
        gamma(majima(3), 4, [1, 1, 1])


def test_gamma_supports():
    p = [1, -1, 2]
    for fam in STANDARD_FAMILIES:
        d = StalkContext(fam).d
        for k in range(1, 4):
            for k2 in range(k + 1, 4):
                if k2 not in d.succ[k - 1] and k not in d.succ[k2 - 1]:
                    assert gamma(fam, k, p).intersect(gamma(fam, k2, p)).is_empty()


def test_sharp_examples():
    fam = IndexFamily.of(1, [[1]])
    s = sharp(fam, 1, [1])
    assert s.contains([F(1, 3)]) and not s.contains([0]) and not s.contains([-1])
    z = sharp(takeuchi(3), 2, [1, 0, 1])
    assert not z.contains([5, 0]) and z.contains([0, 1])
    t = sharp(takeuchi(3), 3, [1, 1, 2])
    assert t.contains([1])


def test_multicone_takeuchi():
    eps = F(1, 4)
    rows = [[eps, -s2, -s3] for s2 in (1, -1) for s3 in (1, -1)] + [[0, eps, -1], [0, eps, 1], [0, 0, 1]]
    assert set_equal(multicone(takeuchi(3), [1, 1, 1], 4), poly(3, rows, strict=[True] * 7))


def test_multicone_mixed():
    eps = F(1, 4)
    rows = [[eps, -s2, -s3] for s2 in (1, -1) for s3 in (1, -1)] + [[0, 1, 0], [0, 0, 1]]
    assert set_equal(multicone(mixed_r3(), [1, 1, 1], 4), poly(3, rows, strict=[True] * 6))


def test_multicone_majima_is_orthant():
    orth = poly(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], strict=[True] * 3)
    for m in (1, 4, 9):
        assert set_equal(multicone(majima(3), [1, 1, 1], m), orth)


def test_ladder_zero_covector():
    L = g_ladder(takeuchi(3), [0, 0, 0], 3)
    assert L.G.is_zero


def test_ladder_majima_monotone():
    fam = majima(2)
    G1, G2 = g_ladder(fam, [1, 1], 1).G, g_ladder(fam, [1, 1], 2).G
    # one-dimensional blocks: every rung is the closed orthant
    assert cone_subset(G1, G2) and G1 == cone_from_h(2, [[1, 0], [0, 1]])
    T1, T2 = g_ladder(takeuchi(2), [1, 1], 1).G, g_ladder(takeuchi(2), [1, 1], 2).G
    assert cone_subset(T1, T2) and not cone_subset(T2, T1)


def test_ladder_parts_inside_gamma():
    fam = takeuchi(3)
    p = [1, -1, 2]
    L = g_ladder(fam, p, 3)
    for k, G in enumerate(L.parts, 1):
        assert g_part_in_gamma(fam, k, p, G)
    assert check_g_condition(fam, p, L.G)


def test_g_condition_trivial_cases():
    fam = takeuchi(3)
    assert check_g_condition(fam, [1, 1, 1], zero_cone(3))
    assert not check_g_condition(fam, [1, 1, 1], full_cone(3))


def test_normal_condition_examples():
    fam = IndexFamily.of(1, [[1]])
    assert check_normal_condition(fam, [1], PolySet.of([poly(1, eqs=[[1]])]), 1)
    assert not check_normal_condition(fam, [1], PolySet.of([Polyhedron.whole(1)]), 1)
    for it in make_z_family(fam, [1], 3):
        assert check_normal_condition(fam, [1], it.Z, 1)


def test_z_family_shapes():
    z = make_z_family(takeuchi(3), [0, 1, 1], 2)
    assert z[0].Gamma.is_zero and z[0].eps == F(1, 2)
    assert z[1].Z_eps is not None and z[2].Z_eps is None
    fam = IndexFamily.of(2, [[1], [2]])
    assert all(it.Z_eps is None for it in make_z_family(fam, [1, 1], 2))


def test_enclose_takeuchi_generic():
    fam = takeuchi(3)
    p = [2, -1, 3]
    z = make_z_family(fam, p, 4)
    cert = enclose(fam, p, z)
    # the smallest member carries no ε-part, so 2^2 words
    assert len(cert.table) == 4 and all(ok for _, ok in cert.table)
    assert check_g_condition(fam, p, cert.G)


def test_wedge_certificate_is_checked_independently():
    fam = takeuchi(3)
    p = [2, -1, 3]
    z = make_z_family(fam, p, 4)
    cert = enclose(fam, p, z)
    assert verify_wedge(fam, p, z, cert)
    assert not verify_wedge(fam, p, z, replace(cert, delta=cert.delta * 2))
    assert not verify_wedge(fam, p, z, replace(cert, m2=1))


def test_enclose_zero_covector():
    fam = mixed_r3()
    cert = enclose(fam, [0, 0, 0], make_z_family(fam, [0, 0, 0], 2))
    assert cert.G.is_zero


def test_enclose_one_parameter():
    fam = IndexFamily.of(2, [[1, 2]])
    p = [1, 2]
    cert = enclose(fam, p, make_z_family(fam, p, 2))
    assert all(ok for _, ok in cert.table)


def test_mixed_ladder_extremes():
    fam = takeuchi(2)
    p = [1, 1]
    W, G = mixed_ladder(fam, [], [1, 2], p, 2)
    assert G == g_ladder(fam, p, 2).G
    W, G = mixed_ladder(fam, [1, 2], [], p, 2)
    assert G.is_zero
    assert set_equal(W, multicone(fam, p, 2).intersect(box(2, [0, 0], F(1, 4), strict=True)))
    W, G = mixed_ladder(fam, [1], [2], p, 2)
    assert g_part_in_gamma(fam, 2, p, G)
    with pytest.raises(InputError):
        mixed_ladder(fam, [1], [1], p, 2)


def test_sigma_exponents():
    assert sigma_exponents(takeuchi(3)) == {1: 0, 2: 1, 3: 2}
    assert sigma_exponents(majima(3)) == {1: 0, 2: 0, 3: 0}
    v, s = xi_G(majima(3), [1, -1, 2], g_ladder(majima(3), [1, -1, 2], 2).parts)
    assert v == (1, -1, 2)


def test_xi_g_makes_sum_proper():
    fam = takeuchi(3)
    p = [1, -1, 2]
    L = g_ladder(fam, p, 3)
    v, s = xi_G(fam, p, L.parts)
    assert v == (p[0], s * p[1], s * s * p[2])
    assert is_proper_wrt(minkowski_sum(list(L.parts)), v)


def test_jstar_and_L():
    fam = takeuchi(3)
    assert jstar(fam, [1, 1, 1]) == frozenset()
    r = L_and_Jstar(fam, [0, 0, 0])
    assert r.Jstar == {1, 2, 3} and r.L.is_zero
    assert jstar(fam, [0, 1, 2]) == frozenset()
    assert jstar(fam, [1, 0, 0]) == {2, 3}
    r = L_and_Jstar(fam, [1, 0, 0])
    assert r.G_in_L and r.full_in_L


def test_covector_blocks():
    ctx = StalkContext(IndexFamily.of(4, [[2, 3], [3]]))
    c = CovectorPoint.from_blocks(ctx, {1: [5], 2: [7]})
    assert c.xi == (5, 7) and c.to_json(ctx) == {"blocks": {"1": ["5"], "2": ["7"]}}
    with pytest.raises(InputError):
        CovectorPoint.from_blocks(ctx, {1: [1, 2]})


@given(seeds)
@settings(max_examples=12, deadline=None)
def test_prop_cofinality(seed):
    rng = random.Random(seed)
    fam = rng.choice(STANDARD_FAMILIES)
    p = [rng.randint(-2, 2) for _ in range(3)]
    z = make_z_family(fam, p, rng.randint(1, 3))
    cert = enclose(fam, p, z)
    assert all(ok for _, ok in cert.table)
    assert verify_wedge(fam, p, z, cert)
    assert check_g_condition(fam, p, cert.G)


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_prop_ladder_monotone(seed):
    rng = random.Random(seed)
    fam = rng.choice(STANDARD_FAMILIES)
    p = [rng.randint(-2, 2) for _ in range(3)]
    m = rng.randint(1, 4)
    A, B = g_ladder(fam, p, m), g_ladder(fam, p, m + 1)
    assert cone_subset(A.G, B.G)
    assert subset(B.U(3), A.U(3))
    if any(p):
        v, _ = xi_G(fam, p, A.parts)
        assert A.G.is_zero or is_proper_wrt(A.G, v)
