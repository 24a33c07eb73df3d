from __future__ import annotations

import pytest
from hypothesis import given, settings

from multimicro.errors import InputError, PreconditionError
from multimicro.indices import IndexFamily, derive, majima, mixed_r3, preceq, restrict, takeuchi, validate

from helpers import families


def js(d, attr):
    return {k: v for k, v in d.to_json()[attr].items()}


def test_majima_r3_indices():
    d = derive(majima(3))
    assert js(d, "J") == {"1": [1], "2": [2], "3": [3]}
    assert js(d, "hatJ") == {"1": [1], "2": [2], "3": [3]}
    assert all(not p for p in d.prec) and all(not s for s in d.succ)
    assert [sorted(x) for x in d.incomp] == [[2, 3], [1, 3], [1, 2]]


def test_takeuchi_r3_indices():
    d = derive(takeuchi(3))
    assert js(d, "J") == {"1": [1], "2": [1, 2], "3": [1, 2, 3]}
    assert js(d, "hatI") == {"1": [1], "2": [2], "3": [3]}
    assert js(d, "hatJc") == {"1": [2, 3], "2": [3], "3": []}
    assert sorted(preceq(d, 1)) == [1, 2, 3] and sorted(preceq(d, 3)) == [3]


def test_mixed_r3_indices():
    d = derive(mixed_r3())
    assert js(d, "J") == {"1": [1], "2": [1, 2], "3": [1, 3]}
    assert js(d, "hatJc") == {"1": [2, 3], "2": [3], "3": [2]}
    assert sorted(d.incomp[1]) == [3]


def test_complex_models_as_real_families():
    maj = derive(IndexFamily.of(4, [[1, 2], [3, 4]]))
    assert js(maj, "J") == {"1": [1], "2": [1], "3": [2], "4": [2]}
    tak = derive(IndexFamily.of(4, [[1, 2, 3, 4], [3, 4]]))
    assert js(tak, "J") == {"1": [1], "2": [1], "3": [1, 2], "4": [1, 2]}
    assert js(tak, "hatI") == {"1": [1, 2], "2": [3, 4]}


def test_free_coordinates_form_block_zero():
    d = derive(IndexFamily.of(4, [[2], [3, 4]]))
    assert sorted(d.I0) == [1]
    assert d.block_of(1) == 0 and d.block_of(4) == 2


def test_validate_reports_each_condition():
    assert [v.tag for v in validate(IndexFamily.of(3, [[1, 2], [2, 3]])).violations] == ["H2"]
    assert [v.tag for v in validate(IndexFamily.of(2, [[1], [1]])).violations] == ["H1"]
    assert [v.tag for v in validate(IndexFamily.of(2, [[1], [2], [1, 2]])).violations] == ["H3"]


def test_validate_collects_all_violations():
    rep = validate(IndexFamily.of(3, [[1, 2], [2, 3], [1, 2]]))
    assert sorted(v.tag for v in rep.violations) == ["H1", "H2", "H2"]


def test_derive_rejects_invalid():
    with pytest.raises(PreconditionError):
        derive(IndexFamily.of(3, [[1, 2], [2, 3]]))


def test_bad_input():
    with pytest.raises(InputError):
        IndexFamily.of(2, [[3]])
    with pytest.raises(InputError):
        IndexFamily.of(2, [[]])
    with pytest.raises(InputError):
        IndexFamily.from_json({"n": 2})


def test_restrict_examples():
    assert restrict(takeuchi(3), [2, 3]).to_json() == {"n": 3, "members": [[2, 3], [3]]}
    assert validate(restrict(mixed_r3(), [1])).ok
    assert restrict(mixed_r3(), [1, 2, 3]) == mixed_r3()
    with pytest.raises(InputError):
        restrict(takeuchi(3), [])


def test_json_round_trip():
    f = mixed_r3()
    assert IndexFamily.from_json(f.to_json()) == f


@given(families(max_n=5))
@settings(max_examples=60, deadline=None)
def test_prop_nested_members_nest_J(fam):
    d = derive(fam)
    ms = fam.members
    for i in range(fam.ell):
        for j in range(fam.ell):
            if ms[i] >= ms[j]:
                for a in d.hatI[i]:
                    for b in d.hatI[j]:
                        assert d.J[a - 1] <= d.J[b - 1]


@given(families(max_n=5))
@settings(max_examples=60, deadline=None)
def test_prop_blocks_partition(fam):
    d = derive(fam)
    for i in range(1, fam.n + 1):
        assert sum(i in b for b in d.blocks) == 1


@given(families(max_n=5))
@settings(max_examples=60, deadline=None)
def test_prop_restriction_keeps_hatJ(fam):
    K = list(range(1, fam.ell + 1, 2))
    sub = restrict(fam, K)
    assert validate(sub).ok
    d = derive(sub)
    for pos, j in enumerate(K):
        want = {K.index(k) + 1 for k in K if fam.I(j) <= fam.I(k)}
        assert set(d.hatJ[pos]) == want
