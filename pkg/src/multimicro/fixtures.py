"""Golden fixtures shipped with the package and a runner for them.

A fixture is a JSON object ``{"name", "tags", "kind", "input", "expected"}``.
The runner returns one list of diagnostics per fixture; an empty list means
the fixture reproduced exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

from .cones import PolySet, Polyhedron, as_polyset, primitive, set_equal, vec
from .deformation import MonomialScheme, scheme_for_dual, scheme_from_family
from .degrees import RealComplexSplit, degree_complex, degree_general
from .errors import InputError, MultimicroError
from .indices import IndexFamily, derive, validate


def default_dir() -> Path:
    return Path(str(resources.files("multimicro") / "fixtures"))


def load_fixtures(directory: str | Path | None = None) -> list[dict]:
    d = Path(directory) if directory is not None else default_dir()
    if not d.is_dir():
        raise InputError(f"fixture directory {d} not found")
    out = []
    for f in sorted(d.glob("*.json")):
        try:
            data = json.loads(f.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{f.name}: {exc}") from None
        items = data if isinstance(data, list) else [data]
        for fx in items:
            fx.setdefault("source", f.name)
            out.append(fx)
    return out


def _family(fx: dict) -> IndexFamily:
    return IndexFamily.from_json(fx["input"]["family"])


def _rows_key(P: Polyhedron) -> set:
    """Rows up to positive scaling, with their strictness."""
    out = set()
    for (a, b), s in zip(P.ineqs, P.strict):
        v = primitive(tuple(a) + (-b,))
        out.add((v, s))
    for a, b in P.eqs:
        v = primitive(tuple(a) + (-b,))
        out.add((v, "eq"))
        out.add((tuple(-x for x in v), "eq"))
    return out


def _check_validate(fx):
    rep = validate(_family(fx))
    exp = fx["expected"]
    out = []
    if rep.ok != exp["valid"]:
        out.append(f"valid={rep.ok}, expected {exp['valid']}")
    if "violations" in exp:
        got = sorted(v.tag for v in rep.violations)
        if got != sorted(exp["violations"]):
            out.append(f"violations {got}, expected {sorted(exp['violations'])}")
    return out


def _check_derive(fx):
    d = derive(_family(fx)).to_json()
    out = []
    for key, val in fx["expected"].items():
        got = d.get(key)
        if got != val:
            out.append(f"{key}: got {got}, expected {val}")
    return out


def _check_scheme(fx, dual: bool):
    fam = _family(fx)
    sch = scheme_for_dual(fam) if dual else scheme_from_family(fam)
    exp = [tuple(m) for m in fx["expected"]["exponents"]]
    if list(sch.exponents) != exp:
        return [f"exponents {[list(m) for m in sch.exponents]}, expected {[list(m) for m in exp]}"]
    return []


def _check_gamma(fx):
    from .stalk import gamma

    inp = fx["input"]
    got = gamma(_family(fx), inp["k"], vec(inp["dir"]))
    exp = Polyhedron.from_json(fx["expected"]["gamma"])
    if not set_equal(got, exp):
        return [f"gamma_{inp['k']} differs: {got.to_json()}"]
    return []


def _check_multicone(fx):
    from .stalk import multicone

    inp = fx["input"]
    got = multicone(_family(fx), vec(inp["dir"]), Fraction(inp["m"]))
    exp = Polyhedron.from_json(fx["expected"]["multicone"])
    (P,) = got.members
    out = []
    if _rows_key(P) != _rows_key(exp):
        out.append(f"rows differ: {P.to_json()}")
    if not set_equal(P, exp):
        out.append("sets differ")
    return out


def _check_degree(fx, complex_: bool):
    fam = _family(fx)
    inp, exp = fx["input"], fx["expected"]
    if complex_:
        rep = degree_complex(fam, inp["p"])
    else:
        rep = degree_general(fam, RealComplexSplit.from_json(inp["split"]), inp["p"])
    got = rep.to_json()
    return [f"{k}: got {got.get(k)}, expected {v}" for k, v in exp.items() if got.get(k) != v]


def _check_member(fx):
    from .multinormal import mnc_member

    inp = fx["input"]
    fam = _family(fx)
    sch = scheme_for_dual(fam) if inp.get("dual") else scheme_from_family(fam)
    if "scheme" in inp:
        sch = MonomialScheme.from_json(inp["scheme"])
    res = mnc_member(sch, PolySet.from_json(inp["Z"]), vec(inp["point"]))
    if res.verdict != fx["expected"]["verdict"]:
        return [f"verdict {res.verdict}, expected {fx['expected']['verdict']}"]
    return []


def _check_stalk(fx):
    from .cohomology import stalk_limit

    inp = fx["input"]
    res = stalk_limit(_family(fx), vec(inp["dir"]), PolySet.from_json(inp["W"]), inp.get("m_max", 4))
    exp = fx["expected"]
    out = []
    if list(res.table.ranks) != exp["ranks"]:
        out.append(f"ranks {list(res.table.ranks)}, expected {exp['ranks']}")
    if res.stabilized != exp.get("stabilized", True):
        out.append("stabilization flag differs")
    return out


CHECKS: dict[str, Callable[[dict], list[str]]] = {
    "validate": _check_validate,
    "derive": _check_derive,
    "scheme": lambda fx: _check_scheme(fx, False),
    "dual_scheme": lambda fx: _check_scheme(fx, True),
    "gamma": _check_gamma,
    "multicone": _check_multicone,
    "degree_complex": lambda fx: _check_degree(fx, True),
    "degree_general": lambda fx: _check_degree(fx, False),
    "mnc_member": _check_member,
    "stalk_limit": _check_stalk,
}


def run_fixture(fx: dict) -> list[str]:
    kind = fx.get("kind")
    if kind not in CHECKS:
        return [f"unknown fixture kind {kind!r}"]
    try:
        return CHECKS[kind](fx)
    except (MultimicroError, KeyError, TypeError, ValueError) as exc:
        return [f"{type(exc).__name__}: {exc}"]


@dataclass(frozen=True)
class FixtureReport:
    results: tuple[tuple[str, tuple[str, ...]], ...]

    @property
    def ok(self) -> bool:
        return all(not d for _, d in self.results)

    def to_json(self) -> dict:
        return {
            "total": len(self.results),
            "failed": sum(1 for _, d in self.results if d),
            "results": [{"name": n, "ok": not d, "diagnostics": list(d)} for n, d in self.results],
        }


def matches(fx: dict, flt: str | None) -> bool:
    if not flt:
        return True
    flt = flt.lower()
    return flt in fx.get("name", "").lower() or any(flt == t.lower() for t in fx.get("tags", []))


def run_fixtures(directory: str | Path | None = None, flt: str | None = None) -> FixtureReport:
    fxs = [fx for fx in load_fixtures(directory) if matches(fx, flt)]
    return FixtureReport(tuple((fx.get("name", "?"), tuple(run_fixture(fx))) for fx in fxs))
