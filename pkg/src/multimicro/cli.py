"""JSON-driven command line.

Every subcommand reads JSON files (families, cones, polyhedral sets,
certificates) and prints one JSON document with ``status``, ``payload`` and
``diagnostics``. Exit code 0 means the computation completed, including a
mathematical ``FALSE``; 2 is an input error; 3 is a resource limit or an
inconclusive search.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import __version__
from .cones import (
    Cone,
    PolySet,
    antipode,
    cone_equal,
    cone_from_json,
    cone_rel_int_point,
    cone_subset,
    frac,
    hv_convert,
    intersect_cones,
    is_proper_wrt,
    minkowski_sum,
    polar,
)
from .deformation import (
    CotangentPoint,
    MonomialScheme,
    apply_scheme,
    hamiltonian_relabel,
    parse_t,
    scheme_for_dual,
    scheme_from_family,
)
from .degrees import RealComplexSplit, degree_complex, degree_general
from .errors import (
    ConstructionError,
    EmptyError,
    InputError,
    InternalConsistencyError,
    NonPolyhedralError,
    PreconditionError,
    ResourceError,
    SearchFailure,
)
from .indices import IndexFamily, derive, restrict, validate

OK = "OK"
FALSE = "FALSE"
INPUT_ERROR = "INPUT_ERROR"
RESOURCE = "RESOURCE"
INCONCLUSIVE = "INCONCLUSIVE"

EXIT_CODES = {OK: 0, FALSE: 0, INPUT_ERROR: 2, RESOURCE: 3, INCONCLUSIVE: 3}


@dataclass
class CommandResult:
    status: str
    payload: object = None
    diagnostics: list[str] = field(default_factory=list)
    pretty: bool = field(default=False, repr=False, compare=False)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_json(self) -> dict:
        return {"status": self.status, "payload": self.payload, "diagnostics": list(self.diagnostics)}

    def render(self, pretty: bool = False) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2 if pretty else None, ensure_ascii=False)


def _ok(payload) -> CommandResult:
    return CommandResult(OK, payload)


def _bool(flag: bool, payload: dict, why: str = "") -> CommandResult:
    return CommandResult(OK if flag else FALSE, payload, [] if flag or not why else [why])


# ------------------------------------------------------------------ parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def _ints(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {s!r}") from None


def _rats(s: str) -> list:
    return [frac(x.strip()) for x in s.split(",") if x.strip()]


def _json_arg(s: str):
    try:
        return json.loads(s)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON argument {s!r}: {exc}") from None


def parse_guard(s: str | None) -> dict:
    g = {"ell": 3, "dim": 6}
    if not s:
        return g
    for item in s.split(","):
        key, sep, val = item.partition("=")
        if not sep or not key.strip():
            raise InputError(f"guard entries look like name=value, got {item!r}")
        try:
            g[key.strip()] = int(val)
        except ValueError:
            raise InputError(f"guard value for {key!r} must be an integer") from None
    return g


def _family(path: str) -> IndexFamily:
    return IndexFamily.from_json(_load(path))


def _scheme(path: str, dual: bool = False) -> MonomialScheme:
    """A scheme file, or a family file turned into its (dual) scheme."""
    obj = _load(path)
    if isinstance(obj, dict) and "exponents" in obj:
        return MonomialScheme.from_json(obj)
    fam = IndexFamily.from_json(obj)
    return scheme_for_dual(fam) if dual else scheme_from_family(fam)


def _polyset(path: str) -> PolySet:
    obj = _load(path)
    if isinstance(obj, dict) and "members" not in obj and "ineqs" in obj:
        obj = {"dim": obj["dim"], "members": [obj]}
    return PolySet.from_json(obj)


def _conic(path: str):
    from .microsupport import ConicInput

    obj = _load(path)
    if isinstance(obj, dict) and "members" not in obj and "ineqs" in obj:
        obj = {"dim": obj["dim"], "members": [obj], **({"fiber_coords": obj["fiber_coords"]} if "fiber_coords" in obj else {})}
    return ConicInput.from_json(obj)


def _cone(path: str) -> Cone:
    return cone_from_json(_load(path))


def _s(v) -> list[str]:
    return [str(x) for x in v]


# ---------------------------------------------------------------- handlers


def _family_validate(a):
    rep = validate(_family(a.family))
    return _bool(rep.ok, rep.to_json(), "family violates the hypotheses")


def _family_derive(a):
    return _ok(derive(_family(a.family)).to_json())


def _family_restrict(a):
    sub = restrict(_family(a.family), _ints(a.K))
    rep = validate(sub)
    return _ok({"family": sub.to_json(), "valid": rep.ok, "validation": rep.to_json()})


def _cone_unary(fn):
    def run(a):
        return _ok(fn(_cone(a.cone)).to_json())

    return run


def _cone_nary(fn):
    def run(a):
        return _ok(fn([_cone(p) for p in a.cones]).to_json())

    return run


def _cone_proper(a):
    xi = _rats(a.xi)
    return _bool(is_proper_wrt(_cone(a.cone), xi), {"proper": is_proper_wrt(_cone(a.cone), xi)})


def _cone_subset(a):
    r = cone_subset(_cone(a.A), _cone(a.B))
    return _bool(r, {"subset": r})


def _cone_equal(a):
    r = cone_equal(_cone(a.A), _cone(a.B))
    return _bool(r, {"equal": r})


def _cone_relint(a):
    return _ok({"point": _s(cone_rel_int_point(_cone(a.cone)))})


def _deform_scale(a):
    sch = _scheme(a.family, a.dual)
    y = apply_scheme(sch, _rats(a.point), parse_t(_rats(a.t)))
    return _ok({"scheme": sch.to_json(), "image": _s(y)})


def _deform_dual(a):
    return _ok(_scheme(a.family, True).to_json())


def _deform_relabel(a):
    fam = _family(a.family)
    q = hamiltonian_relabel(fam, _ints(a.I), _ints(a.J), CotangentPoint(tuple(_rats(a.x)), tuple(_rats(a.xi))))
    return _ok({"x": _s(q.x), "xi": _s(q.xi)})


def _mnc_member(a):
    from .multinormal import OUT, mnc_member

    res = mnc_member(_scheme(a.family, a.dual), _polyset(a.Z), _rats(a.point))
    return _bool(res.verdict != OUT, res.to_json())


def _mnc_describe(a):
    from .multinormal import mnc_describe

    return _ok(mnc_describe(_scheme(a.family, a.dual), _polyset(a.Z), a.guard_dict).to_json())


def _mnc_oracle(a):
    from .multinormal import INCONCLUSIVE as ORACLE_INCONCLUSIVE, oracle_member

    ladder = (2, tuple(_rats("1/2,1/4,1/8")), a.steps)
    res = oracle_member(_scheme(a.family, a.dual), _polyset(a.Z), _rats(a.point), ladder)
    if res.verdict == ORACLE_INCONCLUSIVE:
        return CommandResult(INCONCLUSIVE, res.to_json(), ["oracle could not decide on its weight grid"])
    return _ok(res.to_json())


def _mnc_verify(a):
    from .multinormal import MembershipCertificate, SeparationCertificate, verify_membership, verify_separation

    sch = _scheme(a.family, a.dual)
    Z = _polyset(a.Z)
    obj = _load(a.cert)
    if isinstance(obj, dict) and "certificate" in obj:
        obj = obj["certificate"]
    if not isinstance(obj, dict):
        raise InputError("certificate JSON must be an object")
    if "weights" in obj:
        if a.point is None:
            raise InputError("a membership certificate needs --point")
        ok = verify_membership(sch, Z, _rats(a.point), MembershipCertificate.from_json(obj))
        kind = "membership"
    elif "rows" in obj:
        ok = verify_separation(sch, Z, SeparationCertificate.from_json(obj))
        kind = "separation"
    else:
        raise InputError("unrecognized certificate: expected 'weights' or 'rows'")
    return _bool(ok, {"kind": kind, "verified": ok}, "certificate does not verify")


def _dir(a):
    d = a.dir.strip()
    if d.startswith("{") or d.startswith("["):
        return _json_arg(d)
    return _rats(d)


def _stalk_gamma(a):
    from .stalk import gamma

    return _ok(gamma(_family(a.family), a.k, _dir(a)).to_json())


def _stalk_ladder(a):
    from .stalk import check_g_condition, g_ladder

    fam = _family(a.family)
    L = g_ladder(fam, _dir(a), a.m)
    out = L.to_json()
    out["condition_holds"] = check_g_condition(fam, _dir(a), L.G)
    return _ok(out)


def _stalk_zfamily(a):
    from .stalk import make_z_family

    return _ok([it.to_json() for it in make_z_family(_family(a.family), _dir(a), a.m)])


def _stalk_enclose(a):
    from .stalk import check_g_condition, enclose, make_z_family, verify_wedge

    fam = _family(a.family)
    p = _dir(a)
    z = make_z_family(fam, p, a.m)
    cert = enclose(fam, p, z)
    g_ok = check_g_condition(fam, p, cert.G)
    verified = verify_wedge(fam, p, z, cert)
    out = cert.to_json()
    out["G_condition"] = g_ok
    out["verified"] = verified
    return _bool(g_ok and verified, out, "wedge certificate or G condition fails")


def _stalk_multicone(a):
    from .stalk import multicone

    return _ok(multicone(_family(a.family), _dir(a), frac(a.m)).to_json())


def _stalk_mixed(a):
    from .stalk import mixed_ladder

    W, G = mixed_ladder(_family(a.family), _ints(a.I), _ints(a.J), _dir(a), a.m)
    return _ok({"W": W.to_json(), "G": G.to_json()})


def _stalk_xig(a):
    from .stalk import L_and_Jstar, g_ladder, xi_G

    fam = _family(a.family)
    p = _dir(a)
    L = g_ladder(fam, p, a.m)
    v, sigma = xi_G(fam, p, L.parts)
    return _ok({"xi_G": _s(v), "sigma": str(sigma), "L": L_and_Jstar(fam, p, a.m).to_json()})


def _degree_general(a):
    fam = _family(a.family)
    split = RealComplexSplit.from_json(_load(a.split))
    return _ok(degree_general(fam, split, _json_arg(a.p)).to_json())


def _degree_complex(a):
    return _ok(degree_complex(_family(a.family), _json_arg(a.p)).to_json())


def _ss_estimate(a):
    from .microsupport import ss_estimate

    return _ok(ss_estimate(_family(a.family), _conic(a.set), a.guard_dict).to_json())


def _ss_support(a):
    from .microsupport import support_bound

    return _ok(support_bound(_family(a.family), _conic(a.set), a.guard_dict).to_json())


def _ss_witness(a):
    from .microsupport import seq_witness, verify_witness

    fam = _family(a.family)
    c = _conic(a.set)
    res = seq_witness(fam, c, _rats(a.point), a.count)
    out = res.to_json()
    if res.found:
        out["verified"] = verify_witness(fam, c, _rats(a.point), res.witness)
        if not out["verified"]:
            raise InternalConsistencyError("constructed witness failed exact verification")
    return _bool(res.found, out, "point lies outside the limit cone; separation certificate attached")


def _ss_nonchar(a):
    from .microsupport import noncharacteristic_check

    res = noncharacteristic_check(_family(a.family), _conic(a.set), a.guard_dict)
    return _bool(res.ok, res.to_json(), "limit cone meets the punctured conormal slice")


def _ss_hyperbolic(a):
    from .microsupport import hyperbolicity_check

    fam = _family(a.family)
    S = _polyset(a.set)
    g = dict(a.guard_dict)
    g["dim"] = max(g.get("dim", 6), S.dim)
    ok = hyperbolicity_check(fam, S, g)
    return _bool(ok, {"hyperbolic": ok}, "image meets the punctured conormal")


def _ss_iotasharp(a):
    from .microsupport import iota_sharp

    S = _polyset(a.set)
    g = dict(a.guard_dict)
    g["dim"] = max(g.get("dim", 6), S.dim)
    return _ok(iota_sharp(S, a.a, a.b, g).to_json())


def _lc_stalk(a):
    from .cohomology import stalk_limit

    res = stalk_limit(_family(a.family), _dir(a), _polyset(a.W), a.m_max)
    if not res.stabilized:
        return CommandResult(INCONCLUSIVE, res.to_json(), ["ladder did not stabilize within --m-max"])
    return _ok(res.to_json())


def _lc_compare(a):
    from .cohomology import compare_families

    res = compare_families(_family(a.family), _dir(a), _polyset(a.W), a.m_max)
    if res.agree is None:
        return CommandResult(INCONCLUSIVE, res.to_json(), ["one side did not stabilize"])
    return _bool(res.agree, res.to_json(), "the two families give different limits")


def _fixtures_run(a):
    from .fixtures import run_fixtures

    rep = run_fixtures(a.dir, a.filter)
    out = rep.to_json()
    diags = [f"{r['name']}: {d}" for r in out["results"] for d in r["diagnostics"]]
    return CommandResult(OK if rep.ok else FALSE, out, diags)


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    def commons(top: bool) -> argparse.ArgumentParser:
        # subcommand copies must not overwrite values given before the subcommand
        c = _Parser(add_help=False)
        dflt = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
        c.add_argument("--seed", type=int, default=dflt(0), help="seed for randomized paths")
        c.add_argument("--output", choices=("json", "pretty"), default=dflt("json"))
        c.add_argument("--guard", default=dflt(None), help="resource caps, e.g. ell=3,dim=6")
        return c

    common = commons(False)
    p = _Parser(prog="multimicro", description="Polyhedral multi-microlocal geometry toolkit.", parents=[commons(True)])
    p.add_argument("--version", action="version", version=f"multimicro {__version__}")
    top = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def group(name, help_):
        g = top.add_parser(name, help=help_, parents=[common])
        return g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def cmd(sub, name, fn: Callable, help_=""):
        c = sub.add_parser(name, help=help_, parents=[common])
        c.set_defaults(fn=fn)
        return c

    fam = group("family", "index families")
    cmd(fam, "validate", _family_validate).add_argument("family")
    cmd(fam, "derive", _family_derive).add_argument("family")
    c = cmd(fam, "restrict", _family_restrict)
    c.add_argument("family")
    c.add_argument("--K", required=True, help="comma-separated member indices")

    cone = group("cone", "exact cone calculus")
    for name, fn in (("convert", hv_convert), ("polar", polar), ("antipode", antipode)):
        cmd(cone, name, _cone_unary(fn)).add_argument("cone")
    for name, fn in (("sum", minkowski_sum), ("intersect", intersect_cones)):
        cmd(cone, name, _cone_nary(fn)).add_argument("cones", nargs="+")
    c = cmd(cone, "proper", _cone_proper)
    c.add_argument("cone")
    c.add_argument("--xi", required=True)
    for name, fn in (("subset", _cone_subset), ("equal", _cone_equal)):
        c = cmd(cone, name, fn)
        c.add_argument("A")
        c.add_argument("B")
    cmd(cone, "relint", _cone_relint).add_argument("cone")

    de = group("deform", "scaling deformations")
    c = cmd(de, "scale", _deform_scale)
    c.add_argument("family")
    c.add_argument("--point", required=True)
    c.add_argument("--t", required=True)
    c.add_argument("--dual", action="store_true")
    c = cmd(de, "dual", _deform_dual)
    c.add_argument("family")
    c = cmd(de, "relabel", _deform_relabel)
    c.add_argument("family")
    for flag in ("--I", "--J", "--x", "--xi"):
        c.add_argument(flag, required=True)

    mnc = group("mnc", "multi-normal cones")
    for name, fn in (("member", _mnc_member), ("describe", _mnc_describe), ("oracle", _mnc_oracle), ("verify", _mnc_verify)):
        c = cmd(mnc, name, fn)
        c.add_argument("family", help="family or scheme JSON")
        c.add_argument("Z")
        c.add_argument("--dual", action="store_true")
        if name in ("member", "oracle"):
            c.add_argument("--point", required=True)
        if name == "oracle":
            c.add_argument("--steps", type=int, default=20)
        if name == "verify":
            c.add_argument("--cert", required=True)
            c.add_argument("--point")

    st = group("stalk", "fiber-formula cone families")
    for name, fn in (
        ("gamma", _stalk_gamma),
        ("ladder", _stalk_ladder),
        ("zfamily", _stalk_zfamily),
        ("enclose", _stalk_enclose),
        ("multicone", _stalk_multicone),
        ("mixed", _stalk_mixed),
        ("xig", _stalk_xig),
    ):
        c = cmd(st, name, fn)
        c.add_argument("family")
        c.add_argument("--dir", required=True, help="covector on N: comma list or JSON block map")
        if name == "gamma":
            c.add_argument("--k", type=int, required=True)
        elif name == "multicone":
            c.add_argument("--m", default="1")
        else:
            c.add_argument("--m", type=int, default=2)
        if name == "mixed":
            c.add_argument("--I", required=True)
            c.add_argument("--J", required=True)

    dg = group("degree", "concentration degrees")
    c = cmd(dg, "general", _degree_general)
    c.add_argument("family")
    c.add_argument("--split", required=True, help="split JSON file")
    c.add_argument("--p", required=True, help="covector blocks as JSON")
    c = cmd(dg, "complex", _degree_complex)
    c.add_argument("family")
    c.add_argument("--p", required=True, help="covector blocks as JSON")

    ss = group("ss", "microsupport estimates")
    for name, fn in (
        ("estimate", _ss_estimate),
        ("support", _ss_support),
        ("witness", _ss_witness),
        ("nonchar", _ss_nonchar),
        ("hyperbolic", _ss_hyperbolic),
    ):
        c = cmd(ss, name, fn)
        c.add_argument("family")
        c.add_argument("set", help="conic set JSON in (x; xi)")
        if name == "witness":
            c.add_argument("--point", required=True)
            c.add_argument("--count", type=int, default=8)
    c = cmd(ss, "iotasharp", _ss_iotasharp)
    c.add_argument("set")
    c.add_argument("--a", type=int, required=True)
    c.add_argument("--b", type=int, default=None)

    lc = group("lc", "cellular local cohomology")
    for name, fn in (("stalk", _lc_stalk), ("compare", _lc_compare)):
        c = cmd(lc, name, fn)
        c.add_argument("family")
        c.add_argument("--dir", required=True)
        c.add_argument("--W", required=True, help="coefficient support JSON")
        c.add_argument("--m-max", type=int, default=4)

    fx = group("fixtures", "golden fixtures")
    c = cmd(fx, "run", _fixtures_run)
    c.add_argument("--filter", default=None)
    c.add_argument("--dir", default=None)
    return p


def run(argv: Sequence[str] | None = None) -> CommandResult:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:
            # --help and --version print and exit inside argparse
            return CommandResult(OK if not exc.code else INPUT_ERROR, None, ["usage printed"])
        args.guard_dict = parse_guard(args.guard)
        res = args.fn(args)
    except (InputError, PreconditionError, EmptyError) as exc:
        return CommandResult(INPUT_ERROR, None, [f"{type(exc).__name__}: {exc}"])
    except ResourceError as exc:
        return CommandResult(RESOURCE, None, [str(exc)])
    except (NonPolyhedralError, SearchFailure, InternalConsistencyError) as exc:
        return CommandResult(INCONCLUSIVE, None, [f"{type(exc).__name__}: {exc}"])
    except ConstructionError as exc:
        return CommandResult(FALSE, None, [f"construction failed: {exc}"])
    except (KeyError, TypeError, ValueError) as exc:
        return CommandResult(INPUT_ERROR, None, [f"malformed input: {type(exc).__name__}: {exc}"])
    res.pretty = args.output == "pretty"
    return res


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if any(a in ("-h", "--help", "--version") for a in argv):
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    res = run(argv)
    print(res.render(res.pretty))
    return res.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
