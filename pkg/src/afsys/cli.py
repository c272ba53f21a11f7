"""Command-line frontend: parse .afs files, run checks, apply functors.

Reports go to stdout (human-readable or the stable JSON schema); parser
diagnostics and usage errors go to stderr.  Exit codes: 0 all checks pass,
1 at least one check fails, 2 usage/parse/resource error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .algebra import PROFILES, check_laws, is_homomorphism
from .dsl import AlgebraDecl, Entity, SystemDecl, Workspace, parse_file
from .errors import AfsysError, BudgetExceededError, DEFAULT_BUDGET
from .functors import (
    afsys_apply,
    counit_eps,
    loc,
    pt,
    spat,
    variable_basis_coproduct_gap,
)
from .institutions import (
    check_affine_institution,
    check_elementary,
    check_localic_institution,
    check_spatial_institution,
    geo,
    ie_lift,
    ie_loc_lift,
    iloc_lift,
    ispat_lift,
)
from .report import CheckResult, EntityReport, emit_report, render_text
from .topology import (
    AffineTheory,
    is_separated,
    is_space,
    is_system,
    vickers_axiom_check,
)


class CliError(Exception):
    """Usage-level failure: rendered on stderr, exit code 2."""


def _load_config() -> dict:
    path = "afsys.toml"
    if not os.path.exists(path):
        return {}
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise CliError(f"bad config file {path}: {exc}") from exc


def _resolve_budget(args, config) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("AFSYS_BUDGET")
    if env is not None:
        if not env.isdigit():
            raise CliError(f"AFSYS_BUDGET must be a number, got {env!r}")
        return int(env)
    if "budget" in config:
        return int(config["budget"])
    return DEFAULT_BUDGET


def _load_workspace(path: str) -> Workspace:
    try:
        ws = parse_file(path)
    except OSError as exc:
        raise CliError(str(exc)) from exc
    for d in ws.diagnostics:
        print(f"{path}:{d.line}:{d.col}: {d.severity}: {d.message}", file=sys.stderr)
    if not ws.ok:
        raise CliError(f"{path}: parse failed")
    return ws


def _need(ws: Workspace, kind: str, name: str) -> Entity:
    ent = ws.find(kind, name)
    if ent is None:
        raise CliError(f"no {kind} named {name!r} in the file")
    return ent


# ---------------------------------------------------------------------------
# check


def _check_entity(ent: Entity, budget: int) -> EntityReport:
    er = EntityReport(ent.kind, ent.name)
    v = ent.value
    if ent.kind == "algebra":
        rep = check_laws(v.algebra, PROFILES[v.variety])
        for c in rep.checks:
            er.add(f"law:{c.law}", c.passed, c.witness)
    elif ent.kind == "space":
        ok, w = is_space(v.space.theory, v.space.points, v.space.opens)
        er.add("is_space", ok, w)
    elif ent.kind == "system":
        sys_ = v.system
        ok, w = is_system(sys_)
        er.add("is_system", ok, w)
        er.add("separated", is_separated(sys_))
        if sys_.theory.base.size == 2 and sys_.theory.base.signature.has("join"):
            vr = vickers_axiom_check(sys_, budget)
            witness = {
                "meet_failures": vr.meet_failures[:3],
                "join_failures": vr.join_failures[:3],
            }
            er.add("vickers_axioms", vr.passed, witness)
    elif ent.kind == "theorymorphism":
        tm = v.tm
        ok, w = is_homomorphism(tm.h.source, tm.h.target, tm.h.mapping)
        er.add("base_homomorphism", ok, w)
    elif ent.kind == "institution":
        rep = check_elementary(v.institution)
        er.add("satisfaction_condition", rep.passed, rep.failures[:5])
    elif ent.kind == "afinstitution":
        rep = check_affine_institution(v.institution)
        er.add("affine_functoriality", rep.passed, rep.failures[:5])
    return er


def cmd_check(args, budget: int) -> list[EntityReport]:
    ws = _load_workspace(args.file)
    return [_check_entity(ent, budget) for ent in ws.entities]


# ---------------------------------------------------------------------------
# functor commands


def cmd_spatialize(args, budget: int) -> list[EntityReport]:
    ws = _load_workspace(args.file)
    decl: SystemDecl = _need(ws, "system", args.system).value
    space = spat(decl.system)
    er = EntityReport("space", f"{args.system}.spat")
    base = space.theory.base
    er.checks.append(
        CheckResult(
            "spatialize",
            "pass",
            {
                "points": list(space.points),
                "opens": [[base.labels[x] for x in t] for t in space.opens],
            },
        )
    )
    return [er]


def cmd_localify(args, budget: int) -> list[EntityReport]:
    ws = _load_workspace(args.file)
    decl: SystemDecl = _need(ws, "system", args.system).value
    alg = loc(decl.system)
    er = EntityReport("algebra", f"{args.system}.loc")
    er.checks.append(
        CheckResult(
            "localify", "pass", {"size": alg.size, "elements": list(alg.labels)}
        )
    )
    return [er]


def _infer_base(ws: Workspace, carrier_name: str) -> AffineTheory:
    """The theory for `points`: taken from the unique system using the
    algebra as carrier, else from the unique space/system in the file."""
    users = [
        e.value.system.theory
        for e in ws.of_kind("system")
        if e.value.carrier_name == carrier_name
    ]
    if len(set(users)) == 1:
        return users[0]
    anchors = [e.value.system.theory for e in ws.of_kind("system")] + [
        e.value.space.theory for e in ws.of_kind("space")
    ]
    if len(set(anchors)) == 1:
        return anchors[0]
    raise CliError("ambiguous base algebra; pass --base NAME")


def cmd_points(args, budget: int) -> list[EntityReport]:
    ws = _load_workspace(args.file)
    decl: AlgebraDecl = _need(ws, "algebra", args.algebra).value
    if args.base is not None:
        base_decl: AlgebraDecl = _need(ws, "algebra", args.base).value
        theory = AffineTheory(base_decl.algebra, PROFILES[base_decl.variety])
    else:
        theory = _infer_base(ws, args.algebra)
    points = pt(decl.algebra, theory, budget)
    ext = counit_eps(decl.algebra, theory, budget)
    er = EntityReport("algebra", args.algebra)
    er.checks.append(
        CheckResult(
            "points",
            "pass",
            {
                "count": len(points),
                "points": [
                    "<" + ",".join(theory.base.labels[x] for x in p.mapping) + ">"
                    for p in points
                ],
                "extent": [
                    [theory.base.labels[x] for x in row] for row in ext
                ],
            },
        )
    )
    return [er]


def cmd_lift(args, budget: int) -> list[EntityReport]:
    ws = _load_workspace(args.file)
    ai = _need(ws, "afinstitution", args.institution).value.institution
    er = EntityReport("afinstitution", f"{args.institution}.{args.op}")
    base = check_affine_institution(ai)
    er.add("input_functoriality", base.passed, base.failures[:5])
    if args.op == "ispat":
        si = ispat_lift(ai)
        rep = check_spatial_institution(si)
        er.add("spatial_functoriality", rep.passed, rep.failures[:5])
        er.checks.append(
            CheckResult(
                "lift",
                "pass",
                {o: len(sp.opens) for o, sp in sorted(si.spaces.items())},
            )
        )
    elif args.op == "ie":
        si = ispat_lift(ai)
        lifted = ie_lift(si)
        rep = check_affine_institution(lifted)
        er.add("embedded_functoriality", rep.passed, rep.failures[:5])
        er.add("left_inverse", ispat_lift(lifted) == si)
    elif args.op == "iloc":
        li = iloc_lift(ai)
        rep = check_localic_institution(li)
        er.add("localic_functoriality", rep.passed, rep.failures[:5])
        er.checks.append(
            CheckResult(
                "lift",
                "pass",
                {o: a.size for o, a in sorted(li.algebras.items())},
            )
        )
    else:  # ieloc
        li = iloc_lift(ai)
        lifted = ie_loc_lift(li, budget)
        rep = check_affine_institution(lifted)
        er.add("embedded_functoriality", rep.passed, rep.failures[:5])
        er.add("left_inverse", iloc_lift(lifted) == li)
    return [er]


def cmd_geo(args, budget: int) -> list[EntityReport]:
    ws = _load_workspace(args.file)
    ai = _need(ws, "afinstitution", args.institution).value.institution
    try:
        inst = geo(ai, budget)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    rep = check_elementary(inst)
    er = EntityReport("institution", f"{args.institution}.geo")
    er.add("satisfaction_condition", rep.passed, rep.failures[:5])
    er.checks.append(
        CheckResult(
            "geo",
            "pass",
            {
                o: {"sentences": len(inst.sen.at(o)), "models": len(inst.mod.at(o))}
                for o in sorted(inst.sign.objects)
            },
        )
    )
    return [er]


def cmd_apply(args, budget: int) -> list[EntityReport]:
    ws = _load_workspace(args.file)
    tm_decl = _need(ws, "theorymorphism", args.theorymorphism).value
    sys_decl: SystemDecl = _need(ws, "system", args.system).value
    try:
        out = afsys_apply(tm_decl.tm, sys_decl.system)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    er = EntityReport("system", f"{args.system}.apply")
    ok, w = is_system(out)
    er.add("is_system", ok, w)
    base = out.theory.base
    er.checks.append(
        CheckResult(
            "apply",
            "pass",
            {
                "points": list(out.points),
                "ext": {
                    out.algebra.labels[a]: [base.labels[x] for x in out.ext[a]]
                    for a in range(out.algebra.size)
                },
            },
        )
    )
    return [er]


def cmd_demo(args, budget: int) -> list[EntityReport]:
    if args.topic != "prop3":
        raise CliError(f"unknown demo {args.topic!r}")
    result = variable_basis_coproduct_gap(args.n)
    er = EntityReport("demo", "prop3")
    er.checks.append(
        CheckResult(
            "coproduct_cardinality_gap",
            "pass",
            {"lhs": result.lhs, "rhs": result.rhs, "equal": result.equal},
        )
    )
    return [er]


# ---------------------------------------------------------------------------
# entry point


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument(
        "--json", action="store_true", help="emit the JSON report schema", **kw
    )
    p.add_argument(
        "--budget",
        type=int,
        **({"default": argparse.SUPPRESS} if suppress else {"default": None}),
        help="enumeration budget",
    )
    p.add_argument("--quiet", action="store_true", help="suppress the report", **kw)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="afsys", description="finite affine systems and institutions"
    )
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="run all checks on every entity")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("spatialize", help="image-of-extent space of a system")
    sp.add_argument("file")
    sp.add_argument("--system", required=True)
    sp.set_defaults(fn=cmd_spatialize)

    sp = sub.add_parser("localify", help="algebra projection of a system")
    sp.add_argument("file")
    sp.add_argument("--system", required=True)
    sp.set_defaults(fn=cmd_localify)

    sp = sub.add_parser("points", help="homomorphisms into the base algebra")
    sp.add_argument("file")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--base", default=None, help="base algebra name")
    sp.set_defaults(fn=cmd_points)

    sp = sub.add_parser("lift", help="institution lifts between presentations")
    sp.add_argument("file")
    sp.add_argument("--institution", required=True)
    sp.add_argument("--op", required=True, choices=("ie", "ispat", "iloc", "ieloc"))
    sp.set_defaults(fn=cmd_lift)

    sp = sub.add_parser("geo", help="elementary institution of a system family")
    sp.add_argument("file")
    sp.add_argument("--institution", required=True)
    sp.set_defaults(fn=cmd_geo)

    sp = sub.add_parser("apply", help="transport a system along a theory morphism")
    sp.add_argument("file")
    sp.add_argument("--theorymorphism", required=True)
    sp.add_argument("--system", required=True)
    sp.set_defaults(fn=cmd_apply)

    sp = sub.add_parser("demo", help="built-in demonstrations")
    sp.add_argument("topic", choices=("prop3",))
    sp.add_argument("--n", type=int, default=2)
    sp.set_defaults(fn=cmd_demo)
    for sp in sub.choices.values():
        _global_flags(sp, suppress=True)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config()
        budget = _resolve_budget(args, config)
        use_json = args.json or bool(config.get("json", False))
        quiet = args.quiet or bool(config.get("quiet", False))
        reports = args.fn(args, budget)
    except CliError as exc:
        print(f"afsys: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"afsys: {exc}", file=sys.stderr)
        return 2
    except AfsysError as exc:
        print(f"afsys: {exc}", file=sys.stderr)
        return 2
    if not quiet:
        text = emit_report(reports) if use_json else render_text(reports)
        sys.stdout.write(text)
    failed = any(not c.passed for er in reports for c in er.checks)
    return 1 if failed else 0


def console_main():  # console-script shim
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
