"""Command-line front end.

Exit status: 0 when the property holds or the construction succeeded, 1 when
it is refuted (a certificate is printed), 2 when the input is invalid.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .construct import comma_category, find_pullback
from .errors import (
    AE1Violation,
    AE2Violation,
    ExpansionInvalid,
    InvalidInput,
    MovcatError,
    UnknownCommand,
)
from .fincat import dual, product
from .generate import gen_random
from .movability import (
    MovabilityWitness,
    UniformMovabilityWitness,
    co_search,
    movable_search,
    uniform_search,
    witness_violations,
)
from .prosys import (
    FiniteThread,
    MovabilityIndex,
    check_AE1,
    check_AE2,
    system_movable_search,
    system_uniform_search,
)
from .shapebridge import corollary_sequence_check, theorem_check
from .workspace import Workspace, fixture_path, load_workspace, print_category, print_workspace

OK, REFUTED, INVALID = 0, 1, 2


@dataclass
class CommandResult:
    status: int
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def text(self) -> str:
        return "\n".join(self.lines)


def witness_data(w: MovabilityWitness) -> dict:
    return {
        "target": w.target,
        "mover": w.mover,
        "morphism": w.morphism,
        "factors": dict(w.factors),
        "uniform": isinstance(w, UniformMovabilityWitness),
    }


def witness_from_data(d: dict) -> MovabilityWitness:
    kind = UniformMovabilityWitness if d["uniform"] else MovabilityWitness
    return kind(d["target"], d["mover"], d["morphism"], dict(d["factors"]))


def _thread_data(t) -> dict:
    out = {"lam": t.lam, "m": t.m, "values": {str(k): v for k, v in t.values.items()}}
    if not isinstance(t, FiniteThread):
        out.update(base=t.base, period=t.period)
    return out


def _index_data(ix) -> dict:
    if isinstance(ix, MovabilityIndex):
        return {
            "lam": ix.lam,
            "m": ix.m,
            "factors": {str(k): v for k, v in ix.factors.items()},
            "loop": list(ix.loop) if ix.loop else None,
        }
    return _thread_data(ix)


def _witness_lines(w: MovabilityWitness) -> list[str]:
    lines = [f"  M = {w.mover}", f"  m = {w.morphism}"]
    lines += [f"  u({p}) = {u}" for p, u in w.factors.items()]
    return lines


# ---------------------------------------------------------------------------
# commands


def _validate(ws: Workspace, args) -> CommandResult:
    lines = [
        f"{len(ws.categories)} categories, {len(ws.subcategories)} subcategories, "
        f"{len(ws.systems)} systems, {len(ws.expansions)} expansions, "
        f"{len(ws.witnesses)} witnesses: valid"
    ]
    bad = {}
    for name, entry in ws.witnesses.items():
        problems = witness_violations(ws.categories[entry.category], entry.witness, entry.uniform)
        if problems:
            bad[name] = [str(v) for v in problems]
            lines.append(f"witness {name} fails: {problems[0]}")
    return CommandResult(REFUTED if bad else OK, lines, {"valid": not bad, "failing": bad})


def _check_movable(ws: Workspace, args) -> CommandResult:
    cat = ws.category(args.cat)
    if args.co:
        result = co_search(cat, args.object, args.uniform)
    elif args.uniform:
        result = uniform_search(cat, args.object)
    else:
        result = movable_search(cat, args.object)
    kind = "uniformly movable" if args.uniform else "movable"
    if args.co:
        kind = "co-" + kind
    if result.found:
        lines = [f"{args.object} is {kind} in {args.cat}", *_witness_lines(result.witness)]
        return CommandResult(OK, lines, {"holds": True, "witness": witness_data(result.witness)})
    lead = "no (M,m) admits consistent factors" if args.uniform else "no (M,m) admits factors"
    lines = [f"{args.object} is not {kind} in {args.cat}: {lead}"]
    cert = []
    for f in result.failures:
        where = f.triple if f.triple is not None else f.variable
        lines.append(f"  M={f.mover} m={f.morphism}: {f.reason} at {where}")
        cert.append(
            {
                "mover": f.mover,
                "morphism": f.morphism,
                "reason": f.reason,
                "variable": f.variable,
                "triple": list(f.triple) if f.triple else None,
            }
        )
    return CommandResult(REFUTED, lines, {"holds": False, "certificate": cert})


def _comma(ws: Workspace, args) -> CommandResult:
    T = ws.category(args.cat)
    P = ws.subcategory(args.sub)
    comma = comma_category(T, P.spec, args.apex)
    base = comma.base
    lines = [
        f"comma category of {args.apex} over {args.sub}: "
        f"{len(base.objects)} objects, {len(base.morphisms)} morphisms",
        print_category(f"{args.apex}/{args.sub}", base),
    ]
    data = {
        "objects": list(base.objects),
        "morphisms": {m.id: [m.dom, m.cod, comma.morphism_table[m.id]] for m in base.morphisms},
    }
    return CommandResult(OK, lines, data)


def _product(ws: Workspace, args) -> CommandResult:
    cats = [ws.category(n) for n in args.cat]
    prod = product(cats)
    c = prod.category
    name = " x ".join(args.cat)
    lines = [f"{name}: {len(c.objects)} objects, {len(c.morphisms)} morphisms", print_category(name, c)]
    return CommandResult(OK, lines, {"objects": len(c.objects), "morphisms": len(c.morphisms)})


def _dual(ws: Workspace, args) -> CommandResult:
    c = dual(ws.category(args.cat))
    return CommandResult(OK, [print_category(f"{args.cat}-op", c)], {"objects": list(c.objects)})


def _pullback(ws: Workspace, args) -> CommandResult:
    cat = ws.category(args.cat)
    pb = find_pullback(cat, args.f, args.g)
    if pb is None:
        return CommandResult(REFUTED, [f"no pullback of {args.f} and {args.g}"], {"holds": False})
    lines = [f"pullback of {args.f} and {args.g}: W = {pb.apex}, p_X = {pb.p_x}, p_Y = {pb.p_y}"]
    data = {"holds": True, "apex": pb.apex, "p_x": pb.p_x, "p_y": pb.p_y}
    return CommandResult(OK, lines, data)


def _system_check(ws: Workspace, args) -> CommandResult:
    sys_ = ws.system(args.system)
    result = system_uniform_search(sys_) if args.uniform else system_movable_search(sys_)
    kind = "uniformly movable" if args.uniform else "movable"
    if result.holds:
        lines = [f"{args.system} is {kind}"]
        lines += [f"  m({lam}) = {ix.m}" for lam, ix in result.indices.items()]
        data = {"holds": True, "indices": {str(k): _index_data(v) for k, v in result.indices.items()}}
        return CommandResult(OK, lines, data)
    ob = result.failure
    lines = [f"{args.system} is not {kind}: fails at λ={ob.lam}"]
    if ob.summary:
        lines.append(f"  {ob.summary}")
    lines += [f"  m={b.m}: {b.detail}" for b in ob.blocks]
    data = {
        "holds": False,
        "lam": ob.lam,
        "summary": ob.summary,
        "blocks": [{"m": b.m, "level": b.level, "detail": b.detail} for b in ob.blocks],
    }
    return CommandResult(REFUTED, lines, data)


def _expansion_check(ws: Workspace, args) -> CommandResult:
    exp = ws.expansion(args.exp)
    lines, data = [], {}
    try:
        ae1 = check_AE1(exp)
        lines.append(f"AE1 holds ({len(ae1)} morphisms factored)")
        data["AE1"] = {f: [str(l), g] for f, (l, g) in ae1.items()}
        ae2 = check_AE2(exp)
        lines.append(f"AE2 holds ({len(ae2)} identified pairs equalized)")
        data["AE2"] = len(ae2)
    except (AE1Violation, AE2Violation) as exc:
        lines.append(f"{type(exc).__name__}: {exc}")
        data["violations"] = [str(v) for v in exc.violations]
        return CommandResult(REFUTED, lines, {**data, "holds": False})
    return CommandResult(OK, lines, {**data, "holds": True})


def _theorem_check(ws: Workspace, args) -> CommandResult:
    exp = ws.expansion(args.exp)
    try:
        report = theorem_check(exp.ambient, exp.sub, exp.apex, exp)
    except ExpansionInvalid as exc:
        lines = [f"not applicable: {exc}"]
        return CommandResult(REFUTED, lines, {"applicable": False, "violations": [str(v) for v in exc.violations]})
    lines = [
        f"comma category uniformly movable: {'yes' if report.comma_uniform else 'no'}",
        f"system uniformly movable: {'yes' if report.system_uniform else 'no'}",
        f"verdicts {'agree' if report.consistent else 'DISAGREE'}",
    ]
    for lam, got in report.to_system.items():
        lines.append(f"  comma witness at p_{lam} gives index {got.index}")
    for f, got in report.to_comma.items():
        lines.append(f"  threads give a witness at {f}: M = {got.witness.mover}")
    for where, key, exc in report.construction_errors:
        lines.append(f"  construction {where} at {key} failed: {exc}")
    data = {
        "applicable": True,
        "comma_uniform": report.comma_uniform,
        "system_uniform": report.system_uniform,
        "consistent": report.consistent,
        "comma_witnesses": {f: witness_data(w) for f, w in report.comma_side.witnesses().items()},
        "threads": {str(k): _thread_data(v) for k, v in report.system_side.indices.items()},
        "to_system": {str(k): _thread_data(v.thread) for k, v in report.to_system.items()},
        "to_comma": {f: witness_data(v.witness) for f, v in report.to_comma.items()},
        "construction_errors": [f"{w} {k}: {e}" for w, k, e in report.construction_errors],
    }
    good = report.consistent and report.comma_uniform and report.constructions_ok
    return CommandResult(OK if good else REFUTED, lines, data)


def _corollary8(ws: Workspace, args) -> CommandResult:
    exp = ws.expansion(args.exp)
    try:
        rep = corollary_sequence_check(exp.ambient, exp.sub, exp.apex, exp)
    except ExpansionInvalid as exc:
        return CommandResult(REFUTED, [f"not applicable: {exc}"], {"applicable": False})
    lines = [
        f"comma category movable: {'yes' if rep.movable.verdict else 'no'}",
        f"comma category uniformly movable: {'yes' if rep.uniform.verdict else 'no'}",
        f"verdicts {'agree' if rep.agree else 'DISAGREE'}",
    ]
    data = {
        "applicable": True,
        "movable": rep.movable.verdict,
        "uniform": rep.uniform.verdict,
        "agree": rep.agree,
        "movable_witnesses": {f: witness_data(w) for f, w in rep.movable.witnesses().items()},
        "uniform_witnesses": {f: witness_data(w) for f, w in rep.uniform.witnesses().items()},
    }
    return CommandResult(OK if rep.agree and rep.uniform.verdict else REFUTED, lines, data)


def _gen(ws: Workspace, args) -> CommandResult:
    generated = gen_random(args.seed, args.objects, args.density)
    text = print_workspace(generated)
    return CommandResult(OK, [text.rstrip("\n")], {"workspace": text})


COMMANDS = {
    "validate": _validate,
    "check-movable": _check_movable,
    "comma": _comma,
    "product": _product,
    "dual": _dual,
    "pullback": _pullback,
    "system-check": _system_check,
    "expansion-check": _expansion_check,
    "theorem-check": _theorem_check,
    "corollary8": _corollary8,
    "gen": _gen,
}


def run_command(ws: Workspace | None, command: str, args) -> CommandResult:
    """Run one command against a parsed workspace; errors propagate to the caller."""
    if command not in COMMANDS:
        raise UnknownCommand(f"unknown command {command!r}")
    return COMMANDS[command](ws, args)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    # Global flags are accepted before or after the command; the copies on the
    # subcommands use SUPPRESS so they do not overwrite an earlier value.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workspace", default=argparse.SUPPRESS, help="workspace file")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON report")

    parser = argparse.ArgumentParser(prog="movcat", description=__doc__)
    parser.add_argument("--workspace", help="workspace file (default: the shipped fixtures)")
    parser.add_argument("--json", action="store_true", help="print a JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common], help="load and check a workspace")

    p = sub.add_parser("check-movable", parents=[common], help="decide (uniform) movability")
    p.add_argument("--cat", required=True)
    p.add_argument("--object", required=True)
    p.add_argument("--uniform", action="store_true")
    p.add_argument("--co", action="store_true", help="decide in the dual category")

    p = sub.add_parser("comma", parents=[common], help="build a comma category")
    p.add_argument("--cat", required=True)
    p.add_argument("--sub", required=True)
    p.add_argument("--apex", required=True)

    p = sub.add_parser("product", parents=[common], help="product of categories")
    p.add_argument("--cat", action="append", required=True)

    p = sub.add_parser("dual", parents=[common], help="opposite category")
    p.add_argument("--cat", required=True)

    p = sub.add_parser("pullback", parents=[common], help="search for a pullback")
    p.add_argument("--cat", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)

    p = sub.add_parser("system-check", parents=[common], help="decide movability of a system")
    p.add_argument("--system", required=True)
    p.add_argument("--uniform", action="store_true")

    for name, text in (
        ("expansion-check", "check the expansion axioms"),
        ("theorem-check", "compare comma-category and system verdicts"),
        ("corollary8", "movable versus uniformly movable for a sequence expansion"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--exp", required=True)

    p = sub.add_parser("gen", parents=[common], help="print a random workspace")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--objects", type=int, default=3)
    p.add_argument("--density", type=float, default=0.3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ws = None
        if args.command != "gen":
            ws = load_workspace(args.workspace or fixture_path())
        result = run_command(ws, args.command, args)
    except (InvalidInput, MovcatError, ValueError, OSError) as exc:
        if args.json:
            print(json.dumps({"status": INVALID, "error": f"{type(exc).__name__}: {exc}"}))
        else:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INVALID
    if args.json:
        print(json.dumps({"status": result.status, **result.data}, indent=2, default=str))
    else:
        print(result.text())
    return result.status


if __name__ == "__main__":
    sys.exit(main())
