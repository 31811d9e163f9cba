"""Command-line front end.

Results go to stdout as JSON (LP text for ``emit-lp``); logs go to stderr.
Exit codes: 0 success, 1 no popular branching / not popular, 2 usage,
3 bad input, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import errors
from .factor import low_factor_arborescence
from .generators import (
    PrefModel,
    assignment_to_branching,
    complete_top_instance,
    four_cycle_instance,
    hampath_to_branching,
    matching_to_certificate,
    parse_3dm,
    parse_dimacs,
    random_instance,
    reduce_3dm,
    reduce_3sat,
    reduce_hampath,
    star_instance,
    tight_factor_instance,
)
from .instance import (
    Branching,
    Instance,
    augment_root,
    branching_from_edges,
    instance_from_dict,
    instance_to_dict,
    is_branching,
    parse_instance,
    project,
    to_arborescence,
)
from .mixed import popular_mixed_branching
from .oracle import DEFAULT_BUDGET, VoteTable
from .polytope import DEFAULT_CUTOFF, emit_extended_lp, emit_face_lp
from .popularity import is_popular, unpopularity_factor, unpopularity_margin, validate_certificate
from .solver import min_margin_arborescence, popular_arborescence

log = logging.getLogger("popbranch")

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3, 4

COMMANDS = ("solve", "verify", "margin", "minmargin", "factor", "factor-of", "mixed", "gen", "reduce", "oracle", "emit-lp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Command:
    name: str
    args: argparse.Namespace


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-i", "--input", help="input file (default: stdin)")
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget")
    common.add_argument("--jobs", type=int, default=1, help="accepted for compatibility; work runs in one process")
    common.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF, help="largest n for the face LP")

    parser = _Parser(prog="popbranch", description="Popular branchings in preference digraphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("solve", parents=[common], help="find a popular branching")
    for name in ("verify", "margin", "factor-of"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--branching", required=True, help="JSON list of edge ids, or a solve result")
    sub.add_parser("minmargin", parents=[common], help="branching of minimum unpopularity margin")
    sub.add_parser("factor", parents=[common], help="branching with unpopularity factor <= log n")
    sub.add_parser("mixed", parents=[common], help="popular mixed branching")
    sub.add_parser("oracle", parents=[common], help="exhaustive ground truth")

    gen = sub.add_parser("gen", parents=[common], help="generate an instance")
    gen.add_argument("family", choices=["random", "tight-factor", "complete-top", "four-cycle", "star"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--m", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--model", default="strict", help="strict, weak[:ties] or partial[:density]")

    red = sub.add_parser("reduce", parents=[common], help="build a hardness gadget")
    red.add_argument("problem", choices=["3sat", "hampath", "3dm"])
    red.add_argument("--root", default="r", help="hampath: root of the input digraph")
    red.add_argument("--assignment", help="3sat: comma-separated literals that are true, e.g. 1,-2")
    red.add_argument("--path", help="hampath: comma-separated Hamiltonian path starting at the root")
    red.add_argument("--matching", help="3dm: JSON list of triples")

    lp = sub.add_parser("emit-lp", parents=[common], help="write an LP for the popular arborescence polytope")
    lp.add_argument("--form", choices=["face", "extended"], default="face")
    return parser


def parse_args(argv) -> Command:
    args = build_parser().parse_args(argv)
    for flag in ("budget", "jobs", "cutoff"):
        if getattr(args, flag) < 1:
            raise UsageError(f"--{flag} must be positive")
    return Command(args.command, args)


# -- io helpers -------------------------------------------------------------------

def _read(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise errors.BadInput(f"cannot read {path}: {exc.strerror}") from exc


def _instance(args) -> Instance:
    return parse_instance(_read(args.input))


def _branching(inst: Instance, spec: str) -> Branching:
    text = spec if spec.lstrip().startswith(("[", "{")) else _read(spec)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.BadInput(f"branching is not JSON: {exc}") from exc
    if isinstance(doc, dict):
        doc = doc.get("branching")
    if not isinstance(doc, list) or not all(isinstance(e, str) for e in doc):
        raise errors.BadInput("branching must be a list of edge ids")
    unknown = [e for e in doc if e not in inst.edge]
    if unknown:
        raise errors.BadInput(f"unknown edge ids {unknown}")
    try:
        b = branching_from_edges(inst, doc)
    except ValueError as exc:
        raise errors.BadInput(str(exc)) from exc
    if not is_branching(inst, b):
        raise errors.BadInput("edges contain a cycle")
    return b


def _fraction(v) -> str:
    return "inf" if v == math.inf else str(v)


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------------------

def _solve(args):
    inst = _instance(args)
    rooted = augment_root(inst)
    res = popular_arborescence(rooted)
    if res is None:
        log.info("no popular branching exists")
        return {"popular": False}, EXIT_NO
    a, cert = res
    return {"popular": True, "branching": list(project(rooted, a).edges), "certificate": cert.to_json(), "margin": 0}, EXIT_OK


def _verify(args):
    inst = _instance(args)
    rooted = augment_root(inst)
    a = to_arborescence(rooted, _branching(inst, args.branching))
    ok, cert = is_popular(rooted, a)
    if ok:
        return {"popular": True, "certificate": cert.to_json()}, EXIT_OK
    mu, witness = unpopularity_margin(rooted, a)
    return {"popular": False, "margin": mu, "witness": list(project(rooted, witness).edges)}, EXIT_NO


def _margin(args):
    inst = _instance(args)
    rooted = augment_root(inst)
    mu, witness = unpopularity_margin(rooted, to_arborescence(rooted, _branching(inst, args.branching)))
    return {"margin": mu, "witness": list(project(rooted, witness).edges)}, EXIT_OK


def _minmargin(args):
    rooted = augment_root(_instance(args))
    a, mu, cert = min_margin_arborescence(rooted)
    return {"branching": list(project(rooted, a).edges), "certificate": cert.to_json(), "margin": mu}, EXIT_OK


def _factor(args):
    rooted = augment_root(_instance(args))
    a, t, family = low_factor_arborescence(rooted)
    return {"branching": list(project(rooted, a).edges), "factor_bound": t, "family": family.to_json()}, EXIT_OK


def _factor_of(args):
    inst = _instance(args)
    rooted = augment_root(inst)
    u = unpopularity_factor(rooted, to_arborescence(rooted, _branching(inst, args.branching)))
    return {"factor": _fraction(u), "vacuous": u == 0}, EXIT_OK


def _mixed(args):
    rooted = augment_root(_instance(args))
    return {"mixed": popular_mixed_branching(rooted).to_json()}, EXIT_OK


def _oracle(args):
    inst = _instance(args)
    vt = VoteTable.build(inst, args.budget)
    popular = [list(b.edges) for b, mu in zip(vt.branchings, vt.margins) if mu == 0]
    k_margin = min(range(len(vt)), key=lambda i: vt.margins[i])
    k_factor = min(range(len(vt)), key=lambda i: vt.factors[i])
    return {
        "branchings": len(vt),
        "popular": popular,
        "min_margin": int(vt.margins[k_margin]),
        "min_margin_branching": list(vt.branchings[k_margin].edges),
        "min_factor": _fraction(vt.factors[k_factor]),
        "min_factor_branching": list(vt.branchings[k_factor].edges),
    }, EXIT_OK


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.family} needs {', '.join(missing)}")


def _gen(args):
    fam = args.family
    if fam == "random":
        _need(args, "n", "m")
        inst = random_instance(args.n, args.m, PrefModel.parse(args.model), args.seed)
    elif fam == "tight-factor":
        _need(args, "k")
        inst = tight_factor_instance(args.k)
    elif fam == "complete-top":
        _need(args, "n")
        inst = complete_top_instance(args.n)
    elif fam == "four-cycle":
        inst = four_cycle_instance()
    else:
        inst = star_instance()
    return instance_to_dict(inst), EXIT_OK


def _reduce(args):
    text = _read(args.input)
    if args.problem == "3sat":
        inst, red = reduce_3sat(parse_dimacs(text))
        if args.assignment is None:
            return instance_to_dict(inst), EXIT_OK
        true_lits = [int(t) for t in args.assignment.split(",") if t.strip()]
        b = assignment_to_branching(red, {abs(l): l > 0 for l in true_lits})
        rooted = augment_root(inst)
        ok, _ = is_popular(rooted, to_arborescence(rooted, b))
        return {"instance": instance_to_dict(inst), "branching": list(b.edges), "popular": ok}, EXIT_OK
    if args.problem == "hampath":
        try:
            g = instance_from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise errors.BadInput(f"graph is not JSON: {exc}") from exc
        inst, red = reduce_hampath(g, args.root)
        if args.path is None:
            return instance_to_dict(inst), EXIT_OK
        b = hampath_to_branching(red, [p.strip() for p in args.path.split(",")])
        rooted = augment_root(inst, red.augment_root)
        ok, _ = is_popular(rooted, to_arborescence(rooted, b))
        return {"instance": instance_to_dict(inst), "branching": list(b.edges), "popular": ok}, EXIT_OK
    inst, red = reduce_3dm(*parse_3dm(text))
    if args.matching is None:
        return {"instance": instance_to_dict(inst), "root": red.root, "proof_valid": red.proof_valid}, EXIT_OK
    try:
        matching = json.loads(args.matching)
    except json.JSONDecodeError as exc:
        raise errors.BadInput(f"matching is not JSON: {exc}") from exc
    a, cert = matching_to_certificate(red, matching)
    check = validate_certificate(red.rooted(), a, cert)
    return {
        "instance": instance_to_dict(inst),
        "root": red.root,
        "proof_valid": red.proof_valid,
        "branching": list(a.edges),
        "certificate": cert.to_json(),
        "certificate_valid": check.valid,
        "margin_bound": check.bound,
    }, EXIT_OK


def _emit_lp(args):
    rooted = augment_root(_instance(args))
    if args.form == "face":
        return emit_face_lp(rooted, cutoff=args.cutoff), EXIT_OK
    return emit_extended_lp(rooted), EXIT_OK


HANDLERS = {
    "solve": _solve,
    "verify": _verify,
    "margin": _margin,
    "minmargin": _minmargin,
    "factor": _factor,
    "factor-of": _factor_of,
    "mixed": _mixed,
    "gen": _gen,
    "reduce": _reduce,
    "oracle": _oracle,
    "emit-lp": _emit_lp,
}


def execute(cmd: Command) -> int:
    try:
        payload, code = HANDLERS[cmd.name](cmd.args)
    except UsageError as exc:
        log.error("usage: %s", exc)
        return EXIT_USAGE
    except (errors.BudgetExceeded, errors.TooLarge) as exc:
        log.error("budget exceeded: %s", exc)
        return EXIT_BUDGET
    except errors.PopBranchError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT
    _emit(cmd.args, payload)
    return code


def _setup_logging():
    level = os.environ.get("POPBRANCH_LOG", "error").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.ERROR),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv=None) -> int:
    _setup_logging()
    try:
        cmd = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"popbranch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return execute(cmd)


if __name__ == "__main__":
    sys.exit(main())
