"""Command line front end.

Exit codes: 0 for success, found or accepted; 1 for a definite negative
answer (unprovable, rejected, failing report); 2 for usage or I/O
errors; 3 when a search budget was exceeded.
"""
from __future__ import annotations

import argparse
import sys

from .battery import run_battery
from .connectives import (DefinitionError, Registry, RuleSchema,
                          defining_formula, gen_rules, load_registry)
from .g3c import (BUDGET_EXCEEDED, FOUND, SearchBudget, as_g3_sequent,
                  check_g3c, prove_g3c)
from .nc import check_nc
from .report import checks_to_text, checks_to_tsv, render_figure
from .scinf import check_scinf
from .sexpr import DerivationFile, read_derivation_file, write_derivation_file
from .syntax import (ParseError, parse_rexpr, parse_sequent, r_degree, render)
from .witnesses import verify_definition

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _budget(args) -> SearchBudget:
    return SearchBudget(max_visited_sequents=args.budget, time_limit=args.time)


def _add_budget_flags(sub):
    sub.add_argument("--budget", type=int, default=1_000_000,
                     help="visited sequent limit (default 1000000)")
    sub.add_argument("--time", type=float, default=30.0,
                     help="time limit in seconds (default 30)")


def _load_defs(path: str) -> Registry:
    with open(path, encoding="utf-8") as fh:
        return load_registry(fh.read())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ckernel",
                                 description="proof kernel for the connexive logic C")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse an R-expression, reprint it and its degree")
    p.add_argument("expr")
    p.add_argument("--defs", help="connective definitions file")

    p = sub.add_parser("prove", help="decide a formula-level sequent in G3C")
    p.add_argument("sequent", help='e.g. "p, q => p" or "=> ~(p -> ~p)"')
    p.add_argument("--hyp", action="append", default=[],
                   help="hypothesis sequent (repeatable)")
    p.add_argument("--emit", help="write the found derivation here")
    _add_budget_flags(p)

    p = sub.add_parser("check", help="check a derivation file")
    p.add_argument("file")
    p.add_argument("--calculus", required=True, choices=("g3c", "scinf", "nc"))
    p.add_argument("--defs", help="connective definitions file")

    p = sub.add_parser("define", help="print generated rules and defining formulas")
    p.add_argument("file")
    p.add_argument("--rules", action="store_true", help="print only the rules")
    p.add_argument("--formula", action="store_true", help="print only the defining formulas")

    p = sub.add_parser("verify", help="run the verification pipeline for a definitions file")
    p.add_argument("file")
    p.add_argument("--no-timings", action="store_true")
    p.add_argument("--tsv", help="also write tab-delimited records here")
    p.add_argument("--plot", help="also render a summary figure here")
    p.add_argument("--emit-dir", help="dump the witness derivations here")
    _add_budget_flags(p)

    p = sub.add_parser("theses", help="run the built-in acceptance battery")
    p.add_argument("--tsv", help="also write tab-delimited records here")
    p.add_argument("--plot", help="also render a summary figure here")
    _add_budget_flags(p)

    return ap


_KNOWN_FLAGS = {
    "parse": {"--defs"},
    "prove": {"--hyp", "--emit", "--budget", "--time"},
    "check": {"--calculus", "--defs"},
    "define": {"--rules", "--formula"},
    "verify": {"--no-timings", "--tsv", "--plot", "--emit-dir", "--budget",
               "--time"},
    "theses": {"--tsv", "--plot", "--budget", "--time"},
}
_BARE_FLAGS = {"--rules", "--formula", "--no-timings", "-h", "--help"}


def _escape_positionals(argv: list[str]) -> list[str]:
    """Let expressions that begin with '-' (refutations like "--p") pass
    through as positionals: everything after the first token that is not
    a recognized option of the subcommand is escaped with '--'."""
    if not argv or argv[0] not in _KNOWN_FLAGS or "--" in argv:
        return argv
    known = _KNOWN_FLAGS[argv[0]] | {"-h", "--help"}
    out = [argv[0]]
    i = 1
    while i < len(argv):
        a = argv[i]
        head = a.split("=", 1)[0]
        if a.startswith("-") and head not in known:
            return out + ["--"] + argv[i:]
        out.append(a)
        if head in known and head not in _BARE_FLAGS and "=" not in a \
                and i + 1 < len(argv):
            out.append(argv[i + 1])
            i += 1
        i += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_escape_positionals(argv))
    try:
        return _dispatch(args)
    except (ParseError, DefinitionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args) -> int:
    if args.command == "parse":
        return _cmd_parse(args)
    if args.command == "prove":
        return _cmd_prove(args)
    if args.command == "check":
        return _cmd_check(args)
    if args.command == "define":
        return _cmd_define(args)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "theses":
        return _cmd_theses(args)
    raise AssertionError(args.command)


def _cmd_parse(args) -> int:
    env = _load_defs(args.defs) if args.defs else None
    if env is not None:
        print(f"env-hash: {env.snapshot_hash()}")
    e = parse_rexpr(args.expr, env)
    print(render(e))
    print(f"degree: {r_degree(e)}")
    return EXIT_OK


def _cmd_prove(args) -> int:
    goal = as_g3_sequent(parse_sequent(args.sequent))
    hyps = [as_g3_sequent(parse_sequent(h)) for h in args.hyp]
    try:
        res = prove_g3c(goal, hyps, _budget(args))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if res.status == FOUND:
        print("found")
        if args.emit:
            f = DerivationFile("g3c", res.derivation, hypotheses=tuple(hyps))
            with open(args.emit, "w", encoding="utf-8") as fh:
                fh.write(write_derivation_file(f))
        return EXIT_OK
    if res.status == BUDGET_EXCEEDED:
        print("budget exceeded")
        return EXIT_BUDGET
    print("unprovable")
    return EXIT_NO


def _cmd_check(args) -> int:
    env = _load_defs(args.defs) if args.defs else None
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    f = read_derivation_file(text, env)
    if f.calculus != args.calculus:
        print(f"error: file is tagged {f.calculus!r}, not {args.calculus!r}",
              file=sys.stderr)
        return EXIT_USAGE
    if f.env_hash is not None:
        if env is None:
            print("error: this file pins a definitions environment, pass --defs",
                  file=sys.stderr)
            return EXIT_USAGE
        if env.snapshot_hash() != f.env_hash:
            print("error: definitions hash mismatch with the file header",
                  file=sys.stderr)
            return EXIT_USAGE
    if env is not None:
        print(f"env-hash: {env.snapshot_hash()}")

    if args.calculus == "g3c":
        verdict = check_g3c(f.root, hypotheses=f.hypotheses)
    elif args.calculus == "scinf":
        verdict = check_scinf(f.root, env)
    else:
        verdict = check_nc(f.root, f.premises)
    if verdict:
        print("accepted")
        return EXIT_OK
    print(f"rejected at {verdict.location()}: {verdict.reason}")
    return EXIT_NO


def _render_rule(schema: RuleSchema) -> str:
    def seq(ctx_parts, succ) -> str:
        ctx = ", ".join(["D"] + ctx_parts)
        return f"[{ctx} => {succ}]"

    if schema.side == "R":
        concl = seq([], render(schema.principal))
    else:
        concl = seq([render(schema.principal)], "T")
    prems = []
    for p in schema.premises:
        extra = [render(e) for e in p.extra]
        succ = "T" if p.succ is None else render(p.succ)
        prems.append(seq(extra, succ))
    return f"{schema.name}: " + "  ".join(prems) + f"  -->  {concl}"


def _cmd_define(args) -> int:
    env = _load_defs(args.file)
    print(f"env-hash: {env.snapshot_hash()}")
    show_rules = args.rules or not args.formula
    show_formula = args.formula or not args.rules
    for cdef in env.definitions():
        print(f"connective {cdef.name}/{cdef.arity}")
        if show_formula:
            print(f"  defining-formula: {render(defining_formula(cdef))}")
        if show_rules:
            for schema in gen_rules(cdef).all():
                print(f"  {_render_rule(schema)}")
    return EXIT_OK


def _emit_report(title, checks, args, timings: bool) -> None:
    sys.stdout.write(checks_to_text(title, checks, timings))
    if args.tsv:
        with open(args.tsv, "w", encoding="utf-8") as fh:
            fh.write(checks_to_tsv(title, checks, timings))
    if args.plot:
        render_figure(title, checks, args.plot)


def _cmd_verify(args) -> int:
    env = _load_defs(args.file)
    print(f"env-hash: {env.snapshot_hash()}")
    budget = _budget(args)
    all_checks = []
    ok = True
    for cdef in env.definitions():
        report = verify_definition(cdef, budget)
        ok = ok and report.passed
        for c in report.checks:
            all_checks.append(type(c)(f"{cdef.name}.{c.name}", c.passed,
                                      c.millis, c.detail))
    if args.emit_dir:
        _dump_witnesses(env, args.file, args.emit_dir)
    _emit_report(f"verify {args.file}", all_checks, args, not args.no_timings)
    return EXIT_OK if ok else EXIT_NO


def _dump_witnesses(env, defs_path: str, out_dir: str) -> None:
    import os

    from .witnesses import definition_witness

    os.makedirs(out_dir, exist_ok=True)
    for cdef in env.definitions():
        witness = definition_witness(cdef)
        for which, d in witness.all():
            f = DerivationFile("scinf", d, env_name=defs_path,
                               env_hash=env.snapshot_hash())
            path = os.path.join(out_dir, f"{cdef.name}.{which}.proof")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(write_derivation_file(f))


def _cmd_theses(args) -> int:
    try:
        checks = run_battery(_budget(args))
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit_report("theses", checks, args, timings=False)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NO


if __name__ == "__main__":
    sys.exit(main())
