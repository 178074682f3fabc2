"""The built-in acceptance battery behind the `theses` subcommand.

Covers the connexive theses, non-symmetry of implication, the provable
contradiction pair with its paraconsistency counterparts, embedding of
every found proof into the higher-order calculus, and the golden natural
deduction trees.
"""
from __future__ import annotations

import time

from .g3c import SearchBudget, as_g3_sequent, check_g3c, prove_g3c
from .nc import GOLDEN, check_nc
from .scinf import check_scinf, embed_g3c
from .syntax import parse_sequent
from .witnesses import CheckResult

PROVABLE = (
    ("AT", "=> ~(~p -> p)"),
    ("AT'", "=> ~(p -> ~p)"),
    ("BT", "=> (p -> q) -> ~(p -> ~q)"),
    ("BT'", "=> (p -> ~q) -> ~(p -> q)"),
    ("contradiction+", "=> (p & ~p) -> p"),
    ("contradiction-", "=> ~((p & ~p) -> p)"),
)

UNPROVABLE = (
    ("symmetry", "=> (p -> q) -> (q -> p)"),
    ("explosion", "p, ~p => q"),
    ("neg-imp-elim", "~(p -> q) => p"),
)


def _timed(checks: list, name: str, fn) -> None:
    t0 = time.perf_counter()
    try:
        detail = fn() or ""
        passed = True
    except Exception as exc:
        passed, detail = False, str(exc)
    checks.append(CheckResult(name, passed, (time.perf_counter() - t0) * 1000.0,
                              detail))


def run_battery(budget: SearchBudget | None = None) -> list[CheckResult]:
    budget = budget or SearchBudget()
    checks: list[CheckResult] = []

    for name, text in PROVABLE:
        goal = as_g3_sequent(parse_sequent(text))

        def prove_and_check(goal=goal):
            res = prove_g3c(goal, (), budget)
            if res.status != "found":
                raise AssertionError(res.status)
            v = check_g3c(res.derivation)
            if not v:
                raise AssertionError(f"proof rejected: {v.reason}")
            e = embed_g3c(res.derivation)
            v2 = check_scinf(e)
            if not v2:
                raise AssertionError(f"embedding rejected: {v2.reason}")
            return f"proved and embedded, {res.visited} sequents"

        _timed(checks, f"{name}: {text}", prove_and_check)

    for name, text in UNPROVABLE:
        goal = as_g3_sequent(parse_sequent(text))

        def refute(goal=goal):
            res = prove_g3c(goal, (), budget)
            if res.status != "unprovable":
                raise AssertionError(res.status)
            return f"search exhausted, {res.visited} sequents"

        _timed(checks, f"{name}: {text}", refute)

    for gname, builder in GOLDEN.items():
        def check_golden(builder=builder):
            v = check_nc(builder())
            if not v:
                raise AssertionError(f"{v.location()}: {v.reason}")

        _timed(checks, f"nc.{gname}", check_golden)

    return checks
