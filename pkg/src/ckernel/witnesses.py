"""Constructive derivation witnesses and the per-definition verifier.

collapse_witness builds, for any R-expression S, the four derivations
showing S strictly equivalent to its collapsed formula (both directions,
proof and refutation side), by structural induction.  definition_witness
does the same for a defined connective against its defining formula,
case-splitting over groups on the left and reassembling the disjunction
of conjunctions on the right; the refutation directions mirror this
through the negative rule families.

verify_definition ties everything together: it checks the witness, then
replays every generated rule as a derived rule of G3C after translation
(conclusion provable from the premises in hypothesis mode), and round
trips the witness end sequents through the G3C prover and back.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .connectives import (ConnectiveDef, Registry, collapse, conjoin, disjoin,
                          expand_sequent, gen_rules, selections)
from .derivation import Derivation
from .g3c import SearchBudget, prove_g3c
from .scinf import adjust, check_scinf, derive_starred, embed_g3c
from .syntax import (And, App, Atom, Fml, Formula, Or, RExpr, Ref, Seq,
                     Sequent, mk_neg, render, subst_rexpr)


@dataclass(frozen=True)
class StrictEquivWitness:
    """The four derivations realizing lhs strictly equivalent to rhs:
    lhs => rhs, rhs => lhs, -rhs => -lhs and -lhs => -rhs."""

    lhs: RExpr
    rhs: RExpr
    fwd: Derivation
    bwd: Derivation
    fwd_neg: Derivation
    bwd_neg: Derivation

    def all(self):
        yield "fwd", self.fwd
        yield "bwd", self.bwd
        yield "fwd_neg", self.fwd_neg
        yield "bwd_neg", self.bwd_neg


# ------------------------------------------------- conjunction/disjunction

# All folds are left-nested to line up with collapse and defining_formula.


def _conj_right(premises: list[Derivation], conjuncts: list[Formula]) -> Derivation:
    """From delta => c_i for every i, build delta => c_1 & ... & c_n."""
    if len(premises) == 1:
        return premises[0]
    left = _conj_right(premises[:-1], conjuncts[:-1])
    delta = premises[0].conclusion.context
    f = And(conjoin(conjuncts[:-1]), conjuncts[-1])
    return Derivation("andR", Sequent(delta, Fml(f)), (left, premises[-1]))


def _fold_conj_left(delta: tuple, conjuncts: list[Formula], sub: Derivation) -> Derivation:
    """From delta, c_1, ..., c_n => W build delta, (c_1 & ... & c_n) => W."""
    if len(conjuncts) == 1:
        return sub
    last = conjuncts[-1]
    rest = conjuncts[:-1]
    sub2 = adjust(sub, delta + (Fml(last),) + tuple(Fml(c) for c in rest))
    rec = _fold_conj_left(delta + (Fml(last),), rest, sub2)
    big = conjoin(rest)
    rec = adjust(rec, delta + (Fml(big), Fml(last)))
    succ = rec.conclusion.succedent
    return Derivation("andL", Sequent(delta + (Fml(And(big, last)),), succ), (rec,))


def _disj_cases(delta: tuple, disjuncts: list[Formula],
                branch: Callable[[int], Derivation]) -> Derivation:
    """Case split: from delta, d_i => W for each i, conclude
    delta, (d_1 | ... | d_n) => W."""
    if len(disjuncts) == 1:
        return branch(0)
    left = _disj_cases(delta, disjuncts[:-1], branch)
    right = branch(len(disjuncts) - 1)
    big = disjoin(disjuncts[:-1])
    succ = right.conclusion.succedent
    return Derivation("orL", Sequent(delta + (Fml(Or(big, disjuncts[-1])),), succ),
                      (left, right))


def _intro_disj_right(d: Derivation, disjuncts: list[Formula], i: int) -> Derivation:
    """From delta => d_i conclude delta => d_1 | ... | d_n."""
    delta = d.conclusion.context
    cur = d
    if i > 0:
        f = Or(disjoin(disjuncts[:i]), disjuncts[i])
        cur = Derivation("orR2", Sequent(delta, Fml(f)), (cur,))
    for j in range(i + 1, len(disjuncts)):
        f = Or(disjoin(disjuncts[:j]), disjuncts[j])
        cur = Derivation("orR1", Sequent(delta, Fml(f)), (cur,))
    return cur


def _neg_conj_cases(delta: tuple, conjuncts: list[Formula],
                    branch: Callable[[int], Derivation]) -> Derivation:
    """From delta, -c_k => W for each k, conclude
    delta, -(c_1 & ... & c_n) => W."""
    if len(conjuncts) == 1:
        return branch(0)
    left = _neg_conj_cases(delta, conjuncts[:-1], branch)
    right = branch(len(conjuncts) - 1)
    big = conjoin(conjuncts[:-1])
    succ = right.conclusion.succedent
    return Derivation("andL-",
                      Sequent(delta + (Ref(Fml(And(big, conjuncts[-1]))),), succ),
                      (left, right))


def _neg_disj_fold(delta: tuple, disjuncts: list[Formula], sub: Derivation) -> Derivation:
    """From delta, -d_1, ..., -d_n => W build delta, -(d_1 | ... | d_n) => W."""
    if len(disjuncts) == 1:
        return sub
    last = disjuncts[-1]
    rest = disjuncts[:-1]
    sub2 = adjust(sub, delta + (Ref(Fml(last)),) + tuple(Ref(Fml(x)) for x in rest))
    rec = _neg_disj_fold(delta + (Ref(Fml(last)),), rest, sub2)
    big = disjoin(rest)
    rec = adjust(rec, delta + (Ref(Fml(big)), Ref(Fml(last))))
    succ = rec.conclusion.succedent
    return Derivation("orL-", Sequent(delta + (Ref(Fml(Or(big, last))),), succ), (rec,))


def _neg_conj_intro_right(d: Derivation, conjuncts: list[Formula], k: int) -> Derivation:
    """From delta => -c_k conclude delta => -(c_1 & ... & c_n)."""
    delta = d.conclusion.context
    cur = d
    if k > 0:
        f = And(conjoin(conjuncts[:k]), conjuncts[k])
        cur = Derivation("andR-2", Sequent(delta, Ref(Fml(f))), (cur,))
    for j in range(k + 1, len(conjuncts)):
        f = And(conjoin(conjuncts[:j]), conjuncts[j])
        cur = Derivation("andR-1", Sequent(delta, Ref(Fml(f))), (cur,))
    return cur


def _neg_disj_intro_right(premises: list[Derivation],
                          disjuncts: list[Formula]) -> Derivation:
    """From delta => -d_i for every i, build delta => -(d_1 | ... | d_n)."""
    if len(premises) == 1:
        return premises[0]
    left = _neg_disj_intro_right(premises[:-1], disjuncts[:-1])
    delta = premises[0].conclusion.context
    f = Or(disjoin(disjuncts[:-1]), disjuncts[-1])
    return Derivation("orR-", Sequent(delta, Ref(Fml(f))), (left, premises[-1]))


# --------------------------------------------------------- collapse witness


def collapse_witness(s: RExpr) -> StrictEquivWitness:
    """Witness that the collapse of s is strictly equivalent to s."""
    cbar = collapse(s)
    lhs = Fml(cbar)
    fwd, bwd, fwd_neg, bwd_neg = _collapse_parts(s)
    return StrictEquivWitness(lhs, s, fwd, bwd, fwd_neg, bwd_neg)


def _collapse_parts(s: RExpr):
    cbar = collapse(s)
    lhs = Fml(cbar)
    neg_s = mk_neg(s)
    neg_lhs = Ref(lhs)

    if isinstance(s, Fml):
        return (Derivation("RF", Sequent((s,), s)),
                Derivation("RF", Sequent((s,), s)),
                Derivation("RF", Sequent((neg_s,), neg_s)),
                Derivation("RF", Sequent((neg_s,), neg_s)))

    if isinstance(s, Ref):
        u = s.body
        wf, wb, wfn, wbn = _collapse_parts(u)
        fwd = Derivation("~L", Sequent((lhs,), s), (wbn,))
        bwd = Derivation("~R", Sequent((s,), lhs), (wfn,))
        fwd_neg = Derivation("~R-", Sequent((u,), neg_lhs), (wb,))
        bwd_neg = Derivation("~L-", Sequent((neg_lhs,), u), (wf,))
        return fwd, bwd, fwd_neg, bwd_neg

    assert isinstance(s, Seq)
    members = s.context
    t = s.succedent
    tf, tb, tfn, tbn = _collapse_parts(t)
    tbar = collapse(t)

    if not members:
        fwd = Derivation("RI+", Sequent((lhs,), s), (tf,))
        bwd = Derivation("LI+", Sequent((s,), lhs), (tb,))
        fwd_neg = Derivation("LI-", Sequent((neg_s,), neg_lhs), (tfn,))
        bwd_neg = Derivation("RI-", Sequent((neg_lhs,), neg_s), (tbn,))
        return fwd, bwd, fwd_neg, bwd_neg

    wits = [collapse_witness(u) for u in members]
    ubars = [collapse(u) for u in members]
    big = conjoin(ubars)
    ufml = tuple(Fml(b) for b in ubars)

    # members => big conjunction, and big conjunction => each member
    ctx_to_conj = _conj_right(
        [adjust(w.bwd, members) for w in wits], ubars)

    def conj_to_member(j: int) -> Derivation:
        base = adjust(wits[j].fwd, ufml)
        return _fold_conj_left((), ubars, base)

    # forward: collapsed implication proves the sequent expression
    d2 = adjust(tf, members + (Fml(tbar),))
    star = derive_starred("impL*", big, tbar, (ctx_to_conj, d2))
    moved = adjust(star, (lhs,) + members)
    fwd = Derivation("RI+", Sequent((lhs,), s), (moved,))

    # backward: the sequent expression proves the collapsed implication
    gjs = tuple(conj_to_member(j) for j in range(len(members)))
    last = adjust(tb, (Fml(big), t))
    li = Derivation("LI+", Sequent((Fml(big), s), Fml(tbar)), gjs + (last,))
    swapped = adjust(li, (s, Fml(big)))
    bwd = derive_starred("impR*", big, tbar, (swapped,))

    # refuted sequent expression proves the refuted implication
    last_n = adjust(tfn, (Fml(big), mk_neg(t)))
    li_n = Derivation("LI-", Sequent((Fml(big), neg_s), Ref(Fml(tbar))),
                      gjs + (last_n,))
    swapped_n = adjust(li_n, (neg_s, Fml(big)))
    fwd_neg = derive_starred("impR*-", big, tbar, (swapped_n,))

    # refuted implication proves the refuted sequent expression
    d2n = adjust(tbn, members + (Ref(Fml(tbar)),))
    star_n = derive_starred("impL*-", big, tbar, (ctx_to_conj, d2n))
    moved_n = adjust(star_n, (neg_lhs,) + members)
    bwd_neg = Derivation("RI-", Sequent((neg_lhs,), neg_s), (moved_n,))

    return fwd, bwd, fwd_neg, bwd_neg


# ------------------------------------------------------ definition witness


def fresh_arguments(cdef: ConnectiveDef) -> tuple[Atom, ...]:
    return tuple(Atom(f"p{j}") for j in range(1, cdef.arity + 1))


def definition_witness(cdef: ConnectiveDef) -> StrictEquivWitness:
    """Witness that F(p1..pn) is strictly equivalent to its defining
    formula, instantiated at fresh atoms."""
    args = fresh_arguments(cdef)
    ph = {f"A{j}": a for j, a in enumerate(args, start=1)}
    head = App(cdef.name, args)
    lhs = Fml(head)
    neg_lhs = Ref(lhs)

    groups = [[subst_rexpr(m, ph) for m in g] for g in cdef.groups]
    wits = [[collapse_witness(m) for m in g] for g in groups]
    bars = [[collapse(m) for m in g] for g in groups]
    djs = [conjoin(bs) for bs in bars]
    dfml = disjoin(djs)
    rhs = Fml(dfml)
    neg_rhs = Ref(rhs)
    t = len(groups)

    # fwd: F(args) => D by the left schema rule, one case per group
    def group_case(i: int) -> Derivation:
        ctx = tuple(groups[i])
        ds = [adjust(w.bwd, ctx) for w in wits[i]]
        conj = _conj_right(ds, bars[i])
        return _intro_disj_right(conj, djs, i)

    fwd = Derivation(f"II.{cdef.name}", Sequent((lhs,), rhs),
                     tuple(group_case(i) for i in range(t)))

    # bwd: D => F(args), splitting the disjunction and applying the right
    # schema rule of the matching group
    def disj_branch(i: int) -> Derivation:
        ufml = tuple(Fml(b) for b in bars[i])
        prems = tuple(adjust(w.fwd, ufml) for w in wits[i])
        node = Derivation(f"I.{cdef.name}.{i + 1}", Sequent(ufml, lhs), prems)
        return _fold_conj_left((), bars[i], node)

    bwd = _disj_cases((), djs, disj_branch)

    # fwd_neg: -D => -F(args); splitting -D yields one branch per
    # selection, closed by the matching negative right schema rule
    sels = selections(cdef)

    def sel_leaf(sel: tuple[int, ...]) -> Derivation:
        ctx = tuple(Ref(Fml(bars[i][k - 1])) for i, k in enumerate(sel))
        prems = tuple(adjust(wits[i][k - 1].bwd_neg, ctx)
                      for i, k in enumerate(sel))
        name = "III." + cdef.name + "." + ".".join(map(str, sel))
        return Derivation(name, Sequent(ctx, neg_lhs), prems)

    def split(i: int, chosen: tuple[int, ...]) -> Derivation:
        if i == t:
            return sel_leaf(chosen)
        delta = tuple(Ref(Fml(bars[g][chosen[g] - 1])) for g in range(i)) \
            + tuple(Ref(Fml(djs[g])) for g in range(t - 1, i, -1))

        def branch(k0: int) -> Derivation:
            d = split(i + 1, chosen + (k0 + 1,))
            return adjust(d, delta + (Ref(Fml(bars[i][k0])),))

        return _neg_conj_cases(delta, bars[i], branch)

    top = split(0, ())
    top = adjust(top, tuple(Ref(Fml(dj)) for dj in djs))
    fwd_neg = _neg_disj_fold((), djs, top)

    # bwd_neg: -F(args) => -D by the negative left schema rule, one
    # premise per selection
    def sel_premise(sel: tuple[int, ...]) -> Derivation:
        ctx = tuple(mk_neg(groups[i][k - 1]) for i, k in enumerate(sel))
        parts = []
        for i, k in enumerate(sel):
            base = adjust(wits[i][k - 1].fwd_neg, ctx)
            parts.append(_neg_conj_intro_right(base, bars[i], k - 1))
        return _neg_disj_intro_right(parts, djs)

    bwd_neg = Derivation(f"IV.{cdef.name}", Sequent((neg_lhs,), neg_rhs),
                         tuple(sel_premise(sel) for sel in sels))

    return StrictEquivWitness(lhs, rhs, fwd, bwd, fwd_neg, bwd_neg)


# ------------------------------------------------------------ verification


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    millis: float
    detail: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.passed else "FAIL"


@dataclass(frozen=True)
class VerificationReport:
    name: str
    checks: tuple[CheckResult, ...]

    def __post_init__(self):
        object.__setattr__(self, "checks", tuple(self.checks))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


class _Timer:
    def __init__(self):
        self.checks: list[CheckResult] = []

    def run(self, name: str, fn) -> bool:
        t0 = time.perf_counter()
        try:
            detail = fn()
            passed, detail = True, (detail or "")
        except Exception as exc:  # a failed component, not a crash
            passed, detail = False, str(exc)
        ms = (time.perf_counter() - t0) * 1000.0
        self.checks.append(CheckResult(name, passed, ms, detail))
        return passed


class ComponentFailure(Exception):
    pass


def verify_definition(cdef: ConnectiveDef,
                      budget: SearchBudget | None = None) -> VerificationReport:
    """Full pipeline for one definition: witness generation and checking,
    derived-rule replay of every generated rule in translated form, and a
    prover round trip over the witness end sequents."""
    budget = budget or SearchBudget()
    env = Registry([cdef])
    timer = _Timer()

    state: dict = {}

    def build():
        state["witness"] = definition_witness(cdef)

    ok = timer.run("witness.build", build)

    if ok:
        for which, der in state["witness"].all():
            def check(d=der):
                v = check_scinf(d, env)
                if not v:
                    raise ComponentFailure(f"{v.location()}: {v.reason}")
            timer.run(f"witness.{which}", check)

    for schema in gen_rules(cdef).all():
        def replay(s=schema):
            concl, premises = instantiate_rule(s, cdef)
            goal = expand_sequent(concl, env)
            hyps = [expand_sequent(p, env) for p in premises]
            res = prove_g3c(goal, hyps, budget)
            if res.status != "found":
                raise ComponentFailure(
                    f"{res.status}: {render(goal)} from {len(hyps)} premises")
            return f"visited {res.visited}"
        timer.run(f"rule.{schema.name}", replay)

    if ok:
        for which, der in state["witness"].all():
            def roundtrip(d=der):
                goal = expand_sequent(d.conclusion, env)
                res = prove_g3c(goal, (), budget)
                if res.status != "found":
                    raise ComponentFailure(f"{res.status}: {render(goal)}")
                back = embed_g3c(res.derivation)
                v = check_scinf(back, env)
                if not v:
                    raise ComponentFailure(f"embedding rejected: {v.reason}")
            timer.run(f"roundtrip.{which}", roundtrip)

    return VerificationReport(cdef.name, tuple(timer.checks))


def instantiate_rule(schema, cdef: ConnectiveDef):
    """Instantiate a rule schema with distinct fresh atoms: p1..pn for
    the placeholders and q for the succedent of left rules.  Returns the
    conclusion sequent and the premise sequents at an empty context."""
    args = fresh_arguments(cdef)
    ph = {f"A{j}": a for j, a in enumerate(args, start=1)}
    principal = subst_rexpr(schema.principal, ph)
    succ = Fml(Atom("q"))
    if schema.side == "R":
        concl = Sequent((), principal)
    else:
        concl = Sequent((principal,), succ)
    premises = []
    for prem in schema.premises:
        pctx = tuple(subst_rexpr(e, ph) for e in prem.extra)
        psucc = succ if prem.succ is None else subst_rexpr(prem.succ, ph)
        premises.append(Sequent(pctx, psucc))
    return concl, premises
