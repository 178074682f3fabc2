"""The sequent calculus G3C: derivation checking and a terminating
decision procedure by backward proof search.

Sequents are multisets of formulas over {~, &, |, ->} with a single
succedent.  The axioms are atomic (Gamma, p => p and Gamma, ~p => ~p);
all rules share their context additively, and the left implication rules
repeat their principal formula in the first premise.

Search works over set contexts (contraction absorbed) inside a finite
signed subformula closure: every backward rule stays inside
sub(goal+hyps) together with one strong negation of each member, which
bounds the candidate space and yields termination.  Found proofs are
rebuilt into explicit multiset derivations that the checker accepts.

In hypothesis mode leaves may close against a hypothesis up to context
weakening (and contraction, since search contexts are sets), and an
analytic cut restricted to closure formulas becomes available.
"""
from __future__ import annotations

import sys
import time
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .derivation import ACCEPT, Derivation, Verdict, reject
from .syntax import (And, App, Atom, Formula, Imp, Neg, Or, Sequent, render)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))

G3C_RULES = (
    "Rf", "Rf~",
    "Rand", "Land", "Ror1", "Ror2", "Lor", "Rimp", "Limp",
    "R~~", "L~~", "R~and1", "R~and2", "L~and", "R~or", "L~or",
    "R~imp", "L~imp",
    "Hyp", "Cut",
)

FOUND = "found"
UNPROVABLE = "unprovable"
BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class SearchBudget:
    max_visited_sequents: int = 1_000_000
    time_limit: float = 30.0

    def __post_init__(self):
        if self.max_visited_sequents <= 0 or self.time_limit <= 0:
            raise ValueError("budget bounds must be positive")


@dataclass(frozen=True)
class ProveResult:
    status: str
    derivation: Derivation | None = None
    visited: int = 0
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.status == FOUND


class BudgetExceeded(Exception):
    pass


def as_g3_sequent(seq: Sequent) -> Sequent:
    """Unwrap a parsed R-level sequent into a formula-level G3C sequent.

    Every member must have R-degree 0 and be a plain formula."""
    from .syntax import Fml

    def unwrap(x):
        if isinstance(x, Fml):
            return x.formula
        if isinstance(x, (Atom, Neg, And, Or, Imp, App)):
            return x
        raise ValueError(f"not a formula: {render(x)!r}; G3C sequents are formula-level")

    return Sequent(tuple(unwrap(m) for m in seq.context), unwrap(seq.succedent))


def ensure_primitive(f: Formula, where: str = "formula") -> None:
    stack = [f]
    while stack:
        x = stack.pop()
        if isinstance(x, Atom):
            continue
        if isinstance(x, Neg):
            stack.append(x.body)
        elif isinstance(x, (And, Or, Imp)):
            stack.append(x.left)
            stack.append(x.right)
        elif isinstance(x, App):
            raise ValueError(
                f"{where} contains the defined connective {x.connective!r}; "
                "G3C handles {~, &, |, ->} only")
        else:
            raise TypeError(f"not a formula: {x!r}")


def subformulas(f: Formula) -> set[Formula]:
    acc: set[Formula] = set()
    stack = [f]
    while stack:
        x = stack.pop()
        if x in acc:
            continue
        acc.add(x)
        if isinstance(x, Neg):
            stack.append(x.body)
        elif isinstance(x, (And, Or, Imp)):
            stack.append(x.left)
            stack.append(x.right)
    return acc


def signed_closure(formulas: Iterable[Formula]) -> frozenset[Formula]:
    subs: set[Formula] = set()
    for f in formulas:
        subs |= subformulas(f)
    return frozenset(subs | {Neg(c) for c in subs})


# ----------------------------------------------------------------- checker


def _remove_one(ctx: tuple, f) -> tuple:
    i = ctx.index(f)
    return ctx[:i] + ctx[i + 1 :]


def _same_multiset(a: tuple, b: tuple) -> bool:
    return Counter(a) == Counter(b)


def _candidates(ctx: tuple, pred) -> Iterator[Formula]:
    seen = set()
    for f in ctx:
        if f not in seen and pred(f):
            seen.add(f)
            yield f


def check_g3c(d: Derivation, hypotheses: Iterable[Sequent] = ()) -> Verdict:
    """Accept iff every node instantiates its rule exactly, with contexts
    compared as multisets.  Hyp leaves and analytic Cut nodes are valid
    only against the supplied hypotheses and the signed closure of the
    root sequent plus hypotheses."""
    hyps = tuple(hypotheses)
    closure: frozenset[Formula] | None = None
    for node, path in d.postorder():
        concl = node.conclusion
        try:
            for m in concl.context:
                ensure_primitive(m, "context")
            ensure_primitive(concl.succedent, "succedent")
        except (ValueError, TypeError) as exc:
            return reject(path, str(exc))
        if node.rule == "Cut" and closure is None:
            root_fmls = list(d.conclusion.context) + [d.conclusion.succedent]
            for h in hyps:
                root_fmls.extend(h.context)
                root_fmls.append(h.succedent)
            closure = signed_closure(root_fmls)
        reason = _check_node(node, hyps, closure)
        if reason is not None:
            return reject(path, reason)
    return ACCEPT


def _check_node(node: Derivation, hyps, closure) -> str | None:
    ctx = node.conclusion.context
    succ = node.conclusion.succedent
    kids = [c.conclusion for c in node.children]
    rule = node.rule

    def arity(n: int) -> str | None:
        if len(kids) != n:
            return f"{rule} needs {n} premises, found {len(kids)}"
        return None

    def match(i: int, want_ctx: tuple, want_succ) -> str | None:
        if kids[i].succedent != want_succ:
            return (f"{rule}: premise {i + 1} should conclude "
                    f"{render(want_succ)}, found {render(kids[i].succedent)}")
        if not _same_multiset(kids[i].context, want_ctx):
            return f"{rule}: premise {i + 1} context does not fit the schema"
        return None

    if rule == "Rf":
        if err := arity(0):
            return err
        if not isinstance(succ, Atom):
            return "Rf concludes an atomic succedent"
        if succ not in ctx:
            return "Rf: succedent not in the context"
        return None

    if rule == "Rf~":
        if err := arity(0):
            return err
        if not (isinstance(succ, Neg) and isinstance(succ.body, Atom)):
            return "Rf~ concludes a negated atom"
        if succ not in ctx:
            return "Rf~: succedent not in the context"
        return None

    if rule == "Hyp":
        if err := arity(0):
            return err
        for h in hyps:
            if h.succedent == succ and set(h.context) <= set(ctx):
                return None
        return "Hyp: no hypothesis matches up to weakening"

    if rule == "Cut":
        if err := arity(2):
            return err
        if not hyps:
            return "Cut is only admitted in hypothesis mode"
        cut_formula = kids[0].succedent
        if closure is not None and cut_formula not in closure:
            return "Cut: cut formula outside the analytic closure"
        if not _same_multiset(kids[0].context, ctx):
            return "Cut: left premise context differs from the conclusion"
        return match(1, ctx + (cut_formula,), succ)

    if rule == "Rand":
        if err := arity(2):
            return err
        if not isinstance(succ, And):
            return "Rand concludes a conjunction"
        return match(0, ctx, succ.left) or match(1, ctx, succ.right)

    if rule == "Ror1":
        if err := arity(1):
            return err
        if not isinstance(succ, Or):
            return "Ror1 concludes a disjunction"
        return match(0, ctx, succ.left)

    if rule == "Ror2":
        if err := arity(1):
            return err
        if not isinstance(succ, Or):
            return "Ror2 concludes a disjunction"
        return match(0, ctx, succ.right)

    if rule == "Rimp":
        if err := arity(1):
            return err
        if not isinstance(succ, Imp):
            return "Rimp concludes an implication"
        return match(0, ctx + (succ.left,), succ.right)

    if rule == "R~~":
        if err := arity(1):
            return err
        if not (isinstance(succ, Neg) and isinstance(succ.body, Neg)):
            return "R~~ concludes a double negation"
        return match(0, ctx, succ.body.body)

    if rule == "R~and1":
        if err := arity(1):
            return err
        if not (isinstance(succ, Neg) and isinstance(succ.body, And)):
            return "R~and1 concludes a negated conjunction"
        return match(0, ctx, Neg(succ.body.left))

    if rule == "R~and2":
        if err := arity(1):
            return err
        if not (isinstance(succ, Neg) and isinstance(succ.body, And)):
            return "R~and2 concludes a negated conjunction"
        return match(0, ctx, Neg(succ.body.right))

    if rule == "R~or":
        if err := arity(2):
            return err
        if not (isinstance(succ, Neg) and isinstance(succ.body, Or)):
            return "R~or concludes a negated disjunction"
        return match(0, ctx, Neg(succ.body.left)) or match(1, ctx, Neg(succ.body.right))

    if rule == "R~imp":
        if err := arity(1):
            return err
        if not (isinstance(succ, Neg) and isinstance(succ.body, Imp)):
            return "R~imp concludes a negated implication"
        return match(0, ctx + (succ.body.left,), Neg(succ.body.right))

    # left rules: try every candidate principal occurrence
    left_shapes = {
        "Land": lambda f: isinstance(f, And),
        "Lor": lambda f: isinstance(f, Or),
        "Limp": lambda f: isinstance(f, Imp),
        "L~~": lambda f: isinstance(f, Neg) and isinstance(f.body, Neg),
        "L~and": lambda f: isinstance(f, Neg) and isinstance(f.body, And),
        "L~or": lambda f: isinstance(f, Neg) and isinstance(f.body, Or),
        "L~imp": lambda f: isinstance(f, Neg) and isinstance(f.body, Imp),
    }
    if rule not in left_shapes:
        return f"unknown G3C rule {rule!r}"

    want = {"Land": 1, "Lor": 2, "Limp": 2, "L~~": 1,
            "L~and": 2, "L~or": 1, "L~imp": 2}[rule]
    if err := arity(want):
        return err

    for p in _candidates(ctx, left_shapes[rule]):
        rest = _remove_one(ctx, p)
        if rule == "Land":
            err = match(0, rest + (p.left, p.right), succ)
        elif rule == "Lor":
            err = match(0, rest + (p.left,), succ) or match(1, rest + (p.right,), succ)
        elif rule == "Limp":
            err = match(0, ctx, p.left) or match(1, rest + (p.right,), succ)
        elif rule == "L~~":
            err = match(0, rest + (p.body.body,), succ)
        elif rule == "L~and":
            err = (match(0, rest + (Neg(p.body.left),), succ)
                   or match(1, rest + (Neg(p.body.right),), succ))
        elif rule == "L~or":
            err = match(0, rest + (Neg(p.body.left), Neg(p.body.right)), succ)
        else:  # L~imp
            err = match(0, ctx, p.body.left) or match(1, rest + (Neg(p.body.right),), succ)
        if err is None:
            return None
    return f"{rule}: no principal formula in the context fits the premises"


# ------------------------------------------------------------------ search


class _SNode(NamedTuple):
    rule: str
    principal: Formula | None
    ctx: frozenset
    succ: Formula
    children: tuple


_INF = float("inf")
_FAILED = object()


class _Search:
    """Depth-first backward search with tabling.

    Loop hits against a sequent already on the current path are cut; a
    failure is cached only when it did not depend on any strict ancestor
    (tracked through a minimal dependency depth), which keeps negative
    caching sound.  Proofs are always cacheable.
    """

    def __init__(self, hyps, closure, budget: SearchBudget, use_cut: bool,
                 deadline: float):
        self.hyps = hyps  # list of (frozenset, succedent, Sequent)
        self.closure = closure
        self._keys: dict = {}
        self.cut_candidates = sorted(closure, key=self._key) if use_cut else ()
        self.budget = budget
        self.deadline = deadline
        self.memo: dict = {}
        self.onpath: dict = {}
        self.visited = 0

    def _key(self, f) -> str:
        # deterministic ordering independent of hash randomization
        k = self._keys.get(f)
        if k is None:
            k = self._keys[f] = render(f)
        return k

    def solve(self, ctx: frozenset, succ: Formula, depth: int):
        key = (ctx, succ)
        hit = self.memo.get(key)
        if hit is not None:
            return (None, _INF) if hit is _FAILED else (hit, _INF)
        if key in self.onpath:
            return None, self.onpath[key]

        self.visited += 1
        if self.visited > self.budget.max_visited_sequents:
            raise BudgetExceeded()
        if self.visited % 256 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded()

        found = self._axiom(ctx, succ)
        if found is not None:
            self.memo[key] = found
            return found, _INF

        self.onpath[key] = depth
        fail_dep = _INF
        try:
            for rule, principal, premises in self._alternatives(ctx, succ):
                proofs = []
                ok = True
                dep = _INF
                for pctx, psucc in premises:
                    node, d = self.solve(pctx, psucc, depth + 1)
                    if node is None:
                        ok = False
                        dep = d
                        break
                    proofs.append(node)
                if ok:
                    found = _SNode(rule, principal, ctx, succ, tuple(proofs))
                    self.memo[key] = found
                    return found, _INF
                fail_dep = min(fail_dep, dep)
        finally:
            del self.onpath[key]

        if fail_dep >= depth:
            self.memo[key] = _FAILED
            return None, _INF
        return None, fail_dep

    def _axiom(self, ctx, succ):
        if isinstance(succ, Atom) and succ in ctx:
            return _SNode("Rf", None, ctx, succ, ())
        if isinstance(succ, Neg) and isinstance(succ.body, Atom) and succ in ctx:
            return _SNode("Rf~", None, ctx, succ, ())
        for hctx, hsucc, _ in self.hyps:
            if hsucc == succ and hctx <= ctx:
                return _SNode("Hyp", None, ctx, succ, ())
        return None

    def _alternatives(self, ctx, succ):
        # deterministic order regardless of hash seed
        members = sorted(ctx, key=self._key)

        # non-branching invertible rules first
        if isinstance(succ, Imp):
            yield "Rimp", None, (((ctx | {succ.left}), succ.right),)
        if isinstance(succ, Neg):
            b = succ.body
            if isinstance(b, Neg):
                yield "R~~", None, ((ctx, b.body),)
            elif isinstance(b, Imp):
                yield "R~imp", None, ((ctx | {b.left}, Neg(b.right)),)
        for f in members:
            if isinstance(f, And):
                yield "Land", f, (((ctx - {f}) | {f.left, f.right}, succ),)
            elif isinstance(f, Neg):
                b = f.body
                if isinstance(b, Neg):
                    yield "L~~", f, (((ctx - {f}) | {b.body}, succ),)
                elif isinstance(b, Or):
                    yield "L~or", f, (((ctx - {f}) | {Neg(b.left), Neg(b.right)}, succ),)

        # branching invertible rules
        if isinstance(succ, And):
            yield "Rand", None, ((ctx, succ.left), (ctx, succ.right))
        if isinstance(succ, Neg) and isinstance(succ.body, Or):
            b = succ.body
            yield "R~or", None, ((ctx, Neg(b.left)), (ctx, Neg(b.right)))
        for f in members:
            if isinstance(f, Or):
                rest = ctx - {f}
                yield "Lor", f, ((rest | {f.left}, succ), (rest | {f.right}, succ))
            elif isinstance(f, Neg) and isinstance(f.body, And):
                rest = ctx - {f}
                yield "L~and", f, ((rest | {Neg(f.body.left)}, succ),
                                   (rest | {Neg(f.body.right)}, succ))

        # succedent choices
        if isinstance(succ, Or):
            yield "Ror1", None, ((ctx, succ.left),)
            yield "Ror2", None, ((ctx, succ.right),)
        if isinstance(succ, Neg) and isinstance(succ.body, And):
            b = succ.body
            yield "R~and1", None, ((ctx, Neg(b.left)),)
            yield "R~and2", None, ((ctx, Neg(b.right)),)

        # rules that repeat their principal formula
        for f in members:
            if isinstance(f, Imp):
                yield "Limp", f, ((ctx, f.left), ((ctx - {f}) | {f.right}, succ))
            elif isinstance(f, Neg) and isinstance(f.body, Imp):
                b = f.body
                yield "L~imp", f, ((ctx, b.left),
                                   ((ctx - {f}) | {Neg(b.right)}, succ))

        # analytic cut, hypothesis mode only
        for cut in self.cut_candidates:
            yield "Cut", cut, ((ctx, cut), (ctx | {cut}, succ))


def _rebuild(snode: _SNode, ctx: tuple, succ: Formula) -> Derivation:
    """Fatten a set-based search tree into an explicit multiset
    derivation ending at exactly (ctx, succ).  Extra copies of duplicated
    formulas ride along in the context unchanged."""
    rule, p, _, _, kids = snode
    seq = Sequent(ctx, succ)
    if rule in ("Rf", "Rf~", "Hyp"):
        return Derivation(rule, seq)
    if rule == "Rand":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx, succ.left),
                                      _rebuild(kids[1], ctx, succ.right)))
    if rule == "Ror1":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx, succ.left),))
    if rule == "Ror2":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx, succ.right),))
    if rule == "Rimp":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx + (succ.left,), succ.right),))
    if rule == "R~~":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx, succ.body.body),))
    if rule == "R~and1":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx, Neg(succ.body.left)),))
    if rule == "R~and2":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx, Neg(succ.body.right)),))
    if rule == "R~or":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx, Neg(succ.body.left)),
                                      _rebuild(kids[1], ctx, Neg(succ.body.right))))
    if rule == "R~imp":
        return Derivation(rule, seq,
                          (_rebuild(kids[0], ctx + (succ.body.left,), Neg(succ.body.right)),))
    if rule == "Cut":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx, p),
                                      _rebuild(kids[1], ctx + (p,), succ)))

    rest = _remove_one(ctx, p)
    if rule == "Land":
        return Derivation(rule, seq, (_rebuild(kids[0], rest + (p.left, p.right), succ),))
    if rule == "Lor":
        return Derivation(rule, seq, (_rebuild(kids[0], rest + (p.left,), succ),
                                      _rebuild(kids[1], rest + (p.right,), succ)))
    if rule == "Limp":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx, p.left),
                                      _rebuild(kids[1], rest + (p.right,), succ)))
    if rule == "L~~":
        return Derivation(rule, seq, (_rebuild(kids[0], rest + (p.body.body,), succ),))
    if rule == "L~and":
        return Derivation(rule, seq, (_rebuild(kids[0], rest + (Neg(p.body.left),), succ),
                                      _rebuild(kids[1], rest + (Neg(p.body.right),), succ)))
    if rule == "L~or":
        return Derivation(rule, seq,
                          (_rebuild(kids[0], rest + (Neg(p.body.left), Neg(p.body.right)), succ),))
    if rule == "L~imp":
        return Derivation(rule, seq, (_rebuild(kids[0], ctx, p.body.left),
                                      _rebuild(kids[1], rest + (Neg(p.body.right),), succ)))
    raise AssertionError(f"unreachable rule {rule}")


def prove_g3c(goal: Sequent, hypotheses: Iterable[Sequent] = (),
              budget: SearchBudget | None = None) -> ProveResult:
    """Decide the goal.  found implies the returned derivation checks;
    unprovable means exhaustive backward search over the finite signed
    closure found no proof (of the cut-free system when there are no
    hypotheses)."""
    budget = budget or SearchBudget()
    for m in goal.context:
        ensure_primitive(m, "goal context")
    ensure_primitive(goal.succedent, "goal succedent")
    hyps = tuple(hypotheses)
    all_formulas = list(goal.context) + [goal.succedent]
    for h in hyps:
        for m in h.context:
            ensure_primitive(m, "hypothesis context")
        ensure_primitive(h.succedent, "hypothesis succedent")
        all_formulas.extend(h.context)
        all_formulas.append(h.succedent)
    closure = signed_closure(all_formulas)
    hyp_keys = [(frozenset(h.context), h.succedent, h) for h in hyps]

    start = time.monotonic()
    deadline = start + budget.time_limit
    ctx = frozenset(goal.context)
    search = _Search(hyp_keys, closure, budget, False, deadline)
    try:
        # cut-free pass first; with hypotheses, retry with analytic cut
        snode, _ = search.solve(ctx, goal.succedent, 0)
        if snode is None and hyps:
            carried = search.visited
            search = _Search(hyp_keys, closure, budget, True, deadline)
            search.visited = carried
            snode, _ = search.solve(ctx, goal.succedent, 0)
        visited = search.visited
    except BudgetExceeded:
        return ProveResult(BUDGET_EXCEEDED, None, search.visited,
                           time.monotonic() - start)
    elapsed = time.monotonic() - start
    if snode is None:
        return ProveResult(UNPROVABLE, None, visited, elapsed)
    return ProveResult(FOUND, _rebuild(snode, goal.context, goal.succedent),
                       visited, elapsed)


# --------------------------------------------------------------- identity


def identity_derivation(c: Formula, context: Iterable[Formula] = ()) -> Derivation:
    """A search-free derivation of context, c => c by structural
    induction on c (and on the body for negated shapes)."""
    ensure_primitive(c)
    ctx = tuple(context)
    for m in ctx:
        ensure_primitive(m, "context")
    return _identity(c, ctx)


def _identity(c: Formula, ctx: tuple) -> Derivation:
    seq = Sequent(ctx + (c,), c)
    if isinstance(c, Atom):
        return Derivation("Rf", seq)
    if isinstance(c, And):
        left = Derivation("Land", Sequent(ctx + (c,), c.left),
                          (_identity(c.left, ctx + (c.right,)),))
        right = Derivation("Land", Sequent(ctx + (c,), c.right),
                           (_identity(c.right, ctx + (c.left,)),))
        return Derivation("Rand", seq, (left, right))
    if isinstance(c, Or):
        left = Derivation("Ror1", Sequent(ctx + (c.left,), c),
                          (_identity(c.left, ctx),))
        right = Derivation("Ror2", Sequent(ctx + (c.right,), c),
                           (_identity(c.right, ctx),))
        return Derivation("Lor", seq, (left, right))
    if isinstance(c, Imp):
        body = Derivation("Limp", Sequent(ctx + (c, c.left), c.right),
                          (_identity(c.left, ctx + (c,)),
                           _identity(c.right, ctx + (c.left,))))
        return Derivation("Rimp", seq, (body,))
    assert isinstance(c, Neg)
    b = c.body
    if isinstance(b, Atom):
        return Derivation("Rf~", seq)
    if isinstance(b, Neg):
        inner = Derivation("L~~", Sequent(ctx + (c,), b.body),
                           (_identity(b.body, ctx),))
        return Derivation("R~~", seq, (inner,))
    if isinstance(b, And):
        left = Derivation("R~and1", Sequent(ctx + (Neg(b.left),), c),
                          (_identity(Neg(b.left), ctx),))
        right = Derivation("R~and2", Sequent(ctx + (Neg(b.right),), c),
                           (_identity(Neg(b.right), ctx),))
        return Derivation("L~and", seq, (left, right))
    if isinstance(b, Or):
        la = Derivation("L~or", Sequent(ctx + (c,), Neg(b.left)),
                        (_identity(Neg(b.left), ctx + (Neg(b.right),)),))
        ra = Derivation("L~or", Sequent(ctx + (c,), Neg(b.right)),
                        (_identity(Neg(b.right), ctx + (Neg(b.left),)),))
        return Derivation("R~or", seq, (la, ra))
    assert isinstance(b, Imp)
    body = Derivation("L~imp", Sequent(ctx + (c, b.left), Neg(b.right)),
                      (_identity(b.left, ctx + (c,)),
                       _identity(Neg(b.right), ctx + (b.left,))))
    return Derivation("R~imp", seq, (body,))
