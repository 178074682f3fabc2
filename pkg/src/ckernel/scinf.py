"""The higher-order sequent calculus over R-expressions.

Nodes are validated against printed rule shapes read verbatim: contexts
are ordered series, the structural rules WL/PL/CL act on fixed positions
(PL swaps one adjacent pair, WL and CL work at the right end), Cut's two
premises share one context, and every left rule takes its principal
expression at the end of the context.  Refutation matching goes through
mk_neg, so a doubled refutation never appears.

Besides the structural rules and the introduction rules for => and -,
the sixteen built-in connective rules and the four starred implication
rules are accepted directly; rules for registered connectives are checked
against the schema families generated from their definitions, addressed
as I.<name>.<group>, II.<name>, III.<name>.<k1>...<kt> and IV.<name>.
"""
from __future__ import annotations

from typing import Iterable

from .connectives import PremiseSchema, Registry, RuleSchema, gen_rules
from .derivation import ACCEPT, Derivation, Verdict, reject
from .syntax import (And, App, Atom, Fml, Formula, Imp, Neg, Or, RExpr, Ref,
                     Seq, Sequent, FORMULA_TYPES, is_placeholder, mk_neg,
                     render, subst, subst_rexpr)

STRUCTURAL_RULES = ("RF", "WL", "PL", "CL", "Cut", "RI+", "LI+", "RI-", "LI-")
STARRED_RULES = ("impL*", "impR*", "impL*-", "impR*-")

_A1, _A2 = Atom("A1"), Atom("A2")
_SEQ12 = Seq((Fml(_A1),), Fml(_A2))

# The sixteen built-in connective rules, written out by hand.  These are
# the checker's ground truth; the schema generator is tested against them
# elsewhere, so keep the two sources independent.
PRIMITIVE_RULES: dict[str, RuleSchema] = {s.name: s for s in [
    RuleSchema("~R", "R", Fml(Neg(_A1)),
               (PremiseSchema((), Ref(Fml(_A1))),)),
    RuleSchema("~L", "L", Fml(Neg(_A1)),
               (PremiseSchema((Ref(Fml(_A1)),), None),)),
    RuleSchema("~R-", "R", Ref(Fml(Neg(_A1))),
               (PremiseSchema((), Fml(_A1)),)),
    RuleSchema("~L-", "L", Ref(Fml(Neg(_A1))),
               (PremiseSchema((Fml(_A1),), None),)),
    RuleSchema("andR", "R", Fml(And(_A1, _A2)),
               (PremiseSchema((), Fml(_A1)), PremiseSchema((), Fml(_A2)))),
    RuleSchema("andL", "L", Fml(And(_A1, _A2)),
               (PremiseSchema((Fml(_A1), Fml(_A2)), None),)),
    RuleSchema("andR-1", "R", Ref(Fml(And(_A1, _A2))),
               (PremiseSchema((), Ref(Fml(_A1))),)),
    RuleSchema("andR-2", "R", Ref(Fml(And(_A1, _A2))),
               (PremiseSchema((), Ref(Fml(_A2))),)),
    RuleSchema("andL-", "L", Ref(Fml(And(_A1, _A2))),
               (PremiseSchema((Ref(Fml(_A1)),), None),
                PremiseSchema((Ref(Fml(_A2)),), None))),
    RuleSchema("orR1", "R", Fml(Or(_A1, _A2)),
               (PremiseSchema((), Fml(_A1)),)),
    RuleSchema("orR2", "R", Fml(Or(_A1, _A2)),
               (PremiseSchema((), Fml(_A2)),)),
    RuleSchema("orL", "L", Fml(Or(_A1, _A2)),
               (PremiseSchema((Fml(_A1),), None),
                PremiseSchema((Fml(_A2),), None))),
    RuleSchema("orR-", "R", Ref(Fml(Or(_A1, _A2))),
               (PremiseSchema((), Ref(Fml(_A1))),
                PremiseSchema((), Ref(Fml(_A2))))),
    RuleSchema("orL-", "L", Ref(Fml(Or(_A1, _A2))),
               (PremiseSchema((Ref(Fml(_A1)), Ref(Fml(_A2))), None),)),
    RuleSchema("impR", "R", Fml(Imp(_A1, _A2)),
               (PremiseSchema((), _SEQ12),)),
    RuleSchema("impL", "L", Fml(Imp(_A1, _A2)),
               (PremiseSchema((_SEQ12,), None),)),
    RuleSchema("impR-", "R", Ref(Fml(Imp(_A1, _A2))),
               (PremiseSchema((), Ref(_SEQ12)),)),
    RuleSchema("impL-", "L", Ref(Fml(Imp(_A1, _A2))),
               (PremiseSchema((Ref(_SEQ12),), None),)),
]}


# ---------------------------------------------------------------- matching


def _match_formula(pat: Formula, val: Formula, b: dict) -> bool:
    if isinstance(pat, Atom) and is_placeholder(pat.name):
        if pat.name in b:
            return b[pat.name] == val
        b[pat.name] = val
        return True
    if type(pat) is not type(val):
        return False
    if isinstance(pat, Atom):
        return pat.name == val.name
    if isinstance(pat, Neg):
        return _match_formula(pat.body, val.body, b)
    if isinstance(pat, (And, Or, Imp)):
        return (_match_formula(pat.left, val.left, b)
                and _match_formula(pat.right, val.right, b))
    if isinstance(pat, App):
        return (pat.connective == val.connective
                and len(pat.args) == len(val.args)
                and all(_match_formula(p, v, b) for p, v in zip(pat.args, val.args)))
    return False


def _match_rexpr(pat: RExpr, val: RExpr, b: dict) -> bool:
    if isinstance(pat, Fml):
        return isinstance(val, Fml) and _match_formula(pat.formula, val.formula, b)
    if isinstance(pat, Ref):
        return isinstance(val, Ref) and _match_rexpr(pat.body, val.body, b)
    if isinstance(pat, Seq):
        return (isinstance(val, Seq)
                and len(pat.context) == len(val.context)
                and all(_match_rexpr(p, v, b) for p, v in zip(pat.context, val.context))
                and _match_rexpr(pat.succedent, val.succedent, b))
    return False


def _instance_error(node: Derivation, schema: RuleSchema) -> str | None:
    """Check that the node is an exact instance of the rule schema."""
    ctx = node.conclusion.context
    succ = node.conclusion.succedent
    if schema.side == "R":
        principal, delta = succ, ctx
    else:
        if not ctx:
            return f"{schema.name}: empty context, no principal expression"
        principal, delta = ctx[-1], ctx[:-1]
    bindings: dict = {}
    if not _match_rexpr(schema.principal, principal, bindings):
        return (f"{schema.name}: principal expression {render(principal)} "
                "does not fit the rule")
    if len(node.children) != len(schema.premises):
        return (f"{schema.name} needs {len(schema.premises)} premises, "
                f"found {len(node.children)}")
    for i, (prem, child) in enumerate(zip(schema.premises, node.children)):
        want_ctx = delta + tuple(subst_rexpr(e, bindings) for e in prem.extra)
        want_succ = (node.conclusion.succedent if prem.succ is None
                     else subst_rexpr(prem.succ, bindings))
        got = child.conclusion
        if got.context != want_ctx or got.succedent != want_succ:
            return (f"{schema.name}: premise {i + 1} should be "
                    f"{render(Sequent(want_ctx, want_succ))}, found {render(got)}")
    return None


# ----------------------------------------------------------------- checker


def _adjacent_swap(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    for i in range(len(a) - 1):
        if (a[i], a[i + 1]) == (b[i + 1], b[i]) and a[:i] == b[:i] \
                and a[i + 2:] == b[i + 2:]:
            return True
    return False


def _schema_rule_parts(rule: str) -> tuple[str, str, tuple[int, ...]] | None:
    head, _, rest = rule.partition(".")
    if head not in ("I", "II", "III", "IV") or not rest:
        return None
    bits = rest.split(".")
    name = bits[0]
    try:
        indices = tuple(int(x) for x in bits[1:])
    except ValueError:
        return None
    return head, name, indices


def check_scinf(d: Derivation, env: Registry | None = None) -> Verdict:
    """Accept iff every node is an exact instance of its rule, reporting
    the leftmost innermost failure."""
    cache: dict[str, object] = {}
    for node, path in d.postorder():
        reason = _check_scinf_node(node, env, cache)
        if reason is not None:
            return reject(path, reason)
    return ACCEPT


def _check_scinf_node(node: Derivation, env, cache) -> str | None:
    ctx = node.conclusion.context
    succ = node.conclusion.succedent
    kids = [c.conclusion for c in node.children]
    rule = node.rule

    for m in (*ctx, succ):
        if not isinstance(m, (Fml, Ref, Seq)):
            return f"not an R-expression: {m!r}"

    def arity(n: int) -> str | None:
        if len(kids) != n:
            return f"{rule} needs {n} premises, found {len(kids)}"
        return None

    if rule == "RF":
        if err := arity(0):
            return err
        if len(ctx) != 1 or ctx[0] != succ:
            return "RF concludes S => S"
        return None

    if rule == "WL":
        if err := arity(1):
            return err
        if not ctx or kids[0].context != ctx[:-1] or kids[0].succedent != succ:
            return "WL adds one expression at the right end of the context"
        return None

    if rule == "PL":
        if err := arity(1):
            return err
        if kids[0].succedent != succ or not _adjacent_swap(ctx, kids[0].context):
            return "PL swaps one adjacent pair of context expressions"
        return None

    if rule == "CL":
        if err := arity(1):
            return err
        if not ctx or kids[0].context != ctx + (ctx[-1],) or kids[0].succedent != succ:
            return "CL contracts a duplicate at the right end of the context"
        return None

    if rule == "Cut":
        if err := arity(2):
            return err
        if kids[0].context != ctx:
            return "Cut: left premise must share the conclusion context"
        if kids[1].context != ctx + (kids[0].succedent,) or kids[1].succedent != succ:
            return "Cut: right premise must extend the context by the cut expression"
        return None

    if rule == "RI+":
        if err := arity(1):
            return err
        if not isinstance(succ, Seq):
            return "RI+ concludes a sequent expression on the right"
        if kids[0].context != ctx + succ.context or kids[0].succedent != succ.succedent:
            return "RI+: premise must flatten the conclusion"
        return None

    if rule == "LI+":
        if not ctx or not isinstance(ctx[-1], Seq):
            return "LI+ takes a sequent expression at the end of the context"
        inner = ctx[-1]
        delta = ctx[:-1]
        if err := arity(len(inner.context) + 1):
            return err
        for j, u in enumerate(inner.context):
            if kids[j].context != delta or kids[j].succedent != u:
                return f"LI+: premise {j + 1} should be {render(Sequent(delta, u))}"
        last = kids[-1]
        if last.context != delta + (inner.succedent,) or last.succedent != succ:
            return "LI+: final premise must assume the inner succedent"
        return None

    if rule == "RI-":
        if err := arity(1):
            return err
        if not (isinstance(succ, Ref) and isinstance(succ.body, Seq)):
            return "RI- concludes a refuted sequent expression on the right"
        inner = succ.body
        if kids[0].context != ctx + inner.context \
                or kids[0].succedent != mk_neg(inner.succedent):
            return "RI-: premise must flatten the conclusion and refute the succedent"
        return None

    if rule == "LI-":
        if not ctx or not (isinstance(ctx[-1], Ref) and isinstance(ctx[-1].body, Seq)):
            return "LI- takes a refuted sequent expression at the end of the context"
        inner = ctx[-1].body
        delta = ctx[:-1]
        if err := arity(len(inner.context) + 1):
            return err
        for j, u in enumerate(inner.context):
            if kids[j].context != delta or kids[j].succedent != u:
                return f"LI-: premise {j + 1} should be {render(Sequent(delta, u))}"
        last = kids[-1]
        if last.context != delta + (mk_neg(inner.succedent),) or last.succedent != succ:
            return "LI-: final premise must assume the refuted inner succedent"
        return None

    if rule in STARRED_RULES:
        return _check_starred(rule, node, kids)

    if rule in PRIMITIVE_RULES:
        return _instance_error(node, PRIMITIVE_RULES[rule])

    parts = _schema_rule_parts(rule)
    if parts is None:
        return f"unknown rule {rule!r}"
    family, name, indices = parts
    if env is None:
        return f"rule {rule}: no connective definitions supplied"
    cdef = env.lookup(name)
    if cdef is None:
        return f"rule {rule}: unknown connective {name!r}"
    rules = cache.get(name)
    if rules is None:
        rules = cache[name] = gen_rules(cdef)
    schema = _select_schema(rules, family, indices, cdef)
    if isinstance(schema, str):
        return f"rule {rule}: {schema}"
    return _instance_error(node, schema)


def _select_schema(rules, family: str, indices: tuple[int, ...], cdef):
    if family == "I":
        if len(indices) != 1 or not 1 <= indices[0] <= len(rules.right_rules):
            return "bad group index"
        return rules.right_rules[indices[0] - 1]
    if family == "II":
        if indices:
            return "unexpected index"
        return rules.left_rule
    if family == "III":
        sizes = cdef.group_sizes
        if len(indices) != len(sizes) or any(
                not 1 <= k <= s for k, s in zip(indices, sizes)):
            return "bad selection"
        pos = 0
        for k, s in zip(indices, sizes):
            pos = pos * s + (k - 1)
        return rules.right_neg_rules[pos]
    if indices:
        return "unexpected index"
    return rules.left_neg_rule


def _check_starred(rule: str, node: Derivation, kids) -> str | None:
    ctx = node.conclusion.context
    succ = node.conclusion.succedent

    if rule == "impR*":
        if len(kids) != 1:
            return "impR* needs 1 premise"
        if not (isinstance(succ, Fml) and isinstance(succ.formula, Imp)):
            return "impR* concludes an implication on the right"
        a, b = succ.formula.left, succ.formula.right
        if kids[0].context != ctx + (Fml(a),) or kids[0].succedent != Fml(b):
            return "impR*: premise must assume the antecedent"
        return None

    if rule == "impR*-":
        if len(kids) != 1:
            return "impR*- needs 1 premise"
        if not (isinstance(succ, Ref) and isinstance(succ.body, Fml)
                and isinstance(succ.body.formula, Imp)):
            return "impR*- concludes a refuted implication on the right"
        a, b = succ.body.formula.left, succ.body.formula.right
        if kids[0].context != ctx + (Fml(a),) or kids[0].succedent != mk_neg(Fml(b)):
            return "impR*-: premise must assume the antecedent and refute the consequent"
        return None

    if not ctx:
        return f"{rule}: empty context, no principal expression"
    principal, delta = ctx[-1], ctx[:-1]

    if rule == "impL*":
        if len(kids) != 2:
            return "impL* needs 2 premises"
        if not (isinstance(principal, Fml) and isinstance(principal.formula, Imp)):
            return "impL* takes an implication at the end of the context"
        a, b = principal.formula.left, principal.formula.right
        if kids[0].context != delta or kids[0].succedent != Fml(a):
            return "impL*: first premise proves the antecedent"
        if kids[1].context != delta + (Fml(b),) or kids[1].succedent != succ:
            return "impL*: second premise assumes the consequent"
        return None

    # impL*-
    if len(kids) != 2:
        return "impL*- needs 2 premises"
    if not (isinstance(principal, Ref) and isinstance(principal.body, Fml)
            and isinstance(principal.body.formula, Imp)):
        return "impL*- takes a refuted implication at the end of the context"
    a, b = principal.body.formula.left, principal.body.formula.right
    if kids[0].context != delta or kids[0].succedent != Fml(a):
        return "impL*-: first premise proves the antecedent"
    if kids[1].context != delta + (mk_neg(Fml(b)),) or kids[1].succedent != succ:
        return "impL*-: second premise assumes the refuted consequent"
    return None


# ------------------------------------------------------------ construction


def _multiset_diff(a: tuple, b: tuple) -> list:
    out = list(a)
    for x in b:
        try:
            out.remove(x)
        except ValueError:
            raise ValueError("context is not contained in the target") from None
    return out


def adjust(d: Derivation, target: tuple) -> Derivation:
    """Pad and reorder the end sequent of d to the target context using
    WL for missing expressions and PL chains for position."""
    target = tuple(target)
    cur = list(d.conclusion.context)
    succ = d.conclusion.succedent
    missing = _multiset_diff(target, tuple(cur))
    for m in missing:
        cur.append(m)
        d = Derivation("WL", Sequent(tuple(cur), succ), (d,))
    for i, want in enumerate(target):
        if cur[i] == want:
            continue
        j = cur.index(want, i + 1)
        while j > i:
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            d = Derivation("PL", Sequent(tuple(cur), succ), (d,))
            j -= 1
    return d


def rf_axiom(s: RExpr, context: tuple = ()) -> Derivation:
    """context => s where s occurs in the context, via RF plus padding."""
    base = Derivation("RF", Sequent((s,), s))
    return adjust(base, tuple(context) if context else (s,))


def derive_starred(kind: str, a: Formula, b: Formula,
                   premises: Iterable[Derivation]) -> Derivation:
    """Compose a starred implication step from its unstarred rule and the
    matching introduction rule for => or -, grafted on checked premises."""
    prems = tuple(premises)

    def end(d):
        return d.conclusion

    if kind == "impR*":
        (d,) = prems
        delta = end(d).context[:-1]
        if end(d).context != delta + (Fml(a),) or end(d).succedent != Fml(b):
            raise ValueError("impR* premise must end in delta, A => B")
        inner = Derivation("RI+", Sequent(delta, Seq((Fml(a),), Fml(b))), (d,))
        return Derivation("impR", Sequent(delta, Fml(Imp(a, b))), (inner,))

    if kind == "impR*-":
        (d,) = prems
        delta = end(d).context[:-1]
        if end(d).context != delta + (Fml(a),) or end(d).succedent != mk_neg(Fml(b)):
            raise ValueError("impR*- premise must end in delta, A => -B")
        inner = Derivation("RI-", Sequent(delta, Ref(Seq((Fml(a),), Fml(b)))), (d,))
        return Derivation("impR-", Sequent(delta, Ref(Fml(Imp(a, b)))), (inner,))

    if kind == "impL*":
        d1, d2 = prems
        delta = end(d1).context
        if end(d1).succedent != Fml(a):
            raise ValueError("impL* first premise must prove A")
        if end(d2).context != delta + (Fml(b),):
            raise ValueError("impL* second premise must extend the context by B")
        succ = end(d2).succedent
        inner = Derivation("LI+", Sequent(delta + (Seq((Fml(a),), Fml(b)),), succ),
                           (d1, d2))
        return Derivation("impL", Sequent(delta + (Fml(Imp(a, b)),), succ), (inner,))

    if kind == "impL*-":
        d1, d2 = prems
        delta = end(d1).context
        if end(d1).succedent != Fml(a):
            raise ValueError("impL*- first premise must prove A")
        if end(d2).context != delta + (mk_neg(Fml(b)),):
            raise ValueError("impL*- second premise must extend the context by -B")
        succ = end(d2).succedent
        inner = Derivation("LI-", Sequent(delta + (Ref(Seq((Fml(a),), Fml(b))),), succ),
                           (d1, d2))
        return Derivation("impL-", Sequent(delta + (Ref(Fml(Imp(a, b))),), succ), (inner,))

    raise ValueError(f"unknown starred rule {kind!r}")


# ------------------------------------------------- strong negation bridges

# ~A and -A are interderivable on both sides of the arrow; two of the four
# directions need a Cut against an identity axiom.


def tilde_to_minus_right(d: Derivation) -> Derivation:
    """delta => ~A becomes delta => -A."""
    end = d.conclusion
    a = end.succedent.formula.body
    delta = end.context
    target = Ref(Fml(a))
    idax = rf_axiom(target, delta + (target,))
    step = Derivation("~L", Sequent(delta + (end.succedent,), target), (idax,))
    return Derivation("Cut", Sequent(delta, target), (d, step))


def tilde_to_minus_left(d: Derivation) -> Derivation:
    """delta, ~A => S becomes delta, -A => S (the ~A must sit at the end)."""
    end = d.conclusion
    tilde = end.context[-1]
    a = tilde.formula.body
    delta = end.context[:-1]
    ref = Ref(Fml(a))
    left = Derivation("~R", Sequent(delta + (ref,), tilde),
                      (rf_axiom(ref, delta + (ref,)),))
    right = adjust(d, delta + (ref, tilde))
    return Derivation("Cut", Sequent(delta + (ref,), end.succedent), (left, right))


# --------------------------------------------------------------- embedding

_G3_TO_SC: dict[str, str] = {}


def embed_g3c(d: Derivation) -> Derivation:
    """Translate a checked G3C derivation into the higher-order calculus,
    preserving the end sequent (formulas wrapped as degree-0 expressions).

    Hypothesis leaves have no counterpart here and are rejected."""
    return _embed(d)


def _wrap_ctx(ctx: tuple) -> tuple:
    return tuple(Fml(f) for f in ctx)


def _find_principal(node: Derivation, pred, premise_check) -> Formula:
    ctx = node.conclusion.context
    seen = set()
    for f in ctx:
        if f in seen or not pred(f):
            continue
        seen.add(f)
        if premise_check(f):
            return f
    raise ValueError(f"no principal formula for {node.rule}")


def _embed(node: Derivation) -> Derivation:
    from collections import Counter

    rule = node.rule
    ctx = node.conclusion.context
    succ = node.conclusion.succedent
    wctx = _wrap_ctx(ctx)
    kids = node.children

    def kidctx(i):
        return Counter(kids[i].conclusion.context)

    def residual(p):
        return _wrap_ctx(_remove_first(ctx, p))

    if rule in ("Rf", "Rf~"):
        return rf_axiom(Fml(succ), wctx)

    if rule == "Hyp":
        raise ValueError("hypothesis leaves cannot be embedded")

    if rule == "Cut":
        d1 = adjust(_embed(kids[0]), wctx)
        cutf = kids[0].conclusion.succedent
        d2 = adjust(_embed(kids[1]), wctx + (Fml(cutf),))
        return Derivation("Cut", Sequent(wctx, Fml(succ)), (d1, d2))

    if rule == "Rand":
        d1 = adjust(_embed(kids[0]), wctx)
        d2 = adjust(_embed(kids[1]), wctx)
        return Derivation("andR", Sequent(wctx, Fml(succ)), (d1, d2))

    if rule == "Ror1":
        return Derivation("orR1", Sequent(wctx, Fml(succ)),
                          (adjust(_embed(kids[0]), wctx),))
    if rule == "Ror2":
        return Derivation("orR2", Sequent(wctx, Fml(succ)),
                          (adjust(_embed(kids[0]), wctx),))

    if rule == "R~~":
        d = adjust(_embed(kids[0]), wctx)
        a = succ.body.body
        step = Derivation("~R-", Sequent(wctx, Ref(Fml(Neg(a)))), (d,))
        return Derivation("~R", Sequent(wctx, Fml(succ)), (step,))

    if rule == "R~and1" or rule == "R~and2":
        d = tilde_to_minus_right(adjust(_embed(kids[0]), wctx))
        step = Derivation("andR-1" if rule == "R~and1" else "andR-2",
                          Sequent(wctx, Ref(Fml(succ.body))), (d,))
        return Derivation("~R", Sequent(wctx, Fml(succ)), (step,))

    if rule == "R~or":
        d1 = tilde_to_minus_right(adjust(_embed(kids[0]), wctx))
        d2 = tilde_to_minus_right(adjust(_embed(kids[1]), wctx))
        step = Derivation("orR-", Sequent(wctx, Ref(Fml(succ.body))), (d1, d2))
        return Derivation("~R", Sequent(wctx, Fml(succ)), (step,))

    if rule == "Rimp":
        a, b = succ.left, succ.right
        d = adjust(_embed(kids[0]), wctx + (Fml(a),))
        return adjust(derive_starred("impR*", a, b, (d,)), wctx)

    if rule == "R~imp":
        a, b = succ.body.left, succ.body.right
        d = adjust(_embed(kids[0]), wctx + (Fml(a),))
        step = derive_starred("impR*-", a, b, (tilde_to_minus_right(d),))
        return Derivation("~R", Sequent(wctx, Fml(succ)), (step,))

    # left rules: locate the principal the same way the checker does
    if rule == "Land":
        p = _find_principal(
            node, lambda f: isinstance(f, And),
            lambda f: kidctx(0) == Counter(_remove_first(ctx, f)) + Counter([f.left, f.right]))
        rest = residual(p)
        d = adjust(_embed(kids[0]), rest + (Fml(p.left), Fml(p.right)))
        step = Derivation("andL", Sequent(rest + (Fml(p),), Fml(succ)), (d,))
        return adjust(step, wctx)

    if rule == "Lor":
        p = _find_principal(
            node, lambda f: isinstance(f, Or),
            lambda f: kidctx(0) == Counter(_remove_first(ctx, f)) + Counter([f.left])
            and kidctx(1) == Counter(_remove_first(ctx, f)) + Counter([f.right]))
        rest = residual(p)
        d1 = adjust(_embed(kids[0]), rest + (Fml(p.left),))
        d2 = adjust(_embed(kids[1]), rest + (Fml(p.right),))
        step = Derivation("orL", Sequent(rest + (Fml(p),), Fml(succ)), (d1, d2))
        return adjust(step, wctx)

    if rule == "L~~":
        p = _find_principal(
            node, lambda f: isinstance(f, Neg) and isinstance(f.body, Neg),
            lambda f: kidctx(0) == Counter(_remove_first(ctx, f)) + Counter([f.body.body]))
        rest = residual(p)
        d = adjust(_embed(kids[0]), rest + (Fml(p.body.body),))
        s1 = Derivation("~L-", Sequent(rest + (Ref(Fml(p.body)),), Fml(succ)), (d,))
        s2 = Derivation("~L", Sequent(rest + (Fml(p),), Fml(succ)), (s1,))
        return adjust(s2, wctx)

    if rule == "L~and":
        p = _find_principal(
            node, lambda f: isinstance(f, Neg) and isinstance(f.body, And),
            lambda f: kidctx(0) == Counter(_remove_first(ctx, f)) + Counter([Neg(f.body.left)])
            and kidctx(1) == Counter(_remove_first(ctx, f)) + Counter([Neg(f.body.right)]))
        rest = residual(p)
        d1 = tilde_to_minus_left(adjust(_embed(kids[0]), rest + (Fml(Neg(p.body.left)),)))
        d2 = tilde_to_minus_left(adjust(_embed(kids[1]), rest + (Fml(Neg(p.body.right)),)))
        step = Derivation("andL-", Sequent(rest + (Ref(Fml(p.body)),), Fml(succ)), (d1, d2))
        s2 = Derivation("~L", Sequent(rest + (Fml(p),), Fml(succ)), (step,))
        return adjust(s2, wctx)

    if rule == "L~or":
        p = _find_principal(
            node, lambda f: isinstance(f, Neg) and isinstance(f.body, Or),
            lambda f: kidctx(0) == Counter(_remove_first(ctx, f))
            + Counter([Neg(f.body.left), Neg(f.body.right)]))
        rest = residual(p)
        na, nb = Neg(p.body.left), Neg(p.body.right)
        d = adjust(_embed(kids[0]), rest + (Fml(na), Fml(nb)))
        d = tilde_to_minus_left(d)                      # rest, ~A, -B
        d = adjust(d, rest + (Ref(Fml(p.body.right)), Fml(na)))
        d = tilde_to_minus_left(d)                      # rest, -B, -A
        d = adjust(d, rest + (Ref(Fml(p.body.left)), Ref(Fml(p.body.right))))
        step = Derivation("orL-", Sequent(rest + (Ref(Fml(p.body)),), Fml(succ)), (d,))
        s2 = Derivation("~L", Sequent(rest + (Fml(p),), Fml(succ)), (step,))
        return adjust(s2, wctx)

    if rule == "Limp":
        p = _find_principal(
            node, lambda f: isinstance(f, Imp),
            lambda f: kidctx(0) == Counter(ctx) and kids[0].conclusion.succedent == f.left
            and kidctx(1) == Counter(_remove_first(ctx, f)) + Counter([f.right]))
        rest = residual(p)
        base = rest + (Fml(p),)
        d1 = adjust(_embed(kids[0]), base)
        d2 = adjust(_embed(kids[1]), base + (Fml(p.right),))
        star = derive_starred("impL*", p.left, p.right, (d1, d2))
        # conclusion repeats the principal: rest, A->B, A->B => S
        merged = Derivation("CL", Sequent(base, Fml(succ)), (star,))
        return adjust(merged, wctx)

    if rule == "L~imp":
        p = _find_principal(
            node, lambda f: isinstance(f, Neg) and isinstance(f.body, Imp),
            lambda f: kidctx(0) == Counter(ctx) and kids[0].conclusion.succedent == f.body.left
            and kidctx(1) == Counter(_remove_first(ctx, f)) + Counter([Neg(f.body.right)]))
        rest = residual(p)
        a, b = p.body.left, p.body.right
        base = rest + (Fml(p),)
        d1 = adjust(_embed(kids[0]), base)
        d2 = tilde_to_minus_left(adjust(_embed(kids[1]), rest + (Fml(Neg(b)),)))
        d2 = adjust(d2, base + (Ref(Fml(b)),))
        star = derive_starred("impL*-", a, b, (d1, d2))
        # star ends in rest, ~(A->B), -(A->B) => S; convert and contract
        conv = Derivation("~L", Sequent(base + (Fml(p),), Fml(succ)), (star,))
        merged = Derivation("CL", Sequent(base, Fml(succ)), (conv,))
        return adjust(merged, wctx)

    raise ValueError(f"cannot embed G3C rule {rule!r}")


def _remove_first(ctx: tuple, f) -> tuple:
    i = ctx.index(f)
    return ctx[:i] + ctx[i + 1 :]
