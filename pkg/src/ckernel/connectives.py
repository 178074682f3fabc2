"""Connective definitions and the rule schema engine.

A connective of arity n is given by a non-empty list of non-empty groups
of R-expressions over the placeholders A1..An.  From that data four rule
families are generated: one right-introduction rule per group, a single
left rule with one premise per group, one negative right rule per
selection of a member from each group, and a single negative left rule
with one premise per selection.  The negative families are the De Morgan
duals of the positive ones.

The same data yields an explicit defining formula (a disjunction over
groups of conjunctions of collapsed members), and the expand translation
that eliminates defined connectives from formulas and R-expressions.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .syntax import (And, App, Atom, Fml, Formula, Imp, Neg, Or, ParseError,
                     Parser, RExpr, Ref, Seq, FORMULA_TYPES, REXPR_TYPES,
                     formula_components, is_placeholder, mk_neg,
                     placeholder_index, render, subst, subst_rexpr)


class DefinitionError(ValueError):
    pass


@dataclass(frozen=True)
class ConnectiveDef:
    """Arity plus the grouped table of R-expressions over A1..An."""

    name: str
    arity: int
    groups: tuple[tuple[RExpr, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(tuple(g) for g in self.groups))

    @property
    def group_sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    @property
    def selection_count(self) -> int:
        n = 1
        for s in self.group_sizes:
            n *= s
        return n

    def placeholders(self) -> tuple[Atom, ...]:
        return tuple(Atom(f"A{j}") for j in range(1, self.arity + 1))


def validate_definition(cdef: ConnectiveDef) -> ConnectiveDef:
    if not cdef.name or not cdef.name[0].islower():
        raise DefinitionError(f"bad connective name {cdef.name!r}")
    if cdef.arity < 1:
        raise DefinitionError("connectives must have arity at least 1")
    if not cdef.groups:
        raise DefinitionError(f"{cdef.name}: a definition needs at least one group")
    for i, group in enumerate(cdef.groups, start=1):
        if not group:
            raise DefinitionError(f"{cdef.name}: group {i} is empty")
        for member in group:
            for comp in formula_components(member):
                if not isinstance(comp, Atom) or not is_placeholder(comp.name):
                    raise DefinitionError(
                        f"{cdef.name}: foreign component {render(comp)!r}; "
                        "group members may only mention placeholders A1..An")
                if placeholder_index(comp.name) > cdef.arity:
                    raise DefinitionError(
                        f"{cdef.name}: placeholder {comp.name} exceeds arity {cdef.arity}")
    return cdef


# ------------------------------------------------------------ rule schemas


@dataclass(frozen=True)
class PremiseSchema:
    """One premise of a rule schema.

    extra lists R-expressions appended to the shared context; succ is the
    premise succedent, or None when the premise keeps the conclusion
    succedent (left rules).
    """

    extra: tuple[RExpr, ...]
    succ: RExpr | None

    def __post_init__(self):
        object.__setattr__(self, "extra", tuple(self.extra))


@dataclass(frozen=True)
class RuleSchema:
    """A rule shape: principal pattern plus premise shapes.

    side "R" puts the principal in the succedent, side "L" at the end of
    the context.  Patterns mention placeholder atoms A1..An which a
    checker binds against a concrete node.
    """

    name: str
    side: str
    principal: RExpr
    premises: tuple[PremiseSchema, ...]

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    def shape(self) -> tuple:
        """Identity of the schema up to its name."""
        return (self.side, self.principal, self.premises)


@dataclass(frozen=True)
class GeneratedRules:
    right_rules: tuple[RuleSchema, ...]
    left_rule: RuleSchema
    right_neg_rules: tuple[RuleSchema, ...]
    left_neg_rule: RuleSchema

    def all(self) -> Iterator[RuleSchema]:
        yield from self.right_rules
        yield self.left_rule
        yield from self.right_neg_rules
        yield self.left_neg_rule


def selections(cdef: ConnectiveDef) -> list[tuple[int, ...]]:
    """All ways to pick one member index per group, 1-based, in
    lexicographic order by group index."""
    ranges = [range(1, s + 1) for s in cdef.group_sizes]
    return [tuple(sel) for sel in itertools.product(*ranges)]


def gen_rules(cdef: ConnectiveDef) -> GeneratedRules:
    validate_definition(cdef)
    head = Fml(App(cdef.name, cdef.placeholders()))
    neg_head = Ref(head)

    right = tuple(
        RuleSchema(f"I.{cdef.name}.{i}", "R", head,
                   tuple(PremiseSchema((), s) for s in group))
        for i, group in enumerate(cdef.groups, start=1))

    left = RuleSchema(f"II.{cdef.name}", "L", head,
                      tuple(PremiseSchema(tuple(group), None)
                            for group in cdef.groups))

    right_neg = tuple(
        RuleSchema("III." + cdef.name + "." + ".".join(map(str, sel)),
                   "R", neg_head,
                   tuple(PremiseSchema((), mk_neg(cdef.groups[i][k - 1]))
                         for i, k in enumerate(sel)))
        for sel in selections(cdef))

    left_neg = RuleSchema(
        f"IV.{cdef.name}", "L", neg_head,
        tuple(PremiseSchema(tuple(mk_neg(cdef.groups[i][k - 1])
                                  for i, k in enumerate(sel)), None)
              for sel in selections(cdef)))

    return GeneratedRules(right, left, right_neg, left_neg)


# ------------------------------------------------------------ translations


def collapse(s) -> Formula:
    """Flatten an R-expression to a formula: refutation becomes strong
    negation, a context series becomes a left-nested conjunction, the
    sequent arrow becomes implication, and an empty context vanishes."""
    if isinstance(s, FORMULA_TYPES):
        return s
    if isinstance(s, Fml):
        return s.formula
    if isinstance(s, Ref):
        return Neg(collapse(s.body))
    if isinstance(s, Seq):
        succ = collapse(s.succedent)
        if not s.context:
            return succ
        return Imp(conjoin([collapse(m) for m in s.context]), succ)
    raise TypeError(f"not an R-expression: {s!r}")


def conjoin(parts: list[Formula]) -> Formula:
    f = parts[0]
    for p in parts[1:]:
        f = And(f, p)
    return f


def disjoin(parts: list[Formula]) -> Formula:
    f = parts[0]
    for p in parts[1:]:
        f = Or(f, p)
    return f


def defining_formula(cdef: ConnectiveDef) -> Formula:
    """The explicit definition over {~, &, |, ->}: a disjunction over
    groups of conjunctions of collapsed members, with placeholders."""
    validate_definition(cdef)
    return disjoin([conjoin([collapse(m) for m in group]) for group in cdef.groups])


def expand(x, env: "Registry") -> Formula:
    """Eliminate defined connectives: atoms and the primitive connectives
    are fixed, applications are replaced by their defining formula with
    expanded arguments, R-expressions are collapsed first."""
    if isinstance(x, REXPR_TYPES):
        return expand(collapse(x), env)
    if isinstance(x, Atom):
        return x
    if isinstance(x, Neg):
        return Neg(expand(x.body, env))
    if isinstance(x, And):
        return And(expand(x.left, env), expand(x.right, env))
    if isinstance(x, Or):
        return Or(expand(x.left, env), expand(x.right, env))
    if isinstance(x, Imp):
        return Imp(expand(x.left, env), expand(x.right, env))
    if isinstance(x, App):
        cdef = env.lookup(x.connective)
        if cdef is None:
            raise DefinitionError(f"unregistered connective {x.connective!r}")
        body = defining_formula(cdef)
        mapping = {f"A{j}": expand(a, env) for j, a in enumerate(x.args, start=1)}
        return subst(body, mapping)
    raise TypeError(f"cannot expand {x!r}")


def expand_sequent(seq, env: "Registry"):
    from .syntax import Sequent
    return Sequent(tuple(expand(m, env) for m in seq.context),
                   expand(seq.succedent, env))


def dual_defining_formula(cdef: ConnectiveDef) -> Formula:
    """The formula-level image of the negative right rules: a disjunction
    over selections of conjunctions of negated collapsed members."""
    validate_definition(cdef)
    return disjoin([
        conjoin([Neg(collapse(cdef.groups[i][k - 1])) for i, k in enumerate(sel)])
        for sel in selections(cdef)])


# ---------------------------------------------------------------- registry


class Registry:
    """Append-only store of connective definitions.

    Reads see a consistent snapshot; the snapshot is identified by a
    SHA-256 hash of the canonical reprint of all definitions.
    """

    def __init__(self, defs: Iterable[ConnectiveDef] = ()):
        self._defs: dict[str, ConnectiveDef] = {}
        for d in defs:
            self.register(d)

    def register(self, cdef: ConnectiveDef) -> ConnectiveDef:
        validate_definition(cdef)
        if cdef.name in self._defs:
            raise DefinitionError(f"duplicate connective {cdef.name!r}")
        self._defs[cdef.name] = cdef
        return cdef

    def lookup(self, name: str) -> ConnectiveDef | None:
        return self._defs.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._defs

    def names(self) -> list[str]:
        return sorted(self._defs)

    def definitions(self) -> list[ConnectiveDef]:
        return [self._defs[n] for n in self.names()]

    def canonical_text(self) -> str:
        return "\n".join(render_definition(d) for d in self.definitions()) + "\n"

    def snapshot_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()


def render_definition(cdef: ConnectiveDef) -> str:
    groups = " ".join(
        "group { " + "; ".join(render(m) for m in g) + " }" for g in cdef.groups)
    return f"connective {cdef.name}/{cdef.arity} {{ {groups} }}"


# ------------------------------------------------------- definition files


def _parse_definition(p: Parser) -> ConnectiveDef:
    kw = p.expect("ident")
    if kw[1] != "connective":
        raise ParseError(f"expected 'connective', found {kw[1]!r}", kw[2])
    name = p.expect("ident")
    p.expect("/")
    arity = int(p.expect("nat")[1])
    p.expect("{")
    groups = []
    while p.peek()[0] == "ident" and p.peek()[1] == "group":
        p.next()
        p.expect("{")
        if p.peek()[0] == "}":
            raise DefinitionError(f"{name[1]}: empty group")
        members = [p.rexpr()]
        while p.peek()[0] == ";":
            p.next()
            members.append(p.rexpr())
        p.expect("}")
        groups.append(tuple(members))
    p.expect("}")
    if not groups:
        raise DefinitionError(f"{name[1]}: a definition needs at least one group")
    return validate_definition(ConnectiveDef(name[1], arity, tuple(groups)))


def load_definition(text: str) -> ConnectiveDef:
    """Parse exactly one connective definition."""
    p = Parser(text, env=None, placeholders=True)
    cdef = _parse_definition(p)
    p.expect_end()
    return cdef


def load_definitions(text: str) -> list[ConnectiveDef]:
    p = Parser(text, env=None, placeholders=True)
    defs = []
    while not p.at_end():
        defs.append(_parse_definition(p))
    return defs


def load_registry(text: str) -> Registry:
    return Registry(load_definitions(text))


# ------------------------------------------------------ standard examples

_A1, _A2 = Atom("A1"), Atom("A2")


def standard_definitions() -> dict[str, ConnectiveDef]:
    """Schema data for the four primitive connectives, used to check that
    the generator reproduces the built-in rule set and in examples."""
    return {
        "neg": ConnectiveDef("neg", 1, ((Ref(Fml(_A1)),),)),
        "and": ConnectiveDef("and", 2, ((Fml(_A1), Fml(_A2)),)),
        "or": ConnectiveDef("or", 2, ((Fml(_A1),), (Fml(_A2),))),
        "imp": ConnectiveDef("imp", 2, ((Seq((Fml(_A1),), Fml(_A2)),),)),
    }
