"""Formulas, R-expressions and sequents for the connexive logic C.

Concrete syntax (ASCII only):

    formula   :=  imp ;  imp := or ("->" imp)? ;  or := and ("|" and)* ;
    and       :=  neg ("&" neg)* ;
    neg       :=  "~" neg | atom | ident "(" formula ("," formula)* ")"
               |  "(" formula ")" ;
    rexpr     :=  "-" rexpr | formula | "(" (rexpr ("," rexpr)*)? "=>" rexpr ")" ;

"~" binds tightest, then "&", then "|", then "->" (right associative).
User connectives use prefix application, F(x, y).  A doubled refutation
"--e" collapses to "e" during construction, so un-normalized values are
never representable.  Contexts of sequent expressions are ordered series:
nothing here reorders or deduplicates them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union


class ParseError(ValueError):
    """Raised on malformed input, with a character offset when available."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


# --------------------------------------------------------------- formulas


@dataclass(frozen=True, repr=False)
class Atom:
    name: str

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Neg:
    body: "Formula"

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class And:
    left: "Formula"
    right: "Formula"

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Or:
    left: "Formula"
    right: "Formula"

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Imp:
    left: "Formula"
    right: "Formula"

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class App:
    """Application of a user-defined connective to formula arguments."""

    connective: str
    args: tuple["Formula", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __repr__(self) -> str:
        return render(self)


Formula = Union[Atom, Neg, And, Or, Imp, App]
FORMULA_TYPES = (Atom, Neg, And, Or, Imp, App)


# ----------------------------------------------------------- R-expressions


@dataclass(frozen=True, repr=False)
class Fml:
    """A plain formula viewed as an R-expression of degree 0."""

    formula: Formula

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Ref:
    """Refutation -S.  The body is never itself a Ref; use mk_neg."""

    body: "RExpr"

    def __post_init__(self):
        if isinstance(self.body, Ref):
            raise ValueError("refutation of a refutation; build with mk_neg")

    def __repr__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Seq:
    """Sequent expression (S1, ..., Sn => T) with an ordered context."""

    context: tuple["RExpr", ...]
    succedent: "RExpr"

    def __post_init__(self):
        object.__setattr__(self, "context", tuple(self.context))

    def __repr__(self) -> str:
        return render(self)


RExpr = Union[Fml, Ref, Seq]
REXPR_TYPES = (Fml, Ref, Seq)


@dataclass(frozen=True, repr=False)
class Sequent:
    """A judgment form: ordered context and a succedent.

    The item type depends on the calculus.  G3C and NC nodes carry
    formulas, the higher-order calculus carries R-expressions.
    """

    context: tuple
    succedent: object

    def __post_init__(self):
        object.__setattr__(self, "context", tuple(self.context))

    def __repr__(self) -> str:
        return render(self)


# ---------------------------------------------------------------- helpers


def mk_neg(s: RExpr) -> RExpr:
    """Negate an R-expression, collapsing a doubled refutation."""
    if isinstance(s, Ref):
        return s.body
    return Ref(s)


def r_degree(s) -> int:
    """Nesting depth of => inside an R-expression; formulas have degree 0."""
    if isinstance(s, FORMULA_TYPES) or isinstance(s, Fml):
        return 0
    if isinstance(s, Ref):
        return r_degree(s.body)
    if isinstance(s, Seq):
        return 1 + max([r_degree(m) for m in s.context] + [r_degree(s.succedent)])
    raise TypeError(f"not an R-expression: {s!r}")


def r_subformulas(s: RExpr) -> frozenset:
    """The R-subformula closure of s (including s itself)."""
    acc: set = set()
    stack = [s]
    while stack:
        x = stack.pop()
        if x in acc:
            continue
        acc.add(x)
        if isinstance(x, Ref):
            stack.append(x.body)
        elif isinstance(x, Seq):
            stack.extend(x.context)
            stack.append(x.succedent)
    return frozenset(acc)


def formula_components(s: RExpr) -> frozenset:
    """The degree-0 R-subformulas of s that are plain formulas."""
    return frozenset(x.formula for x in r_subformulas(s) if isinstance(x, Fml))


_PLACEHOLDER_RE = re.compile(r"A[1-9][0-9]*\Z")


def is_placeholder(name: str) -> bool:
    return bool(_PLACEHOLDER_RE.match(name))


def placeholder_index(name: str) -> int:
    return int(name[1:])


def subst(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace placeholder atoms by formulas, by name."""
    if isinstance(f, Atom):
        return mapping.get(f.name, f)
    if isinstance(f, Neg):
        return Neg(subst(f.body, mapping))
    if isinstance(f, And):
        return And(subst(f.left, mapping), subst(f.right, mapping))
    if isinstance(f, Or):
        return Or(subst(f.left, mapping), subst(f.right, mapping))
    if isinstance(f, Imp):
        return Imp(subst(f.left, mapping), subst(f.right, mapping))
    if isinstance(f, App):
        return App(f.connective, tuple(subst(a, mapping) for a in f.args))
    raise TypeError(f"not a formula: {f!r}")


def subst_rexpr(s: RExpr, mapping: Mapping[str, Formula]) -> RExpr:
    """Placeholder substitution lifted to R-expressions.

    Substitution replaces atoms by formulas only, so it never creates a
    doubled refutation and normalization is preserved.
    """
    if isinstance(s, Fml):
        return Fml(subst(s.formula, mapping))
    if isinstance(s, Ref):
        return Ref(subst_rexpr(s.body, mapping))
    if isinstance(s, Seq):
        return Seq(tuple(subst_rexpr(m, mapping) for m in s.context),
                   subst_rexpr(s.succedent, mapping))
    raise TypeError(f"not an R-expression: {s!r}")


# ---------------------------------------------------------------- printing

# precedence levels: -> is 1, | is 2, & is 3, ~ is 4, atoms/applications 5
_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_NEG, _PREC_ATOM = 1, 2, 3, 4, 5


def _render_formula(f: Formula, min_prec: int) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, App):
        inner = ", ".join(_render_formula(a, _PREC_IMP) for a in f.args)
        return f"{f.connective}({inner})"
    if isinstance(f, Neg):
        return _wrap("~" + _render_formula(f.body, _PREC_NEG), _PREC_NEG, min_prec)
    if isinstance(f, And):
        s = _render_formula(f.left, _PREC_AND) + " & " + _render_formula(f.right, _PREC_AND + 1)
        return _wrap(s, _PREC_AND, min_prec)
    if isinstance(f, Or):
        s = _render_formula(f.left, _PREC_OR) + " | " + _render_formula(f.right, _PREC_OR + 1)
        return _wrap(s, _PREC_OR, min_prec)
    if isinstance(f, Imp):
        s = _render_formula(f.left, _PREC_IMP + 1) + " -> " + _render_formula(f.right, _PREC_IMP)
        return _wrap(s, _PREC_IMP, min_prec)
    raise TypeError(f"not a formula: {f!r}")


def _wrap(s: str, prec: int, min_prec: int) -> str:
    return f"({s})" if prec < min_prec else s


def _render_rexpr(s: RExpr) -> str:
    if isinstance(s, Fml):
        return _render_formula(s.formula, _PREC_IMP)
    if isinstance(s, Ref):
        return "-" + _render_rexpr(s.body)
    if isinstance(s, Seq):
        succ = _render_rexpr(s.succedent)
        if not s.context:
            return f"(=> {succ})"
        ctx = ", ".join(_render_rexpr(m) for m in s.context)
        return f"({ctx} => {succ})"
    raise TypeError(f"not an R-expression: {s!r}")


def render(e) -> str:
    """Minimal-bracket concrete syntax for formulas, R-expressions, sequents.

    Round-trips through the matching parser: parse(render(e)) == e.
    """
    if isinstance(e, FORMULA_TYPES):
        return _render_formula(e, _PREC_IMP)
    if isinstance(e, REXPR_TYPES):
        return _render_rexpr(e)
    if isinstance(e, Sequent):
        succ = render(e.succedent)
        if not e.context:
            return f"=> {succ}"
        return ", ".join(render(m) for m in e.context) + f" => {succ}"
    raise TypeError(f"cannot render {e!r}")


# ---------------------------------------------------------------- scanning

_TOKEN_RE = re.compile(
    r"\s+"
    r"|->"
    r"|=>"
    r"|[A-Za-z][A-Za-z0-9_]*"
    r"|[0-9]+"
    r"|[~&|(),;{}/\-]"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group()
        if not tok.isspace():
            if tok[0].isalpha():
                kind = "ident"
            elif tok[0].isdigit():
                kind = "nat"
            else:
                kind = tok
            tokens.append((kind, tok, pos))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Backtrack(Exception):
    pass


class Parser:
    """Recursive-descent parser over the shared token stream.

    env, when given, is consulted to validate user connective applications
    (unknown name, arity mismatch).  placeholders permits the reserved
    A1..An atoms used inside connective definition files.
    """

    def __init__(self, text: str, env=None, placeholders: bool = False):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.env = env
        self.placeholders = placeholders

    # -- token plumbing

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> tuple[str, str, int]:
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1]!r}", t[2])
        return t

    def at_end(self) -> bool:
        return self.peek()[0] == "end"

    def expect_end(self):
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"trailing input {t[1]!r}", t[2])

    # -- formulas

    def formula(self) -> Formula:
        left = self._or()
        if self.peek()[0] == "->":
            self.next()
            return Imp(left, self.formula())
        return left

    def _or(self) -> Formula:
        f = self._and()
        while self.peek()[0] == "|":
            self.next()
            f = Or(f, self._and())
        return f

    def _and(self) -> Formula:
        f = self._neg()
        while self.peek()[0] == "&":
            self.next()
            f = And(f, self._neg())
        return f

    def _neg(self) -> Formula:
        kind, tok, pos = self.peek()
        if kind == "~":
            self.next()
            return Neg(self._neg())
        if kind == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if kind == "ident":
            self.next()
            if tok[0].islower():
                if self.peek()[0] == "(":
                    return self._application(tok, pos)
                return Atom(tok)
            if self.placeholders and is_placeholder(tok):
                return Atom(tok)
            raise ParseError(f"bad identifier {tok!r}; atoms start lowercase", pos)
        raise ParseError(f"expected a formula, found {tok!r}", pos)

    def _application(self, name: str, pos: int) -> Formula:
        self.expect("(")
        args = [self.formula()]
        while self.peek()[0] == ",":
            self.next()
            args.append(self.formula())
        self.expect(")")
        if self.env is not None:
            cdef = self.env.lookup(name)
            if cdef is None:
                raise ParseError(f"unknown connective {name!r}", pos)
            if cdef.arity != len(args):
                raise ParseError(
                    f"connective {name!r} expects {cdef.arity} arguments, got {len(args)}",
                    pos)
        else:
            raise ParseError(f"unknown connective {name!r}", pos)
        return App(name, tuple(args))

    # -- R-expressions

    def rexpr(self) -> RExpr:
        kind, tok, pos = self.peek()
        if kind == "-":
            self.next()
            return mk_neg(self.rexpr())
        if kind == "(":
            save = self.i
            try:
                return self._seq_expr()
            except (_Backtrack, ParseError):
                self.i = save
        return Fml(self.formula())

    def _seq_expr(self) -> Seq:
        self.expect("(")
        items: list[RExpr] = []
        if self.peek()[0] != "=>":
            items.append(self.rexpr())
            while self.peek()[0] == ",":
                self.next()
                items.append(self.rexpr())
        if self.peek()[0] != "=>":
            raise _Backtrack()
        self.next()
        succ = self.rexpr()
        self.expect(")")
        return Seq(tuple(items), succ)


def parse_formula(text: str, env=None) -> Formula:
    p = Parser(text, env=env)
    f = p.formula()
    p.expect_end()
    return f


def parse_rexpr(text: str, env=None) -> RExpr:
    p = Parser(text, env=env)
    e = p.rexpr()
    p.expect_end()
    return e


def parse_sequent(text: str, env=None) -> Sequent:
    """Parse inline sequent syntax, the R-expression grammar without the
    outer parentheses: "p, q => r" or "=> p"."""
    p = Parser("(" + text + ")", env=env)
    try:
        e = p._seq_expr()
    except _Backtrack:
        raise ParseError("expected a sequent of the form 'ctx => succedent'") from None
    p.expect_end()
    return Sequent(e.context, e.succedent)
