"""Shared derivation file format.

Nested s-expressions with a calculus tag and an optional environment
header naming the connective definition file and its content hash::

    (derivation
      (calculus g3c)
      (node Rimp (seq "(p & ~p) -> p")
        (node Land (seq "p & ~p" "p")
          (node Rf (seq "p" "~p" "p")))))

Inside (seq ...) the final string is the succedent, the preceding ones
the context, each in the concrete formula or R-expression grammar.  NC
files use one string per node (the conclusion), assumption leaves are
written (assume <label> "<formula>") and discharging rules carry
(discharges <label>*); an optional (premises "<formula>"*) header lists
permitted open assumptions.
"""
from __future__ import annotations

from dataclasses import dataclass

from .derivation import Derivation
from .syntax import (ParseError, Sequent, parse_formula, parse_rexpr,
                     parse_sequent, render)

CALCULI = ("g3c", "scinf", "nc")


@dataclass
class DerivationFile:
    calculus: str
    root: Derivation
    env_name: str | None = None
    env_hash: str | None = None
    premises: tuple = ()
    hypotheses: tuple = ()


# ----------------------------------------------------------------- reading


def _lex(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, c, i))
            i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string", i)
            tokens.append(("str", text[i + 1 : j], i))
            i = j + 1
        elif c == ";":
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '()";':
                j += 1
            tokens.append(("atom", text[i:j], i))
            i = j
    tokens.append(("end", "", n))
    return tokens


def _read_sexpr(tokens: list, i: int):
    kind, val, pos = tokens[i]
    if kind == "(":
        items = []
        i += 1
        while tokens[i][0] != ")":
            if tokens[i][0] == "end":
                raise ParseError("unbalanced parenthesis", pos)
            item, i = _read_sexpr(tokens, i)
            items.append(item)
        return tuple(items), i + 1
    if kind in ("atom", "str"):
        return (kind, val), i + 1
    raise ParseError(f"unexpected token {val!r}", pos)


def _atom(x, what: str) -> str:
    if not (isinstance(x, tuple) and len(x) == 2 and x[0] == "atom"):
        raise ParseError(f"expected {what}")
    return x[1]


def _string(x, what: str) -> str:
    if not (isinstance(x, tuple) and len(x) == 2 and x[0] == "str"):
        raise ParseError(f"expected a quoted {what}")
    return x[1]


def read_derivation_file(text: str, env=None) -> DerivationFile:
    tokens = _lex(text)
    tree, i = _read_sexpr(tokens, 0)
    if tokens[i][0] != "end":
        raise ParseError("trailing input after the derivation", tokens[i][2])
    if not tree or _atom(tree[0], "'derivation'") != "derivation":
        raise ParseError("file must start with (derivation ...)")

    calculus = None
    env_name = env_hash = None
    premises: list = []
    hyp_texts: list = []
    root = None
    for part in tree[1:]:
        if not isinstance(part, tuple) or not part:
            raise ParseError("malformed derivation file")
        head = _atom(part[0], "a section name")
        if head == "calculus":
            calculus = _atom(part[1], "a calculus tag")
        elif head == "env":
            env_name = _string(part[1], "definitions file name")
            env_hash = _string(part[2], "hash")
        elif head == "premises":
            premises = [part_i for part_i in part[1:]]
        elif head == "hyps":
            hyp_texts = [part_i for part_i in part[1:]]
        elif head in ("node", "assume"):
            if root is not None:
                raise ParseError("more than one root node")
            root = part
        else:
            raise ParseError(f"unknown section {head!r}")
    if calculus not in CALCULI:
        raise ParseError(f"missing or bad calculus tag {calculus!r}")
    if root is None:
        raise ParseError("missing root node")

    parse = _sequent_parser(calculus, env)
    prem_formulas = tuple(parse_formula(_string(x, "premise"), env) for x in premises)
    if hyp_texts and calculus != "g3c":
        raise ParseError("hypothesis sequents belong to g3c files")
    hyps = tuple(_g3_sequent(parse_sequent(_string(x, "hypothesis"), env))
                 for x in hyp_texts)
    return DerivationFile(calculus, _node(root, parse, calculus),
                          env_name, env_hash, prem_formulas, hyps)


def _g3_sequent(seq: Sequent) -> Sequent:
    from .g3c import as_g3_sequent

    return as_g3_sequent(seq)


def _sequent_parser(calculus: str, env):
    if calculus == "scinf":
        def parse(strings):
            items = [parse_rexpr(s, env) for s in strings]
            return Sequent(tuple(items[:-1]), items[-1])
    elif calculus == "g3c":
        def parse(strings):
            items = [parse_formula(s, env) for s in strings]
            return Sequent(tuple(items[:-1]), items[-1])
    else:
        def parse(strings):
            if len(strings) != 1:
                raise ParseError("NC nodes carry a single conclusion formula")
            return Sequent((), parse_formula(strings[0], env))
    return parse


def _node(tree: tuple, parse, calculus: str) -> Derivation:
    head = _atom(tree[0], "node")
    if head == "assume":
        if calculus != "nc":
            raise ParseError("assume leaves belong to NC files")
        label = _atom(tree[1], "a label")
        formula = _string(tree[2], "formula")
        return Derivation("assume", parse([formula]), (), (), label)

    if head != "node":
        raise ParseError(f"expected (node ...), found {head!r}")
    rule = _atom(tree[1], "a rule name")
    seq = tree[2]
    if not (isinstance(seq, tuple) and seq and _atom(seq[0], "'seq'") == "seq"):
        raise ParseError(f"rule {rule}: expected (seq ...)")
    strings = [_string(x, "sequent part") for x in seq[1:]]
    if not strings:
        raise ParseError(f"rule {rule}: empty sequent")
    discharges: tuple[str, ...] = ()
    children = []
    for part in tree[3:]:
        if isinstance(part, tuple) and part and part[0] == ("atom", "discharges"):
            discharges = tuple(_atom(x, "a label") for x in part[1:])
        else:
            children.append(_node(part, parse, calculus))
    return Derivation(rule, parse(strings), tuple(children), discharges)


# ----------------------------------------------------------------- writing


def write_derivation_file(f: DerivationFile) -> str:
    out: list[str] = ["(derivation", f"  (calculus {f.calculus})"]
    if f.env_name is not None:
        out.append(f'  (env "{f.env_name}" "{f.env_hash}")')
    if f.premises:
        inner = " ".join(f'"{render(p)}"' for p in f.premises)
        out.append(f"  (premises {inner})")
    if f.hypotheses:
        inner = " ".join(f'"{render(h)}"' for h in f.hypotheses)
        out.append(f"  (hyps {inner})")
    _write_node(f.root, 1, out)
    text = "\n".join(out)
    # close the derivation form on the last line
    return text + ")\n"


def _write_node(d: Derivation, depth: int, out: list[str]) -> None:
    # iterative, derivations can be deep
    stack: list[tuple[Derivation, int, bool]] = [(d, depth, False)]
    while stack:
        node, dep, done = stack.pop()
        pad = "  " * dep
        if done:
            out[-1] += ")"
            continue
        if node.rule == "assume":
            out.append(f'{pad}(assume {node.label} '
                       f'"{render(node.conclusion.succedent)}")')
            continue
        seq = " ".join(f'"{render(x)}"'
                       for x in (*node.conclusion.context, node.conclusion.succedent))
        line = f"{pad}(node {node.rule} (seq {seq})"
        if node.discharges:
            line += " (discharges " + " ".join(node.discharges) + ")"
        if not node.children:
            out.append(line + ")")
            continue
        out.append(line)
        stack.append((node, dep, True))
        for child in reversed(node.children):
            stack.append((child, dep + 1, False))
