"""Checker for the natural deduction calculus of C.

Assumption discharge is labeled: an "assume" leaf carries a label, and
the one rule occurrence that closes it names the label in its discharges
list.  Vacuous discharge is permitted, and one label may close several
occurrences of the same assumption formula.  The connexive implication
rules are the only negated-implication rules: ~impI infers ~(A -> B)
from a derivation of ~B under the assumption A, and ~impE infers ~B from
A and ~(A -> B).
"""
from __future__ import annotations

from .derivation import ACCEPT, Derivation, Verdict, reject
from .g3c import ensure_primitive
from .syntax import (And, Atom, Formula, Imp, Neg, Or, Sequent, render)

NC_RULES = (
    "assume",
    "~~I", "~~E",
    "andI", "andE1", "andE2", "~andI1", "~andI2", "~andE",
    "orI1", "orI2", "orE", "~orI", "~orE1", "~orE2",
    "impI", "impE", "~impI", "~impE",
)


class _Reject(Exception):
    def __init__(self, path, reason):
        self.path = path
        self.reason = reason


def nd_node(rule: str, formula: Formula, children=(), discharges=()) -> Derivation:
    return Derivation(rule, Sequent((), formula), tuple(children),
                      tuple(discharges))


def nd_assume(label: str, formula: Formula) -> Derivation:
    return Derivation("assume", Sequent((), formula), (), (), label)


def check_nc(d: Derivation, premises=()) -> Verdict:
    """Accept iff every node instantiates its rule, every discharge is
    well scoped, and the open assumptions of the root are among the
    declared premises."""
    declared = frozenset(premises)

    dischargers: dict[str, tuple] = {}
    for node, path in d.postorder():
        if node.rule not in NC_RULES:
            return reject(path, f"unknown NC rule {node.rule!r}")
        try:
            ensure_primitive(node.conclusion.succedent, "conclusion")
        except (ValueError, TypeError) as exc:
            return reject(path, str(exc))
        if node.conclusion.context:
            return reject(path, "NC conclusions carry no sequent context")
        for lab in node.discharges:
            if lab in dischargers:
                return reject(path, f"label {lab!r} is discharged twice")
            dischargers[lab] = path

    try:
        open_at_root = _check(d, ())
    except _Reject as r:
        return reject(r.path, r.reason)

    for lab, formula in open_at_root.items():
        if lab in dischargers:
            return reject(dischargers[lab],
                          f"label {lab!r} discharged outside its subtree")
        if formula not in declared:
            return reject((), f"open assumption {render(formula)} "
                               "is not among the declared premises")
    return ACCEPT


def _merge(path, acc: dict, extra: dict) -> dict:
    for lab, formula in extra.items():
        if lab in acc and acc[lab] != formula:
            raise _Reject(path, f"label {lab!r} used for two different formulas")
        acc[lab] = formula
    return acc


def _discharge(path, opens: list[dict], which: int, label: str,
               required: Formula) -> None:
    """Close label in premise subtree `which`; reject leaks elsewhere."""
    got = opens[which].pop(label, None)
    if got is not None and got != required:
        raise _Reject(path, f"label {label!r} assumes {render(got)}, "
                            f"rule requires {render(required)}")
    for j, other in enumerate(opens):
        if j != which and label in other:
            raise _Reject(path, f"label {label!r} escapes premise {which + 1}")


def _check(node: Derivation, path) -> dict:
    c = node.conclusion.succedent
    opens = [_check(child, path + (i,)) for i, child in enumerate(node.children)]
    kids = [child.conclusion.succedent for child in node.children]
    rule = node.rule

    def need(n_children: int, n_labels: int = 0):
        if len(kids) != n_children:
            raise _Reject(path, f"{rule} takes {n_children} premises")
        if len(node.discharges) != n_labels:
            raise _Reject(path, f"{rule} discharges {n_labels} labels")

    def bad():
        raise _Reject(path, f"{rule}: conclusion {render(c)} does not fit the premises")

    if rule == "assume":
        need(0)
        if not node.label:
            raise _Reject(path, "assumption leaves need a label")
        return {node.label: c}

    if rule == "~~I":
        need(1)
        if c != Neg(Neg(kids[0])):
            bad()
    elif rule == "~~E":
        need(1)
        if kids[0] != Neg(Neg(c)):
            bad()
    elif rule == "andI":
        need(2)
        if c != And(kids[0], kids[1]):
            bad()
    elif rule == "andE1":
        need(1)
        if not (isinstance(kids[0], And) and kids[0].left == c):
            bad()
    elif rule == "andE2":
        need(1)
        if not (isinstance(kids[0], And) and kids[0].right == c):
            bad()
    elif rule in ("~andI1", "~andI2"):
        need(1)
        if not (isinstance(c, Neg) and isinstance(c.body, And)
                and isinstance(kids[0], Neg)):
            bad()
        want = c.body.left if rule == "~andI1" else c.body.right
        if kids[0].body != want:
            bad()
    elif rule == "~andE":
        need(3, 2)
        major = kids[0]
        if not (isinstance(major, Neg) and isinstance(major.body, And)):
            bad()
        if kids[1] != c or kids[2] != c:
            bad()
        la, lb = node.discharges
        _discharge(path, opens, 1, la, Neg(major.body.left))
        _discharge(path, opens, 2, lb, Neg(major.body.right))
    elif rule == "orI1":
        need(1)
        if not (isinstance(c, Or) and c.left == kids[0]):
            bad()
    elif rule == "orI2":
        need(1)
        if not (isinstance(c, Or) and c.right == kids[0]):
            bad()
    elif rule == "orE":
        need(3, 2)
        major = kids[0]
        if not isinstance(major, Or):
            bad()
        if kids[1] != c or kids[2] != c:
            bad()
        la, lb = node.discharges
        _discharge(path, opens, 1, la, major.left)
        _discharge(path, opens, 2, lb, major.right)
    elif rule == "~orI":
        need(2)
        if not (isinstance(c, Neg) and isinstance(c.body, Or)):
            bad()
        if kids[0] != Neg(c.body.left) or kids[1] != Neg(c.body.right):
            bad()
    elif rule == "~orE1":
        need(1)
        if not (isinstance(kids[0], Neg) and isinstance(kids[0].body, Or)
                and c == Neg(kids[0].body.left)):
            bad()
    elif rule == "~orE2":
        need(1)
        if not (isinstance(kids[0], Neg) and isinstance(kids[0].body, Or)
                and c == Neg(kids[0].body.right)):
            bad()
    elif rule == "impI":
        need(1, 1)
        if not (isinstance(c, Imp) and c.right == kids[0]):
            bad()
        _discharge(path, opens, 0, node.discharges[0], c.left)
    elif rule == "impE":
        need(2)
        if not (isinstance(kids[1], Imp) and kids[1].left == kids[0]
                and kids[1].right == c):
            bad()
    elif rule == "~impI":
        need(1, 1)
        if not (isinstance(c, Neg) and isinstance(c.body, Imp)
                and kids[0] == Neg(c.body.right)):
            bad()
        _discharge(path, opens, 0, node.discharges[0], c.body.left)
    elif rule == "~impE":
        need(2)
        if not (isinstance(c, Neg) and isinstance(kids[1], Neg)
                and isinstance(kids[1].body, Imp)
                and kids[1].body.left == kids[0]
                and kids[1].body.right == c.body):
            bad()
    else:
        raise _Reject(path, f"unknown NC rule {rule!r}")

    out: dict = {}
    for sub in opens:
        _merge(path, out, sub)
    return out


# -------------------------------------------------------- golden examples


def _atoms(*names):
    return tuple(Atom(n) for n in names)


def golden_contradiction_left() -> Derivation:
    """(p & ~p) -> p, closed by discharging the conjunction."""
    p = Atom("p")
    conj = And(p, Neg(p))
    return nd_node("impI", Imp(conj, p),
                   (nd_node("andE1", p, (nd_assume("a1", conj),)),),
                   ("a1",))


def golden_contradiction_right() -> Derivation:
    """~((p & ~p) -> p), the refutation twin of the same implication."""
    p = Atom("p")
    conj = And(p, Neg(p))
    return nd_node("~impI", Neg(Imp(conj, p)),
                   (nd_node("andE2", Neg(p), (nd_assume("a1", conj),)),),
                   ("a1",))


def golden_at() -> Derivation:
    """~(~p -> p)"""
    p = Atom("p")
    return nd_node("~impI", Neg(Imp(Neg(p), p)),
                   (nd_assume("a1", Neg(p)),), ("a1",))


def golden_at_prime() -> Derivation:
    """~(p -> ~p)"""
    p = Atom("p")
    return nd_node("~impI", Neg(Imp(p, Neg(p))),
                   (nd_node("~~I", Neg(Neg(p)), (nd_assume("a1", p),)),),
                   ("a1",))


def golden_bt() -> Derivation:
    """(p -> q) -> ~(p -> ~q)"""
    p, q = _atoms("p", "q")
    inner = nd_node("~~I", Neg(Neg(q)),
                    (nd_node("impE", q,
                             (nd_assume("a2", p), nd_assume("a1", Imp(p, q)))),))
    return nd_node("impI", Imp(Imp(p, q), Neg(Imp(p, Neg(q)))),
                   (nd_node("~impI", Neg(Imp(p, Neg(q))), (inner,), ("a2",)),),
                   ("a1",))


def golden_bt_prime() -> Derivation:
    """(p -> ~q) -> ~(p -> q)"""
    p, q = _atoms("p", "q")
    inner = nd_node("impE", Neg(q),
                    (nd_assume("a2", p), nd_assume("a1", Imp(p, Neg(q)))))
    return nd_node("impI", Imp(Imp(p, Neg(q)), Neg(Imp(p, q))),
                   (nd_node("~impI", Neg(Imp(p, q)), (inner,), ("a2",)),),
                   ("a1",))


GOLDEN = {
    "contradiction_left": golden_contradiction_left,
    "contradiction_right": golden_contradiction_right,
    "at": golden_at,
    "at_prime": golden_at_prime,
    "bt": golden_bt,
    "bt_prime": golden_bt_prime,
}
