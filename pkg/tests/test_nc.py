import pytest

from ckernel.derivation import Derivation
from ckernel.g3c import as_g3_sequent, prove_g3c
from ckernel.nc import (GOLDEN, check_nc, golden_at, golden_bt,
                        golden_contradiction_left,
                        golden_contradiction_right, nd_assume, nd_node)
from ckernel.syntax import (And, Atom, Imp, Neg, Or, Sequent, parse_sequent,
                            render)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_goldens_accepted():
    for name, fn in GOLDEN.items():
        assert check_nc(fn()), name


def test_goldens_match_prover():
    # every golden conclusion is also provable in the sequent calculus
    for name, fn in GOLDEN.items():
        goal = Sequent((), fn().conclusion.succedent)
        assert prove_g3c(goal).found, name


def test_n4_shapes_rejected():
    # inferring the antecedent from a refuted implication
    bad1 = nd_node("~impE", p, (nd_assume("a", Neg(Imp(p, q))),))
    assert not check_nc(bad1, [Neg(Imp(p, q))])
    # inferring the refuted implication from A and ~B
    bad2 = nd_node("~impI", Neg(Imp(p, q)),
                   (nd_assume("a", p), nd_assume("b", Neg(q))))
    assert not check_nc(bad2, [p, Neg(q)])
    # correct connexive elimination for contrast
    ok = nd_node("~impE", Neg(q),
                 (nd_assume("a", p), nd_assume("b", Neg(Imp(p, q)))))
    assert check_nc(ok, [p, Neg(Imp(p, q))])


def test_discharge_scoping():
    # a label discharged at a node must not bind leaves outside its subtree
    leak = nd_node("andI", And(Imp(p, p), p), (
        nd_node("impI", Imp(p, p), (nd_assume("a", p),), ("a",)),
        nd_assume("a", p),
    ))
    assert not check_nc(leak, [p])
    # same label, same formula, both under the discharging rule: fine
    twice = nd_node("impI", Imp(p, And(p, p)), (
        nd_node("andI", And(p, p), (nd_assume("a", p), nd_assume("a", p))),
    ), ("a",))
    assert check_nc(twice)
    # same label with two different formulas is rejected
    clash = nd_node("andI", And(p, q), (nd_assume("a", p), nd_assume("a", q)))
    assert not check_nc(clash, [p, q])
    # double discharge of one label is rejected
    dd = nd_node("impI", Imp(p, Imp(p, p)), (
        nd_node("impI", Imp(p, p), (nd_assume("a", p),), ("a",)),
    ), ("a",))
    assert not check_nc(dd)


def test_vacuous_discharge_allowed():
    d = nd_node("impI", Imp(q, p), (nd_assume("b", p),), ("a",))
    assert check_nc(d, [p])


def test_or_elimination_discharges():
    major = nd_assume("m", Or(p, p))
    d = nd_node("orE", p, (major, nd_assume("l", p), nd_assume("r", p)),
                ("l", "r"))
    assert check_nc(d, [Or(p, p)])
    # wrong assumption formula in the second branch
    bad = nd_node("orE", p, (major, nd_assume("l", p), nd_assume("r", q)),
                  ("l", "r"))
    assert not check_nc(bad, [Or(p, p)])


def test_neg_and_elimination():
    major = nd_assume("m", Neg(And(p, q)))
    d = nd_node("~andE", r, (
        major,
        nd_node("impE", r, (nd_assume("l", Neg(p)),
                            nd_assume("h", Imp(Neg(p), r)))),
        nd_node("impE", r, (nd_assume("rr", Neg(q)),
                            nd_assume("h", Imp(Neg(q), r)))),
    ), ("l", "rr"))
    # h is used with two different formulas
    assert not check_nc(d, [Neg(And(p, q))])
    d2 = nd_node("~andE", r, (
        major,
        nd_node("impE", r, (nd_assume("l", Neg(p)),
                            nd_assume("h1", Imp(Neg(p), r)))),
        nd_node("impE", r, (nd_assume("rr", Neg(q)),
                            nd_assume("h2", Imp(Neg(q), r)))),
    ), ("l", "rr"))
    assert check_nc(d2, [Neg(And(p, q)), Imp(Neg(p), r), Imp(Neg(q), r)])


def _mutants(d: Derivation):
    """Single-node mutations: retag, alter the conclusion, mangle the
    discharge labels."""
    nodes = list(d.postorder())
    for target, path in nodes:
        def patched(**kw):
            fields = dict(rule=target.rule, conclusion=target.conclusion,
                          children=target.children,
                          discharges=target.discharges, label=target.label)
            fields.update(kw)
            return _patch(d, path, Derivation(**fields))

        if target.rule != "assume":
            other = "andE1" if target.rule != "andE1" else "andE2"
            yield patched(rule=other)
        yield patched(conclusion=Sequent((), And(target.conclusion.succedent, r)))
        yield patched(conclusion=Sequent((), r))
        if target.discharges:
            yield patched(discharges=())
            # renaming the label leaves the assumption open and undeclared
            yield patched(discharges=("zz",))
        elif target.rule != "assume":
            yield patched(discharges=("zz",))


def _patch(d, path, new):
    if not path:
        return new
    kids = list(d.children)
    kids[path[0]] = _patch(kids[path[0]], path[1:], new)
    return Derivation(d.rule, d.conclusion, tuple(kids), d.discharges, d.label)


def test_systematic_mutations_rejected():
    count = 0
    for fn in (golden_contradiction_left, golden_contradiction_right):
        base = fn()
        assert check_nc(base)
        for mut in _mutants(base):
            assert not check_nc(mut), render(mut.conclusion.succedent)
            count += 1
    assert count >= 20
