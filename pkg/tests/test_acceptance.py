"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line with its runtime.  Run with plain pytest; the lines bypass capture.
"""
import itertools
import random
import time
from contextlib import contextmanager

import pytest

from ckernel.connectives import (Registry, defining_formula,
                                 dual_defining_formula, expand_sequent,
                                 gen_rules, standard_definitions)
from ckernel.g3c import as_g3_sequent, check_g3c, prove_g3c
from ckernel.nc import (check_nc, golden_contradiction_left,
                        golden_contradiction_right)
from ckernel.scinf import PRIMITIVE_RULES, check_scinf, embed_g3c
from ckernel.syntax import (And, App, Atom, Fml, Imp, Neg, Or, Ref, Seq,
                            Sequent, mk_neg, parse_formula, parse_rexpr,
                            parse_sequent, r_degree, render, subst)
from ckernel.witnesses import collapse_witness, definition_witness, verify_definition
from conftest import random_definition, random_formula, random_rexpr

CORPUS_SEED = 20250811  # fixed seed for the random definition corpus

p, q = Atom("p"), Atom("q")

THESES = ["=> ~(~p -> p)", "=> ~(p -> ~p)",
          "=> (p -> q) -> ~(p -> ~q)", "=> (p -> ~q) -> ~(p -> q)"]
CONTRADICTION = ["=> (p & ~p) -> p", "=> ~((p & ~p) -> p)"]
NON_THEOREMS = ["p, ~p => q", "~(p -> q) => p"]


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(name):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\n{name}: FAIL ({time.perf_counter() - t0:.2f}s)")
            raise
        with capsys.disabled():
            print(f"\n{name}: PASS ({time.perf_counter() - t0:.2f}s)")

    return run


@pytest.fixture(scope="module")
def definition_corpus():
    rng = random.Random(CORPUS_SEED)
    return [random_definition(rng, f"f{i}") for i in range(100)]


@pytest.fixture(scope="module")
def found_proofs():
    proofs = {}
    for text in THESES + CONTRADICTION:
        res = prove_g3c(as_g3_sequent(parse_sequent(text)))
        assert res.found, text
        proofs[text] = res.derivation
    return proofs


def test_criterion_1_connexive_theses(criterion, found_proofs):
    with criterion("criterion 1 (connexive theses)"):
        for text in THESES:
            t0 = time.perf_counter()
            res = prove_g3c(as_g3_sequent(parse_sequent(text)))
            elapsed = time.perf_counter() - t0
            assert res.found, text
            assert elapsed < 1.0, (text, elapsed)
            assert check_g3c(res.derivation), text


def test_criterion_2_non_symmetry(criterion):
    with criterion("criterion 2 (non-symmetry of implication)"):
        t0 = time.perf_counter()
        res = prove_g3c(as_g3_sequent(parse_sequent("=> (p -> q) -> (q -> p)")))
        elapsed = time.perf_counter() - t0
        assert res.status == "unprovable"  # exhausted, not out of budget
        assert elapsed < 5.0


def test_criterion_3_contradictory_non_triviality(criterion):
    with criterion("criterion 3 (provable contradiction, no explosion)"):
        for text in CONTRADICTION:
            t0 = time.perf_counter()
            res = prove_g3c(as_g3_sequent(parse_sequent(text)))
            assert res.found and time.perf_counter() - t0 < 5.0, text
        for text in NON_THEOREMS:
            t0 = time.perf_counter()
            res = prove_g3c(as_g3_sequent(parse_sequent(text)))
            assert res.status == "unprovable", text
            assert time.perf_counter() - t0 < 5.0, text


def _expression_layer(members):
    ctxs = [()] + [(m,) for m in members] \
        + [tuple(c) for c in itertools.product(members, repeat=2)]
    out = []
    for ctx in ctxs:
        for succ in members:
            s = Seq(ctx, succ)
            out.append(s)
            out.append(mk_neg(s))
    return out


def enumerate_collapse_corpus():
    """Every R-expression of degree <= 2 over {p, q} with context length
    <= 2, where degree-2 expressions draw their members from the atoms,
    their refutations, and the one-step sequent expression (p => q)."""
    e0 = [Fml(p), Fml(q), Ref(Fml(p)), Ref(Fml(q))]
    e1 = _expression_layer(e0)
    inner = [Fml(p), Ref(Fml(q)), Seq((Fml(p),), Fml(q)),
             mk_neg(Seq((Fml(p),), Fml(q)))]
    d2 = _expression_layer(inner)
    return list(dict.fromkeys(e0 + e1 + d2))


def test_criterion_4_collapse_witness_sweep(criterion):
    with criterion("criterion 4 (collapse witnesses, degree <= 2 sweep)"):
        t0 = time.perf_counter()
        corpus = enumerate_collapse_corpus()
        assert len(corpus) >= 200
        assert all(r_degree(s) <= 2 for s in corpus)
        for s in corpus:
            w = collapse_witness(s)
            for name, d in w.all():
                assert check_scinf(d), (render(s), name)
        assert time.perf_counter() - t0 < 60.0


def test_criterion_5_definition_pipeline(criterion, definition_corpus):
    with criterion("criterion 5 (schema engine over 100 random definitions)"):
        t0 = time.perf_counter()
        for cdef in definition_corpus:
            report = verify_definition(cdef)
            assert report.passed, (cdef.name, [
                f"{c.name}: {c.detail}" for c in report.failures()])
        assert time.perf_counter() - t0 < 300.0


def test_criterion_6_schema_regeneration(criterion):
    with criterion("criterion 6 (primitive rule set regeneration)"):
        prim_heads = {"neg": Neg(Atom("A1")),
                      "and": And(Atom("A1"), Atom("A2")),
                      "or": Or(Atom("A1"), Atom("A2")),
                      "imp": Imp(Atom("A1"), Atom("A2"))}
        name_map = {
            "I.neg.1": "~R", "II.neg": "~L", "III.neg.1": "~R-", "IV.neg": "~L-",
            "I.and.1": "andR", "II.and": "andL", "III.and.1": "andR-1",
            "III.and.2": "andR-2", "IV.and": "andL-",
            "I.or.1": "orR1", "I.or.2": "orR2", "II.or": "orL",
            "III.or.1.1": "orR-", "IV.or": "orL-",
            "I.imp.1": "impR", "II.imp": "impL", "III.imp.1": "impR-",
            "IV.imp": "impL-",
        }

        def canon(principal, name):
            if isinstance(principal, Ref):
                return Ref(canon(principal.body, name))
            return Fml(prim_heads[name])

        mismatches = 0
        covered = set()
        for name, cdef in standard_definitions().items():
            for schema in gen_rules(cdef).all():
                target = PRIMITIVE_RULES[name_map[schema.name]]
                covered.add(target.name)
                got = (schema.side, canon(schema.principal, name), schema.premises)
                if got != (target.side, target.principal, target.premises):
                    mismatches += 1
        assert mismatches == 0
        assert covered == set(PRIMITIVE_RULES)


def test_criterion_7_translation_roundtrip(criterion, found_proofs,
                                           definition_corpus):
    with criterion("criterion 7 (higher-order embedding round trip)"):
        for text, derivation in found_proofs.items():
            e = embed_g3c(derivation)
            assert check_scinf(e), text
        for cdef in definition_corpus:
            env = Registry([cdef])
            w = definition_witness(cdef)
            for name, d in w.all():
                goal = expand_sequent(d.conclusion, env)
                assert prove_g3c(goal).found, (cdef.name, name)


def test_criterion_8_nc_goldens_and_mutations(criterion):
    with criterion("criterion 8 (natural deduction goldens, 20+ mutations)"):
        from test_nc import _mutants

        rejected = 0
        for fn in (golden_contradiction_left, golden_contradiction_right):
            base = fn()
            assert check_nc(base)
            for mut in _mutants(base):
                assert not check_nc(mut)
                rejected += 1
        assert rejected >= 20


def test_criterion_9_syntax_roundtrip(criterion):
    with criterion("criterion 9 (1000 seeded round trips)"):
        rng = random.Random(CORPUS_SEED)
        checked = 0
        from ckernel.syntax import parse_formula, parse_rexpr
        for _ in range(500):
            f = random_formula(rng, 6)
            assert parse_formula(render(f)) == f
            e = random_rexpr(rng, 6)
            assert parse_rexpr(render(e)) == e
            assert mk_neg(mk_neg(e)) == e
            assert r_degree(mk_neg(e)) == r_degree(e)
            checked += 2
        assert checked == 1000


def test_criterion_10_demorgan_duality(criterion, definition_corpus):
    with criterion("criterion 10 (De Morgan duality over 50 definitions)"):
        t0 = time.perf_counter()
        for cdef in definition_corpus[:50]:
            ph = {f"A{j}": Atom(f"p{j}") for j in range(1, cdef.arity + 1)}
            d = subst(defining_formula(cdef), ph)
            dual = subst(dual_defining_formula(cdef), ph)
            a, b = Neg(d), dual
            for s in (Sequent((a,), b), Sequent((Neg(b),), Neg(a)),
                      Sequent((b,), a), Sequent((Neg(a),), Neg(b))):
                assert prove_g3c(s).found, (cdef.name, render(s))
        assert time.perf_counter() - t0 < 120.0
