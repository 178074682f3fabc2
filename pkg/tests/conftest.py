import random

import pytest

from ckernel.connectives import ConnectiveDef
from ckernel.syntax import (And, Atom, Fml, Imp, Neg, Or, Ref, Seq, mk_neg)

ATOMS = ["p", "q", "r"]


def random_formula(rng: random.Random, depth: int):
    if depth <= 0 or rng.random() < 0.3:
        return Atom(rng.choice(ATOMS))
    kind = rng.randrange(4)
    if kind == 0:
        return Neg(random_formula(rng, depth - 1))
    left = random_formula(rng, depth - 1)
    right = random_formula(rng, depth - 1)
    return [And, Or, Imp][kind - 1](left, right)


def random_rexpr(rng: random.Random, depth: int):
    if depth <= 0 or rng.random() < 0.35:
        return Fml(random_formula(rng, min(depth, 2)))
    kind = rng.randrange(3)
    if kind == 0:
        return mk_neg(random_rexpr(rng, depth - 1))
    n = rng.randrange(0, 3)
    ctx = tuple(random_rexpr(rng, depth - 1) for _ in range(n))
    return Seq(ctx, random_rexpr(rng, depth - 1))


def random_definition(rng: random.Random, name: str) -> ConnectiveDef:
    """A definition with arity <= 3, <= 3 groups of <= 2 members, member
    degree <= 1, components drawn from the placeholders."""
    n = rng.randrange(1, 4)
    atoms = [Atom(f"A{j}") for j in range(1, n + 1)]

    def leaf():
        a = Fml(rng.choice(atoms))
        return Ref(a) if rng.random() < 0.5 else a

    def member():
        if rng.random() < 0.5:
            return leaf()
        ctx = tuple(leaf() for _ in range(rng.randrange(0, 3)))
        s = Seq(ctx, leaf())
        return mk_neg(s) if rng.random() < 0.3 else s

    groups = tuple(tuple(member() for _ in range(rng.randrange(1, 3)))
                   for _ in range(rng.randrange(1, 4)))
    return ConnectiveDef(name, n, groups)


@pytest.fixture
def rng():
    return random.Random(0xC1A0)
