"""Random instance builders and brute-force oracles shared by the tests.

These deliberately avoid the package's own generators so the oracles
stay independent of the code under test.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

from vcsp_backdoor import CostFunction, Instance, ValuedConstraint, evaluate, is_backdoor
from vcsp_backdoor.costs import INF
from vcsp_backdoor.languages import LanguageFamily, MinClosedCrisp, SubmodularBoolean

SMALL_COSTS = (0, 0, 1, 2, 3, Fraction(1, 2), Fraction(5, 3))


def family(q: int = 2) -> LanguageFamily:
    return LanguageFamily([MinClosedCrisp(2, q), SubmodularBoolean(q)])


def rand_cost(rng: random.Random, inf_rate: float = 0.15):
    return INF if rng.random() < inf_rate else rng.choice(SMALL_COSTS)


def rand_function(rng, arity, d=2, inf_rate=0.15) -> CostFunction:
    return CostFunction(arity, d, [rand_cost(rng, inf_rate) for _ in range(d**arity)])


def rand_relation(rng, arity, d=2, density=0.6) -> CostFunction:
    return CostFunction(arity, d, [0 if rng.random() < density else INF for _ in range(d**arity)])


def rand_scope(rng, n, arity, repeats=False):
    if repeats:
        return tuple(rng.randrange(n) for _ in range(arity))
    return tuple(rng.sample(range(n), arity))


def rand_instance(rng, n, d=2, m=4, max_arity=2, inf_rate=0.15, repeats=False) -> Instance:
    cs = []
    for _ in range(m):
        a = rng.randint(0 if repeats else 1, min(max_arity, n))
        cs.append(ValuedConstraint(rand_scope(rng, n, a, repeats), rand_function(rng, a, d, inf_rate)))
    return Instance(frozenset(range(n)), d, tuple(cs))


def rand_min_closed(rng, arity, d=2) -> CostFunction:
    """Random min-closed relation: close a random row set under coordinatewise min."""
    rows = {t for t in product(range(d), repeat=arity) if rng.random() < 0.5}
    while True:
        new = {tuple(map(min, s, t)) for s in rows for t in rows} - rows
        if not new:
            break
        rows |= new
    return CostFunction.from_relation(arity, d, rows)


def rand_submodular(rng, arity, inf_rate=0.1) -> CostFunction:
    """Unary: anything. Binary: repair B so that A + D <= B + C, then maybe add infinities."""
    if arity == 1:
        while True:
            fn = rand_function(rng, 1, 2, inf_rate)
            if fn.table != (INF, INF):
                return fn
    A, B, C, D = (rng.choice(SMALL_COSTS) for _ in range(4))
    if A + D > B + C:
        B += A + D - (B + C)
    table = [A, B, C, D]
    r = rng.random()
    if r < inf_rate:
        table[rng.choice((1, 2))] = INF  # an implication-style infinity keeps submodularity
    elif r < 2 * inf_rate:
        table = [INF, INF, C, D] if rng.random() < 0.5 else [A, INF, C, INF]  # forces a unary value
    return CostFunction(2, 2, table)


def rand_mixed(rng, n, m, max_arity=2, member_rate=0.7) -> Instance:
    """Boolean instance mixing Horn members, submodular members and arbitrary tables."""
    cs = []
    for _ in range(m):
        a = rng.randint(1, min(max_arity, n))
        r = rng.random()
        if r < member_rate / 2 and a <= 2:
            fn = rand_submodular(rng, a)
        elif r < member_rate:
            fn = rand_min_closed(rng, a)
        else:
            fn = rand_function(rng, a)
        cs.append(ValuedConstraint(rand_scope(rng, n, a), fn))
    return Instance(frozenset(range(n)), 2, tuple(cs))


def brute_min(instance: Instance):
    """Minimum cost by direct enumeration with evaluate (no kernels)."""
    xs = instance.sorted_variables
    return min(evaluate(instance, dict(zip(xs, vals))) for vals in product(range(instance.domain_size), repeat=len(xs)))


def backdoors_up_to(instance, k, fam, scattered, variables=None):
    xs = sorted(instance.variables if variables is None else variables)
    return {
        frozenset(X)
        for r in range(min(k, len(xs)) + 1)
        for X in combinations(xs, r)
        if is_backdoor(instance, X, fam, scattered)
    }


def minimal_sets(sets):
    return {X for X in sets if not any(Y < X for Y in sets)}
