"""Seeded instance generators.

Each generator is deterministic in its seed and checks the structural
property it promises before returning; a failed check raises
``AssertionError`` rather than handing back a mislabelled instance.
All generated instances are Boolean.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Any, Callable

from .backdoor import in_class, is_backdoor
from .costs import INF
from .languages import LanguageFamily, MinClosedCrisp, SubmodularBoolean, is_min_closed_crisp, is_submodular_boolean
from .model import CostFunction, Instance, ValuedConstraint, apply_assignment, connected_components

__all__ = [
    "GENERATORS",
    "GeneratorError",
    "default_family",
    "generate",
    "random_horn",
    "random_submodular",
    "random_scattered",
    "planted_backdoor",
    "cut_vertex",
]

_COSTS = (0, 0, Fraction(1, 2), 1, 2, 3)


class GeneratorError(ValueError):
    """Invalid or degenerate size parameters."""


def default_family(arity_bound: int = 2) -> LanguageFamily:
    """``[min_closed_crisp, submodular_boolean]`` over the Boolean domain."""
    return LanguageFamily([MinClosedCrisp(2, arity_bound), SubmodularBoolean(arity_bound)])


def _min_closure(tuples: set[tuple[int, ...]]) -> set[tuple[int, ...]]:
    closed = set(tuples)
    while True:
        new = {tuple(map(min, s, t)) for s in closed for t in closed} - closed
        if not new:
            return closed
        closed |= new


def random_min_closed_relation(rng: random.Random, arity: int, density: float = 0.6) -> CostFunction:
    rows = {t for t in product((0, 1), repeat=arity) if rng.random() < density}
    return CostFunction.from_relation(arity, 2, _min_closure(rows))


def random_submodular_function(rng: random.Random, arity: int, inf_rate: float = 0.1) -> CostFunction:
    """Unary or binary submodular Boolean function, by rejection sampling."""
    if arity not in (1, 2):
        raise GeneratorError("random submodular functions have arity 1 or 2")
    while True:
        table = [INF if rng.random() < inf_rate else rng.choice(_COSTS) for _ in range(2**arity)]
        if all(v == INF for v in table):
            continue
        fn = CostFunction(arity, 2, table)
        if is_submodular_boolean(fn):
            return fn


def _check_size(name: str, value: int, minimum: int) -> None:
    if not isinstance(value, int) or value < minimum:
        raise GeneratorError(f"{name} must be an integer >= {minimum}, got {value!r}")


def _random_scope(rng, variables, arity):
    return tuple(rng.sample(variables, arity))


def random_horn(seed: int, n: int = 6, m: int = 8, max_arity: int = 2) -> Instance:
    """Crisp min-closed (Horn-like) constraints of arity ``1..max_arity``."""
    _check_size("n", n, max(1, max_arity))
    _check_size("m", m, 0)
    rng = random.Random(seed)
    cs = []
    for _ in range(m):
        a = rng.randint(1, max_arity)
        cs.append(ValuedConstraint(_random_scope(rng, range(n), a), random_min_closed_relation(rng, a)))
    inst = Instance(frozenset(range(n)), 2, tuple(cs))
    assert all(is_min_closed_crisp(c.function) for c in inst.constraints)
    return inst


def random_submodular(seed: int, n: int = 6, m: int = 8) -> Instance:
    """Unary and binary submodular constraints with occasional infinite entries."""
    _check_size("n", n, 2)
    _check_size("m", m, 0)
    rng = random.Random(seed)
    cs = []
    for _ in range(m):
        a = rng.choice((1, 2, 2))
        cs.append(ValuedConstraint(_random_scope(rng, range(n), a), random_submodular_function(rng, a)))
    inst = Instance(frozenset(range(n)), 2, tuple(cs))
    assert all(is_submodular_boolean(c.function) for c in inst.constraints)
    return inst


def random_scattered(seed: int, blocks: int = 3, block_size: int = 3) -> Instance:
    """Disjoint blocks alternating between Horn and submodular constraints.

    Each block is a path of binary constraints plus a few unaries, so it is
    one connected component lying in a single language.
    """
    _check_size("blocks", blocks, 1)
    _check_size("block_size", block_size, 2)
    rng = random.Random(seed)
    cs = []
    for b in range(blocks):
        vs = list(range(b * block_size, (b + 1) * block_size))
        horn = b % 2 == 0
        make = random_min_closed_relation if horn else random_submodular_function
        for u, v in zip(vs, vs[1:]):
            cs.append(ValuedConstraint((u, v), make(rng, 2)))
        for v in rng.sample(vs, rng.randint(0, len(vs))):
            cs.append(ValuedConstraint((v,), make(rng, 1)))
    inst = Instance(frozenset(range(blocks * block_size)), 2, tuple(cs))
    assert in_class(inst, default_family(), scattered=True)
    return inst


def _lattice_relation(rng) -> tuple[int, CostFunction]:
    """A crisp function in both built-in languages: unary, implication or equality."""
    kind = rng.randrange(3)
    if kind == 0:
        return 1, CostFunction.from_relation(1, 2, [(rng.randrange(2),)])
    if kind == 1:
        return 2, CostFunction.from_relation(2, 2, [(0, 0), (0, 1), (1, 1)])
    return 2, CostFunction.from_relation(2, 2, [(0, 0), (1, 1)])


def _switched(arity: int, slices: dict[int, CostFunction]) -> CostFunction:
    """Function whose first argument selects the slice used on the rest."""
    return CostFunction.from_callable(arity, 2, lambda s, *rest: slices[s](*rest))


def planted_backdoor(seed: int, n: int = 8, k: int = 2, background: int = 4) -> tuple[Instance, frozenset[int]]:
    """Instance with a planted set ``X`` of ``k`` variables that is a backdoor.

    The lowest variable of ``X`` is a switch: its value picks whether the
    hard constraints become Horn (0) or submodular (1). Every other member
    of ``X`` guards a ternary constraint whose remaining slice is also
    chosen by the switch. Background constraints are crisp lattice
    relations, which both languages contain. Returns ``(instance, X)``;
    ``X`` is verified to be a union backdoor.
    """
    _check_size("k", k, 1)
    _check_size("n", n, k + 2)
    _check_size("background", background, 0)
    rng = random.Random(seed)
    X = sorted(rng.sample(range(n), k))
    rest = [v for v in range(n) if v not in X]
    switch = X[0]
    cs = []
    for _ in range(rng.randint(1, 2)):
        a, b = rng.sample(rest, 2)
        slices = {0: random_min_closed_relation(rng, 2), 1: random_submodular_function(rng, 2)}
        cs.append(ValuedConstraint((switch, a, b), _switched(3, slices)))
    for guard in X[1:]:
        a = rng.choice(rest)
        horn, sub = random_min_closed_relation(rng, 1), random_submodular_function(rng, 1)
        cs.append(ValuedConstraint((switch, guard, a), CostFunction.from_callable(3, 2, lambda s, g, y: (horn if s == 0 else sub)(y))))
    for _ in range(background):
        a, fn = _lattice_relation(rng)
        cs.append(ValuedConstraint(_random_scope(rng, rest, a), fn))
    rng.shuffle(cs)
    inst = Instance(frozenset(range(n)), 2, tuple(cs))
    assert is_backdoor(inst, X, default_family()), "planted set is not a backdoor"
    return inst, frozenset(X)


def _nand() -> CostFunction:
    return CostFunction.from_relation(2, 2, [(0, 0), (0, 1), (1, 0)])


def _weighted_neq(rng) -> CostFunction:
    w = rng.choice((1, 2, Fraction(3, 2)))
    ua, ub = rng.choice((0, 1)), rng.choice((0, 1))
    return CostFunction.from_callable(2, 2, lambda a, b: w * (a != b) + ua * (1 - a) + ub * b)


def cut_vertex(seed: int, size1: int = 3, size2: int = 3) -> tuple[Instance, dict[str, Any]]:
    """Two chains joined only through a switch variable ``x = 0``.

    ``V1 = 1..size1`` and ``V2`` follows. Every chain link is a ternary
    constraint on ``(x, a, b)``: on ``V1`` it is NAND when ``x = 0`` and a
    weighted disequality when ``x = 1``; ``V2`` uses the same two slices
    the other way round. So ``{x}`` is a scattered backdoor that is not
    a backdoor into either language alone.
    """
    _check_size("size1", size1, 2)
    _check_size("size2", size2, 2)
    rng = random.Random(seed)
    x = 0
    V1 = list(range(1, 1 + size1))
    V2 = list(range(1 + size1, 1 + size1 + size2))
    cs = []
    for chain, horn_when in ((V1, 0), (V2, 1)):
        for a, b in zip(chain, chain[1:]):
            slices = {horn_when: _nand(), 1 - horn_when: _weighted_neq(rng)}
            cs.append(ValuedConstraint((x, a, b), _switched(3, slices)))
    inst = Instance(frozenset([x] + V1 + V2), 2, tuple(cs))
    _check_cut_vertex(inst, x, V1, V2)
    return inst, {"x": x, "V1": V1, "V2": V2}


def _check_cut_vertex(inst: Instance, x: int, V1: list[int], V2: list[int]) -> None:
    horn, sub = default_family()
    for value in (0, 1):
        reduced = apply_assignment(inst, {x: value})
        for comp in connected_components(reduced).components:
            assert not (comp.variables & set(V1) and comp.variables & set(V2)), "x does not separate V1 from V2"
        for c in reduced.constraints:
            on_v1 = set(c.variables) <= set(V1)
            assert on_v1 or set(c.variables) <= set(V2)
            want_horn = on_v1 == (value == 0)
            if want_horn:
                assert horn.contains(c.function) and c.function.is_crisp
            else:
                assert sub.contains(c.function) and not horn.contains(c.function)


GENERATORS: dict[str, Callable[..., Any]] = {
    "planted_backdoor": planted_backdoor,
    "cut_vertex": cut_vertex,
    "random_scattered": random_scattered,
    "random_submodular": random_submodular,
    "random_horn": random_horn,
}


def generate(kind: str, seed: int, **sizes) -> tuple[Instance, dict[str, Any]]:
    """Run generator ``kind``; returns the instance and JSON-ready metadata."""
    if kind not in GENERATORS:
        raise GeneratorError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    try:
        out = GENERATORS[kind](seed, **sizes)
    except TypeError as exc:
        raise GeneratorError(str(exc)) from None
    meta: dict[str, Any] = {"generator": kind, "seed": seed, "sizes": sizes}
    if isinstance(out, tuple):
        inst, extra = out
        meta["planted"] = sorted(extra) if isinstance(extra, frozenset) else extra
    else:
        inst = out
    return inst, meta
