"""Backdoor-preserving transforms for scattered classes, and the full pipeline.

Two reductions run in sequence before detection:

* :func:`finitize` quotients constraints by their :class:`TypeKey` (which
  languages accept every restriction of the constraint) and swaps each
  cost function for the one of a fixed representative, yielding finite
  languages with the same minimal backdoors of size ``<= k``;
* :func:`vcsp_to_csp` turns every cost table into a crisp relation with
  one extra column holding the cost, over the extended domain
  ``D ∪ T ∪ {ε}``, and gives each constraint ``k+1`` copies with fresh
  cost-column variables so that minimal backdoors never use them.

The transformed instances agree with the input only on backdoors; their
solutions are unrelated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Union

from .backdoor import DETECT_BUDGET, SearchStats, detect_backdoor_exhaustive, is_backdoor, solve_with_backdoor
from .costs import INF, Cost, format_cost
from .languages import FiniteLanguage, LanguageFamily, closure_under_partial_assignments
from .model import CostFunction, Instance, ValuedConstraint
from .solvers import Solution, has_solver

__all__ = [
    "TypeKey",
    "DomainValue",
    "CostValue",
    "Epsilon",
    "EPSILON",
    "ArityGateError",
    "PreconditionError",
    "FinitizeResult",
    "CspReduction",
    "PipelineResult",
    "replace_cost_function",
    "compute_type",
    "finitize",
    "vcsp_to_csp",
    "pipeline_solve",
]


class ArityGateError(ValueError):
    """A constraint has more than ``q + k`` distinct variables."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class TypeKey:
    """Fingerprint of a constraint under all partial assignments.

    ``arity`` counts distinct scope variables and ``pattern`` maps each
    scope position to its distinct-variable number, so equal keys imply
    interchangeable cost functions. ``entries`` lists, for every subset
    ``Q`` of the distinct variables (bitmask ascending) and every
    ``γ: Q -> D`` (lexicographic), the 0-based indices of the languages
    accepting the restricted function.
    """

    arity: int
    pattern: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]

    def items(self, domain_size: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
        """``(Q, γ values, accepting languages)`` in key order."""
        it = iter(self.entries)
        for mask in range(1 << self.arity):
            Q = tuple(p for p in range(self.arity) if mask >> p & 1)
            for gamma in product(range(domain_size), repeat=len(Q)):
                yield Q, gamma, next(it)


@dataclass(frozen=True)
class DomainValue:
    value: int

    def __str__(self):
        return f"d:{self.value}"


@dataclass(frozen=True)
class CostValue:
    value: Union[int, Fraction, float]

    def __str__(self):
        return f"c:{format_cost(self.value)}"


@dataclass(frozen=True)
class Epsilon:
    def __str__(self):
        return "eps"


EPSILON = Epsilon()

ExtendedDomainValue = Union[DomainValue, CostValue, Epsilon]


def replace_cost_function(instance: Instance, index: int, function: CostFunction) -> Instance:
    """Same instance with the function of constraint ``index`` swapped; scope kept."""
    return instance.replace_function(index, function)


def _restrictions_by_variable(c: ValuedConstraint, d: int) -> Iterator[CostFunction]:
    xs = c.variables
    for mask in range(1 << len(xs)):
        Q = [xs[p] for p in range(len(xs)) if mask >> p & 1]
        for gamma in product(range(d), repeat=len(Q)):
            yield c.restrict(dict(zip(Q, gamma))).function


def compute_type(c: ValuedConstraint, family: LanguageFamily, k: int) -> TypeKey:
    q = family.arity_bound
    r = len(c.variables)
    if r > q + k:
        raise ArityGateError(f"constraint on {r} variables exceeds q + k = {q + k}")
    number = {x: i for i, x in enumerate(c.variables)}
    entries = tuple(
        tuple(sorted(family.accepting(f))) for f in _restrictions_by_variable(c, family.domain_size)
    )
    return TypeKey(r, tuple(number[x] for x in c.scope), entries)


@dataclass(frozen=True)
class FinitizeResult:
    instance: Instance
    languages: LanguageFamily
    types: tuple[TypeKey, ...]
    representatives: dict[TypeKey, int]


def finitize(instance: Instance, family: LanguageFamily, k: int) -> FinitizeResult | None:
    """Replace every cost function by its type representative's; ``None`` means no backdoor of size ``<= k``.

    The representative of a type is its lowest-index constraint. The new
    language ``i`` holds the restrictions of representatives that the
    original language ``i`` accepts, closed under partial assignments.
    """
    if instance.domain_size != family.domain_size:
        raise ValueError("instance and family disagree on the domain size")
    q = family.arity_bound
    if any(len(c.variables) >= q + k + 1 for c in instance.constraints):
        return None
    types = tuple(compute_type(c, family, k) for c in instance.constraints)
    reps: dict[TypeKey, int] = {}
    for i, t in enumerate(types):
        reps.setdefault(t, i)
    cs = tuple(
        ValuedConstraint(c.scope, instance.constraints[reps[t]].function) for c, t in zip(instance.constraints, types)
    )
    reduced = Instance(instance.variables, instance.domain_size, cs)
    members: list[set[CostFunction]] = [set() for _ in family]
    for j in reps.values():
        for f in _restrictions_by_variable(instance.constraints[j], instance.domain_size):
            for i in family.accepting(f):
                members[i].add(f)
    languages = LanguageFamily(
        closure_under_partial_assignments(
            FiniteLanguage(f"{lang.name}'", lang.domain_size, fs, arity_bound=lang.arity_bound)
        )
        for lang, fs in zip(family, members)
    )
    return FinitizeResult(reduced, languages, types, reps)


@dataclass(frozen=True)
class CspReduction:
    instance: Instance
    languages: LanguageFamily
    domain: tuple[ExtendedDomainValue, ...]
    fresh: dict[int, tuple[int, ...]]
    original_variables: frozenset[int]


def _cost_sort_key(v: Cost):
    return (v == INF, 0 if v == INF else v)


def vcsp_to_csp(finitized: FinitizeResult, k: int, include_infinity: bool = True) -> CspReduction:
    """Crisp instance and languages with the same minimal backdoors of size ``<= k``.

    ``T`` is the set of values returned by the finite languages. With
    ``include_infinity`` the infinite cost is one of those values;
    otherwise rows of infinite cost point at ``ε`` like any value outside
    ``T``.
    """
    P, langs = finitized.instance, finitized.languages
    d = P.domain_size
    values = {v for lang in langs for f in lang.functions for v in f.table}
    if not include_infinity:
        values.discard(INF)
    T = sorted(values, key=_cost_sort_key)
    domain = tuple([DomainValue(v) for v in range(d)] + [CostValue(t) for t in T] + [EPSILON])
    dd = len(domain)
    code = {t: d + i for i, t in enumerate(T)}
    eps = dd - 1

    def encode(fn: CostFunction) -> CostFunction:
        t = fn.arity
        table = [INF] * dd ** (t + 1)
        for x, v in fn.rows():
            idx = 0
            for a in x:
                idx = idx * dd + a
            table[idx * dd + code.get(v, eps)] = 0
        return CostFunction._trusted(t + 1, dd, tuple(table))

    q = langs.arity_bound
    empties = [CostFunction._trusted(a, dd, (INF,) * dd**a) for a in range(1, q + 2)]
    crisp = LanguageFamily(
        closure_under_partial_assignments(
            FiniteLanguage(
                f"{lang.name}'",
                dd,
                [encode(f) for f in lang.functions] + empties,
                arity_bound=q + 1,
            )
        )
        for lang in langs
    )
    next_var = max(P.variables, default=-1) + 1
    cs: list[ValuedConstraint] = []
    fresh: dict[int, tuple[int, ...]] = {}
    for j, c in enumerate(P.constraints):
        rel = encode(c.function)
        vs = tuple(range(next_var, next_var + k + 1))
        next_var += k + 1
        fresh[j] = vs
        cs.extend(ValuedConstraint(c.scope + (v,), rel) for v in vs)
    variables = P.variables.union(*fresh.values()) if fresh else P.variables
    return CspReduction(Instance(variables, dd, tuple(cs)), crisp, domain, fresh, P.variables)


@dataclass(frozen=True)
class PipelineResult:
    backdoor: frozenset[int]
    solution: Solution
    finitized: FinitizeResult
    reduction: CspReduction


def pipeline_solve(
    instance: Instance,
    family: LanguageFamily,
    k: int,
    include_infinity: bool = True,
    budget: int = DETECT_BUDGET,
    stats: SearchStats | None = None,
) -> PipelineResult | None:
    """Finitize, reduce to CSP, detect a scattered backdoor, then solve through it.

    Detection on the crisp instance is exhaustive. Returns ``None`` when
    no backdoor of size ``<= k`` exists.
    """
    for lang in family:
        missing = [
            flag
            for flag, ok in (
                ("conservative", lang.conservative),
                ("closed under partial assignments", lang.closed_under_partial_assignments),
                ("registered solver", has_solver(lang)),
            )
            if not ok
        ]
        if missing:
            raise PreconditionError(f"language {lang.name!r} lacks: {', '.join(missing)}")
    fin = finitize(instance, family, k)
    if fin is None:
        return None
    red = vcsp_to_csp(fin, k, include_infinity)
    X = detect_backdoor_exhaustive(red.instance, k, red.languages, scattered=True, budget=budget, stats=stats)
    if X is None:
        return None
    if not X <= instance.variables or not is_backdoor(instance, X, family, scattered=True):
        raise AssertionError(f"detected set {sorted(X)} does not transfer back to the input instance")
    sol = solve_with_backdoor(instance, X, family, scattered=True, stats=stats)
    return PipelineResult(X, sol, fin, red)
