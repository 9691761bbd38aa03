"""Solvers for the base classes, the brute-force oracle, and scattered dispatch.

Every solver returns the lexicographically smallest optimal assignment
(variables in ascending order). When the optimum is infinite every
assignment is optimal, so that is the all-zero assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Callable, Mapping

from . import _backend, _pykernels
from .costs import INF, Cost, add_costs
from .languages import (
    Language,
    LanguageFamily,
    instance_in_language,
    is_min_closed_crisp,
    is_submodular_boolean,
)
from .maxflow import FlowNetwork
from .model import Instance, connected_components, evaluate, nullary_constant, subinstance

__all__ = [
    "Solution",
    "SolverError",
    "BudgetExceeded",
    "NotInClassError",
    "brute_force_solve",
    "solve_min_closed",
    "solve_submodular_boolean",
    "solve_scattered",
    "solve_in_class",
    "register_solver",
    "solver_for",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 1 << 22
_INT64_SAFE = 1 << 62


class SolverError(ValueError):
    """Input violates a solver's precondition."""


class NotInClassError(SolverError):
    """An instance (or component) lies outside the target class."""


class BudgetExceeded(RuntimeError):
    """An exhaustive procedure would exceed its enumeration budget."""


@dataclass(frozen=True)
class Solution:
    assignment: Mapping[int, int]
    cost: Cost

    def values(self) -> tuple[int, ...]:
        return tuple(self.assignment[x] for x in sorted(self.assignment))


def _zeros(instance: Instance) -> dict[int, int]:
    return {x: 0 for x in instance.sorted_variables}


def _checked(instance: Instance, assignment: dict[int, int], expected: Cost | None = None) -> Solution:
    cost = evaluate(instance, assignment)
    if expected is not None and cost != expected:
        raise AssertionError(f"solver bookkeeping mismatch: evaluated {cost}, derived {expected}")
    if cost == INF:
        assignment = _zeros(instance)
    return Solution(dict(sorted(assignment.items())), cost)


def brute_force_solve(instance: Instance, budget: int = DEFAULT_BUDGET) -> Solution:
    """Enumerate all ``d**n`` assignments; refuses rather than truncates past ``budget``."""
    xs = instance.sorted_variables
    n, d = len(xs), instance.domain_size
    if d**n > budget:
        raise BudgetExceeded(f"{d}**{n} assignments exceed the budget of {budget}")
    pos = {x: i for i, x in enumerate(xs)}
    den = 1
    for c in instance.constraints:
        for v in c.function.table:
            if v != INF:
                den = lcm(den, v.denominator)
    scopes, arities, offsets, values = [], [], [], []
    worst = 0
    for c in instance.constraints:
        scopes.extend(pos[x] for x in c.scope)
        arities.append(c.arity)
        offsets.append(len(values))
        ints = [-1 if v == INF else int(v * den) for v in c.function.table]
        worst += max(ints)
        values.extend(ints)
    kernels = _backend.kernels() if worst < _INT64_SAFE else _pykernels
    idx, _ = kernels.brute_force(n, d, scopes, arities, offsets, values)
    digits = [0] * n
    for i in range(n - 1, -1, -1):
        idx, digits[i] = divmod(idx, d)
    return _checked(instance, dict(zip(xs, digits)))


def _check_constraints(instance: Instance, test, what: str) -> None:
    for i, c in enumerate(instance.constraints):
        if c.arity and not test(c.function):
            raise SolverError(f"constraint {i} (scope {c.scope}) is not {what}")


def solve_min_closed(instance: Instance) -> Solution:
    """Generalized arc consistency, then every variable takes its least value.

    For min-closed relations the least surviving values form a solution,
    and it is the componentwise smallest one.
    """
    _check_constraints(instance, is_min_closed_crisp, "a min-closed crisp relation")
    if nullary_constant(instance) == INF:
        return Solution(_zeros(instance), INF)
    domains = {x: set(range(instance.domain_size)) for x in instance.variables}
    cons = [c for c in instance.constraints if c.arity]
    watching: dict[int, list[int]] = {}
    for j, c in enumerate(cons):
        for x in c.variables:
            watching.setdefault(x, []).append(j)
    queue = list(range(len(cons)))
    queued = set(queue)
    while queue:
        j = queue.pop()
        queued.discard(j)
        c = cons[j]
        supported: dict[int, set[int]] = {x: set() for x in c.variables}
        for t in c.function.relation:
            seen: dict[int, int] = {}
            ok = True
            for x, v in zip(c.scope, t):
                if v not in domains[x] or seen.setdefault(x, v) != v:
                    ok = False
                    break
            if ok:
                for x, v in seen.items():
                    supported[x].add(v)
        for x, vals in supported.items():
            if vals != domains[x]:
                domains[x] = vals
                if not vals:
                    return Solution(_zeros(instance), INF)
                for k in watching[x]:
                    if k not in queued:
                        queued.add(k)
                        queue.append(k)
    assignment = {x: min(vals) for x, vals in domains.items()}
    return _checked(instance, assignment, nullary_constant(instance))


_SOURCE = ("source",)
_SINK = ("sink",)


def solve_submodular_boolean(instance: Instance) -> Solution:
    """Pairwise submodular minimization by a single minimum s-t cut.

    ``x = 1`` means ``x`` is on the source side. Infinite entries become
    infinite unary terms or infinite implication edges; the finite part of
    each binary table is extended to a finite submodular table first.
    """
    if instance.domain_size != 2:
        raise SolverError("submodular solver needs the Boolean domain")
    for i, c in enumerate(instance.constraints):
        if c.arity > 2:
            raise SolverError(f"constraint {i} has arity {c.arity}; this solver handles arity <= 2")
    _check_constraints(instance, is_submodular_boolean, "submodular")

    const: Cost = 0
    theta = {x: [0, 0] for x in instance.variables}
    net = FlowNetwork()
    for c in instance.constraints:
        fn = c.function
        if fn.arity == 0:
            const += fn.table[0]
        elif len(c.variables) == 1:
            x = c.variables[0]
            for a in (0, 1):
                theta[x][a] += fn.table[fn.index([a] * fn.arity)]
        else:
            x, y = c.scope
            A, B, C, D = fn.table
            const += _add_pairwise(net, theta, x, y, A, B, C, D)
    if const == INF:
        return Solution(_zeros(instance), INF)
    for x, (t0, t1) in theta.items():
        if t0 == INF and t1 == INF:
            return Solution(_zeros(instance), INF)
        low = min(t0, t1)
        const += low
        net.add_node(x)
        net.add_edge(_SOURCE, x, t0 - low)
        net.add_edge(x, _SINK, t1 - low)
    value, source_side = net.min_cut(_SOURCE, _SINK)
    if value == INF:
        return Solution(_zeros(instance), INF)
    assignment = {x: int(x in source_side) for x in instance.variables}
    return _checked(instance, assignment, const + value)


def _add_pairwise(net, theta, x, y, A, B, C, D) -> Cost:
    """Add ``φ(x, y)`` with rows ``A=(0,0) B=(0,1) C=(1,0) D=(1,1)``; returns its constant part."""
    table = {(0, 0): A, (0, 1): B, (1, 0): C, (1, 1): D}
    allowed = {t for t, v in table.items() if v != INF}
    if not allowed:
        return INF
    px = {a for a, _ in allowed}
    py = {b for _, b in allowed}
    for a in (0, 1):
        if a not in px:
            theta[x][a] += INF
        if a not in py:
            theta[y][a] += INF
    if 1 in px and 0 in py and C == INF:
        net.add_edge(x, y, INF)  # x=1 forces y=1
    if 0 in px and 1 in py and B == INF:
        net.add_edge(y, x, INF)  # y=1 forces x=1
    a_ = 0 if A == INF else A
    d_ = 0 if D == INF else D
    if B == INF and C == INF:
        b_, c_ = a_ + d_, 0
    elif B == INF:
        c_ = C
        b_ = max(0, a_ + d_ - c_)
    elif C == INF:
        b_ = B
        c_ = max(0, a_ + d_ - b_)
    else:
        b_, c_ = B, C
    # g(x,y) = A' + (C'-A') x + (D'-C') y + (B'+C'-A'-D') (1-x) y
    theta[x][1] += c_ - a_
    theta[y][1] += d_ - c_
    net.add_edge(y, x, b_ + c_ - a_ - d_)
    return a_


_REGISTRY: dict[str, Callable[[Instance], Solution]] = {
    "min_closed_crisp": solve_min_closed,
    "submodular_boolean": solve_submodular_boolean,
}


def register_solver(key: str, solver: Callable[[Instance], Solution]) -> None:
    """Register ``solver`` for a language name (checked first) or kind."""
    _REGISTRY[key] = solver


def solver_for(language: Language) -> Callable[[Instance], Solution]:
    for key in (language.name, language.kind):
        if key in _REGISTRY:
            return _REGISTRY[key]
    raise SolverError(f"no solver registered for language {language.name!r} (kind {language.kind})")


def has_solver(language: Language) -> bool:
    return language.name in _REGISTRY or language.kind in _REGISTRY


def solve_scattered(instance: Instance, family: LanguageFamily) -> Solution:
    """Solve each connected component with the solver of the first language containing it."""
    dec = connected_components(instance)
    assignment: dict[int, int] = {}
    costs = [instance.constraints[i].function.table[0] for i in dec.nullary]
    for comp in dec.components:
        if not comp.constraints:
            for x in comp.variables:
                assignment[x] = 0
            continue
        sub = subinstance(instance, comp)
        for lang in family:
            if instance_in_language(sub, lang):
                sol = solver_for(lang)(sub)
                break
        else:
            raise NotInClassError(f"component on variables {sorted(comp.variables)} is in no language of {family}")
        assignment.update(sol.assignment)
        costs.append(sol.cost)
    cost = add_costs(costs)
    if cost == INF:
        assignment = _zeros(instance)
    return Solution(dict(sorted(assignment.items())), cost)


def solve_in_class(instance: Instance, family: LanguageFamily, scattered: bool) -> Solution:
    """Solve an instance of the union class (first accepting language) or the scattered class."""
    if scattered:
        return solve_scattered(instance, family)
    for lang in family:
        if instance_in_language(instance, lang):
            return solver_for(lang)(instance)
    raise NotInClassError(f"instance is in no language of {family}")
