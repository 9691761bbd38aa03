"""Strong backdoors: verification, detection, and solving through a backdoor.

Targets are either the union class (after each assignment the whole
reduced instance lies in one language of the family) or the scattered
class (each connected component lies in some language, chosen per
component).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator

from .costs import INF
from .languages import LanguageFamily, instance_in_language
from .model import Instance, apply_assignment, connected_components, subinstance
from .solvers import BudgetExceeded, NotInClassError, Solution, solve_in_class

__all__ = [
    "Backdoor",
    "SearchStats",
    "in_class",
    "is_backdoor",
    "is_minimal_backdoor",
    "detect_backdoor_branching",
    "detect_backdoor_exhaustive",
    "solve_with_backdoor",
    "node_bound",
    "DETECT_BUDGET",
]

DETECT_BUDGET = 1 << 24


@dataclass(frozen=True)
class Backdoor:
    variables: frozenset[int]
    family: LanguageFamily
    scattered: bool
    verified: bool = False


@dataclass
class SearchStats:
    nodes_visited: int = 0
    assignments_checked: int = 0

    def as_dict(self) -> dict[str, int]:
        return {"nodes_visited": self.nodes_visited, "assignments_checked": self.assignments_checked}


def node_bound(family: LanguageFamily, k: int) -> int:
    """``(ℓ·(q+1))**k``: the search-tree size bound of the branching detector."""
    return (len(family) * (family.arity_bound + 1)) ** k


def _assignments(xs: tuple[int, ...], d: int) -> Iterator[dict[int, int]]:
    for values in product(range(d), repeat=len(xs)):
        yield dict(zip(xs, values))


def in_class(instance: Instance, family: LanguageFamily, scattered: bool) -> bool:
    if not scattered:
        return any(instance_in_language(instance, lang) for lang in family)
    for comp in connected_components(instance).components:
        if not comp.constraints:
            continue
        sub = subinstance(instance, comp)
        if not any(instance_in_language(sub, lang) for lang in family):
            return False
    return True


def _first_failure(instance, xs, family, scattered, stats):
    for tau in _assignments(xs, instance.domain_size):
        if stats is not None:
            stats.assignments_checked += 1
        reduced = apply_assignment(instance, tau)
        if not in_class(reduced, family, scattered):
            return tau, reduced
    return None


def is_backdoor(
    instance: Instance,
    variables: Iterable[int],
    family: LanguageFamily,
    scattered: bool = False,
    stats: SearchStats | None = None,
) -> bool:
    """Every assignment to ``variables`` reduces ``instance`` into the class."""
    xs = tuple(sorted(set(variables)))
    unknown = set(xs) - instance.variables
    if unknown:
        raise ValueError(f"not variables of the instance: {sorted(unknown)}")
    return _first_failure(instance, xs, family, scattered, stats) is None


def is_minimal_backdoor(
    instance: Instance, variables: Iterable[int], family: LanguageFamily, scattered: bool = False
) -> bool:
    """A backdoor none of whose proper subsets is a backdoor."""
    xs = tuple(sorted(set(variables)))
    if not is_backdoor(instance, xs, family, scattered):
        return False
    return not any(
        is_backdoor(instance, sub, family, scattered) for r in range(len(xs)) for sub in combinations(xs, r)
    )


def detect_backdoor_branching(
    instance: Instance, k: int, family: LanguageFamily, stats: SearchStats | None = None
) -> frozenset[int] | None:
    """Bounded search for a backdoor of size ``<= k`` into the union class.

    At a node with partial set ``B`` that is not yet a backdoor, take the
    lexicographically first failing assignment ``σ`` of ``B``; for every
    language pick the lowest-index constraint of ``P|σ`` outside it; branch
    on each variable of ``Y``, the union of those scopes (truncated to the
    ``q+1`` lowest variables when larger than ``q``). Any backdoor
    containing ``B`` meets ``Y``, so the search is complete. Returns
    ``None`` when no such backdoor exists.

    A constraint on more than ``q`` variables lies outside every language,
    so all languages that skip the narrow constraints before it pick the
    same one, and ``|Y| <= ℓ·q + 1``. With ``ℓ >= 2`` the whole tree then
    has at most ``(ℓ·(q+1))**k`` nodes; ``stats.nodes_visited`` counts
    them all, root included.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if stats is None:
        stats = SearchStats()
    q = family.arity_bound

    def search(B: frozenset[int]) -> frozenset[int] | None:
        stats.nodes_visited += 1
        failure = _first_failure(instance, tuple(sorted(B)), family, False, stats)
        if failure is None:
            return B
        if len(B) >= k:
            return None
        _, reduced = failure
        Y: set[int] = set()
        for lang in family:
            for c in reduced.constraints:
                if not lang.contains(c.function):
                    scope = sorted(c.variables)
                    Y.update(scope if len(scope) <= q else scope[: q + 1])
                    break
        for x in sorted(Y - B):
            found = search(B | {x})
            if found is not None:
                return found
        return None

    return search(frozenset())


def detect_backdoor_exhaustive(
    instance: Instance,
    k: int,
    family: LanguageFamily,
    scattered: bool = False,
    budget: int = DETECT_BUDGET,
    stats: SearchStats | None = None,
) -> frozenset[int] | None:
    """Smallest backdoor of size ``<= k``, lexicographically first among equals.

    Tries every subset in order of size; refuses when the number of
    (subset, assignment) pairs would exceed ``budget``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    xs = instance.sorted_variables
    n, d = len(xs), instance.domain_size
    k = min(k, n)
    work = sum(comb(n, s) * d**s for s in range(k + 1))
    if work > budget:
        raise BudgetExceeded(f"{work} subset assignments exceed the budget of {budget}")
    for size in range(k + 1):
        for X in combinations(xs, size):
            if stats is not None:
                stats.nodes_visited += 1
            if is_backdoor(instance, X, family, scattered, stats):
                return frozenset(X)
    return None


def solve_with_backdoor(
    instance: Instance,
    variables: Iterable[int],
    family: LanguageFamily,
    scattered: bool = False,
    stats: SearchStats | None = None,
) -> Solution:
    """Branch on every assignment of the backdoor and solve each reduced instance.

    The reduced instance keeps the nullary constants produced by the
    assignment, so its optimum is the full cost of the combined
    assignment. Ties go to the lexicographically first ``(τ, α)``.
    """
    xs = tuple(sorted(set(variables)))
    best: Solution | None = None
    for tau in _assignments(xs, instance.domain_size):
        if stats is not None:
            stats.assignments_checked += 1
        reduced = apply_assignment(instance, tau)
        try:
            sol = solve_in_class(reduced, family, scattered)
        except NotInClassError as exc:
            raise NotInClassError(f"{set(xs)} is not a backdoor: assignment {tau} leaves the class ({exc})") from None
        if best is None or sol.cost < best.cost:
            best = Solution({**tau, **sol.assignment}, sol.cost)
    assert best is not None
    if best.cost == INF:
        best = Solution({x: 0 for x in instance.variables}, INF)
    return Solution(dict(sorted(best.assignment.items())), best.cost)
