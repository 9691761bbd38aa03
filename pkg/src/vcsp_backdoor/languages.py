"""Valued constraint languages.

A language is a membership test over cost functions together with an
arity bound ``q``. Every language accepts every nullary function. Three
kinds exist: explicit finite sets, crisp min-closed relations, and
submodular functions over the Boolean domain.
"""

from __future__ import annotations

from itertools import product
from math import lcm
from typing import Iterable, Iterator, Sequence

from . import _backend, _pykernels
from .costs import INF
from .model import CostFunction, Instance

__all__ = [
    "LanguageError",
    "Language",
    "FiniteLanguage",
    "MinClosedCrisp",
    "SubmodularBoolean",
    "LanguageFamily",
    "is_min_closed_crisp",
    "is_submodular_boolean",
    "restrictions",
    "closure_under_partial_assignments",
    "instance_in_language",
    "builtin_language",
    "BUILTIN_NAMES",
]

# keep scaled submodularity checks clear of int64 overflow in the native kernel
_NATIVE_LIMIT = 1 << 60
_CACHE_LIMIT = 1 << 17


class LanguageError(ValueError):
    pass


def is_min_closed_crisp(fn: CostFunction) -> bool:
    """Crisp, and the coordinatewise minimum of two allowed tuples is allowed."""
    if not fn.is_crisp:
        return False
    return _backend.kernels().min_closed(fn.finite_mask, fn.arity, fn.domain_size)


def scaled_table(table: Sequence) -> list[int]:
    """Integer image of a cost table under a common denominator; ``-1`` is infinity."""
    den = 1
    for v in table:
        if v != INF:
            den = lcm(den, v.denominator)
    return [-1 if v == INF else int(v * den) for v in table]


def is_submodular_boolean(fn: CostFunction) -> bool:
    """``f(s∧t) + f(s∨t) <= f(s) + f(t)`` for all tuple pairs, Boolean domain only."""
    if fn.domain_size != 2:
        return False
    ints = scaled_table(fn.table)
    k = _backend.kernels()
    if max(ints, default=0) >= _NATIVE_LIMIT:
        k = _pykernels
    return k.submodular(ints, fn.arity)


class Language:
    """Base class: nullary and arity gates, plus a membership cache."""

    kind = "abstract"

    def __init__(
        self,
        name: str,
        domain_size: int,
        arity_bound: int,
        *,
        conservative: bool = False,
        closed_under_partial_assignments: bool = False,
    ) -> None:
        self.name = name
        self.domain_size = domain_size
        self.arity_bound = arity_bound
        self.conservative = conservative
        self.closed_under_partial_assignments = closed_under_partial_assignments
        self._cache: dict[CostFunction, bool] = {}

    def _member(self, fn: CostFunction) -> bool:
        raise NotImplementedError

    def contains(self, fn: CostFunction) -> bool:
        if fn.domain_size != self.domain_size:
            raise LanguageError(
                f"{self.name}: function over domain size {fn.domain_size}, language over {self.domain_size}"
            )
        if fn.arity == 0:
            return True
        if fn.arity > self.arity_bound:
            return False
        hit = self._cache.get(fn)
        if hit is None:
            if len(self._cache) > _CACHE_LIMIT:
                self._cache.clear()
            hit = self._cache[fn] = self._member(fn)
        return hit

    __contains__ = contains

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, domain_size={self.domain_size}, arity_bound={self.arity_bound})"


class FiniteLanguage(Language):
    """An explicit set of cost tables, compared by exact equality."""

    kind = "finite_explicit"

    def __init__(
        self,
        name: str,
        domain_size: int,
        functions: Iterable[CostFunction] = (),
        *,
        arity_bound: int | None = None,
        conservative: bool = False,
        closed_under_partial_assignments: bool = False,
    ) -> None:
        fs = frozenset(functions)
        for f in fs:
            if f.domain_size != domain_size:
                raise LanguageError(f"{name}: member over domain size {f.domain_size}, expected {domain_size}")
        q = max((f.arity for f in fs), default=0)
        if arity_bound is not None:
            if q > arity_bound:
                raise LanguageError(f"{name}: member of arity {q} exceeds bound {arity_bound}")
            q = arity_bound
        super().__init__(
            name,
            domain_size,
            q,
            conservative=conservative,
            closed_under_partial_assignments=closed_under_partial_assignments,
        )
        self.functions = fs

    def _member(self, fn):
        return fn in self.functions

    def __len__(self) -> int:
        return len(self.functions)

    def __iter__(self) -> Iterator[CostFunction]:
        return iter(sorted(self.functions, key=_function_order))

    def __eq__(self, other):
        if not isinstance(other, FiniteLanguage):
            return NotImplemented
        return self.domain_size == other.domain_size and self.functions == other.functions

    __hash__ = None


def _function_order(fn: CostFunction):
    return (fn.arity, tuple((v == INF, 0 if v == INF else v) for v in fn.table))


class MinClosedCrisp(Language):
    """Crisp relations closed under coordinatewise minimum (Horn clauses when ``d = 2``)."""

    kind = "min_closed_crisp"

    def __init__(self, domain_size: int = 2, arity_bound: int = 2, name: str = "min_closed_crisp") -> None:
        # every unary relation is min-closed: conservative in the crisp sense
        super().__init__(name, domain_size, arity_bound, conservative=True, closed_under_partial_assignments=True)

    def _member(self, fn):
        return is_min_closed_crisp(fn)


class SubmodularBoolean(Language):
    """Submodular cost functions over ``{0, 1}``."""

    kind = "submodular_boolean"

    def __init__(self, arity_bound: int = 2, name: str = "submodular_boolean") -> None:
        super().__init__(name, 2, arity_bound, conservative=True, closed_under_partial_assignments=True)

    def _member(self, fn):
        return is_submodular_boolean(fn)


BUILTIN_NAMES = {
    "min_closed_crisp": "min_closed_crisp",
    "min_closed": "min_closed_crisp",
    "horn": "min_closed_crisp",
    "submodular_boolean": "submodular_boolean",
    "submodular": "submodular_boolean",
}


def builtin_language(name: str, domain_size: int = 2, arity_bound: int = 2) -> Language:
    kind = BUILTIN_NAMES.get(name)
    if kind == "min_closed_crisp":
        return MinClosedCrisp(domain_size, arity_bound)
    if kind == "submodular_boolean":
        if domain_size != 2:
            raise LanguageError("submodular_boolean is defined over the Boolean domain only")
        return SubmodularBoolean(arity_bound)
    raise LanguageError(f"unknown built-in language {name!r}")


class LanguageFamily(Sequence[Language]):
    """Ordered languages ``Γ_1..Γ_ℓ`` over one domain."""

    def __init__(self, languages: Iterable[Language]) -> None:
        self.languages = tuple(languages)
        if not self.languages:
            raise LanguageError("a family needs at least one language")
        sizes = {lang.domain_size for lang in self.languages}
        if len(sizes) != 1:
            raise LanguageError(f"languages disagree on domain size: {sorted(sizes)}")
        self.domain_size = sizes.pop()

    @property
    def arity_bound(self) -> int:
        return max(lang.arity_bound for lang in self.languages)

    def __getitem__(self, i):
        return self.languages[i]

    def __len__(self) -> int:
        return len(self.languages)

    def __repr__(self) -> str:
        return f"LanguageFamily({[lang.name for lang in self.languages]})"

    def accepting(self, fn: CostFunction) -> frozenset[int]:
        """Indices (0-based) of the languages that contain ``fn``."""
        return frozenset(i for i, lang in enumerate(self.languages) if lang.contains(fn))


def restrictions(fn: CostFunction) -> Iterator[CostFunction]:
    """Every ``fn|γ[Q]``: ``Q`` by bitmask ascending, ``γ`` lexicographic."""
    m, d = fn.arity, fn.domain_size
    for mask in range(1 << m):
        positions = [p for p in range(m) if mask >> p & 1]
        for values in product(range(d), repeat=len(positions)):
            yield fn.restrict(positions, values)


def closure_under_partial_assignments(language: FiniteLanguage) -> FiniteLanguage:
    """Least superset closed under partial assignments.

    A restriction of a restriction is itself a restriction, so one pass
    over the members reaches the fixpoint.
    """
    if not isinstance(language, FiniteLanguage):
        raise LanguageError("closure is only computed for finite explicit languages")
    closed = {r for fn in language.functions for r in restrictions(fn)}
    return FiniteLanguage(
        language.name,
        language.domain_size,
        closed,
        arity_bound=language.arity_bound,
        conservative=language.conservative,
        closed_under_partial_assignments=True,
    )


def instance_in_language(instance: Instance, language: Language) -> bool:
    if instance.domain_size != language.domain_size:
        raise LanguageError(f"instance over domain size {instance.domain_size}, {language.name} over {language.domain_size}")
    return all(language.contains(c.function) for c in instance.constraints)
