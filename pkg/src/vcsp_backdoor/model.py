"""VCSP instances, cost functions, partial assignments and connectivity.

Domain values are the integers ``0..d-1``. A cost table of arity ``m``
has ``d**m`` rows in mixed-radix order with the first scope coordinate
most significant, so row ``(a0, a1)`` over ``d = 2`` sits at ``2*a0 + a1``.
Everything here is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from . import _backend
from .costs import INF, Cost, add_costs, to_cost

__all__ = [
    "CostFunction",
    "ValuedConstraint",
    "Instance",
    "Component",
    "Decomposition",
    "UnboundVariableError",
    "AssignmentError",
    "evaluate",
    "apply_assignment",
    "connected_components",
    "subinstance",
    "nullary_constant",
    "check_assignment",
]


class AssignmentError(ValueError):
    """A partial assignment names an unknown variable or an out-of-range value."""


class UnboundVariableError(AssignmentError):
    """A total assignment was required but some variable is unbound."""


class CostFunction:
    """Dense cost table of a fixed arity over ``{0..d-1}``.

    Equality is structural (arity, domain size and every entry); the hash
    is computed once.
    """

    def __init__(self, arity: int, domain_size: int, table: Iterable) -> None:
        if arity < 0:
            raise ValueError(f"negative arity {arity}")
        if domain_size < 1:
            raise ValueError(f"domain size must be positive, got {domain_size}")
        values = tuple(to_cost(v) for v in table)
        if len(values) != domain_size**arity:
            raise ValueError(
                f"table has {len(values)} entries, expected {domain_size}**{arity} = {domain_size**arity}"
            )
        self._init(arity, domain_size, values)

    def _init(self, arity, domain_size, table):
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "domain_size", domain_size)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_hash", hash((arity, domain_size, table)))

    @classmethod
    def _trusted(cls, arity: int, domain_size: int, table: tuple) -> "CostFunction":
        # table entries already canonical
        obj = cls.__new__(cls)
        obj._init(arity, domain_size, table)
        return obj

    @classmethod
    def constant(cls, value, domain_size: int) -> "CostFunction":
        return cls(0, domain_size, (value,))

    @classmethod
    def from_relation(cls, arity: int, domain_size: int, tuples: Iterable[Sequence[int]]) -> "CostFunction":
        """Crisp function that is 0 on ``tuples`` and infinite elsewhere."""
        allowed = {tuple(t) for t in tuples}
        table = [0 if t in allowed else INF for t in product(range(domain_size), repeat=arity)]
        return cls(arity, domain_size, table)

    @classmethod
    def from_callable(cls, arity: int, domain_size: int, fn) -> "CostFunction":
        return cls(arity, domain_size, [fn(*t) for t in product(range(domain_size), repeat=arity)])

    def __setattr__(self, name, value):
        raise AttributeError("CostFunction is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, CostFunction):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.arity == other.arity
            and self.domain_size == other.domain_size
            and self.table == other.table
        )

    def __repr__(self) -> str:
        return f"CostFunction(arity={self.arity}, domain_size={self.domain_size}, table={self.table!r})"

    def __reduce__(self):
        return (CostFunction, (self.arity, self.domain_size, self.table))

    def index(self, values: Sequence[int]) -> int:
        idx = 0
        d = self.domain_size
        for v in values:
            idx = idx * d + v
        return idx

    def __call__(self, *values: int) -> Cost:
        if len(values) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(values)}")
        for v in values:
            if not 0 <= v < self.domain_size:
                raise AssignmentError(f"value {v} outside domain of size {self.domain_size}")
        return self.table[self.index(values)]

    def rows(self) -> Iterator[tuple[tuple[int, ...], Cost]]:
        """Cost-table rows ``(tuple, cost)`` in table order."""
        return zip(product(range(self.domain_size), repeat=self.arity), self.table)

    @cached_property
    def is_crisp(self) -> bool:
        return all(v == 0 or v == INF for v in self.table)

    @cached_property
    def finite_mask(self) -> tuple[bool, ...]:
        return tuple(v != INF for v in self.table)

    @cached_property
    def relation(self) -> frozenset[tuple[int, ...]]:
        """Tuples of finite cost."""
        return frozenset(t for t, v in self.rows() if v != INF)

    def restrict(self, positions: Sequence[int], values: Sequence[int]) -> "CostFunction":
        """Fix the coordinates at ``positions`` (ascending, distinct) to ``values``."""
        if not positions:
            return self
        return _restrict(self, tuple(positions), tuple(values))


@lru_cache(maxsize=1 << 16)
def _restrict(fn: CostFunction, positions: tuple, values: tuple) -> CostFunction:
    d = fn.domain_size
    if len(positions) != len(values):
        raise ValueError("positions and values differ in length")
    if any(b <= a for a, b in zip(positions, positions[1:])) or positions[0] < 0 or positions[-1] >= fn.arity:
        raise ValueError(f"positions {positions} are not ascending positions of an arity-{fn.arity} function")
    for v in values:
        if not 0 <= v < d:
            raise AssignmentError(f"value {v} outside domain of size {d}")
    idx = _backend.kernels().restrict_indices(fn.arity, d, positions, values)
    table = fn.table
    return CostFunction._trusted(fn.arity - len(positions), d, tuple(map(table.__getitem__, idx)))


@dataclass(frozen=True)
class ValuedConstraint:
    scope: tuple[int, ...]
    function: CostFunction

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        if len(self.scope) != self.function.arity:
            raise ValueError(f"scope {self.scope} has length {len(self.scope)} but arity is {self.function.arity}")

    @cached_property
    def variables(self) -> tuple[int, ...]:
        """Distinct scope variables in order of first occurrence."""
        return tuple(dict.fromkeys(self.scope))

    @property
    def arity(self) -> int:
        return self.function.arity

    def restrict(self, assignment: Mapping[int, int]) -> "ValuedConstraint":
        """Apply a partial assignment; every occurrence of a bound variable is consumed."""
        positions = [p for p, x in enumerate(self.scope) if x in assignment]
        if not positions:
            return self
        values = [assignment[self.scope[p]] for p in positions]
        rest = tuple(x for x in self.scope if x not in assignment)
        return ValuedConstraint(rest, self.function.restrict(positions, values))

    def cost(self, assignment: Mapping[int, int]) -> Cost:
        return self.function.table[self.function.index([assignment[x] for x in self.scope])]


@dataclass(frozen=True)
class Instance:
    """``(V, D, C)``: variable set, domain size and a multiset of constraints.

    Variables keep their original indices after partial assignments are
    applied, so ``variables`` need not be ``range(n)``.
    """

    variables: frozenset[int]
    domain_size: int
    constraints: tuple[ValuedConstraint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", frozenset(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.domain_size < 1:
            raise ValueError("domain size must be positive")
        for i, c in enumerate(self.constraints):
            if c.function.domain_size != self.domain_size:
                raise ValueError(f"constraint {i}: domain size {c.function.domain_size} != {self.domain_size}")
            for x in c.scope:
                if x not in self.variables:
                    raise ValueError(f"constraint {i}: scope variable {x} is not a variable of the instance")

    @classmethod
    def create(cls, num_variables: int, domain_size: int, constraints: Iterable = ()) -> "Instance":
        """Instance over variables ``0..num_variables-1``.

        ``constraints`` may hold :class:`ValuedConstraint` objects or
        ``(scope, function)`` pairs.
        """
        cs = [c if isinstance(c, ValuedConstraint) else ValuedConstraint(tuple(c[0]), c[1]) for c in constraints]
        return cls(frozenset(range(num_variables)), domain_size, tuple(cs))

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @cached_property
    def sorted_variables(self) -> tuple[int, ...]:
        return tuple(sorted(self.variables))

    def replace_function(self, index: int, function: CostFunction) -> "Instance":
        old = self.constraints[index]
        if function.arity != old.function.arity:
            raise ValueError(f"arity mismatch: constraint {index} has arity {old.function.arity}, got {function.arity}")
        if function.domain_size != self.domain_size:
            raise ValueError("domain size mismatch")
        cs = list(self.constraints)
        cs[index] = ValuedConstraint(old.scope, function)
        return Instance(self.variables, self.domain_size, tuple(cs))


def check_assignment(instance: Instance, assignment: Mapping[int, int]) -> None:
    d = instance.domain_size
    for x, v in assignment.items():
        if x not in instance.variables:
            raise AssignmentError(f"variable {x} is not a variable of the instance")
        if not (isinstance(v, int) and 0 <= v < d):
            raise AssignmentError(f"value {v!r} for variable {x} outside domain 0..{d - 1}")


def evaluate(instance: Instance, assignment: Mapping[int, int]) -> Cost:
    """Exact total cost of a total assignment."""
    missing = instance.variables.difference(assignment)
    if missing:
        raise UnboundVariableError(f"assignment is not total; unbound: {sorted(missing)}")
    check_assignment(instance, {x: assignment[x] for x in instance.variables})
    return add_costs(c.cost(assignment) for c in instance.constraints)


def apply_assignment(instance: Instance, assignment: Mapping[int, int]) -> Instance:
    """``P|τ``: restrict every constraint and drop the bound variables."""
    if not assignment:
        return instance
    check_assignment(instance, assignment)
    cs = tuple(c.restrict(assignment) for c in instance.constraints)
    return Instance(instance.variables.difference(assignment), instance.domain_size, cs)


def nullary_constant(instance: Instance) -> Cost:
    return add_costs(c.function.table[0] for c in instance.constraints if c.function.arity == 0)


class Component(NamedTuple):
    variables: frozenset[int]
    constraints: tuple[int, ...]


class Decomposition(NamedTuple):
    components: list[Component]
    nullary: list[int]


def connected_components(instance: Instance) -> Decomposition:
    """Maximal connected groups of variables, with their constraints.

    Components are ordered by smallest variable. Nullary constraints join
    no component and are listed separately.
    """
    parent = {x: x for x in instance.variables}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    nullary = []
    for i, c in enumerate(instance.constraints):
        if not c.scope:
            nullary.append(i)
            continue
        r = find(c.scope[0])
        for x in c.scope[1:]:
            s = find(x)
            if s != r:
                if s < r:
                    r, s = s, r
                parent[s] = r
    groups: dict[int, list[int]] = {}
    for x in sorted(instance.variables):
        groups.setdefault(find(x), []).append(x)
    cons: dict[int, list[int]] = {r: [] for r in groups}
    for i, c in enumerate(instance.constraints):
        if c.scope:
            cons[find(c.scope[0])].append(i)
    comps = [Component(frozenset(vs), tuple(cons[r])) for r, vs in sorted(groups.items(), key=lambda kv: kv[1][0])]
    return Decomposition(comps, nullary)


def subinstance(instance: Instance, component: Component) -> Instance:
    return Instance(
        component.variables,
        instance.domain_size,
        tuple(instance.constraints[i] for i in component.constraints),
    )
