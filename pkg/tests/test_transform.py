import random
from itertools import product

import pytest

from helpers import backdoors_up_to, family, minimal_sets, rand_mixed
from vcsp_backdoor import (
    CostFunction,
    Instance,
    ValuedConstraint,
    apply_assignment,
    brute_force_solve,
    compute_type,
    connected_components,
    finitize,
    pipeline_solve,
    replace_cost_function,
    vcsp_to_csp,
)
from vcsp_backdoor.costs import INF
from vcsp_backdoor.generators import cut_vertex, random_scattered
from vcsp_backdoor.languages import FiniteLanguage, LanguageFamily, restrictions
from vcsp_backdoor.transform import EPSILON, ArityGateError, CostValue, DomainValue, PreconditionError

FAM = family()
XOR = CostFunction.from_relation(2, 2, [(0, 1), (1, 0)])
IMPLIES = CostFunction.from_relation(2, 2, [(0, 0), (0, 1), (1, 1)])


def test_replace_identity_and_locality():
    inst = Instance.create(3, 2, [((0, 1), IMPLIES), ((1, 2), XOR)])
    assert replace_cost_function(inst, 0, IMPLIES) == inst
    soft = CostFunction(2, 2, [0, 1, 2, 0])
    out = replace_cost_function(inst, 0, soft)
    assert out.constraints[0] == ValuedConstraint((0, 1), soft)
    assert out.constraints[1] == inst.constraints[1]
    with pytest.raises(ValueError):
        replace_cost_function(inst, 1, CostFunction(1, 2, [0, 0]))


def test_type_of_nullary():
    key = compute_type(ValuedConstraint((), CostFunction.constant(5, 2)), FAM, 1)
    assert key.arity == 0 and key.entries == ((0, 1),)
    assert list(key.items(2)) == [((), (), (0, 1))]


def test_equal_tables_equal_types():
    a = compute_type(ValuedConstraint((0, 1), XOR), FAM, 1)
    b = compute_type(ValuedConstraint((3, 2), XOR), FAM, 1)
    assert a == b
    assert a != compute_type(ValuedConstraint((0, 1), IMPLIES), FAM, 1)


def test_type_entries_order():
    key = compute_type(ValuedConstraint((0, 1), XOR), FAM, 1)
    items = list(key.items(2))
    # Q = {} first, then Q = {0} with γ = 0, 1, then Q = {1}, then Q = {0, 1}
    assert [q for q, _, _ in items] == [(), (0,), (0,), (1,), (1,), (0, 1), (0, 1), (0, 1), (0, 1)]
    assert items[0][2] == () and all(langs == (0, 1) for _, _, langs in items[1:])


def test_type_scope_pattern_distinguishes_repeats():
    fn = CostFunction(2, 2, [0, 1, 1, 0])
    assert compute_type(ValuedConstraint((0, 0), fn), FAM, 1) != compute_type(ValuedConstraint((0, 1), fn), FAM, 1)


def test_type_arity_gate():
    with pytest.raises(ArityGateError):
        compute_type(ValuedConstraint((0, 1, 2, 3), CostFunction(4, 2, [0] * 16)), FAM, 1)


def test_finitize_single_type_uses_first_function():
    a = CostFunction(2, 2, [0, 1, 1, 0])
    b = CostFunction(2, 2, [0, 2, 2, 0])
    inst = Instance.create(4, 2, [((0, 1), a), ((1, 2), b), ((2, 3), a)])
    fin = finitize(inst, FAM, 1)
    assert len(set(fin.types)) == 1
    assert all(c.function == a for c in fin.instance.constraints)
    assert [c.scope for c in fin.instance.constraints] == [c.scope for c in inst.constraints]
    assert fin.representatives == {fin.types[0]: 0}


def test_finitize_arity_gate_returns_no():
    wide = CostFunction(4, 2, [0] * 16)
    inst = Instance.create(4, 2, [((0, 1, 2, 3), wide)])
    assert finitize(inst, FAM, 1) is None
    assert pipeline_solve(inst, FAM, 1) is None
    assert finitize(inst, FAM, 2) is not None


def test_finitize_languages_closed_and_bounded():
    rng = random.Random(0)
    for _ in range(20):
        inst = rand_mixed(rng, 5, 5, max_arity=3)
        fin = finitize(inst, FAM, 2)
        bound = sum(3 ** t.arity for t in set(fin.types))  # restrictions per representative: (d+1)^r
        for lang in fin.languages:
            assert lang.closed_under_partial_assignments
            assert len(lang) <= bound
            for fn in lang:
                assert all(lang.contains(r) for r in restrictions(fn))


def test_components_correspond_after_finitize():
    rng = random.Random(1)
    for _ in range(30):
        inst = rand_mixed(rng, 6, 6, max_arity=3)
        fin = finitize(inst, FAM, 2)
        for _ in range(5):
            Y = [x for x in inst.variables if rng.random() < 0.4]
            gamma = {x: rng.randrange(2) for x in Y}
            a, b = apply_assignment(inst, gamma), apply_assignment(fin.instance, gamma)
            ca, cb = connected_components(a).components, connected_components(b).components
            assert [c.variables for c in ca] == [c.variables for c in cb]
            for comp_a, comp_b in zip(ca, cb):
                assert comp_a.constraints == comp_b.constraints
                for i in comp_a.constraints:
                    ka = compute_type(a.constraints[i], FAM, 2)
                    kb = compute_type(b.constraints[i], FAM, 2)
                    assert ka == kb


def test_crisp_unary_encoding():
    unit = CostFunction.from_relation(1, 2, [(1,)])
    inst = Instance.create(1, 2, [((0,), unit)])
    fin = finitize(inst, FAM, 1)
    red = vcsp_to_csp(fin, 1)
    assert red.domain == (DomainValue(0), DomainValue(1), CostValue(0), CostValue(INF), EPSILON)
    rel = red.instance.constraints[0].function
    assert rel.arity == 2 and rel.relation == {(0, 3), (1, 2)}
    no_inf = vcsp_to_csp(fin, 1, include_infinity=False)
    assert no_inf.domain == (DomainValue(0), DomainValue(1), CostValue(0), EPSILON)
    assert no_inf.instance.constraints[0].function.relation == {(0, 3), (1, 2)}


def test_reduction_shape_and_crispness():
    rng = random.Random(2)
    for k in (0, 1, 2):
        inst = rand_mixed(rng, 5, 4, max_arity=2)
        red = vcsp_to_csp(finitize(inst, FAM, k), k)
        m = len(inst.constraints)
        assert red.instance.num_variables == 5 + m * (k + 1)
        assert len(red.instance.constraints) == m * (k + 1)
        assert all(c.function.is_crisp for c in red.instance.constraints)
        assert all(fn.is_crisp for lang in red.languages for fn in lang)
        for j, fresh in red.fresh.items():
            assert len(fresh) == k + 1 and not set(fresh) & inst.variables
            assert [c.scope[-1] for c in red.instance.constraints[j * (k + 1) : (j + 1) * (k + 1)]] == list(fresh)


@pytest.mark.parametrize("include_infinity", [True, False])
def test_backdoor_equivalence_small(include_infinity):
    rng = random.Random(3)
    for _ in range(8):
        inst = rand_mixed(rng, 4, 3, max_arity=2, member_rate=0.5)
        k = 1
        fin = finitize(inst, FAM, k)
        red = vcsp_to_csp(fin, k, include_infinity)
        mins_p = minimal_sets(backdoors_up_to(inst, k, FAM, True))
        mins_f = minimal_sets(backdoors_up_to(fin.instance, k, fin.languages, True))
        mins_c = minimal_sets(backdoors_up_to(red.instance, k, red.languages, True))
        assert mins_p == mins_f == mins_c
        assert all(X <= inst.variables for X in mins_c)


def test_pipeline_on_scattered_instance_k0():
    inst = random_scattered(4, blocks=2, block_size=2)
    res = pipeline_solve(inst, FAM, 0)
    assert res.backdoor == frozenset()
    assert res.solution.cost == brute_force_solve(inst).cost


def test_pipeline_on_cut_vertex():
    for seed in range(3):
        inst, meta = cut_vertex(seed, 3, 3)
        res = pipeline_solve(inst, FAM, 1)
        assert res.backdoor == {meta["x"]}
        assert res.solution.cost == brute_force_solve(inst).cost


def test_pipeline_preconditions():
    finite = FiniteLanguage("only_xor", 2, [XOR])
    with pytest.raises(PreconditionError, match="conservative"):
        pipeline_solve(Instance.create(2, 2), LanguageFamily([finite]), 1)


def test_pipeline_no_when_backdoor_too_large():
    inst = Instance.create(4, 2, [((0, 1), XOR), ((2, 3), XOR)])
    assert pipeline_solve(inst, FAM, 1) is None
    res = pipeline_solve(inst, FAM, 2)
    assert res is not None and len(res.backdoor) == 2
    assert res.solution.cost == brute_force_solve(inst).cost


def test_domain_value_labels():
    assert [str(v) for v in (DomainValue(1), CostValue(INF), EPSILON)] == ["d:1", "c:inf", "eps"]
    assert len(set(product([DomainValue(0), CostValue(0)], repeat=1))) == 2
