import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import family, rand_instance
from vcsp_backdoor import CostFunction, Instance, apply_assignment, finitize, vcsp_to_csp
from vcsp_backdoor.costs import INF
from vcsp_backdoor.fileformat import ParseError, emit_instance, instance_to_dict, parse_instance


def doc(**overrides):
    base = {"domain_size": 2, "num_variables": 2, "constraints": []}
    base.update(overrides)
    return json.dumps(base)


def test_minimal_document():
    parsed = parse_instance(doc())
    assert parsed.instance == Instance.create(2, 2)
    assert parsed.languages == {} and parsed.metadata == {}


def test_binary_table_transcribed():
    parsed = parse_instance(doc(constraints=[{"scope": [1, 0], "table": ["0", "1/2", "inf", "3"]}]))
    (c,) = parsed.instance.constraints
    assert c.scope == (1, 0)
    assert c.function == CostFunction(2, 2, [0, Fraction(1, 2), INF, 3])


@pytest.mark.parametrize(
    "constraints, path",
    [
        ([{"scope": [0, 1], "table": ["0", "1", "2"]}], "constraints[0].table"),
        ([{"scope": [0], "table": ["0", "1"]}, {"scope": [0], "table": ["0", "-1"]}], "constraints[1].table[1]"),
        ([{"scope": [0], "table": ["0", "x"]}], "constraints[0].table[1]"),
        ([{"scope": [0, 5], "table": ["0"] * 4}], "constraints[0].scope[1]"),
        ([{"scope": [0], "table": ["0", 0.5]}], "constraints[0].table[1]"),
        ([{"scope": "0", "table": ["0", "1"]}], "constraints[0].scope"),
    ],
)
def test_positioned_errors(constraints, path):
    with pytest.raises(ParseError) as err:
        parse_instance(doc(constraints=constraints))
    assert err.value.path == path
    assert path in str(err.value)


def test_top_level_errors():
    for text, path in (("{", "line 1"), ("[]", ""), (doc(domain_size=0), "domain_size")):
        with pytest.raises(ParseError) as err:
            parse_instance(text)
        assert err.value.path.startswith(path)


def test_languages_and_metadata_round_trip():
    text = doc(
        languages=[{"name": "L", "closed": True, "functions": [{"arity": 1, "table": ["0", "inf"]}]}],
        metadata={"note": "hi"},
    )
    parsed = parse_instance(text)
    lang = parsed.languages["L"]
    assert lang.closed_under_partial_assignments and lang.contains(CostFunction(1, 2, [0, INF]))
    again = parse_instance(emit_instance(parsed.instance, parsed.languages.values(), parsed.metadata))
    assert again.languages["L"] == lang and again.metadata == {"note": "hi"}


def test_sparse_variables_use_explicit_list():
    inst = Instance.create(4, 2, [((0, 3), CostFunction(2, 2, [0, 1, 2, 3]))])
    reduced = apply_assignment(inst, {1: 0})
    d = instance_to_dict(reduced)
    assert d["variables"] == [0, 2, 3] and "num_variables" not in d
    assert parse_instance(emit_instance(reduced)).instance == reduced


def test_accepts_integer_costs_and_canonicalizes():
    text = doc(constraints=[{"scope": [0], "table": [1, "4/2"]}])
    emitted = emit_instance(parse_instance(text).instance)
    assert '"table": ["1", "2"]' in emitted


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip(seed):
    rng = random.Random(seed)
    inst = rand_instance(rng, rng.randint(0, 5), d=rng.randint(1, 3), m=rng.randint(0, 5), max_arity=3, repeats=True)
    text = emit_instance(inst, metadata={"seed": seed})
    parsed = parse_instance(text)
    assert parsed.instance == inst
    assert emit_instance(parsed.instance, metadata=parsed.metadata) == text


def test_transform_output_serializes():
    inst = Instance.create(3, 2, [((0, 1), CostFunction(2, 2, [0, 1, 1, INF])), ((1, 2), CostFunction(2, 2, [0, 0, 2, 0]))])
    red = vcsp_to_csp(finitize(inst, family(), 1), 1)
    meta = {"domain": [str(v) for v in red.domain], "fresh": {str(j): list(v) for j, v in red.fresh.items()}}
    parsed = parse_instance(emit_instance(red.instance, red.languages, meta))
    assert parsed.instance == red.instance
    assert [parsed.languages[lang.name] for lang in red.languages] == list(red.languages)
    assert parsed.metadata["fresh"] == {"0": [3, 4], "1": [5, 6]}
