"""JSON instance documents.

A document looks like::

    {
      "domain_size": 2,
      "num_variables": 3,
      "constraints": [{"scope": [0, 1], "table": ["0", "1/2", "inf", "3"]}],
      "languages": [{"name": "L", "functions": [{"arity": 1, "table": ["0", "inf"]}]}],
      "metadata": {}
    }

Costs are strings: ``"p"``, reduced ``"p/q"`` or ``"inf"``. Tables list
rows in mixed-radix order, first scope coordinate most significant. An
explicit ``"variables"`` list replaces ``num_variables`` for instances
whose variables are not ``0..n-1``. ``languages`` and ``metadata`` are
optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from .costs import CostError, format_cost, parse_cost, to_cost
from .languages import FiniteLanguage
from .model import CostFunction, Instance, ValuedConstraint

__all__ = ["ParseError", "Document", "parse_instance", "load_instance", "emit_instance", "instance_to_dict"]


class ParseError(ValueError):
    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass
class Document:
    instance: Instance
    languages: dict[str, FiniteLanguage] = field(default_factory=dict)
    metadata: dict[str, Any] = field(default_factory=dict)


def _cost(value, path):
    try:
        if isinstance(value, str):
            return parse_cost(value)
        if isinstance(value, int) and not isinstance(value, bool):
            return to_cost(value)
    except CostError as exc:
        raise ParseError(path, str(exc)) from None
    raise ParseError(path, f"malformed cost {value!r}")


def _int(value, path, minimum=0):
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ParseError(path, f"expected an integer >= {minimum}, got {value!r}")
    return value


def _table(raw, arity, d, path):
    if not isinstance(raw, list):
        raise ParseError(path, "table must be a list")
    if len(raw) != d**arity:
        raise ParseError(path, f"table has {len(raw)} entries, expected {d}**{arity} = {d**arity}")
    return CostFunction(arity, d, [_cost(v, f"{path}[{i}]") for i, v in enumerate(raw)])


def parse_instance(document: str | dict) -> Document:
    """Parse a JSON document (text or already-decoded) into an :class:`Document`."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    if not isinstance(document, dict):
        raise ParseError("", "document must be a JSON object")
    d = _int(document.get("domain_size"), "domain_size", 1)
    if "variables" in document:
        raw_vars = document["variables"]
        if not isinstance(raw_vars, list):
            raise ParseError("variables", "must be a list")
        variables = frozenset(_int(x, f"variables[{i}]") for i, x in enumerate(raw_vars))
    else:
        variables = frozenset(range(_int(document.get("num_variables"), "num_variables")))
    constraints = []
    raw_cs = document.get("constraints", [])
    if not isinstance(raw_cs, list):
        raise ParseError("constraints", "must be a list")
    for j, raw in enumerate(raw_cs):
        path = f"constraints[{j}]"
        if not isinstance(raw, dict):
            raise ParseError(path, "must be an object")
        scope = raw.get("scope")
        if not isinstance(scope, list):
            raise ParseError(f"{path}.scope", "must be a list")
        for i, x in enumerate(scope):
            _int(x, f"{path}.scope[{i}]")
            if x not in variables:
                raise ParseError(f"{path}.scope[{i}]", f"variable {x} out of range")
        fn = _table(raw.get("table"), len(scope), d, f"{path}.table")
        constraints.append(ValuedConstraint(tuple(scope), fn))
    languages = {}
    for li, raw in enumerate(document.get("languages", [])):
        path = f"languages[{li}]"
        name = raw.get("name")
        if not isinstance(name, str) or not name:
            raise ParseError(f"{path}.name", "missing language name")
        fns = []
        for fi, rf in enumerate(raw.get("functions", [])):
            fpath = f"{path}.functions[{fi}]"
            arity = _int(rf.get("arity"), f"{fpath}.arity")
            fns.append(_table(rf.get("table"), arity, d, f"{fpath}.table"))
        languages[name] = FiniteLanguage(
            name,
            d,
            fns,
            arity_bound=raw.get("arity_bound"),
            conservative=bool(raw.get("conservative", False)),
            closed_under_partial_assignments=bool(raw.get("closed", False)),
        )
    metadata = document.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ParseError("metadata", "must be an object")
    return Document(Instance(variables, d, tuple(constraints)), languages, metadata)


def load_instance(path: str) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _function_dict(fn: CostFunction) -> dict:
    return {"arity": fn.arity, "table": [format_cost(v) for v in fn.table]}


def instance_to_dict(
    instance: Instance,
    languages: Iterable[FiniteLanguage] = (),
    metadata: dict | None = None,
) -> dict:
    doc: dict[str, Any] = {"domain_size": instance.domain_size}
    if instance.variables == frozenset(range(instance.num_variables)):
        doc["num_variables"] = instance.num_variables
    else:
        doc["variables"] = list(instance.sorted_variables)
    doc["constraints"] = [
        {"scope": list(c.scope), "table": [format_cost(v) for v in c.function.table]} for c in instance.constraints
    ]
    langs = list(languages)
    if langs:
        doc["languages"] = [
            {
                "name": lang.name,
                "arity_bound": lang.arity_bound,
                "conservative": lang.conservative,
                "closed": lang.closed_under_partial_assignments,
                "functions": [_function_dict(f) for f in lang],
            }
            for lang in langs
        ]
    if metadata:
        doc["metadata"] = metadata
    return doc


def emit_instance(instance: Instance, languages: Iterable[FiniteLanguage] = (), metadata: dict | None = None) -> str:
    """Canonical text: fixed key order, one constraint per line."""
    doc = instance_to_dict(instance, languages, metadata)
    lines = ["{"]
    items = list(doc.items())
    for n, (key, value) in enumerate(items):
        sep = "," if n + 1 < len(items) else ""
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"  {json.dumps(key)}: [")
            for i, item in enumerate(value):
                lines.append("    " + json.dumps(item) + ("," if i + 1 < len(value) else ""))
            lines.append(f"  ]{sep}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value, sort_keys=True)}{sep}")
    lines.append("}")
    return "\n".join(lines) + "\n"
