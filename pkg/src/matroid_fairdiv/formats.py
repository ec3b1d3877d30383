"""JSON encodings of instances, allocations and rules.

Rationals travel as strings (``"3/2"``), utilities as integer arrays, so
everything round-trips exactly.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import InputError
from .instances import Allocation, Instance
from .valuations import from_spec
from .welfare import make_rule


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def instance_from_json(obj: dict) -> Instance:
    try:
        goods = [str(g) for g in obj["goods"]]
        agents = sorted(obj["agents"], key=lambda a: int(a["id"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed instance: {exc}") from None
    ids = [int(a["id"]) for a in agents]
    if ids != list(range(1, len(agents) + 1)):
        raise InputError(f"agent ids must be 1..n, got {ids}")
    valuations = []
    for a in agents:
        if "valuation" not in a:
            raise InputError(f"agent {a['id']} has no valuation")
        valuations.append(from_spec(a["valuation"], goods))
    return Instance.build(goods, valuations, [str(a.get("weight", "1")) for a in agents])


def instance_to_json(inst: Instance) -> dict:
    return {
        "goods": list(inst.goods),
        "agents": [
            {"id": a.index, "weight": fraction_str(a.weight), "valuation": a.valuation.to_spec()}
            for a in inst.agents
        ],
    }


def allocation_to_json(alloc: Allocation, goods) -> dict:
    order = {g: i for i, g in enumerate(goods)}
    return {
        "bundles": {str(i): sorted(b, key=order.__getitem__) for i, b in enumerate(alloc.bundles, start=1)},
        "unallocated": list(alloc.unallocated(goods)),
    }


def allocation_from_json(obj: dict, inst: Instance) -> Allocation:
    bundles = obj.get("bundles", {})
    out = []
    for i in range(1, inst.n + 1):
        out.append(frozenset(bundles.get(str(i), [])))
    alloc = Allocation(tuple(out))
    stray = alloc.allocated() - set(inst.goods)
    if stray:
        raise InputError(f"allocation uses unknown goods {sorted(stray)}")
    return alloc


def parse_rule(text: str, m=None):
    """Accept ``mwnw``, ``mwhw``, inline JSON, or ``@path/to/rule.json``."""
    text = text.strip()
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    if text.startswith("{") or text.startswith("["):
        try:
            return make_rule(json.loads(text), m)
        except json.JSONDecodeError as exc:
            raise InputError(f"rule is not valid JSON: {exc}") from None
    return make_rule(text, m)


def load_instance(path) -> Instance:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON: {exc}") from None
    return instance_from_json(obj)


def dump_instance(inst: Instance, path):
    Path(path).write_text(json.dumps(instance_to_json(inst), indent=2) + "\n")
