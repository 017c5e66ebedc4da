"""JSON input/output for systems and connection sets.

Accepted documents::

    {"type": "cyclic", "n": N, "pairs": [{"i": 1, "pp": .., "pm": .., "mp": .., "mm": ..}, ...]}
    {"type": "cyclic-expectations", "n": N, "v": [...], "w": [...], "vw": [...]}
    {"type": "generic", "bunches": [{"vars": [...], "pmf": {"++": .., ...}}, ...],
     "connections": [["A_X", "A_Z"], ...]}
    {"type": "connections", "n": N, "pairs": [{"i": 1, "pp": .., ...}, ...]}

Cyclic forms take an optional ``"permutation"`` list whose i-th entry is
pi(i), for systems observed as (V_i, W_pi(i)).
"""
from __future__ import annotations

import itertools
import json
from typing import Any

from .errors import InfeasibleExpectations, NotCircular, SchemaError
from .systems import (
    SIGNS,
    Bunch,
    CyclicSystem,
    GenericSystem,
    MarginalSummary,
    PairDistribution,
    pair_from_expectations,
    relabel_permutation,
)

PAIR_KEYS = ("pp", "pm", "mp", "mm")


def _require(data: dict, key: str, location: str) -> Any:
    if not isinstance(data, dict):
        raise SchemaError("expected an object", location)
    if key not in data:
        raise SchemaError(f"missing field {key!r}", location)
    return data[key]


def _number(value: Any, location: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {value!r}", location)
    return float(value)


def _numbers(value: Any, length: int, location: str) -> list[float]:
    if not isinstance(value, list):
        raise SchemaError("expected a list", location)
    if len(value) != length:
        raise SchemaError(f"expected {length} entries, got {len(value)}", location)
    return [_number(x, f"{location}[{k}]") for k, x in enumerate(value)]


def _rank(data: dict) -> int:
    n = _require(data, "n", "$")
    if isinstance(n, bool) or not isinstance(n, int) or n < 3:
        raise SchemaError(f"n must be an integer >= 3, got {n!r}", "$.n")
    return n


def _permutation(data: dict, n: int) -> list[int] | None:
    if "permutation" not in data:
        return None
    pi = data["permutation"]
    if not isinstance(pi, list) or len(pi) != n or not all(isinstance(x, int) for x in pi):
        raise SchemaError(f"expected a list of {n} integers", "$.permutation")
    return pi


def _indexed_pairs(data: dict, n: int) -> dict[int, PairDistribution]:
    pairs = _require(data, "pairs", "$")
    if not isinstance(pairs, list) or len(pairs) != n:
        raise SchemaError(f"expected a list of {n} pairs", "$.pairs")
    found: dict[int, PairDistribution] = {}
    for k, entry in enumerate(pairs):
        location = f"$.pairs[{k}]"
        i = _require(entry, "i", location)
        if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= n:
            raise SchemaError(f"index i must be in 1..{n}, got {i!r}", f"{location}.i")
        if i in found:
            raise SchemaError(f"duplicate pair index {i}", f"{location}.i")
        found[i] = PairDistribution(*(_number(_require(entry, key, location), f"{location}.{key}")
                                      for key in PAIR_KEYS))
    return found


def _cyclic_from_pairs(pairs: dict[int, PairDistribution], n: int, pi: list[int] | None) -> CyclicSystem:
    if pi is None:
        return CyclicSystem(n, tuple(pairs[i] for i in range(1, n + 1)))
    try:
        return relabel_permutation([(i, pi[i - 1], pairs[i]) for i in range(1, n + 1)], pi)
    except NotCircular as exc:
        raise SchemaError(str(exc), "$.permutation") from None


def _pmf_table(pmf: Any, size: int, location: str) -> tuple[float, ...]:
    if not isinstance(pmf, dict):
        raise SchemaError("expected an object keyed by outcome strings like '+-'", location)
    keys = ["".join("+" if s > 0 else "-" for s in outcome)
            for outcome in itertools.product(SIGNS, repeat=size)]
    unknown = set(pmf) - set(keys)
    if unknown:
        raise SchemaError(f"unknown outcome keys {sorted(unknown)}", location)
    # outcomes left out have probability zero
    return tuple(_number(pmf.get(key, 0.0), f"{location}.{key}") for key in keys)


def load_system(data: Any) -> CyclicSystem | GenericSystem:
    kind = _require(data, "type", "$")
    if kind == "cyclic":
        n = _rank(data)
        return _cyclic_from_pairs(_indexed_pairs(data, n), n, _permutation(data, n))
    if kind == "cyclic-expectations":
        n = _rank(data)
        pi = _permutation(data, n) or [i % n + 1 for i in range(1, n + 1)]
        v = _numbers(_require(data, "v", "$"), n, "$.v")
        w = _numbers(_require(data, "w", "$"), n, "$.w")
        vw = _numbers(_require(data, "vw", "$"), n, "$.vw")
        pairs = {}
        for i in range(1, n + 1):
            j = pi[i - 1]
            if not 1 <= j <= n:
                raise SchemaError(f"entry {j} outside 1..{n}", "$.permutation")
            try:
                pairs[i] = pair_from_expectations(v[i - 1], w[j - 1], vw[i - 1])
            except InfeasibleExpectations as exc:
                raise SchemaError(str(exc), f"$.vw[{i - 1}]") from None
        return _cyclic_from_pairs(pairs, n, _permutation(data, n))
    if kind == "generic":
        bunches_raw = _require(data, "bunches", "$")
        if not isinstance(bunches_raw, list) or not bunches_raw:
            raise SchemaError("expected a non-empty list", "$.bunches")
        bunches = []
        for k, entry in enumerate(bunches_raw):
            location = f"$.bunches[{k}]"
            names = _require(entry, "vars", location)
            if not isinstance(names, list) or not names or not all(isinstance(x, str) for x in names):
                raise SchemaError("expected a non-empty list of names", f"{location}.vars")
            if len(names) > 16:
                raise SchemaError("bunches are limited to 16 variables", f"{location}.vars")
            pmf = _pmf_table(_require(entry, "pmf", location), len(names), f"{location}.pmf")
            bunches.append(Bunch(tuple(names), pmf))
        connections_raw = data.get("connections", [])
        if not isinstance(connections_raw, list):
            raise SchemaError("expected a list", "$.connections")
        connections = []
        for c, entry in enumerate(connections_raw):
            if not isinstance(entry, list) or len(entry) != 2 or not all(isinstance(x, str) for x in entry):
                raise SchemaError("a connection is a list of two names", f"$.connections[{c}]")
            connections.append((entry[0], entry[1]))
        return GenericSystem(tuple(bunches), tuple(connections))
    raise SchemaError(f"unknown system type {kind!r}", "$.type")


def load_connections(data: Any, n: int) -> list[PairDistribution]:
    """Connection couplings; entry i is the pmf of (V_i, W_i)."""
    kind = _require(data, "type", "$")
    if kind != "connections":
        raise SchemaError(f"expected type 'connections', got {kind!r}", "$.type")
    if _rank(data) != n:
        raise SchemaError(f"connection set has n={data['n']}, system has n={n}", "$.n")
    pairs = _indexed_pairs(data, n)
    return [pairs[i] for i in range(1, n + 1)]


def cyclic_to_json(system: CyclicSystem) -> dict:
    return {
        "type": "cyclic",
        "n": system.n,
        "pairs": [
            {"i": i, **dict(zip(PAIR_KEYS, pair.as_tuple()))} for i, pair in enumerate(system.pairs, start=1)
        ],
    }


def expectations_to_json(summary: MarginalSummary) -> dict:
    return {
        "type": "cyclic-expectations",
        "n": summary.n,
        "v": list(summary.v),
        "w": list(summary.w),
        "vw": list(summary.vw),
    }


def generic_to_json(system: GenericSystem) -> dict:
    bunches = []
    for bunch in system.bunches:
        keys = ["".join("+" if s > 0 else "-" for s in outcome) for outcome in bunch.outcomes()]
        bunches.append({"vars": list(bunch.variables), "pmf": dict(zip(keys, bunch.pmf))})
    return {"type": "generic", "bunches": bunches, "connections": [list(c) for c in system.connections]}


def connections_to_json(connections: list[PairDistribution]) -> dict:
    return {
        "type": "connections",
        "n": len(connections),
        "pairs": [{"i": i, **dict(zip(PAIR_KEYS, p.as_tuple()))} for i, p in enumerate(connections, start=1)],
    }


def system_to_json(system: CyclicSystem | GenericSystem) -> dict:
    if isinstance(system, GenericSystem):
        return generic_to_json(system)
    return cyclic_to_json(system)


def dumps(document: Any) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(document, indent=2, allow_nan=False)
