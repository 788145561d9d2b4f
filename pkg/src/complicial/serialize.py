"""Canonical JSON documents for sets, subsets, maps and operators.

Every writer sorts what it can so that equal objects give equal bytes.
Schemas carry a version suffix; readers reject unknown versions.
"""

from __future__ import annotations

import json
from typing import Mapping

from .delta_ops import Operator
from .strata import SimplexRef, StratifiedMap, StratifiedSet, Subset

__all__ = [
    "SET_SCHEMA",
    "SUBSET_SCHEMA",
    "MAP_SCHEMA",
    "dumps",
    "operator_to_json",
    "operator_from_json",
    "ref_to_json",
    "ref_from_json",
    "set_to_json",
    "set_from_json",
    "subset_to_json",
    "subset_from_json",
    "map_to_json",
    "map_from_json",
]

SET_SCHEMA = "stratified-set/1"
SUBSET_SCHEMA = "subset/1"
MAP_SCHEMA = "stratified-map/1"


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def _expect(doc: Mapping, schema: str) -> None:
    got = doc.get("schema")
    if got != schema:
        raise ValueError(f"expected a {schema!r} document, got {got!r}")


def operator_to_json(alpha: Operator) -> dict:
    return {"dom": alpha.dom, "cod": alpha.cod, "images": list(alpha.images)}


def operator_from_json(doc: Mapping) -> Operator:
    return Operator(doc["dom"], doc["cod"], doc["images"])


def ref_to_json(x: SimplexRef) -> list:
    return [x.generator, list(x.degeneracy.images)]


def ref_from_json(doc, dim_of: Mapping[str, int]) -> SimplexRef:
    name, images = doc
    if name not in dim_of:
        raise ValueError(f"unknown generator {name!r}")
    return SimplexRef(name, Operator(len(images) - 1, dim_of[name], images))


def set_to_json(X: StratifiedSet) -> dict:
    return {
        "schema": SET_SCHEMA,
        "truncation": X.truncation,
        "skeletal": X.skeletal,
        "generators": [list(level) for level in X.generators],
        "faces": {g: [ref_to_json(f) for f in fs] for g, fs in X.faces.items() if fs},
        "thin": sorted(X.thin),
    }


def set_from_json(doc: Mapping) -> StratifiedSet:
    _expect(doc, SET_SCHEMA)
    generators = [list(level) for level in doc["generators"]]
    dim_of = {g: d for d, level in enumerate(generators) for g in level}
    faces = {g: tuple(ref_from_json(f, dim_of) for f in fs) for g, fs in doc.get("faces", {}).items()}
    return StratifiedSet(doc["truncation"], generators, faces, doc.get("thin", ()), doc.get("skeletal", False))


def subset_to_json(S: Subset) -> dict:
    return {"schema": SUBSET_SCHEMA, "members": sorted(S.members), "flags": sorted(S.flags)}


def subset_from_json(doc: Mapping, ambient: StratifiedSet) -> Subset:
    _expect(doc, SUBSET_SCHEMA)
    return Subset(ambient, frozenset(doc["members"]), frozenset(doc["flags"]))


def map_to_json(f: StratifiedMap) -> dict:
    return {
        "schema": MAP_SCHEMA,
        "assignment": {g: ref_to_json(y) for g, y in sorted(f.assignment.items())},
    }


def map_from_json(doc: Mapping, source: StratifiedSet, target: StratifiedSet) -> StratifiedMap:
    _expect(doc, MAP_SCHEMA)
    return StratifiedMap(
        source, target, {g: ref_from_json(y, target.dim_of) for g, y in doc["assignment"].items()}
    )
