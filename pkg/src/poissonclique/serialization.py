"""JSON wire formats.

Graphs: {"n": int, "edges": [[i, j], ...]} with 1-based vertices, i < j, sorted.
Families and covers: {"n": int, "members": [[sorted ints], ...]} with the empty
set as [] and members in ascending bit-pattern order.  Realizations add counts
and the sampling metadata.  ``dumps`` output is byte-stable: keys sorted, two
space indent, trailing newline; floats use Python repr, the shortest string
that parses back to the same value.
"""

from __future__ import annotations

import json
from typing import Mapping

from .lattice import GeneratingClass, Graph, SubsetFamily, elements_of, mask_of
from .sampling import PipelineSample, PointProcessRealization
from .schedules import schedule_from_dict, schedule_to_dict

FORMAT_VERSION = 1

__all__ = [
    "FORMAT_VERSION",
    "dumps",
    "graph_to_dict",
    "graph_from_dict",
    "family_to_dict",
    "family_from_dict",
    "cover_to_dict",
    "cover_from_dict",
    "realization_to_dict",
    "realization_from_dict",
    "sample_to_dict",
    "sample_from_dict",
    "schedule_to_dict",
    "schedule_from_dict",
]


def dumps(document: Mapping) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def _require(doc: Mapping, key: str, expected: str):
    try:
        return doc[key]
    except (TypeError, KeyError):
        raise ValueError(f"{expected} document needs a {key!r} field") from None


def graph_to_dict(graph: Graph) -> dict:
    return {"n": graph.n, "edges": [[i, j] for i, j in graph.sorted_edges()]}


def graph_from_dict(doc: Mapping) -> Graph:
    n = int(_require(doc, "n", "graph"))
    edges = _require(doc, "edges", "graph")
    try:
        pairs = [(int(i), int(j)) for i, j in edges]
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed edge list: {exc}") from None
    return Graph.from_edges(n, pairs)


def family_to_dict(family: SubsetFamily) -> dict:
    return {"n": family.n, "members": [list(s) for s in family.member_sets()]}


def family_from_dict(doc: Mapping) -> SubsetFamily:
    n = int(_require(doc, "n", "family"))
    members = _require(doc, "members", "family")
    try:
        masks = frozenset(mask_of((int(e) for e in member), n) for member in members)
    except TypeError as exc:
        raise ValueError(f"malformed member list: {exc}") from None
    return SubsetFamily(n, masks)


def cover_to_dict(cover: GeneratingClass) -> dict:
    return {"n": cover.n, "members": [list(s) for s in cover.member_sets()]}


def cover_from_dict(doc: Mapping) -> GeneratingClass:
    family = family_from_dict(doc)
    return GeneratingClass(family.n, family.members)


def realization_to_dict(realization: PointProcessRealization) -> dict:
    return {
        "n": realization.n,
        "seed": realization.seed,
        "method": realization.method,
        "counts": [
            {"subset": list(elements_of(mask)), "count": realization.counts[mask]}
            for mask in realization.support_masks()
        ],
    }


def realization_from_dict(doc: Mapping) -> PointProcessRealization:
    n = int(_require(doc, "n", "realization"))
    counts = {}
    for entry in _require(doc, "counts", "realization"):
        counts[mask_of((int(e) for e in entry["subset"]), n)] = int(entry["count"])
    return PointProcessRealization(
        n, counts, int(_require(doc, "seed", "realization")), str(_require(doc, "method", "realization"))
    )


def sample_to_dict(sample: PipelineSample) -> dict:
    return {
        "realization": realization_to_dict(sample.realization),
        "support": family_to_dict(sample.support),
        "cover": cover_to_dict(sample.cover),
        "graph": graph_to_dict(sample.graph),
    }


def sample_from_dict(doc: Mapping) -> PipelineSample:
    return PipelineSample(
        realization_from_dict(_require(doc, "realization", "sample")),
        family_from_dict(_require(doc, "support", "sample")),
        cover_from_dict(_require(doc, "cover", "sample")),
        graph_from_dict(_require(doc, "graph", "sample")),
    )
