import json

from poissonclique.lattice import GeneratingClass, Graph, SubsetFamily
from poissonclique.sampling import PointProcessRealization, sample_pipeline
from poissonclique.schedules import GeometricSchedule
from poissonclique.serialization import (
    cover_from_dict,
    cover_to_dict,
    dumps,
    family_from_dict,
    family_to_dict,
    graph_from_dict,
    graph_to_dict,
    realization_from_dict,
    realization_to_dict,
    sample_from_dict,
    sample_to_dict,
)

import pytest


def test_graph_roundtrip():
    graph = Graph.from_edges(4, [(3, 4), (1, 2), (1, 3)])
    doc = graph_to_dict(graph)
    assert doc == {"n": 4, "edges": [[1, 2], [1, 3], [3, 4]]}
    assert graph_from_dict(json.loads(json.dumps(doc))) == graph


def test_family_roundtrip_with_empty_member():
    family = SubsetFamily.from_sets(3, [[], [1, 3], [2]])
    doc = family_to_dict(family)
    assert doc["members"][0] == []
    assert family_from_dict(json.loads(json.dumps(doc))) == family


def test_cover_roundtrip():
    cover = GeneratingClass.from_sets(4, [[1, 2, 3], [3, 4]])
    doc = cover_to_dict(cover)
    assert cover_from_dict(json.loads(json.dumps(doc))) == cover


def test_cover_from_dict_rejects_non_antichain():
    with pytest.raises(ValueError):
        cover_from_dict({"n": 2, "members": [[1], [1, 2]]})


def test_realization_roundtrip():
    realization = PointProcessRealization(3, {0b011: 2, 0b100: 1}, 99, "inversion")
    doc = realization_to_dict(realization)
    assert realization_from_dict(json.loads(json.dumps(doc))) == realization


def test_sample_roundtrip():
    sample = sample_pipeline(GeometricSchedule(alpha=0.5), 4, 1729)
    doc = sample_to_dict(sample)
    assert sample_from_dict(json.loads(json.dumps(doc))) == sample


def test_malformed_documents():
    for bad in [{}, {"n": 2}, {"edges": []}, 17]:
        with pytest.raises(ValueError):
            graph_from_dict(bad)
    with pytest.raises(ValueError):
        family_from_dict({"n": 2, "members": [[1, 5]]})


def test_dumps_byte_stable():
    sample = sample_pipeline(GeometricSchedule(alpha=0.5), 3, 55)
    doc = sample_to_dict(sample)
    text = dumps(doc)
    assert text == dumps(sample_to_dict(sample_pipeline(GeometricSchedule(alpha=0.5), 3, 55)))
    assert text.endswith("\n")
    assert json.loads(text) == doc
