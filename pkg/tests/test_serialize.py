from __future__ import annotations

import numpy as np
import pytest

from ctxcert import analysis, serialize
from ctxcert.experiment import CountTable
from ctxcert.graphstate import star_graph


def test_family_roundtrip(family3, tmp_path):
    payload = serialize.family_to_dict(family3)
    assert set(payload) >= {"ambient_dim", "contexts", "projectors"}
    assert len(payload["projectors"]) == 16
    assert all(len(p["ray"]) == 8 and len(p["ray"][0]) == 2
               for p in payload["projectors"])
    back = serialize.family_from_dict(payload)
    assert np.allclose(back.rays, family3.rays)
    assert back.contexts == family3.contexts


def test_graph_roundtrip(graph3):
    back = serialize.graph_from_dict(serialize.graph_to_dict(graph3))
    assert back.edge_set() == graph3.edge_set()


def test_edge_list_text_roundtrip(graph3):
    text = serialize.graph_to_edge_list(graph3)
    back = serialize.graph_from_edge_list(text)
    assert back.n_vertices == 16
    assert back.edge_set() == graph3.edge_set()


def test_load_graph_detects_format(tmp_path, graph3):
    json_path = tmp_path / "g.json"
    serialize.write_json(serialize.graph_to_dict(graph3), json_path)
    txt_path = tmp_path / "g.txt"
    txt_path.write_text(serialize.graph_to_edge_list(graph3))
    assert serialize.load_graph(json_path).edge_set() == graph3.edge_set()
    assert serialize.load_graph(txt_path).edge_set() == graph3.edge_set()


def test_graphspec_roundtrip():
    spec = star_graph(5)
    back = serialize.graphspec_from_dict(serialize.graphspec_to_dict(spec))
    assert back.n == 5
    assert np.array_equal(back.adjacency, spec.adjacency)
    assert back.universal_vertex == 0


def test_counts_roundtrip(tmp_path):
    table = CountTable(records={("psi", "v1"): (10, 90),
                                ("post1:v2", "v3"): (5, 95)},
                       shots_nominal=100, normalization="reference")
    path = tmp_path / "counts.csv"
    serialize.counts_to_csv(table, path)
    back = serialize.counts_from_csv(path)
    assert back.records == table.records
    assert back.shots_nominal == 100
    assert back.normalization == "reference"


def test_counts_malformed_row_reports_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("prep_id,meas_id,count_1,count_0\npsi,v1,3,nope\n")
    with pytest.raises(ValueError, match="line 2"):
        serialize.counts_from_csv(path)


def test_counts_empty_rejected(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("prep_id,meas_id,count_1,count_0\n")
    with pytest.raises(ValueError, match="no count records"):
        serialize.counts_from_csv(path)


def test_bundle_roundtrip():
    bundle = analysis.ProbabilityBundle(
        {0: 0.25, 1: 0.5}, {(0, 1): 0.01}, {(0, 1): 0.33}, provenance="fixture")
    back = serialize.bundle_from_dict(serialize.bundle_to_dict(bundle))
    assert back.p_vertex == bundle.p_vertex
    assert back.p_cond1 == bundle.p_cond1
    assert back.p_cond0 == bundle.p_cond0
    assert back.provenance == "fixture"


def test_config_hash_stability():
    a = serialize.config_hash({"n": 3, "seed": 0})
    b = serialize.config_hash({"seed": 0, "n": 3})
    c = serialize.config_hash({"seed": 1, "n": 3})
    assert a == b != c
