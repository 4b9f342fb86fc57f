from __future__ import annotations

import numpy as np
import pytest

from ctxcert import fixtures


def test_checksums_verify():
    sums = fixtures.fixture_checksums()
    assert set(sums) == set(fixtures.CHECKSUMS)


def test_tampering_detected(monkeypatch):
    monkeypatch.setitem(fixtures.CHECKSUMS, "reference_edges.csv", "0" * 64)
    with pytest.raises(RuntimeError, match="checksum"):
        fixtures.reference_edges()


def test_rays_are_unit_and_real(reference):
    assert reference.rays.shape == (16, 7)
    assert np.allclose(np.linalg.norm(reference.rays, axis=1), 1.0, atol=1e-15)
    assert np.linalg.norm(reference.state) == pytest.approx(1.0, abs=1e-15)


def test_surd_parser():
    assert fixtures._parse_surd("1/2") == 0.5
    assert fixtures._parse_surd("-1/sqrt(8)") == pytest.approx(-1 / np.sqrt(8))
    assert fixtures._parse_surd("0") == 0.0
    with pytest.raises(ValueError):
        fixtures._parse_surd("pi/4")


def test_edges_count(reference):
    assert len(reference.edges) == 72
    assert all(0 <= i < j < 16 for i, j in reference.edges)


def test_vertex_probability_table(reference):
    assert len(reference.p_vertex) == 16
    total = sum(p for p, _ in reference.p_vertex.values())
    assert total == pytest.approx(3.9351, abs=1e-12)


def test_conditionals_cover_both_directions(reference):
    assert len(reference.p_cond1) == 144
    assert len(reference.p_cond0) == 144
    for i, j in reference.edges:
        assert (i, j) in reference.p_cond1 and (j, i) in reference.p_cond1


def test_count_table_reconstruction():
    table = fixtures.reference_count_table()
    assert table.normalization == "reference"
    assert table.shots_nominal == fixtures.NOMINAL_SHOTS
    assert len(table.records) == 16 + 2 * 144
    c1, c0 = table.records[("psi", "v1")]
    assert c1 == round(0.2384 * fixtures.NOMINAL_SHOTS)
    assert c1 + c0 == fixtures.NOMINAL_SHOTS
