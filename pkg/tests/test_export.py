import logging

import pytest

from discdiv.diversity import table_from_records
from discdiv.errors import DiscDivError
from discdiv.export import (export_journal_overlay, export_network, export_quadrants, export_scatter,
                            journal_overlay, read_network_edges, read_network_nodes)
from discdiv.graph import DisciplineGraph, JournalProfile
from discdiv.io import read_table
from discdiv.stats import spearman_rho


def test_network_files(tmp_path):
    g = DisciplineGraph.from_edges("meso", (), {("A.1", "B.1"): 2, ("A.1", "A.1"): 1})
    nodes, edges = export_network(g, tmp_path / "n.csv", tmp_path / "e.csv", meta={"seed": 3})
    header, rows = read_table(nodes)
    assert header == ["topic_code", "label", "cluster", "weight"]
    assert rows == [["A.1", "A.1", "A", "3"], ["B.1", "B.1", "B", "2"]]
    assert read_network_edges(edges) == {("A.1", "B.1"): 2}
    assert read_network_nodes(nodes) == ["A.1", "B.1"]
    assert nodes.read_text().startswith("# ")


def test_empty_network_is_header_only(tmp_path):
    g = DisciplineGraph.from_edges("meso", (), {})
    n, e = export_network(g, tmp_path / "n.csv", tmp_path / "e.csv")
    assert n.read_text() == "topic_code,label,cluster,weight\n"
    assert e.read_text() == "source,target,weight\n"


def test_overlay_rules(caplog):
    weights = lambda counts: {n.topic: n.normalized_weight for n in journal_overlay(
        JournalProfile.from_counts("J", "meso", counts))}
    assert weights({"1.1": 10, "1.2": 4, "2.1": 1}) == {"1.1": 1.0, "1.2": 0.0}
    assert weights({"1.1": 5}) == {"1.1": 1.0}
    with caplog.at_level(logging.WARNING):
        assert weights({"1.1": 1, "1.2": 1}) == {}
    assert "overlay is empty" in caplog.text


def test_overlay_file(tmp_path):
    prof = JournalProfile.from_counts("J1", "meso", {"3.4": 6, "3.5": 2, "7.1": 4})
    export_journal_overlay("J1", prof, tmp_path / "o.csv")
    header, rows = read_table(tmp_path / "o.csv")
    assert header == ["topic_code", "macro_parent", "paper_count", "normalized_weight"]
    assert rows == [["3.4", "3", "6", "1.0"], ["3.5", "3", "2", "0.0"], ["7.1", "7", "4", "0.5"]]
    with pytest.raises(DiscDivError):
        export_journal_overlay("J2", prof, tmp_path / "x.csv")


def test_scatter_and_quadrants(tmp_path):
    t = table_from_records([("J1", "a", True, 4, 1.1, 2.2, 3.3), ("J2", "b", False, 4, 1.0, 1.5, 1.4),
                            ("J3", "c", False, 4, 1.3, 1.2, 1.9)])
    export_scatter(t, "micro", "meso", tmp_path / "s.csv")
    header, rows = read_table(tmp_path / "s.csv")
    assert header == ["journal_id", "d_micro", "d_meso", "is_multidisciplinary"]
    assert len(rows) == len(t)
    assert spearman_rho([float(r[1]) for r in rows], [float(r[2]) for r in rows]) == spearman_rho(
        t.values("micro"), t.values("meso"))
    with pytest.raises(DiscDivError):
        export_scatter(t, "macro", "macro", tmp_path / "bad.csv")
    labels = {"J1": "high_macro_high_meso", "J2": "low_macro_low_meso", "J3": "high_macro_low_meso"}
    text = export_quadrants(t, labels, (1.1, 2.2), tmp_path / "q.csv", meta={"seed": 0}).read_text()
    assert "# macro_threshold: 1.1" in text and "J3,c,false,1.3,1.2,high_macro_low_meso" in text
