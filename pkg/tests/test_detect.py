import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from discdiv.detect import (distance_distribution, distance_to_ideal, fraction_above, min_max_normalize,
                            rank_potential_multidisciplinary)
from discdiv.diversity import table_from_records
from discdiv.errors import DetectError


def test_min_max_examples():
    assert min_max_normalize([1, 2, 3]).values.tolist() == [0, 0.5, 1]
    assert min_max_normalize([-1, 1]).values.tolist() == [0, 1]
    flat = min_max_normalize([7, 7, 7])
    assert flat.values.tolist() == [0, 0, 0] and flat.degenerate
    with pytest.raises(DetectError):
        min_max_normalize([])


def test_distance_examples():
    assert distance_to_ideal(1, 1) == 0.0
    assert distance_to_ideal(0, 0) == pytest.approx(math.sqrt(2))
    assert distance_to_ideal(0.5, 1) == 0.5
    assert distance_to_ideal(np.array([1.0, 0.0]), np.array([1.0, 1.0])).tolist() == [0.0, 1.0]
    for bad in ((1.2, 0.5), (-0.1, 0.5), (float("nan"), 0.5)):
        with pytest.raises(DetectError):
            distance_to_ideal(*bad)


def _table(rows):
    return table_from_records([(jid, jid.lower(), multi, 5, mac, meso, 1.0) for jid, multi, mac, meso in rows])


def test_broad_journal_at_global_max_ranks_first():
    t = _table([("M1", True, 2.0, 3.0), ("S1", False, 1.0, 1.0), ("B1", False, 2.5, 4.0), ("S2", False, 1.2, 1.5)])
    ranking = rank_potential_multidisciplinary(t)
    assert ranking.journal_ids == ["B1", "S2", "S1"]
    assert ranking.rows[0].distance == 0.0 and ranking.rows[0].rank == 1
    assert all(a.distance <= b.distance for a, b in zip(ranking.rows, ranking.rows[1:]))
    assert rank_potential_multidisciplinary(t, top_n=1).journal_ids == ["B1"]


def test_ties_ordered_by_id_and_degenerate_flag():
    t = _table([("Z", False, 1.0, 2.0), ("A", False, 1.0, 2.0), ("M", True, 1.0, 3.0)])
    ranking = rank_potential_multidisciplinary(t)
    assert ranking.journal_ids == ["A", "Z"]
    assert ranking.degenerate_macro and not ranking.degenerate_meso


def test_distance_distribution():
    t = _table([("M", True, 1.0, 1.0), ("A", False, 0.0, 0.0), ("B", False, 0.5, 0.5), ("C", False, 0.9, 0.9)])
    curve = distance_distribution(t)
    assert curve.distances.tolist() == sorted(curve.distances.tolist())
    assert curve.fraction_above == pytest.approx(2 / 3)
    assert distance_distribution(t, journal_ids=["C"]).distances.tolist() == pytest.approx([0.1 * math.sqrt(2)])
    assert fraction_above([0.2, 0.7, 0.9]) == pytest.approx(2 / 3)
    assert fraction_above([0.6]) == 0.0
    only_multi = _table([("M", True, 1.0, 1.0), ("N", True, 2.0, 2.0)])
    assert distance_distribution(only_multi).distances.size == 0


def test_too_few_journals():
    with pytest.raises(DetectError):
        rank_potential_multidisciplinary(_table([("A", False, 1.0, 1.0)]))


# grid values keep the affine map free of absorption when shift dwarfs spread
@given(st.lists(st.tuples(st.integers(0, 1000), st.integers(0, 1000)), min_size=3, max_size=25),
       st.floats(0.1, 100), st.floats(-50, 50))
def test_ranking_is_affine_invariant(points, scale, shift):
    rows = [(f"J{i:02d}", i == 0, x / 100, y / 100) for i, (x, y) in enumerate(points)]
    t1 = _table(rows)
    t2 = _table([(j, m, x * scale + shift, y) for j, m, x, y in rows])
    r1, r2 = rank_potential_multidisciplinary(t1, None), rank_potential_multidisciplinary(t2, None)
    d1 = np.array([c.distance for c in r1])
    d2 = np.array([c.distance for c in r2])
    assert np.allclose(np.sort(d1), np.sort(d2), atol=1e-9)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_distance_monotone(x, y, dx):
    assert distance_to_ideal(min(1.0, x + dx), y) <= distance_to_ideal(x, y)
