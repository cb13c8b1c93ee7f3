import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discdiv.diversity import table_from_records
from discdiv.errors import StatsError
from discdiv.stats import (consistency_report, default_thresholds, default_top_k, group_compare_report,
                           mann_whitney_two_sided, quadrant_classify, quadrant_label, spearman_rho, top_k,
                           top_k_overlap, write_consistency, write_group_report, write_group_values)

from oracles import average_ranks, mann_whitney_enumeration_p, pearson


def test_exact_p_matches_enumeration():
    rng = np.random.default_rng(0)
    for n_a in range(1, 8):
        for n_b in range(1, 8):
            for _ in range(3):
                pooled = rng.permutation(n_a + n_b).astype(float)
                a, b = pooled[:n_a].tolist(), pooled[n_a:].tolist()
                res = mann_whitney_two_sided(a, b)
                assert res.method == "exact"
                assert res.p_two_sided == mann_whitney_enumeration_p(a, b)


def test_u_statistics_complement():
    rng = np.random.default_rng(1)
    a, b = rng.normal(size=12), rng.normal(size=17)
    assert mann_whitney_two_sided(a, b).U + mann_whitney_two_sided(b, a).U == 12 * 17


def test_textbook_values():
    res = mann_whitney_two_sided([1, 2, 3], [4, 5, 6])
    assert res.U == 0 and res.p_two_sided == pytest.approx(0.1)
    res = mann_whitney_two_sided([1, 2, 3], [1, 2, 3])
    assert res.method == "normal_approx" and res.p_two_sided == 1.0
    res = mann_whitney_two_sided([5.0] * 10, [5.0] * 10)
    assert (res.z, res.p_two_sided) == (0.0, 1.0)


def test_normal_approximation_against_permutation():
    rng = np.random.default_rng(2)
    for _ in range(5):
        a = np.round(rng.normal(0.3, 1, 30), 1)
        b = np.round(rng.normal(0, 1, 30), 1)
        res = mann_whitney_two_sided(a, b)
        pooled = np.concatenate([a, b])
        from scipy.stats import rankdata
        ranks = rankdata(pooled)
        obs = abs(res.U - 450)
        perms = np.argsort(rng.random((20000, 60)), axis=1)[:, :30]
        u = ranks[perms].sum(axis=1) - 30 * 31 / 2
        mc = float((np.abs(u - 450) >= obs - 1e-9).mean())
        assert abs(res.p_two_sided - mc) < 0.02


def test_uniform_null_is_calibrated():
    rng = np.random.default_rng(3)
    small = sum(mann_whitney_two_sided(rng.random(40), rng.random(60)).p_two_sided <= 0.01 for _ in range(100))
    assert small <= 5


def test_mann_whitney_errors():
    with pytest.raises(StatsError):
        mann_whitney_two_sided([], [1.0])
    with pytest.raises(StatsError):
        mann_whitney_two_sided([np.nan], [1.0])


def test_spearman_examples():
    assert spearman_rho([1, 2, 3, 4, 5], [5, 6, 7, 8, 7]) == pytest.approx(0.8207826816681233)
    assert spearman_rho([1, 2, 3, 4, 5], [2, 1, 4, 3, 5]) == 0.8
    assert spearman_rho([1, 2, 3], [3, 2, 1]) == -1.0
    with pytest.raises(StatsError):
        spearman_rho([1, 1, 1], [1, 2, 3])
    with pytest.raises(StatsError):
        spearman_rho([1, 2], [1, 2, 3])


def test_spearman_with_ties_is_pearson_on_average_ranks():
    rng = np.random.default_rng(4)
    for _ in range(200):
        n = int(rng.integers(3, 40))
        x, y = rng.integers(0, 6, n).tolist(), rng.integers(0, 6, n).tolist()
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        assert abs(spearman_rho(x, y) - pearson(average_ranks(x), average_ranks(y))) <= 1e-12


@given(st.lists(st.integers(-10**6, 10**6), min_size=2, max_size=60, unique=True), st.randoms())
@settings(max_examples=100)
def test_spearman_tie_free_formula(x, rnd):
    y = list(x)
    rnd.shuffle(y)
    n = len(x)
    rx, ry = average_ranks(x), average_ranks(y)
    d2 = sum((a - b) ** 2 for a, b in zip(rx, ry))
    assert spearman_rho(x, y) == 1 - 6 * d2 / (n * (n * n - 1))


def test_top_k_and_overlap():
    a = {"J1": 3.0, "J2": 2.0, "J3": 2.0, "J4": 1.0}
    b = {"J1": 0.0, "J2": 5.0, "J3": 4.0, "J4": 6.0}
    assert top_k(a, 2) == ["J1", "J2"]
    assert top_k_overlap(a, b, 2) == 1
    assert top_k_overlap(a, b, 3) == 2
    assert top_k_overlap(a, b, 4) == 4
    for bad in (0, 5):
        with pytest.raises(StatsError):
            top_k_overlap(a, b, bad)
    with pytest.raises(StatsError):
        top_k_overlap(a, {"J1": 1.0}, 1)
    assert [default_top_k(n) for n in (1, 9, 50, 12225, 50000)] == [1, 1, 5, 1000, 1000]


def _table():
    return table_from_records([
        ("M1", "m1", True, 10, 1.6, 3.0, 4.0),
        ("M2", "m2", True, 10, 1.2, 2.0, 3.0),
        ("M3", "m3", True, 10, 1.4, 1.0, 2.0),
        ("O1", "o1", False, 10, 1.0, 1.1, 1.3),
        ("O2", "o2", False, 10, 1.1, 1.0, 1.2),
        ("O3", "o3", False, 10, 1.5, 2.5, 2.2),
    ])


def test_quadrants_use_multidisciplinary_medians():
    t = _table()
    assert default_thresholds(t) == (1.4, 2.0)
    labels = quadrant_classify(t)
    assert labels["M1"] == "high_macro_high_meso"
    assert labels["M2"] == "low_macro_high_meso"
    assert labels["M3"] == "high_macro_low_meso"
    assert labels["O1"] == "low_macro_low_meso"
    assert quadrant_classify(t, 1.0, 1.0)["O2"] == "high_macro_high_meso"
    assert quadrant_label(1.4, 1.99, 1.4, 2.0) == "high_macro_low_meso"


def test_quadrant_thresholds_fall_back_to_all_journals():
    t = table_from_records([("A", "a", False, 1, 1.0, 1.0, 1.0), ("B", "b", False, 1, 3.0, 2.0, 1.0)])
    assert default_thresholds(t) == (2.0, 1.5)


def test_group_report_and_files(tmp_path):
    t = _table()
    rep = group_compare_report(t)
    macro = rep.level("macro")
    assert (macro.n_multi, macro.n_other) == (3, 3)
    assert macro.median_multi == 1.4 and macro.median_other == 1.1
    assert macro.test.method == "exact"
    write_group_report(rep, tmp_path / "g.csv", meta={"seed": 0})
    write_group_values(rep, t, tmp_path / "v.csv")
    assert len((tmp_path / "v.csv").read_text().splitlines()) == 1 + 18
    with pytest.raises(StatsError):
        group_compare_report(table_from_records([("A", "a", True, 1, 1.0, 1.0, 1.0)]))


def test_consistency_report(tmp_path):
    t = _table()
    rep = consistency_report(t, k=2)
    assert set(rep.spearman) == {("macro", "meso"), ("macro", "micro"), ("meso", "micro")}
    assert rep.spearman[("meso", "micro")] == pytest.approx(
        pearson(average_ranks(list(t.values("meso"))), average_ranks(list(t.values("micro")))), abs=1e-12)
    assert rep.overlap[("macro", "meso")] == 2
    multi = consistency_report(t, subset_mask=t.multidisciplinary_mask)
    assert multi.k == 1
    write_consistency(rep, multi, tmp_path / "c.csv")
    assert len((tmp_path / "c.csv").read_text().splitlines()) == 7
