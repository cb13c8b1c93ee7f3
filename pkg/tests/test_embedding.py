import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from discdiv.embedding import (EmbeddingMatrix, TrainParams, WalkParams, WalkSet, cosine_similarity_matrix, read_similarity,
                               read_similarity_triplets, write_similarity, write_similarity_triplets,
                               embed_graph, generate_walks, precompute_transitions, read_embeddings, read_walks,
                               train_sgns, write_embeddings, write_walks)
from discdiv.embedding import _backend
from discdiv.errors import EmbeddingError
from discdiv.graph import DisciplineGraph


def graph(edges, nodes=()):
    return DisciplineGraph.from_edges("macro", nodes, edges)


PATH = graph({("1", "2"): 1, ("2", "3"): 1})
TRIANGLE = graph({("1", "2"): 1, ("2", "3"): 1, ("1", "3"): 1})
STAR = graph({("1", "2"): 1, ("1", "3"): 1, ("1", "4"): 1, ("1", "5"): 1})
SQUARE_DIAG = graph({("1", "2"): 3, ("2", "3"): 1, ("3", "4"): 2, ("4", "1"): 1, ("1", "3"): 5})


def reconstruct(prob, alias):
    n = len(prob)
    out = np.array(prob, dtype=np.float64)
    for j in range(n):
        if alias[j] != j:
            out[alias[j]] += 1.0 - prob[j]
    return out / n


def test_path_bias_example_is_exact(kernels):
    t = precompute_transitions(PATH, WalkParams(p=2.0, q=0.5), kernels=kernels)
    assert t.distribution("1", "2") == {"1": 0.2, "3": 0.8}
    assert t.distribution("3", "2") == {"1": 0.8, "3": 0.2}
    assert t.first_step("2") == {"1": 0.5, "3": 0.5}


def test_triangle_neighbour_of_prev_gets_unit_weight(kernels):
    t = precompute_transitions(TRIANGLE, WalkParams(p=4.0, q=0.25), kernels=kernels)
    # back to 1 weighs 1/4, on to 3 (adjacent to 1) weighs 1
    assert t.distribution("1", "2") == pytest.approx({"1": 0.2, "3": 0.8}, abs=1e-15)


def test_rows_sum_to_one_and_alias_reconstructs(kernels):
    rng = np.random.default_rng(3)
    edges = {}
    for a in range(1, 13):
        for b in range(a + 1, 13):
            if rng.random() < 0.4:
                edges[(str(a), str(b))] = int(rng.integers(1, 50))
    t = precompute_transitions(graph(edges), WalkParams(p=0.3, q=3.0), kernels=kernels)
    for v in range(len(t.nodes)):
        lo, hi = t.indptr[v], t.indptr[v + 1]
        if hi > lo:
            assert abs(t.node_dist[lo:hi].sum() - 1.0) <= 1e-12
            assert np.allclose(reconstruct(t.node_prob[lo:hi], t.node_alias[lo:hi]), t.node_dist[lo:hi], atol=1e-12)
    for e in range(len(t.indices)):
        lo, hi = t.edge_ptr[e], t.edge_ptr[e + 1]
        assert abs(t.edge_dist[lo:hi].sum() - 1.0) <= 1e-12
        assert np.allclose(reconstruct(t.edge_prob[lo:hi], t.edge_alias[lo:hi]), t.edge_dist[lo:hi], atol=1e-12)


def test_unbiased_walk_matches_edge_weights():
    params = WalkParams(p=1.0, q=1.0, walk_length=501, walks_per_node=50, seed=11)
    walks = generate_walks(SQUARE_DIAG, params)
    counts = np.zeros((4, 4))
    for w in walks:
        for a, b in zip(w[:-1], w[1:]):
            counts[int(a) - 1, int(b) - 1] += 1
    assert counts.sum() == 100_000
    indptr, indices, weights = SQUARE_DIAG.csr()
    for v in range(4):
        nbrs = indices[indptr[v]:indptr[v + 1]]
        w = weights[indptr[v]:indptr[v + 1]]
        observed = counts[v, nbrs]
        expected = observed.sum() * w / w.sum()
        assert chisquare(observed, expected).pvalue > 1e-3
        assert counts[v, [u for u in range(4) if u not in nbrs]].sum() == 0


def test_star_walks_alternate_through_hub():
    walks = generate_walks(STAR, WalkParams(walk_length=9, walks_per_node=3, seed=2))
    assert len(walks) == 15
    for w in walks:
        hub_positions = [i for i, node in enumerate(w) if node == "1"]
        assert hub_positions == list(range(0 if w[0] == "1" else 1, 9, 2))


def test_walk_layout_and_starts():
    params = WalkParams(walk_length=6, walks_per_node=4, seed=5)
    walks = generate_walks(TRIANGLE, params)
    assert len(walks) == 12
    assert [w[0] for w in walks] == ["1", "2", "3"] * 4
    assert set(walks.lengths.tolist()) == {6}


def test_isolated_node_gives_single_node_walks():
    g = graph({("1", "1"): 4})
    walks = generate_walks(g, WalkParams(walk_length=10, walks_per_node=3))
    assert [list(w) for w in walks] == [["1"]] * 3
    emb = train_sgns(walks, TrainParams(dimensions=8, epochs=1))
    assert cosine_similarity_matrix(emb).values.tolist() == [[1.0]]


def test_self_loops_optional():
    g = graph({("1", "1"): 4, ("1", "2"): 1})
    t = precompute_transitions(g, WalkParams(include_self_loops=True))
    assert t.first_step("1") == {"1": 0.8, "2": 0.2}
    assert precompute_transitions(g).first_step("1") == {"2": 1.0}


def test_walks_are_seed_deterministic_and_thread_independent():
    a = generate_walks(SQUARE_DIAG, WalkParams(walk_length=20, walks_per_node=5, seed=9))
    b = generate_walks(SQUARE_DIAG, WalkParams(walk_length=20, walks_per_node=5, seed=9, threads=4))
    c = generate_walks(SQUARE_DIAG, WalkParams(walk_length=20, walks_per_node=5, seed=10))
    assert np.array_equal(a.tokens, b.tokens)
    assert not np.array_equal(a.tokens, c.tokens)


@pytest.mark.skipif(_backend.BACKEND != "cython", reason="compiled kernels not built")
def test_backends_agree_bitwise():
    py, cy = _backend.python_kernels, _backend.kernels
    assert [py.stream(7, 1, 2), py.mix64(12345)] == [cy.stream(7, 1, 2), cy.mix64(12345)]
    assert np.array_equal(py.uniforms(99, 50), cy.uniforms(99, 50))
    wp = WalkParams(p=0.5, q=2.0, walk_length=15, walks_per_node=3, seed=4)
    tp = TrainParams(dimensions=8, window=3, negative_samples=3, epochs=2, seed=4)
    tpy = precompute_transitions(SQUARE_DIAG, wp, kernels=py)
    tcy = precompute_transitions(SQUARE_DIAG, wp, kernels=cy)
    for name in ("node_dist", "node_prob", "node_alias", "edge_dist", "edge_prob", "edge_alias"):
        assert np.array_equal(getattr(tpy, name), getattr(tcy, name)), name
    wpy = generate_walks(SQUARE_DIAG, wp, kernels=py)
    wcy = generate_walks(SQUARE_DIAG, wp, kernels=cy)
    assert np.array_equal(wpy.tokens, wcy.tokens)
    assert np.array_equal(train_sgns(wpy, tp, kernels=py).vectors, train_sgns(wcy, tp, kernels=cy).vectors)


def test_training_is_deterministic(kernels):
    walks = generate_walks(TRIANGLE, WalkParams(walk_length=10, walks_per_node=2, seed=1), kernels=kernels)
    tp = TrainParams(dimensions=6, window=2, epochs=1, seed=3)
    a = train_sgns(walks, tp, kernels=kernels).vectors
    assert np.array_equal(a, train_sgns(walks, tp, kernels=kernels).vectors)
    assert a.shape == (3, 6) and np.isfinite(a).all()


def two_block_graph(seed, size=20, p_in=0.3, p_out=0.02):
    rng = np.random.default_rng(seed)
    edges = {}
    n = 2 * size
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < (p_in if (i < size) == (j < size) else p_out):
                edges[(str(i + 1), str(j + 1))] = 1
    return graph(edges, nodes=[str(i + 1) for i in range(n)])


def test_planted_blocks_separate():
    g = two_block_graph(0)
    _, _, sim = embed_graph(g, WalkParams(walk_length=40, walks_per_node=10, seed=0),
                            TrainParams(dimensions=16, window=5, epochs=3, seed=0))
    raw = sim.values
    block = np.arange(40) < 20
    same = block[:, None] == block[None, :]
    off = ~np.eye(40, dtype=bool)
    assert raw[same & off].mean() > raw[~same].mean()


def test_similarity_clamps_and_fixes_diagonal():
    emb = EmbeddingMatrix("macro", ("1", "2", "3"), np.array([[1.0, 0.0], [-1.0, 0.0], [1.0, 1.0]]))
    s = cosine_similarity_matrix(emb)
    assert s.values[0, 1] == 0.0
    assert s["1", "3"] == pytest.approx(2 ** -0.5)
    assert np.array_equal(s.values, s.values.T)
    assert np.diag(s.values).tolist() == [1.0, 1.0, 1.0]
    raw = cosine_similarity_matrix(emb, clamp=False)
    assert raw.values[0, 1] == -1.0
    assert s.restrict(["3", "1"]).tolist() == [[1.0, s["1", "3"]], [s["1", "3"], 1.0]]
    with pytest.raises(KeyError):
        s.restrict(["9"])


def test_zero_vector_is_an_error():
    emb = EmbeddingMatrix("macro", ("1", "2"), np.array([[1.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(EmbeddingError, match="'2'"):
        cosine_similarity_matrix(emb)


@given(st.lists(st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3), min_size=1, max_size=8))
@settings(max_examples=50)
def test_similarity_properties(rows):
    v = np.array(rows)
    if (np.linalg.norm(v, axis=1) == 0).any():
        return
    s = cosine_similarity_matrix(EmbeddingMatrix("macro", tuple(str(i + 1) for i in range(len(v))), v)).values
    assert ((s >= 0) & (s <= 1)).all()
    assert np.array_equal(s, s.T)
    assert (np.diag(s) == 1).all()


@pytest.mark.parametrize("bad", [dict(p=0.0), dict(q=-1.0), dict(walk_length=1), dict(walks_per_node=0)])
def test_walk_param_validation(bad):
    with pytest.raises(EmbeddingError):
        WalkParams(**bad)


def test_unvisited_node_is_an_error():
    walks = WalkSet.from_walks(("1", "2", "3"), [["1", "2"]])
    with pytest.raises(EmbeddingError, match="3"):
        train_sgns(walks, TrainParams(dimensions=4))


def test_walk_and_embedding_files_roundtrip(tmp_path):
    walks = generate_walks(TRIANGLE, WalkParams(walk_length=5, walks_per_node=2))
    write_walks(walks, tmp_path / "w.txt", meta={"seed": 0})
    back = read_walks(tmp_path / "w.txt", TRIANGLE.nodes)
    assert np.array_equal(back.tokens, walks.tokens) and np.array_equal(back.offsets, walks.offsets)
    emb = train_sgns(walks, TrainParams(dimensions=4, epochs=1))
    write_embeddings(emb, tmp_path / "e.txt", meta={"seed": 0})
    got = read_embeddings(tmp_path / "e.txt", level="macro")
    assert got.nodes == emb.nodes and np.array_equal(got.vectors, emb.vectors)
    sim = cosine_similarity_matrix(emb)
    write_similarity(sim, tmp_path / "s.csv")
    assert np.array_equal(read_similarity(tmp_path / "s.csv").values, sim.values)
    write_similarity_triplets(sim, tmp_path / "t.csv")
    assert np.array_equal(read_similarity_triplets(tmp_path / "t.csv", sim.nodes).values, sim.values)


def test_environment_forces_pure_python_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, DISCDIV_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from discdiv.embedding import BACKEND; print(BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
