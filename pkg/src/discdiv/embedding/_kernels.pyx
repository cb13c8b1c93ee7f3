# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False, nonecheck=False
"""Compiled node2vec kernels: alias tables, biased walks, skip-gram training.

Every function here has a line-for-line twin in ``_pykernels.py``; the two
must stay in step so both backends produce identical numbers.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport parallel, prange
from libc.math cimport exp
from libc.stdint cimport int32_t, int64_t, uint64_t
from libc.stdlib cimport free, malloc

cnp.import_array()

BACKEND = "cython"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX_A = 0x632BE59BD9B4E019ULL
cdef uint64_t MIX_B = 0xD1B54A32D192ED03ULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0
cdef double MAX_EXP = 6.0


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t _stream(uint64_t seed, uint64_t a, uint64_t b) noexcept nogil:
    cdef uint64_t x = _mix64(seed + GOLDEN)
    x = _mix64(x ^ (a + MIX_A))
    return _mix64(x ^ (b * GOLDEN + MIX_B))


cdef inline double _uniform(uint64_t* state) noexcept nogil:
    state[0] += GOLDEN
    return <double>(_mix64(state[0]) >> 11) * TWO_M53


cdef inline int64_t _draw(const double* prob, const int32_t* alias, int64_t n, uint64_t* state) noexcept nogil:
    cdef int64_t k = <int64_t>(_uniform(state) * n)
    if k >= n:
        k = n - 1
    if _uniform(state) < prob[k]:
        return k
    return alias[k]


def mix64(uint64_t z):
    return _mix64(z)


def stream(uint64_t seed, uint64_t a, uint64_t b):
    return _stream(seed, a, b)


def uniforms(uint64_t state, Py_ssize_t count):
    """First ``count`` uniforms of a stream started at ``state`` (for cross-backend checks)."""
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in range(count):
        o[i] = _uniform(&state)
    return out


cdef int _vose(const double* w, int64_t n, double* norm, double* prob, int32_t* alias,
               double* scaled, int32_t* small, int32_t* large) noexcept nogil:
    cdef double total = 0.0
    cdef int64_t i, ns = 0, nl = 0
    cdef int32_t l, g
    for i in range(n):
        total += w[i]
    if not total > 0.0:
        return -1
    for i in range(n):
        norm[i] = w[i] / total
        scaled[i] = w[i] * <double>n / total
    for i in range(n):
        if scaled[i] < 1.0:
            small[ns] = <int32_t>i
            ns += 1
        else:
            large[nl] = <int32_t>i
            nl += 1
    while ns > 0 and nl > 0:
        ns -= 1
        l = small[ns]
        nl -= 1
        g = large[nl]
        prob[l] = scaled[l]
        alias[l] = g
        scaled[g] = (scaled[g] + scaled[l]) - 1.0
        if scaled[g] < 1.0:
            small[ns] = g
            ns += 1
        else:
            large[nl] = g
            nl += 1
    while nl > 0:
        nl -= 1
        g = large[nl]
        prob[g] = 1.0
        alias[g] = g
    while ns > 0:
        ns -= 1
        l = small[ns]
        prob[l] = 1.0
        alias[l] = l
    return 0


def build_alias(weights):
    """Vose alias table for unnormalised ``weights``: returns (probabilities, prob, alias)."""
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef int64_t n = w.shape[0]
    norm = np.zeros(n, dtype=np.float64)
    prob = np.zeros(n, dtype=np.float64)
    alias = np.zeros(n, dtype=np.int32)
    scaled = np.empty(n, dtype=np.float64)
    small = np.empty(n, dtype=np.int32)
    large = np.empty(n, dtype=np.int32)
    cdef double[::1] nv = norm, pv = prob, sv = scaled
    cdef int32_t[::1] av = alias, smv = small, lgv = large
    if n == 0:
        return norm, prob, alias
    if _vose(&w[0], n, &nv[0], &pv[0], &av[0], &sv[0], &smv[0], &lgv[0]) != 0:
        raise ValueError("alias weights must have a positive sum")
    return norm, prob, alias


def build_transitions(const int64_t[::1] indptr, const int32_t[::1] indices,
                      const double[::1] weights, const int64_t[::1] edge_ptr,
                      double p, double q):
    """Second-order transition tables for every directed CSR entry (prev -> cur).

    Returns ``(node_norm, node_prob, node_alias, edge_norm, edge_prob, edge_alias)``;
    node tables align with CSR entries, edge tables are sliced by ``edge_ptr``.
    """
    cdef int64_t n = indptr.shape[0] - 1
    cdef int64_t m = indices.shape[0]
    cdef int64_t total = edge_ptr[m]
    cdef int64_t max_deg = 0, v, d, prev, e, cur, k, off, base, x
    for v in range(n):
        d = indptr[v + 1] - indptr[v]
        if d > max_deg:
            max_deg = d
    node_norm = np.zeros(m, dtype=np.float64)
    node_prob = np.zeros(m, dtype=np.float64)
    node_alias = np.zeros(m, dtype=np.int32)
    edge_norm = np.zeros(total, dtype=np.float64)
    edge_prob = np.zeros(total, dtype=np.float64)
    edge_alias = np.zeros(total, dtype=np.int32)
    if m == 0:
        return node_norm, node_prob, node_alias, edge_norm, edge_prob, edge_alias
    cdef double[::1] nn = node_norm, np_ = node_prob, en = edge_norm, ep = edge_prob
    cdef int32_t[::1] na = node_alias, ea = edge_alias
    mark_arr = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] mark = mark_arr
    tmp_arr = np.empty(max_deg, dtype=np.float64)
    scaled_arr = np.empty(max_deg, dtype=np.float64)
    small_arr = np.empty(max_deg, dtype=np.int32)
    large_arr = np.empty(max_deg, dtype=np.int32)
    cdef double[::1] tmp = tmp_arr, scaled = scaled_arr
    cdef int32_t[::1] small = small_arr, large = large_arr
    cdef double w
    with nogil:
        for v in range(n):
            d = indptr[v + 1] - indptr[v]
            if d > 0:
                _vose(&weights[indptr[v]], d, &nn[indptr[v]], &np_[indptr[v]], &na[indptr[v]],
                      &scaled[0], &small[0], &large[0])
        for prev in range(n):
            for e in range(indptr[prev], indptr[prev + 1]):
                mark[indices[e]] = prev
            for e in range(indptr[prev], indptr[prev + 1]):
                cur = indices[e]
                base = indptr[cur]
                d = indptr[cur + 1] - base
                off = edge_ptr[e]
                for k in range(d):
                    x = indices[base + k]
                    w = weights[base + k]
                    if x == prev:
                        tmp[k] = w / p
                    elif mark[x] == prev:
                        tmp[k] = w
                    else:
                        tmp[k] = w / q
                _vose(&tmp[0], d, &en[off], &ep[off], &ea[off], &scaled[0], &small[0], &large[0])
    return node_norm, node_prob, node_alias, edge_norm, edge_prob, edge_alias


cdef void _walk(int64_t start, int64_t walk_length, uint64_t state,
                const int64_t* indptr, const int32_t* indices,
                const double* node_prob, const int32_t* node_alias,
                const int64_t* edge_ptr, const double* edge_prob, const int32_t* edge_alias,
                int32_t* out, int32_t* length) noexcept nogil:
    cdef int64_t cur = start, d, k, e
    cdef int64_t n_out = 1
    out[0] = <int32_t>start
    d = indptr[cur + 1] - indptr[cur]
    if d == 0 or walk_length < 2:
        length[0] = 1
        return
    k = _draw(&node_prob[indptr[cur]], &node_alias[indptr[cur]], d, &state)
    e = indptr[cur] + k
    cur = indices[e]
    out[1] = <int32_t>cur
    n_out = 2
    while n_out < walk_length:
        d = indptr[cur + 1] - indptr[cur]
        if d == 0:
            break
        k = _draw(&edge_prob[edge_ptr[e]], &edge_alias[edge_ptr[e]], d, &state)
        e = indptr[cur] + k
        cur = indices[e]
        out[n_out] = <int32_t>cur
        n_out += 1
    length[0] = <int32_t>n_out


def random_walks(const int64_t[::1] indptr, const int32_t[::1] indices,
                 const double[::1] node_prob, const int32_t[::1] node_alias,
                 const int64_t[::1] edge_ptr, const double[::1] edge_prob,
                 const int32_t[::1] edge_alias,
                 int64_t walk_length, int64_t walks_per_node, uint64_t seed, int n_threads=1):
    """``walks_per_node`` rounds over all nodes; walk ``r*n + v`` starts at ``v``.

    Each walk draws from its own stream ``stream(seed, r, v)``, so the
    result does not depend on ``n_threads``.
    """
    cdef int64_t n = indptr.shape[0] - 1
    cdef int64_t n_walks = n * walks_per_node
    walks = np.zeros((n_walks, walk_length), dtype=np.int32)
    lengths = np.zeros(n_walks, dtype=np.int32)
    if n_walks == 0:
        return walks, lengths
    cdef int32_t[:, ::1] wv = walks
    cdef int32_t[::1] lv = lengths
    cdef int64_t i
    # empty tables still need a valid pointer
    cdef double dummy_d = 0.0
    cdef int32_t dummy_i = 0
    cdef const double* npp = &node_prob[0] if node_prob.shape[0] else &dummy_d
    cdef const int32_t* nap = &node_alias[0] if node_alias.shape[0] else &dummy_i
    cdef const double* epp = &edge_prob[0] if edge_prob.shape[0] else &dummy_d
    cdef const int32_t* eap = &edge_alias[0] if edge_alias.shape[0] else &dummy_i
    cdef const int32_t* ip = &indices[0] if indices.shape[0] else &dummy_i
    if n_threads <= 1:
        with nogil:
            for i in range(n_walks):
                _walk(i % n, walk_length, _stream(seed, <uint64_t>(i // n), <uint64_t>(i % n)),
                      &indptr[0], ip, npp, nap, &edge_ptr[0], epp, eap, &wv[i, 0], &lv[i])
    else:
        for i in prange(n_walks, nogil=True, num_threads=n_threads, schedule="static"):
            _walk(i % n, walk_length, _stream(seed, <uint64_t>(i // n), <uint64_t>(i % n)),
                  &indptr[0], ip, npp, nap, &edge_ptr[0], epp, eap, &wv[i, 0], &lv[i])
    return walks, lengths


cdef void _train_walk(const int32_t* tokens, int64_t start, int64_t length,
                      int64_t processed0, double denom, double lr0, double lr_min,
                      double* syn0, double* syn1, double* neu1e, int64_t dim,
                      int64_t window, int64_t negatives, int64_t n_nodes,
                      const double* neg_prob, const int32_t* neg_alias,
                      uint64_t state) noexcept nogil:
    cdef int64_t pos, j, lo, hi, s, d, target, center, ctx
    cdef double alpha, f, g, label
    cdef double* c_vec
    cdef double* t_vec
    for pos in range(length):
        alpha = lr0 * (1.0 - <double>(processed0 + pos) / denom)
        if alpha < lr_min:
            alpha = lr_min
        center = tokens[start + pos]
        c_vec = syn0 + center * dim
        lo = pos - window
        if lo < 0:
            lo = 0
        hi = pos + window
        if hi > length - 1:
            hi = length - 1
        for j in range(lo, hi + 1):
            if j == pos:
                continue
            ctx = tokens[start + j]
            for d in range(dim):
                neu1e[d] = 0.0
            for s in range(negatives + 1):
                if s == 0:
                    target = ctx
                    label = 1.0
                else:
                    target = _draw(neg_prob, neg_alias, n_nodes, &state)
                    if target == ctx:
                        continue
                    label = 0.0
                t_vec = syn1 + target * dim
                f = 0.0
                for d in range(dim):
                    f += c_vec[d] * t_vec[d]
                if f > MAX_EXP:
                    g = (label - 1.0) * alpha
                elif f < -MAX_EXP:
                    g = (label - 0.0) * alpha
                else:
                    g = (label - 1.0 / (1.0 + exp(-f))) * alpha
                for d in range(dim):
                    neu1e[d] += g * t_vec[d]
                for d in range(dim):
                    t_vec[d] += g * c_vec[d]
            for d in range(dim):
                c_vec[d] += neu1e[d]


def train_sgns(const int32_t[::1] tokens, const int64_t[::1] offsets, int64_t n_nodes,
               int64_t dim, int64_t window, int64_t negatives, int64_t epochs,
               double lr0, double lr_min_ratio, const double[::1] neg_prob,
               const int32_t[::1] neg_alias, uint64_t seed, int n_threads=1):
    """Skip-gram with negative sampling over walks ``tokens[offsets[i]:offsets[i+1]]``.

    With ``n_threads > 1`` walks are trained concurrently with unsynchronised
    (Hogwild-style) updates; results then vary from run to run.
    """
    cdef int64_t n_walks = offsets.shape[0] - 1
    cdef int64_t total = offsets[n_walks]
    cdef double denom = <double>(epochs * total + 1)
    cdef double lr_min = lr0 * lr_min_ratio
    syn0_arr = np.empty((n_nodes, dim), dtype=np.float64)
    syn1_arr = np.zeros((n_nodes, dim), dtype=np.float64)
    cdef double[:, ::1] syn0 = syn0_arr
    cdef double[:, ::1] syn1 = syn1_arr
    cdef uint64_t st = _stream(seed, 0, 0)
    cdef int64_t i, d, epoch, w
    for i in range(n_nodes):
        for d in range(dim):
            syn0[i, d] = (_uniform(&st) - 0.5) / <double>dim
    if n_walks == 0 or total == 0 or n_nodes == 0:
        return syn0_arr
    cdef double* neu1e
    cdef const int32_t* tp = &tokens[0]
    for epoch in range(epochs):
        if n_threads <= 1:
            neu1e = <double*>malloc(dim * sizeof(double))
            with nogil:
                for w in range(n_walks):
                    _train_walk(tp, offsets[w], offsets[w + 1] - offsets[w],
                                epoch * total + offsets[w], denom, lr0, lr_min,
                                &syn0[0, 0], &syn1[0, 0], neu1e, dim, window, negatives, n_nodes,
                                &neg_prob[0], &neg_alias[0],
                                _stream(seed, <uint64_t>(epoch + 1), <uint64_t>w))
            free(neu1e)
        else:
            with nogil, parallel(num_threads=n_threads):
                neu1e = <double*>malloc(dim * sizeof(double))
                for w in prange(n_walks, schedule="static"):
                    _train_walk(tp, offsets[w], offsets[w + 1] - offsets[w],
                                epoch * total + offsets[w], denom, lr0, lr_min,
                                &syn0[0, 0], &syn1[0, 0], neu1e, dim, window, negatives, n_nodes,
                                &neg_prob[0], &neg_alias[0],
                                _stream(seed, <uint64_t>(epoch + 1), <uint64_t>w))
                free(neu1e)
    return syn0_arr
