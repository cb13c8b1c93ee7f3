"""Pure-Python twin of ``_kernels.pyx``.

Same RNG, same loop order, same floating-point operations: outputs match
the compiled backend exactly, at a fraction of its speed. ``n_threads`` is
accepted for signature compatibility and ignored.
"""

import math

import numpy as np

BACKEND = "python"

_M64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_A = 0x632BE59BD9B4E019
MIX_B = 0xD1B54A32D192ED03
TWO_M53 = 1.0 / 9007199254740992.0
MAX_EXP = 6.0


def mix64(z):
    z &= _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def stream(seed, a, b):
    x = mix64((seed + GOLDEN) & _M64)
    x = mix64(x ^ ((a + MIX_A) & _M64))
    return mix64(x ^ ((b * GOLDEN + MIX_B) & _M64))


class _Rng:
    __slots__ = ("state",)

    def __init__(self, state):
        self.state = state & _M64

    def uniform(self):
        self.state = (self.state + GOLDEN) & _M64
        return (mix64(self.state) >> 11) * TWO_M53

    def draw(self, prob, alias, off, n):
        k = int(self.uniform() * n)
        if k >= n:
            k = n - 1
        if self.uniform() < prob[off + k]:
            return k
        return alias[off + k]


def uniforms(state, count):
    rng = _Rng(state)
    return np.array([rng.uniform() for _ in range(count)], dtype=np.float64)


def _vose(w, n, norm, prob, alias, off):
    total = 0.0
    for i in range(n):
        total += w[i]
    if not total > 0.0:
        return -1
    scaled = [0.0] * n
    for i in range(n):
        norm[off + i] = w[i] / total
        scaled[i] = w[i] * float(n) / total
    small, large = [], []
    for i in range(n):
        (small if scaled[i] < 1.0 else large).append(i)
    while small and large:
        l = small.pop()
        g = large.pop()
        prob[off + l] = scaled[l]
        alias[off + l] = g
        scaled[g] = (scaled[g] + scaled[l]) - 1.0
        (small if scaled[g] < 1.0 else large).append(g)
    while large:
        g = large.pop()
        prob[off + g] = 1.0
        alias[off + g] = g
    while small:
        l = small.pop()
        prob[off + l] = 1.0
        alias[off + l] = l
    return 0


def build_alias(weights):
    w = [float(x) for x in np.asarray(weights, dtype=np.float64)]
    n = len(w)
    norm, prob, alias = [0.0] * n, [0.0] * n, [0] * n
    if n and _vose(w, n, norm, prob, alias, 0) != 0:
        raise ValueError("alias weights must have a positive sum")
    return (np.array(norm, dtype=np.float64), np.array(prob, dtype=np.float64),
            np.array(alias, dtype=np.int32))


def build_transitions(indptr, indices, weights, edge_ptr, p, q):
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    weights = [float(x) for x in weights]
    edge_ptr = [int(x) for x in edge_ptr]
    n = len(indptr) - 1
    m = len(indices)
    total = edge_ptr[m]
    nn, npr, na = [0.0] * m, [0.0] * m, [0] * m
    en, ep, ea = [0.0] * total, [0.0] * total, [0] * total
    for v in range(n):
        d = indptr[v + 1] - indptr[v]
        if d > 0:
            _vose(weights[indptr[v]:indptr[v + 1]], d, nn, npr, na, indptr[v])
    mark = [-1] * n
    for prev in range(n):
        for e in range(indptr[prev], indptr[prev + 1]):
            mark[indices[e]] = prev
        for e in range(indptr[prev], indptr[prev + 1]):
            cur = indices[e]
            base = indptr[cur]
            d = indptr[cur + 1] - base
            tmp = [0.0] * d
            for k in range(d):
                x = indices[base + k]
                w = weights[base + k]
                if x == prev:
                    tmp[k] = w / p
                elif mark[x] == prev:
                    tmp[k] = w
                else:
                    tmp[k] = w / q
            _vose(tmp, d, en, ep, ea, edge_ptr[e])
    f64 = lambda a: np.array(a, dtype=np.float64)
    i32 = lambda a: np.array(a, dtype=np.int32)
    return f64(nn), f64(npr), i32(na), f64(en), f64(ep), i32(ea)


def random_walks(indptr, indices, node_prob, node_alias, edge_ptr, edge_prob, edge_alias,
                 walk_length, walks_per_node, seed, n_threads=1):
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    node_prob = [float(x) for x in node_prob]
    node_alias = [int(x) for x in node_alias]
    edge_ptr = [int(x) for x in edge_ptr]
    edge_prob = [float(x) for x in edge_prob]
    edge_alias = [int(x) for x in edge_alias]
    n = len(indptr) - 1
    n_walks = n * walks_per_node
    walks = np.zeros((n_walks, walk_length), dtype=np.int32)
    lengths = np.zeros(n_walks, dtype=np.int32)
    for i in range(n_walks):
        start = i % n
        rng = _Rng(stream(seed, i // n, start))
        out = [start]
        cur = start
        d = indptr[cur + 1] - indptr[cur]
        if d > 0 and walk_length >= 2:
            k = rng.draw(node_prob, node_alias, indptr[cur], d)
            e = indptr[cur] + k
            cur = indices[e]
            out.append(cur)
            while len(out) < walk_length:
                d = indptr[cur + 1] - indptr[cur]
                if d == 0:
                    break
                k = rng.draw(edge_prob, edge_alias, edge_ptr[e], d)
                e = indptr[cur] + k
                cur = indices[e]
                out.append(cur)
        walks[i, :len(out)] = out
        lengths[i] = len(out)
    return walks, lengths


def train_sgns(tokens, offsets, n_nodes, dim, window, negatives, epochs,
               lr0, lr_min_ratio, neg_prob, neg_alias, seed, n_threads=1):
    tokens = [int(x) for x in tokens]
    offsets = [int(x) for x in offsets]
    neg_prob = [float(x) for x in neg_prob]
    neg_alias = [int(x) for x in neg_alias]
    n_walks = len(offsets) - 1
    total = offsets[n_walks]
    denom = float(epochs * total + 1)
    lr_min = lr0 * lr_min_ratio
    rng = _Rng(stream(seed, 0, 0))
    syn0 = [[(rng.uniform() - 0.5) / float(dim) for _ in range(dim)] for _ in range(n_nodes)]
    syn1 = [[0.0] * dim for _ in range(n_nodes)]
    exp = math.exp
    rdim = range(dim)
    if n_walks and total and n_nodes:
        for epoch in range(epochs):
            for w in range(n_walks):
                start = offsets[w]
                length = offsets[w + 1] - start
                processed0 = epoch * total + start
                rng = _Rng(stream(seed, epoch + 1, w))
                for pos in range(length):
                    alpha = lr0 * (1.0 - (processed0 + pos) / denom)
                    if alpha < lr_min:
                        alpha = lr_min
                    c_vec = syn0[tokens[start + pos]]
                    lo = max(pos - window, 0)
                    hi = min(pos + window, length - 1)
                    for j in range(lo, hi + 1):
                        if j == pos:
                            continue
                        ctx = tokens[start + j]
                        neu1e = [0.0] * dim
                        for s in range(negatives + 1):
                            if s == 0:
                                target = ctx
                                label = 1.0
                            else:
                                target = rng.draw(neg_prob, neg_alias, 0, n_nodes)
                                if target == ctx:
                                    continue
                                label = 0.0
                            t_vec = syn1[target]
                            f = 0.0
                            for d in rdim:
                                f += c_vec[d] * t_vec[d]
                            if f > MAX_EXP:
                                g = (label - 1.0) * alpha
                            elif f < -MAX_EXP:
                                g = (label - 0.0) * alpha
                            else:
                                g = (label - 1.0 / (1.0 + exp(-f))) * alpha
                            for d in rdim:
                                neu1e[d] += g * t_vec[d]
                            for d in rdim:
                                t_vec[d] += g * c_vec[d]
                        for d in rdim:
                            c_vec[d] += neu1e[d]
    return np.array(syn0, dtype=np.float64).reshape(n_nodes, dim)
