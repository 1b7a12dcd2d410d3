# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. ``_fallback.py`` mirrors these operation for operation."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log1p
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()


cdef inline double log_sigmoid(double x) noexcept nogil:
    if x >= 0:
        return -log1p(exp(-x))
    return x - log1p(exp(x))


cdef inline double sigmoid(double x) noexcept nogil:
    if x >= 0:
        return 1.0 / (1.0 + exp(-x))
    cdef double e = exp(x)
    return e / (1.0 + e)


cdef inline double dot(const double* x, const double* y, Py_ssize_t n) noexcept nogil:
    # four interleaved partial sums; _fallback._dot uses the same order
    cdef double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0
    cdef Py_ssize_t q = 0
    while q + 4 <= n:
        s0 = s0 + x[q] * y[q]
        s1 = s1 + x[q + 1] * y[q + 1]
        s2 = s2 + x[q + 2] * y[q + 2]
        s3 = s3 + x[q + 3] * y[q + 3]
        q += 4
    while q < n:
        s0 = s0 + x[q] * y[q]
        q += 1
    return (s0 + s1) + (s2 + s3)


def sgns_train(const int64_t[::1] ids, const int64_t[::1] offsets,
               double[:, ::1] w_in, double[:, ::1] w_out,
               const int64_t[::1] neg_table,
               int window, int negatives, double lr0, double lr_min,
               int epochs, uint64_t seed):
    """Skip-gram negative-sampling SGD, updating ``w_in``/``w_out`` in place.

    Returns ``(loss_sum, pair_count)`` arrays with one entry per epoch.
    """
    cdef Py_ssize_t n_walks = offsets.shape[0] - 1
    cdef Py_ssize_t dim = w_in.shape[1]
    cdef Py_ssize_t table_size = neg_table.shape[0]
    cdef double total = <double>epochs * <double>ids.shape[0]
    cdef double processed = 0.0
    cdef uint64_t state = seed
    cdef Py_ssize_t ep, k, start, stop, i, j, lo, hi, c, t, n, q
    cdef int label
    cdef double lr, f, g, loss, npairs
    cdef double[::1] neu_buf = np.zeros(dim, dtype=np.float64)
    cdef double* neu = &neu_buf[0]
    cdef double* cin
    cdef double* cout
    losses = np.zeros(epochs, dtype=np.float64)
    pairs = np.zeros(epochs, dtype=np.float64)
    cdef double[::1] losses_v = losses
    cdef double[::1] pairs_v = pairs

    with nogil:
        for ep in range(epochs):
            loss = 0.0
            npairs = 0.0
            for k in range(n_walks):
                start = offsets[k]
                stop = offsets[k + 1]
                for i in range(start, stop):
                    lr = lr0 * (1.0 - processed / total)
                    if lr < lr_min:
                        lr = lr_min
                    processed += 1.0
                    c = ids[i]
                    lo = i - window
                    if lo < start:
                        lo = start
                    hi = i + window + 1
                    if hi > stop:
                        hi = stop
                    cin = &w_in[c, 0]
                    for j in range(lo, hi):
                        if j == i:
                            continue
                        for q in range(dim):
                            neu[q] = 0.0
                        for n in range(negatives + 1):
                            if n == 0:
                                t = ids[j]
                                label = 1
                            else:
                                state = state * 25214903917ULL + 11ULL
                                t = neg_table[(state >> 16) % table_size]
                                if t == ids[j]:
                                    continue
                                label = 0
                            cout = &w_out[t, 0]
                            f = dot(cin, cout, dim)
                            if label == 1:
                                loss = loss - log_sigmoid(f)
                                g = (1.0 - sigmoid(f)) * lr
                            else:
                                loss = loss - log_sigmoid(-f)
                                g = (0.0 - sigmoid(f)) * lr
                            for q in range(dim):
                                neu[q] = neu[q] + g * cout[q]
                                cout[q] = cout[q] + g * cin[q]
                        for q in range(dim):
                            cin[q] = cin[q] + neu[q]
                        npairs += 1.0
            losses_v[ep] = loss
            pairs_v[ep] = npairs
    return losses, pairs


def nearest(const double[:, ::1] src, const double[:, ::1] tgt):
    """Exact Euclidean nearest target row for every source row.

    Ties go to the lowest target index. Returns ``(index, squared_distance)``.
    """
    cdef Py_ssize_t m = src.shape[0]
    cdef Py_ssize_t nt = tgt.shape[0]
    cdef Py_ssize_t dim = src.shape[1]
    cdef Py_ssize_t a, b, q, best
    cdef double s, diff, best_d
    index = np.empty(m, dtype=np.int64)
    dist2 = np.empty(m, dtype=np.float64)
    cdef int64_t[::1] index_v = index
    cdef double[::1] dist_v = dist2
    with nogil:
        for a in range(m):
            best = -1
            best_d = 0.0
            for b in range(nt):
                s = 0.0
                for q in range(dim):
                    diff = src[a, q] - tgt[b, q]
                    s = s + diff * diff
                if best < 0 or s < best_d:
                    best = b
                    best_d = s
            index_v[a] = best
            dist_v[a] = best_d
    return index, dist2
