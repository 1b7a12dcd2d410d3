"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

``sgns_train`` performs the same floating-point operations in the same order
as the compiled loop, so both backends produce bit-identical vectors.
"""

import math

import numpy as np

_MASK64 = (1 << 64) - 1


def _log_sigmoid(x):
    if x >= 0:
        return -math.log1p(math.exp(-x))
    return x - math.log1p(math.exp(x))


def _sigmoid(x):
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _dot(x, y, n):
    s0 = s1 = s2 = s3 = 0.0
    q = 0
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


def sgns_train(ids, offsets, w_in, w_out, neg_table, window, negatives,
               lr0, lr_min, epochs, seed):
    ids = ids.tolist()
    offsets = offsets.tolist()
    table = neg_table.tolist()
    table_size = len(table)
    win = w_in.tolist()
    wout = w_out.tolist()
    dim = w_in.shape[1]
    rdim = range(dim)
    total = float(epochs) * float(len(ids))
    processed = 0.0
    state = int(seed) & _MASK64
    losses = np.zeros(epochs)
    pairs = np.zeros(epochs)

    for ep in range(epochs):
        loss = 0.0
        npairs = 0.0
        for k in range(len(offsets) - 1):
            start, stop = offsets[k], offsets[k + 1]
            for i in range(start, stop):
                lr = lr0 * (1.0 - processed / total)
                if lr < lr_min:
                    lr = lr_min
                processed += 1.0
                center = win[ids[i]]
                for j in range(max(i - window, start), min(i + window + 1, stop)):
                    if j == i:
                        continue
                    neu = [0.0] * dim
                    ctx = ids[j]
                    for n in range(negatives + 1):
                        if n == 0:
                            t = ctx
                        else:
                            state = (state * 25214903917 + 11) & _MASK64
                            t = table[(state >> 16) % table_size]
                            if t == ctx:
                                continue
                        out = wout[t]
                        f = _dot(center, out, dim)
                        if n == 0:
                            loss = loss - _log_sigmoid(f)
                            g = (1.0 - _sigmoid(f)) * lr
                        else:
                            loss = loss - _log_sigmoid(-f)
                            g = (0.0 - _sigmoid(f)) * lr
                        for q in rdim:
                            neu[q] = neu[q] + g * out[q]
                            out[q] = out[q] + g * center[q]
                    for q in rdim:
                        center[q] = center[q] + neu[q]
                    npairs += 1.0
        losses[ep] = loss
        pairs[ep] = npairs

    w_in[...] = np.asarray(win)
    w_out[...] = np.asarray(wout)
    return losses, pairs


def nearest(src, tgt, block=256):
    """Blocked numpy scan; first (lowest-index) minimum wins ties."""
    src = np.asarray(src, dtype=np.float64)
    tgt = np.asarray(tgt, dtype=np.float64)
    index = np.empty(len(src), dtype=np.int64)
    dist2 = np.empty(len(src), dtype=np.float64)
    if len(tgt) == 0:
        raise ValueError("no targets")
    step = max(1, int(block * 64 // max(1, len(tgt))))
    for lo in range(0, len(src), step):
        diff = src[lo:lo + step, None, :] - tgt[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        best = np.argmin(d2, axis=1)
        index[lo:lo + step] = best
        dist2[lo:lo + step] = d2[np.arange(len(best)), best]
    return index, dist2
