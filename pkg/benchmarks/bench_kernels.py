"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

SGNS training is timed on walk corpora of growing size, nearest-neighbor
search on random point clouds. Both backends run the same inputs; the SGNS
results are also checked for bit-identity.
"""

import argparse
import time

import numpy as np

from kgorient import _backend
from kgorient.embedder import TrainingConfig, train
from kgorient.graph import generate_synthetic_graph
from kgorient.walker import generate_walks


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _backend.compiled_kernels is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e .` first")

    print(f"{'kernel':<10} {'size':<26} {'cython s':>9} {'python s':>9} {'speedup':>8}")
    for nodes, walks, depth, d in [(20, 10, 3, 16), (50, 10, 4, 32), (100, 10, 4, 64)]:
        corpus = generate_walks(generate_synthetic_graph(nodes, 4.0, 0), walks, depth, 0)
        cfg = TrainingConfig(dimension=d, window=6, epochs=1, seed=0)
        tc, a = best_of(lambda: train(corpus, cfg, backend="cython"), args.repeat)
        tp, b = best_of(lambda: train(corpus, cfg, backend="python"), 1)
        assert np.array_equal(a.vectors, b.vectors), "backends diverged"
        size = f"{len(corpus.token_ids)} tokens, d={d}"
        print(f"{'sgns':<10} {size:<26} {tc:9.4f} {tp:9.4f} {tp / tc:7.1f}x")

    rng = np.random.default_rng(0)
    for n, d in [(500, 64), (2500, 100)]:
        src, tgt = rng.normal(size=(n, d)), rng.normal(size=(n, d))
        tc, (ia, _) = best_of(lambda: _backend.get("cython").nearest(src, tgt), args.repeat)
        tp, (ib, _) = best_of(lambda: _backend.get("python").nearest(src, tgt), args.repeat)
        assert np.array_equal(ia, ib), "backends disagree on nearest neighbors"
        size = f"{n}x{n}, d={d}"
        print(f"{'nearest':<10} {size:<26} {tc:9.4f} {tp:9.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
