"""Skip-gram with negative sampling (SGNS) over walk corpora."""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from kgorient import _backend
from kgorient._seeding import derive_seed, make_rng
from kgorient.walker import WalkCorpus

NEG_TABLE_SIZE = 1_000_000
LR_FLOOR_RATIO = 1e-4


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class TrainingConfig:
    dimension: int = 100
    window: int = 6
    epochs: int = 5
    negatives: int = 5
    learning_rate: float = 0.025
    min_count: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("dimension", "window", "epochs", "negatives", "min_count"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")


class EmbeddingSpace:
    """Immutable token -> vector table.

    ``losses`` holds the mean per-pair training loss of each epoch when the
    space came out of :func:`train`.
    """

    def __init__(self, tokens: Sequence[str], vectors, losses: Sequence[float] = ()):
        vectors = np.array(vectors, dtype=np.float64, copy=True)
        tokens = tuple(tokens)
        if vectors.ndim != 2 or vectors.shape[0] != len(tokens):
            raise ValueError("need one row per token")
        if vectors.shape[1] < 1:
            raise ValueError("dimension must be >= 1")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("embedding contains non-finite values")
        vectors.setflags(write=False)
        self.tokens = tokens
        self.vectors = vectors
        self.index = {t: i for i, t in enumerate(tokens)}
        if len(self.index) != len(tokens):
            raise ValueError("duplicate tokens")
        self.losses = tuple(float(x) for x in losses)

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def __getitem__(self, token) -> np.ndarray:
        return self.vectors[self.index[token]]

    def __repr__(self):
        return f"EmbeddingSpace({len(self)} tokens, d={self.dimension})"

    def rows(self, tokens: Iterable[str]) -> np.ndarray:
        return self.vectors[[self.index[t] for t in tokens]]

    def with_vectors(self, vectors) -> "EmbeddingSpace":
        return EmbeddingSpace(self.tokens, vectors)

    def dump(self, stream: IO[str]) -> None:
        stream.write(f"{len(self)} {self.dimension}\n")
        for tok, vec in zip(self.tokens, self.vectors):
            stream.write(tok)
            for x in vec:
                stream.write(" " + repr(float(x)))
            stream.write("\n")

    @classmethod
    def load(cls, stream: IO[str]) -> "EmbeddingSpace":
        header = stream.readline().split()
        if len(header) != 2:
            raise ValueError("embedding header must be 'count dimension'")
        count, dim = int(header[0]), int(header[1])
        tokens, rows = [], []
        for lineno, line in enumerate(stream, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise ValueError(f"line {lineno}: expected {dim} values")
            tokens.append(parts[0])
            rows.append([float(x) for x in parts[1:]])
        if len(tokens) != count:
            raise ValueError(f"header announces {count} vectors, found {len(tokens)}")
        return cls(tokens, np.asarray(rows, dtype=np.float64).reshape(count, dim))


def _log_sigmoid(x):
    return -np.logaddexp(0.0, -x)


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _check_pair(center, context, negatives):
    center = np.asarray(center, dtype=np.float64)
    context = np.asarray(context, dtype=np.float64)
    if center.ndim != 1 or context.shape != center.shape:
        raise ValueError("center and context must be vectors of equal dimension")
    negatives = np.asarray(negatives, dtype=np.float64)
    if negatives.size == 0:
        negatives = negatives.reshape(0, center.shape[0])
    if negatives.ndim != 2 or negatives.shape[1] != center.shape[0]:
        raise ValueError("negative vectors must match the center dimension")
    return center, context, negatives


def sgns_pair_loss(center, context, negatives) -> float:
    """``-log s(c.o) - sum_i log s(-c.n_i)`` with ``s`` the logistic function."""
    c, o, neg = _check_pair(center, context, negatives)
    loss = -_log_sigmoid(c @ o)
    if len(neg):
        loss -= _log_sigmoid(-(neg @ c)).sum()
    return float(loss)


def sgns_pair_grad(center, context, negatives):
    """Analytic gradient of :func:`sgns_pair_loss`.

    Returns ``(d_center, d_context, d_negatives)``.
    """
    c, o, neg = _check_pair(center, context, negatives)
    pos = 1.0 - _sigmoid(c @ o)
    s_neg = _sigmoid(neg @ c)
    d_center = -pos * o + s_neg @ neg
    d_context = -pos * c
    d_negatives = s_neg[:, None] * c[None, :]
    return d_center, d_context, d_negatives


def negative_table(counts: np.ndarray, size: int = NEG_TABLE_SIZE) -> np.ndarray:
    """Lookup table sampling token ids proportionally to ``count ** 0.75``."""
    p = np.asarray(counts, dtype=np.float64) ** 0.75
    cum = np.cumsum(p / p.sum())
    cum[-1] = 1.0
    return np.searchsorted(cum, (np.arange(size) + 0.5) / size).astype(np.int64)


def _shuffle_walks(ids, offsets, rng):
    lens = np.diff(offsets)
    perm = rng.permutation(len(lens))
    new_lens = lens[perm]
    new_offsets = np.zeros_like(offsets)
    np.cumsum(new_lens, out=new_offsets[1:])
    gather = np.repeat(offsets[:-1][perm] - new_offsets[:-1], new_lens) + np.arange(len(ids))
    return np.ascontiguousarray(ids[gather]), new_offsets


def train(corpus: WalkCorpus, cfg: TrainingConfig, backend: str | None = None) -> EmbeddingSpace:
    """Fit SGNS input vectors for every token with count >= ``cfg.min_count``.

    Single-threaded and deterministic in ``cfg.seed``; the compiled and the
    pure-Python backend return identical vectors.
    """
    if len(corpus) == 0:
        raise EmbeddingError("empty corpus")
    counts = corpus.counts
    keep = counts >= cfg.min_count
    if not keep.any():
        raise EmbeddingError("no token reaches min_count")

    remap = np.full(len(corpus.tokens), -1, dtype=np.int64)
    remap[keep] = np.arange(int(keep.sum()))
    ids = remap[corpus.token_ids]
    kept_mask = ids >= 0
    walk_of = np.repeat(np.arange(len(corpus)), np.diff(corpus.offsets))
    ids = np.ascontiguousarray(ids[kept_mask])
    lens = np.bincount(walk_of[kept_mask], minlength=len(corpus))
    offsets = np.zeros(len(corpus) + 1, dtype=np.int64)
    np.cumsum(lens, out=offsets[1:])
    tokens = [t for t, k in zip(corpus.tokens, keep) if k]
    # walks arrive grouped by start node; SGD needs them mixed
    ids, offsets = _shuffle_walks(ids, offsets, make_rng("sgns-order", cfg.seed))

    d = cfg.dimension
    rng = make_rng("sgns-init", cfg.seed)
    w_in = rng.uniform(-0.5 / d, 0.5 / d, size=(len(tokens), d))
    w_out = np.zeros_like(w_in)
    table = negative_table(counts[keep])

    kern = _backend.get(backend)
    losses, pairs = kern.sgns_train(
        ids, offsets, w_in, w_out, table,
        cfg.window, cfg.negatives, cfg.learning_rate,
        cfg.learning_rate * LR_FLOOR_RATIO, cfg.epochs,
        derive_seed("sgns-negatives", cfg.seed),
    )
    mean_loss = np.divide(losses, pairs, out=np.zeros_like(losses), where=pairs > 0)
    return EmbeddingSpace(tokens, w_in, mean_loss)
