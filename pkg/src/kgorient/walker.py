"""Random-walk sentence corpora over a graph."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterator

import numpy as np

from kgorient._seeding import make_rng
from kgorient.graph import Graph


@dataclass(frozen=True, eq=False)
class WalkCorpus:
    """Walks stored as one flat token-id array plus per-walk offsets.

    ``tokens[i]`` names token id ``i``. Walk ``k`` is
    ``token_ids[offsets[k]:offsets[k + 1]]``.
    """

    tokens: tuple[str, ...]
    token_ids: np.ndarray
    offsets: np.ndarray

    def __len__(self):
        return len(self.offsets) - 1

    def __iter__(self) -> Iterator[list[str]]:
        for k in range(len(self)):
            yield self.walk(k)

    def walk(self, k: int) -> list[str]:
        ids = self.token_ids[self.offsets[k]:self.offsets[k + 1]]
        return [self.tokens[i] for i in ids]

    @property
    def walks(self) -> list[list[str]]:
        return list(self)

    @cached_property
    def counts(self) -> np.ndarray:
        return np.bincount(self.token_ids, minlength=len(self.tokens))

    @cached_property
    def vocabulary(self) -> dict[str, int]:
        """Occurring tokens with their counts; zero-count tokens are omitted."""
        return {t: int(c) for t, c in zip(self.tokens, self.counts) if c > 0}

    @classmethod
    def from_walks(cls, walks) -> "WalkCorpus":
        index: dict[str, int] = {}
        flat = []
        offsets = [0]
        for w in walks:
            for tok in w:
                flat.append(index.setdefault(tok, len(index)))
            offsets.append(len(flat))
        return cls(tuple(index), np.asarray(flat, dtype=np.int64),
                   np.asarray(offsets, dtype=np.int64))

    def dump(self, stream: IO[str]) -> None:
        for w in self:
            stream.write(" ".join(w))
            stream.write("\n")

    @classmethod
    def load(cls, stream: IO[str]) -> "WalkCorpus":
        return cls.from_walks(line.split() for line in stream if line.strip())


def generate_walks(g: Graph, walks_per_node: int, depth: int, seed: int) -> WalkCorpus:
    """Uniform random walks along outgoing triples.

    Each node starts ``walks_per_node`` walks of up to ``depth`` hops. A step
    picks one outgoing triple uniformly (so parallel edges weigh more) and
    appends its predicate and object; a walk stops early at a node with no
    outgoing triple. Every start node draws from its own generator seeded by
    ``(seed, node id)``, so output does not depend on processing order.
    """
    if len(g.nodes) == 0:
        raise ValueError("graph has no nodes")
    if walks_per_node < 1 or depth < 1:
        raise ValueError("walks_per_node and depth must be positive")

    n = len(g.nodes)
    relations = sorted(g.relations)
    tokens = tuple(g.nodes) + tuple(relations)
    indptr, pred, obj = g.out_adjacency
    outdeg = np.diff(indptr)

    width = 2 * depth + 1
    W = walks_per_node
    chunks = []
    lengths = []
    for v, name in enumerate(g.nodes):
        rng = make_rng("walk", seed, name)
        buf = np.empty((W, width), dtype=np.int64)
        buf[:, 0] = v
        cur = np.full(W, v, dtype=np.int64)
        length = np.ones(W, dtype=np.int64)
        alive = np.full(W, outdeg[v] > 0)
        for step in range(depth):
            u = rng.random(W)
            if not alive.any():
                continue
            deg = outdeg[cur]
            alive &= deg > 0
            pick = indptr[cur] + np.minimum((u * deg).astype(np.int64), np.maximum(deg - 1, 0))
            pick = np.where(alive, pick, 0)
            rel_tok = n + pred[pick] if len(pred) else pick
            nxt = obj[pick] if len(obj) else cur
            buf[alive, 2 * step + 1] = rel_tok[alive]
            buf[alive, 2 * step + 2] = nxt[alive]
            length[alive] += 2
            cur = np.where(alive, nxt, cur)
        chunks.append(buf)
        lengths.append(length)

    buf = np.concatenate(chunks)
    length = np.concatenate(lengths)
    mask = np.arange(width)[None, :] < length[:, None]
    offsets = np.zeros(len(length) + 1, dtype=np.int64)
    np.cumsum(length, out=offsets[1:])
    return WalkCorpus(tokens, buf[mask], offsets)
