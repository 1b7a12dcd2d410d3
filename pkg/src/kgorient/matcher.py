"""Alignments: anchor sampling, noise injection and nearest-neighbor matching."""

from __future__ import annotations

import logging
from typing import IO, Iterable, Iterator, NamedTuple

import numpy as np

from kgorient import _backend
from kgorient._seeding import make_rng
from kgorient.embedder import EmbeddingSpace
from kgorient.orientation import AnchorSet

log = logging.getLogger(__name__)

EQUIVALENCE = "="
ALIGNMENT_HEADER = "source\ttarget\trelation\tconfidence"


class Correspondence(NamedTuple):
    source: str
    target: str
    relation: str = EQUIVALENCE
    confidence: float = 1.0


class Alignment:
    """Ordered collection of correspondences without repeated (source, target) pairs.

    ``skipped`` carries ids an operation had to leave out (no vector).
    """

    def __init__(self, correspondences: Iterable = (), skipped: Iterable[str] = ()):
        items = [c if isinstance(c, Correspondence) else Correspondence(*c)
                 for c in correspondences]
        seen = set()
        for c in items:
            if not 0.0 <= c.confidence <= 1.0:
                raise ValueError(f"confidence out of [0, 1]: {c}")
            key = (c.source, c.target)
            if key in seen:
                raise ValueError(f"duplicate correspondence {key}")
            seen.add(key)
        self._items = tuple(items)
        self._pairs = frozenset(seen)
        self.skipped = tuple(skipped)

    def __len__(self):
        return len(self._items)

    def __iter__(self) -> Iterator[Correspondence]:
        return iter(self._items)

    def __getitem__(self, i):
        return self._items[i]

    def __eq__(self, other):
        if not isinstance(other, Alignment):
            return NotImplemented
        return self._items == other._items

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"Alignment({len(self)} correspondences)"

    def pairs(self) -> frozenset:
        return self._pairs

    def sources(self) -> list[str]:
        return [c.source for c in self._items]

    def targets(self) -> list[str]:
        return [c.target for c in self._items]

    def restrict_sources(self, sources) -> "Alignment":
        keep = set(sources)
        return Alignment(c for c in self._items if c.source in keep)

    def write(self, stream: IO[str]) -> None:
        stream.write(ALIGNMENT_HEADER + "\n")
        for c in self._items:
            stream.write(f"{c.source}\t{c.target}\t{c.relation}\t{c.confidence!r}\n")

    @classmethod
    def read(cls, stream: IO[str]) -> "Alignment":
        """Parse the TSV format; a missing confidence column defaults to 1.0."""
        items = []
        for lineno, line in enumerate(stream, start=1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            fields = line.split("\t")
            if lineno == 1 and fields[:2] == ["source", "target"]:
                continue
            if len(fields) == 2:
                fields.append(EQUIVALENCE)
            if len(fields) == 3:
                fields.append("1.0")
            if len(fields) != 4:
                raise ValueError(f"line {lineno}: expected 2 to 4 tab-separated fields")
            try:
                conf = float(fields[3])
            except ValueError:
                raise ValueError(f"line {lineno}: bad confidence {fields[3]!r}") from None
            items.append(Correspondence(fields[0], fields[1], fields[2], conf))
        return cls(items)


def read_alignment(path) -> Alignment:
    with open(path, encoding="utf-8") as f:
        return Alignment.read(f)


def write_alignment(a: Alignment, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        a.write(f)


def split_alignment(a: Alignment, alpha: float, seed: int) -> tuple[Alignment, Alignment]:
    """Sample ``floor(alpha * |a|)`` correspondences as train, the rest as test.

    Both parts keep the original order.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if len(a) < 2:
        raise ValueError("need at least two correspondences to split")
    n_train = int(np.floor(alpha * len(a)))
    if n_train == 0:
        raise ValueError(f"alpha={alpha} leaves no anchors out of {len(a)} correspondences")
    rng = make_rng("split", seed)
    chosen = np.zeros(len(a), dtype=bool)
    chosen[rng.choice(len(a), size=n_train, replace=False)] = True
    items = list(a)
    return (Alignment(c for c, k in zip(items, chosen) if k),
            Alignment(c for c, k in zip(items, chosen) if not k))


def inject_noise(train: Alignment, noise_rate: float, target_pool, seed: int) -> Alignment:
    """Redirect ``floor(noise_rate * |train|)`` correspondences to a wrong target.

    The replacement is drawn uniformly from ``target_pool`` minus the correct
    target.
    """
    if not 0.0 <= noise_rate <= 1.0:
        raise ValueError("noise_rate must be in [0, 1]")
    pool = sorted(set(target_pool))
    if len(pool) < 2:
        raise ValueError("target pool needs at least two nodes")
    n_noisy = int(np.floor(noise_rate * len(train)))
    if n_noisy == 0:
        return Alignment(train)
    rng = make_rng("noise", seed)
    noisy = set(rng.choice(len(train), size=n_noisy, replace=False).tolist())
    position = {t: i for i, t in enumerate(pool)}
    out = []
    for i, c in enumerate(train):
        if i in noisy:
            correct = position.get(c.target)
            if correct is None:
                j = int(rng.integers(len(pool)))
            else:
                j = int(rng.integers(len(pool) - 1))
                if j >= correct:
                    j += 1
            c = c._replace(target=pool[j])
        out.append(c)
    return Alignment(out)


def build_anchor_set(train: Alignment, src: EmbeddingSpace, tgt: EmbeddingSpace) -> AnchorSet:
    """Pair up vectors for each correspondence, in alignment order.

    Correspondences whose source or target has no vector are skipped and
    listed in ``AnchorSet.skipped``.
    """
    if src.dimension != tgt.dimension:
        raise ValueError("source and target spaces differ in dimension")
    pairs, skipped = [], []
    for c in train:
        missing = c.source if c.source not in src else c.target if c.target not in tgt else None
        if missing is not None:
            log.warning("no vector for %s; anchor (%s, %s) skipped", missing, c.source, c.target)
            skipped.append(missing)
            continue
        pairs.append((c.source, c.target))
    if not pairs:
        raise ValueError("no usable anchors")
    return AnchorSet(src.rows(p[0] for p in pairs), tgt.rows(p[1] for p in pairs),
                     tuple(pairs), tuple(skipped))


def match_nearest(src: EmbeddingSpace, tgt: EmbeddingSpace, candidates_src=None,
                  candidates_tgt=None, backend: str | None = None) -> Alignment:
    """Map every source candidate to its Euclidean-nearest target candidate.

    Both spaces must already share a frame. Output is sorted by source id,
    confidence is ``1 / (1 + distance)``, and ties go to the lexicographically
    smallest target id. Candidates without a vector end up in ``skipped``.
    """
    if src.dimension != tgt.dimension:
        raise ValueError("source and target spaces differ in dimension")
    cand_s = sorted(set(src.tokens if candidates_src is None else candidates_src))
    cand_t = sorted(set(tgt.tokens if candidates_tgt is None else candidates_tgt))
    if not cand_s or not cand_t:
        raise ValueError("candidate sets must be non-empty")
    skipped = [s for s in cand_s if s not in src] + [t for t in cand_t if t not in tgt]
    cand_s = [s for s in cand_s if s in src]
    cand_t = [t for t in cand_t if t in tgt]
    if skipped:
        log.info("%d candidate(s) without vectors skipped", len(skipped))
    if not cand_s or not cand_t:
        return Alignment((), skipped)

    S = np.ascontiguousarray(src.rows(cand_s))
    T = np.ascontiguousarray(tgt.rows(cand_t))
    index, dist2 = _backend.get(backend).nearest(S, T)
    conf = 1.0 / (1.0 + np.sqrt(dist2))
    return Alignment(
        (Correspondence(s, cand_t[j], EQUIVALENCE, float(c))
         for s, j, c in zip(cand_s, index.tolist(), conf.tolist())),
        skipped,
    )
