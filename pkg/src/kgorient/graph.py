"""Graph data model, synthetic generation and triple file I/O."""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, NamedTuple

import numpy as np

from kgorient._seeding import make_rng

SYNTHETIC_RELATION = "rel"

FORMATS = ("tsv-triples", "ntriples-subset")


class Triple(NamedTuple):
    subject: str
    predicate: str
    object: str


class ParseError(ValueError):
    """Malformed line in a triple file."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class LiteralSkippedWarning(UserWarning):
    """Emitted once per parse when literal-valued N-Triples were dropped."""

    def __init__(self, count: int):
        self.count = count
        super().__init__(f"skipped {count} triple(s) with literal objects")


@dataclass(frozen=True, eq=False)
class Graph:
    """Directed, relation-labelled multigraph.

    ``nodes`` keeps insertion order so everything derived from a graph
    (walk corpora, embeddings) is reproducible. Equality ignores that order.
    """

    nodes: tuple[str, ...]
    triples: tuple[Triple, ...] = ()
    relations: frozenset[str] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        nodes = tuple(self.nodes)
        triples = tuple(Triple(*t) for t in self.triples)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "triples", triples)
        rels = self.relations
        if rels is None:
            rels = frozenset(t.predicate for t in triples)
        object.__setattr__(self, "relations", frozenset(rels))

        node_set = set()
        for n in nodes:
            if not isinstance(n, str) or not n:
                raise ValueError(f"node ids must be non-empty strings, got {n!r}")
            if n in node_set:
                raise ValueError(f"duplicate node id {n!r}")
            node_set.add(n)
        for t in triples:
            if t.subject not in node_set or t.object not in node_set:
                raise ValueError(f"triple {t} references an unknown node")
            if t.predicate not in self.relations:
                raise ValueError(f"triple {t} uses an undeclared relation")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            set(self.nodes) == set(other.nodes)
            and self.triples == other.triples
            and self.relations == other.relations
        )

    __hash__ = None  # type: ignore[assignment]

    def __len__(self):
        return len(self.nodes)

    @cached_property
    def node_index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    @cached_property
    def out_adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR view of outgoing triples: ``(indptr, predicate_idx, object_idx)``.

        Within one node, triples keep their order in ``self.triples``.
        Predicates index into ``sorted(self.relations)``.
        """
        idx = self.node_index
        rel_idx = {r: i for i, r in enumerate(sorted(self.relations))}
        n = len(self.nodes)
        subj = np.fromiter((idx[t.subject] for t in self.triples), dtype=np.int64,
                           count=len(self.triples))
        pred = np.fromiter((rel_idx[t.predicate] for t in self.triples), dtype=np.int64,
                           count=len(self.triples))
        obj = np.fromiter((idx[t.object] for t in self.triples), dtype=np.int64,
                          count=len(self.triples))
        order = np.argsort(subj, kind="stable")
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(subj, minlength=n), out=indptr[1:])
        return indptr, pred[order], obj[order]

    def out_degree(self) -> np.ndarray:
        indptr = self.out_adjacency[0]
        return np.diff(indptr)


def generate_synthetic_graph(n_nodes: int, lam: float, seed: int) -> Graph:
    """Random graph with Poisson(``lam``) out-degrees.

    Node ``v`` links to ``d`` distinct nodes drawn uniformly from the other
    ``n_nodes - 1``; ``d`` is clamped when it exceeds that.
    """
    if n_nodes < 1:
        raise ValueError("n_nodes must be >= 1")
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    rng = make_rng("synthetic-graph", seed)
    names = [f"n{i}" for i in range(n_nodes)]
    triples = []
    degrees = rng.poisson(lam, size=n_nodes)
    for v in range(n_nodes):
        d = min(int(degrees[v]), n_nodes - 1)
        if d == 0:
            continue
        picks = rng.choice(n_nodes - 1, size=d, replace=False)
        picks[picks >= v] += 1
        for u in picks:
            triples.append(Triple(names[v], SYNTHETIC_RELATION, names[u]))
    return Graph(tuple(names), tuple(triples), frozenset({SYNTHETIC_RELATION}))


def duplicate_graph(g: Graph, suffix: str):
    """Copy ``g`` with every node renamed ``v + suffix``.

    Returns ``(copy, alignment)`` where the alignment maps each node to its copy.
    """
    from kgorient.matcher import Alignment, Correspondence

    if not suffix:
        raise ValueError("suffix must be non-empty")
    rename = {n: n + suffix for n in g.nodes}
    copy = Graph(
        tuple(rename[n] for n in g.nodes),
        tuple(Triple(rename[s], p, rename[o]) for s, p, o in g.triples),
        g.relations,
    )
    alignment = Alignment([Correspondence(n, rename[n]) for n in g.nodes])
    return copy, alignment


def remove_triples(g: Graph, fraction: float, seed: int) -> Graph:
    """Drop ``floor(fraction * |E|)`` triples uniformly at random; nodes are kept."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must be in [0, 1]")
    n_remove = int(np.floor(fraction * len(g.triples)))
    if n_remove == 0:
        return g
    rng = make_rng("remove-triples", seed)
    drop = set(rng.choice(len(g.triples), size=n_remove, replace=False).tolist())
    kept = tuple(t for i, t in enumerate(g.triples) if i not in drop)
    return Graph(g.nodes, kept, g.relations)


_NT_LINE = re.compile(r"^<([^<>\s]+)>\s+<([^<>\s]+)>\s+(.+?)\s*\.\s*$")
_NT_IRI = re.compile(r"^<([^<>\s]+)>$")


def _from_triples(triples: list[Triple]) -> Graph:
    seen: dict[str, None] = {}
    for s, _, o in triples:
        seen.setdefault(s)
        seen.setdefault(o)
    return Graph(tuple(seen), tuple(triples))


def parse_triples(stream: Iterable[str], fmt: str = "tsv-triples") -> Graph:
    """Read a graph from ``tsv-triples`` or ``ntriples-subset`` lines.

    The node set is the union of subjects and objects, in order of first
    appearance. Duplicate triples are preserved. Literal objects in N-Triples
    input are skipped and reported through :class:`LiteralSkippedWarning`.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    triples: list[Triple] = []
    skipped = 0
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if fmt == "tsv-triples":
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(lineno, f"expected 3 tab-separated fields, got {len(fields)}")
            if not all(fields):
                raise ParseError(lineno, "empty field")
            triples.append(Triple(*fields))
        else:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            m = _NT_LINE.match(stripped)
            if m is None:
                raise ParseError(lineno, "not of the form <s> <p> <o> .")
            s, p, obj = m.groups()
            if obj.startswith('"'):
                skipped += 1
                continue
            om = _NT_IRI.match(obj)
            if om is None:
                raise ParseError(lineno, f"object {obj!r} is not an IRI")
            triples.append(Triple(s, p, om.group(1)))
    if skipped:
        warnings.warn(LiteralSkippedWarning(skipped), stacklevel=2)
    return _from_triples(triples)


def write_triples(g: Graph, stream: IO[str], fmt: str = "tsv-triples") -> None:
    """Serialize triples. Isolated nodes have no line and are not written."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    for s, p, o in g.triples:
        if fmt == "tsv-triples":
            stream.write(f"{s}\t{p}\t{o}\n")
        else:
            stream.write(f"<{s}> <{p}> <{o}> .\n")


def _format_for(path, fmt):
    if fmt is not None:
        return fmt
    return "ntriples-subset" if str(path).endswith((".nt", ".ntriples")) else "tsv-triples"


def read_graph(path, fmt: str | None = None) -> Graph:
    """Read a triple file; the format defaults by extension (``.nt`` or TSV)."""
    with open(path, encoding="utf-8") as f:
        return parse_triples(f, _format_for(path, fmt))


def write_graph(g: Graph, path, fmt: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_triples(g, f, _format_for(path, fmt))
