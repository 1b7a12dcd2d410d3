"""Evaluation metrics, the end-to-end matching pipeline and synthetic sweeps."""

from __future__ import annotations

import csv
import dataclasses
import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO, NamedTuple

from kgorient._seeding import derive_seed
from kgorient.embedder import EmbeddingSpace, TrainingConfig, train
from kgorient.graph import Graph, duplicate_graph, generate_synthetic_graph, remove_triples
from kgorient.matcher import (Alignment, build_anchor_set, inject_noise, match_nearest,
                              split_alignment)
from kgorient.orientation import (SOURCE, TARGET, RotationModel, apply_rotation,
                                  compute_rotation)
from kgorient.walker import generate_walks

log = logging.getLogger(__name__)

ALPHAS = (0.2, 0.4, 0.6, 0.8)
TENTHS = tuple(round(0.1 * i, 1) for i in range(10))
COPY_SUFFIX = "_c"


@dataclass(frozen=True)
class EvalReport:
    true_positives: int
    predicted: int
    reference: int
    precision: float
    recall: float
    f1: float

    def __str__(self):
        return (f"P={self.precision:.4g} R={self.recall:.4g} F1={self.f1:.4g} "
                f"(tp={self.true_positives}, predicted={self.predicted}, "
                f"reference={self.reference})")


def evaluate(predicted: Alignment, reference: Alignment) -> EvalReport:
    """Micro precision/recall/F1 on (source, target) pairs."""
    ref = reference.pairs()
    pred = predicted.pairs()
    tp = len(pred & ref)
    p = tp / len(pred) if pred else 0.0
    r = tp / len(ref) if ref else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return EvalReport(tp, len(pred), len(ref), p, r, f1)


# ----------------------------------------------------------------------------
# pipeline


def embed_graph(g: Graph, walks: int, depth: int, cfg: TrainingConfig,
                backend: str | None = None) -> EmbeddingSpace:
    corpus = generate_walks(g, walks, depth, derive_seed("walks", cfg.seed))
    return train(corpus, cfg, backend=backend)


class MatchResult(NamedTuple):
    model: RotationModel
    predicted: Alignment
    source_space: EmbeddingSpace
    target_space: EmbeddingSpace
    skipped_anchors: tuple


def align_and_match(src: EmbeddingSpace, tgt: EmbeddingSpace, anchors: Alignment,
                    source_nodes, target_nodes, svd: str = "jacobi",
                    backend: str | None = None) -> MatchResult:
    """Rotate ``tgt`` onto ``src`` using ``anchors`` and match every source node."""
    anchor_set = build_anchor_set(anchors, src, tgt)
    model = compute_rotation(anchor_set, svd=svd)
    src_c = apply_rotation(model, src, SOURCE)
    tgt_r = apply_rotation(model, tgt, TARGET)
    predicted = match_nearest(src_c, tgt_r, source_nodes, target_nodes, backend=backend)
    return MatchResult(model, predicted, src_c, tgt_r, anchor_set.skipped)


# ----------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    nodes: int = 2500
    lam: float = 4.0
    dimension: int = 100
    window: int = 6
    depth: int = 6
    walks: int = 150
    epochs: int = 5
    negatives: int = 5
    learning_rate: float = 0.025
    alpha: float = 0.2
    alphas: tuple = ALPHAS
    noise_levels: tuple = TENTHS
    removal_fractions: tuple = TENTHS
    repetitions: int = 5
    master_seed: int = 0
    svd: str = "jacobi"
    threads: int = 1
    backend: str | None = field(default=None, compare=False)

    def training(self, seed: int) -> TrainingConfig:
        return TrainingConfig(self.dimension, self.window, self.epochs, self.negatives,
                              self.learning_rate, 1, seed)

    def replace(self, **kw) -> "ExperimentConfig":
        return dataclasses.replace(self, **kw)


DESK_SCALE = ExperimentConfig(nodes=500, dimension=64, walks=50, depth=4, repetitions=3)

_KEY_ALIASES = {"lambda": "lam"}
_LIST_KEYS = {"alphas", "noise_levels", "removal_fractions"}


def parse_config(text: str, base: ExperimentConfig = ExperimentConfig()) -> ExperimentConfig:
    """Read ``key = value`` lines (``#`` comments); list keys take comma-separated values."""
    fields = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    updates = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _KEY_ALIASES.get(key, key)
        if key not in fields or key == "backend":
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        default = getattr(base, key)
        if key in _LIST_KEYS:
            updates[key] = tuple(float(v) for v in value.split(",") if v.strip())
        elif isinstance(default, bool):
            updates[key] = value.lower() in ("1", "true", "yes")
        elif isinstance(default, int):
            updates[key] = int(value)
        elif isinstance(default, float):
            updates[key] = float(value)
        else:
            updates[key] = value
    return base.replace(**updates)


def load_config(path, base: ExperimentConfig = ExperimentConfig()) -> ExperimentConfig:
    with open(path, encoding="utf-8") as f:
        return parse_config(f.read(), base)


# ----------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepRow:
    control: float
    repetition: int
    train_precision: float
    test_precision: float


@dataclass
class SweepResult:
    control_name: str
    rows: list = field(default_factory=list)

    def values(self) -> list:
        return sorted({r.control for r in self.rows})

    def test_precisions(self, value) -> list:
        return [r.test_precision for r in self.rows if r.control == value]

    def train_precisions(self, value) -> list:
        return [r.train_precision for r in self.rows if r.control == value]

    def summary(self) -> list[dict]:
        out = []
        for v in self.values():
            tr, te = self.train_precisions(v), self.test_precisions(v)
            out.append({
                "control": v, "n": len(te),
                "train_mean": statistics.fmean(tr),
                "train_std": statistics.stdev(tr) if len(tr) > 1 else 0.0,
                "test_mean": statistics.fmean(te),
                "test_std": statistics.stdev(te) if len(te) > 1 else 0.0,
                "test_median": statistics.median(te),
            })
        return out


def repetition_seed(master: int, rep: int) -> int:
    return derive_seed(master, rep)


def _embed_key(cfg: ExperimentConfig) -> ExperimentConfig:
    # fields that do not influence graphs or embeddings are normalized away
    return cfg.replace(alpha=0.0, alphas=(), noise_levels=(), removal_fractions=(),
                       repetitions=0, svd="", threads=1)


@lru_cache(maxsize=8)
def _base_graphs(key: ExperimentConfig, rep: int):
    seed = repetition_seed(key.master_seed, rep)
    g = generate_synthetic_graph(key.nodes, key.lam, derive_seed(seed, "graph"))
    g_copy, reference = duplicate_graph(g, COPY_SUFFIX)
    return g, g_copy, reference


@lru_cache(maxsize=8)
def _source_space(key: ExperimentConfig, rep: int, backend) -> EmbeddingSpace:
    g, _, _ = _base_graphs(key, rep)
    seed = repetition_seed(key.master_seed, rep)
    return embed_graph(g, key.walks, key.depth, key.training(derive_seed(seed, "source")),
                       backend)


@lru_cache(maxsize=16)
def _target_space(key: ExperimentConfig, rep: int, removed: float, backend) -> EmbeddingSpace:
    _, g_copy, _ = _base_graphs(key, rep)
    seed = repetition_seed(key.master_seed, rep)
    g_copy = remove_triples(g_copy, removed, derive_seed(seed, "remove", removed))
    return embed_graph(g_copy, key.walks, key.depth, key.training(derive_seed(seed, "target")),
                       backend)


def clear_cache() -> None:
    for fn in (_base_graphs, _source_space, _target_space):
        fn.cache_clear()


def _score(cfg: ExperimentConfig, rep: int, alpha: float, noise: float,
           removed: float) -> tuple[float, float]:
    key = _embed_key(cfg)
    g, g_copy, reference = _base_graphs(key, rep)
    src = _source_space(key, rep, cfg.backend)
    tgt = _target_space(key, rep, removed, cfg.backend)
    seed = repetition_seed(cfg.master_seed, rep)
    train_ref, test_ref = split_alignment(reference, alpha, derive_seed(seed, "split", alpha))
    anchors = inject_noise(train_ref, noise, g_copy.nodes, derive_seed(seed, "noise", noise))
    result = align_and_match(src, tgt, anchors, g.nodes, g_copy.nodes, cfg.svd, cfg.backend)
    pred = result.predicted
    train_p = evaluate(pred.restrict_sources(train_ref.sources()), train_ref).precision
    test_p = evaluate(pred.restrict_sources(test_ref.sources()), test_ref).precision
    return train_p, test_p


def _sweep(cfg: ExperimentConfig, name: str, values, job) -> SweepResult:
    def run_rep(rep):
        rows = []
        for v in values:
            tr, te = job(rep, v)
            log.info("%s=%s rep=%d train=%.4f test=%.4f", name, v, rep, tr, te)
            rows.append(SweepRow(float(v), rep, tr, te))
        return rows

    reps = range(cfg.repetitions)
    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            chunks = list(pool.map(run_rep, reps))
    else:
        chunks = [run_rep(r) for r in reps]
    rows = sorted((r for c in chunks for r in c), key=lambda r: (r.control, r.repetition))
    return SweepResult(name, rows)


def run_duplicate_experiment(cfg: ExperimentConfig) -> SweepResult:
    """Anchor-fraction sweep on an undistorted duplicate graph."""
    return _sweep(cfg, "alpha", cfg.alphas, lambda rep, a: _score(cfg, rep, a, 0.0, 0.0))


def run_noise_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Anchor-noise sweep at fixed ``cfg.alpha``; noise touches only the anchors."""
    return _sweep(cfg, "noise", cfg.noise_levels,
                  lambda rep, r: _score(cfg, rep, cfg.alpha, r, 0.0))


def run_heterogeneity_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Triple-removal sweep on the copy graph at fixed ``cfg.alpha``."""
    return _sweep(cfg, "removed", cfg.removal_fractions,
                  lambda rep, f: _score(cfg, rep, cfg.alpha, 0.0, f))


SWEEPS = {
    "training-size": run_duplicate_experiment,
    "noise": run_noise_sweep,
    "heterogeneity": run_heterogeneity_sweep,
}


# ----------------------------------------------------------------------------
# reporting


def _fmt(x: float) -> str:
    return repr(float(x))


def emit_report(result: SweepResult, destination: IO[str] | str,
                summary_destination: IO[str] | str | None = None) -> list[dict]:
    """Write one CSV row per (control value, repetition).

    The per-value summary (mean/stddev) goes to ``summary_destination`` when
    given, and is returned either way.
    """
    if not result.rows:
        raise ValueError("empty sweep result")
    _with_stream(destination, lambda f: _write_rows(result, f))
    summary = result.summary()
    if summary_destination is not None:
        _with_stream(summary_destination, lambda f: _write_summary(summary, f))
    return summary


def _with_stream(dest, fn):
    if hasattr(dest, "write"):
        fn(dest)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as f:
            fn(f)


def _write_rows(result: SweepResult, f) -> None:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["control", "repetition", "train_precision", "test_precision"])
    for r in result.rows:
        w.writerow([_fmt(r.control), r.repetition, _fmt(r.train_precision),
                    _fmt(r.test_precision)])


def _write_summary(summary: list[dict], f) -> None:
    w = csv.writer(f, lineterminator="\n")
    cols = ["control", "n", "train_mean", "train_std", "test_mean", "test_std", "test_median"]
    w.writerow(cols)
    for s in summary:
        w.writerow([s["n"] if c == "n" else _fmt(s[c]) for c in cols])


def format_summary(result: SweepResult) -> str:
    lines = [f"{result.control_name:>8}  {'n':>2}  {'train':>15}  {'test':>15}  {'median':>6}"]
    for s in result.summary():
        lines.append(f"{s['control']:8.2f}  {s['n']:2d}  "
                     f"{s['train_mean']:.4f} ± {s['train_std']:.4f}  "
                     f"{s['test_mean']:.4f} ± {s['test_std']:.4f}  {s['test_median']:.4f}")
    return "\n".join(lines)
