"""Command-line interface.

Exit status: 0 on success, 1 on runtime or I/O failure, 2 on usage errors
(bad flags, missing input files).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from kgorient import _backend
from kgorient._seeding import derive_seed
from kgorient.embedder import EmbeddingSpace, TrainingConfig, train
from kgorient.experiments import (SWEEPS, COPY_SUFFIX, ExperimentConfig, align_and_match,
                                  emit_report, evaluate, format_summary, load_config)
from kgorient.graph import (FORMATS, duplicate_graph, generate_synthetic_graph, read_graph,
                            write_graph)
from kgorient.matcher import (build_anchor_set, match_nearest, read_alignment,
                              write_alignment)
from kgorient.orientation import SOURCE, TARGET, RotationModel, apply_rotation, compute_rotation
from kgorient.walker import WalkCorpus, generate_walks

log = logging.getLogger("kgorient")


class UsageError(Exception):
    pass


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _existing(path):
    if not os.path.isfile(path):
        raise UsageError(f"input file not found: {path}")
    return path


def _graph(path, fmt):
    return read_graph(_existing(path), fmt)


def _training_args(p, embedding=True):
    p.add_argument("--walks", type=_positive_int, default=150, help="walks per node")
    p.add_argument("--depth", type=_positive_int, default=6, help="hops per walk")
    if embedding:
        p.add_argument("--dimension", type=_positive_int, default=100)
        p.add_argument("--window", type=_positive_int, default=6)
        p.add_argument("--epochs", type=_positive_int, default=5)
        p.add_argument("--negatives", type=_positive_int, default=5)
        p.add_argument("--lr", type=float, default=0.025)
        p.add_argument("--min-count", type=_positive_int, default=1)


def _training_config(args, seed):
    return TrainingConfig(args.dimension, args.window, args.epochs, args.negatives,
                          args.lr, args.min_count, seed)


# ----------------------------------------------------------------------------


def cmd_generate(args):
    if args.nodes < 1:
        raise UsageError("--nodes must be >= 1")
    if args.ref and not args.duplicate_suffix:
        raise UsageError("--ref requires --duplicate-suffix")
    g = generate_synthetic_graph(args.nodes, args.lam, args.seed)
    write_graph(g, args.out, args.format)
    print(f"{args.out}: {len(g.nodes)} nodes, {len(g.triples)} triples")
    if args.duplicate_suffix:
        copy, ref = duplicate_graph(g, args.duplicate_suffix)
        copy_out = args.copy_out or _suffixed(args.out, args.duplicate_suffix)
        write_graph(copy, copy_out, args.format)
        print(f"{copy_out}: {len(copy.nodes)} nodes, {len(copy.triples)} triples")
        if args.ref:
            write_alignment(ref, args.ref)
            print(f"{args.ref}: {len(ref)} correspondences")
    return 0


def _suffixed(path, suffix):
    root, ext = os.path.splitext(path)
    return f"{root}{suffix}{ext}"


def cmd_walk(args):
    g = _graph(args.graph, args.format)
    corpus = generate_walks(g, args.walks, args.depth, args.seed)
    with open(args.out, "w", encoding="utf-8", newline="\n") as f:
        corpus.dump(f)
    print(f"{args.out}: {len(corpus)} walks, {len(corpus.vocabulary)} distinct tokens")
    return 0


def cmd_embed(args):
    with open(_existing(args.corpus), encoding="utf-8") as f:
        corpus = WalkCorpus.load(f)
    space = train(corpus, _training_config(args, args.seed))
    with open(args.out, "w", encoding="utf-8", newline="\n") as f:
        space.dump(f)
    losses = " ".join(f"{x:.4f}" for x in space.losses)
    print(f"{args.out}: {len(space)} vectors, d={space.dimension}; epoch losses {losses}")
    return 0


def _load_space(path):
    with open(_existing(path), encoding="utf-8") as f:
        return EmbeddingSpace.load(f)


def cmd_rotate(args):
    src, tgt = _load_space(args.source), _load_space(args.target)
    anchors = read_alignment(_existing(args.anchors))
    anchor_set = build_anchor_set(anchors, src, tgt)
    model = compute_rotation(anchor_set, svd=args.svd)
    with open(args.out, "w", encoding="utf-8", newline="\n") as f:
        model.dump(f)
    print(f"{args.out}: {len(anchor_set)} anchors ({len(anchor_set.skipped)} skipped), "
          f"rank {model.rank}/{model.dimension}, det {model.determinant:+.3f}")
    return 0


def cmd_match(args):
    src, tgt = _load_space(args.source), _load_space(args.target)
    with open(_existing(args.rotation), encoding="utf-8") as f:
        model = RotationModel.load(f)
    cand_s = _graph(args.source_graph, args.format).nodes if args.source_graph else None
    cand_t = _graph(args.target_graph, args.format).nodes if args.target_graph else None
    predicted = match_nearest(apply_rotation(model, src, SOURCE),
                              apply_rotation(model, tgt, TARGET), cand_s, cand_t)
    write_alignment(predicted, args.out)
    print(f"{args.out}: {len(predicted)} correspondences ({len(predicted.skipped)} skipped)")
    return 0


def cmd_evaluate(args):
    predicted = read_alignment(_existing(args.predicted))
    reference = read_alignment(_existing(args.reference))
    print(evaluate(predicted, reference))
    return 0


def cmd_pipeline(args):
    anchors_path = _existing(args.anchors)
    ref_path = _existing(args.eval) if args.eval else None
    g_src = _graph(args.source, args.format)
    g_tgt = _graph(args.target, args.format)
    anchors = read_alignment(anchors_path)

    spaces = []
    for side, g in (("source", g_src), ("target", g_tgt)):
        cfg = _training_config(args, derive_seed(args.seed, side))
        corpus = generate_walks(g, args.walks, args.depth, derive_seed("walks", cfg.seed))
        spaces.append(train(corpus, cfg))
        log.info("%s: %d walks, %d vectors", side, len(corpus), len(spaces[-1]))

    result = align_and_match(spaces[0], spaces[1], anchors, g_src.nodes, g_tgt.nodes, args.svd)
    write_alignment(result.predicted, args.out)
    print(f"{args.out}: {len(result.predicted)} correspondences; "
          f"rotation rank {result.model.rank}/{result.model.dimension}")
    if ref_path:
        reference = read_alignment(ref_path)
        print(f"all:  {evaluate(result.predicted, reference)}")
        anchor_sources = set(anchors.sources())
        test_ref = reference.restrict_sources(
            s for s in reference.sources() if s not in anchor_sources)
        if len(test_ref):
            test_pred = result.predicted.restrict_sources(test_ref.sources())
            print(f"test: {evaluate(test_pred, test_ref)}")
    return 0


def cmd_experiment(args):
    if args.sweep not in SWEEPS:
        raise UsageError(f"unknown sweep {args.sweep!r}; choose from {', '.join(SWEEPS)}")
    cfg = load_config(_existing(args.config)) if args.config else ExperimentConfig()
    overrides = {}
    if args.seed_given:
        overrides["master_seed"] = args.seed
    if args.threads:
        overrides["threads"] = args.threads
    if args.repetitions:
        overrides["repetitions"] = args.repetitions
    cfg = cfg.replace(**overrides)
    result = SWEEPS[args.sweep](cfg)
    emit_report(result, args.out, args.summary)
    print(format_summary(result))
    print(f"{args.out}: {len(result.rows)} rows")
    return 0


# ----------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kgorient",
        description="Match graphs by rotating independently trained walk embeddings.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--backend", choices=("auto", "cython", "python"), default="auto",
                        help="kernel implementation (default: compiled if built)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=FORMATS, default=None,
                       help="graph file format (default: by extension)")
        return p

    p = common(sub.add_parser("generate", help="write a synthetic Poisson graph"), seed=False)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=4.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--duplicate-suffix", default=None,
                   help=f"also write a renamed copy (e.g. {COPY_SUFFIX})")
    p.add_argument("--copy-out", default=None)
    p.add_argument("--ref", default=None, help="reference alignment TSV for the copy")
    p.set_defaults(func=cmd_generate)

    p = common(sub.add_parser("walk", help="dump a random-walk corpus"))
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    _training_args(p, embedding=False)
    p.set_defaults(func=cmd_walk)

    p = common(sub.add_parser("embed", help="train SGNS vectors on a walk corpus"))
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    _training_args(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("rotate", help="fit the rotation from anchor correspondences")
    p.add_argument("--source", required=True, help="source embedding file")
    p.add_argument("--target", required=True, help="target embedding file")
    p.add_argument("--anchors", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svd", choices=("jacobi", "numpy"), default="jacobi")
    p.set_defaults(func=cmd_rotate)

    p = common(sub.add_parser("match", help="nearest-neighbor matching in the rotated frame"),
               seed=False)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--rotation", required=True)
    p.add_argument("--source-graph", help="restrict source candidates to this graph's nodes")
    p.add_argument("--target-graph", help="restrict target candidates to this graph's nodes")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("evaluate", help="micro precision/recall/F1")
    p.add_argument("--predicted", required=True)
    p.add_argument("--reference", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = common(sub.add_parser("pipeline", help="walk, embed, rotate and match two graphs"))
    p.add_argument("--source", required=True, help="source graph file")
    p.add_argument("--target", required=True, help="target graph file")
    p.add_argument("--anchors", required=True, help="anchor alignment TSV")
    p.add_argument("--out", required=True, help="predicted alignment TSV")
    p.add_argument("--eval", default=None, help="reference alignment to score against")
    p.add_argument("--svd", choices=("jacobi", "numpy"), default="jacobi")
    _training_args(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("experiment", help="run a synthetic sweep and write a CSV report")
    p.add_argument("--sweep", required=True, help="training-size, noise or heterogeneity")
    p.add_argument("--config", default=None, help="key = value config file")
    p.add_argument("--out", required=True)
    p.add_argument("--summary", default=None, help="per-value summary CSV")
    p.add_argument("--seed", type=int, default=None, help="overrides master_seed")
    p.add_argument("--repetitions", type=_positive_int, default=None)
    p.add_argument("--threads", type=_positive_int, default=None,
                   help="parallel repetitions; results do not depend on it")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "experiment":
        args.seed_given = args.seed is not None
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    if args.backend != "auto":
        os.environ["KGORIENT_BACKEND"] = args.backend
        try:
            _backend.kernels = _backend.get(args.backend)
        except RuntimeError as exc:
            parser.error(str(exc))
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"kgorient {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"kgorient {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
