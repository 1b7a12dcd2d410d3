"""Graph matching by aligning independently trained random-walk embeddings.

Each graph is embedded on its own (random walks + skip-gram), the target
space is rotated onto the source space from a set of anchor
correspondences, and every source node is matched to its nearest target.
"""

from kgorient._backend import BACKEND
from kgorient.embedder import EmbeddingSpace, TrainingConfig, train
from kgorient.experiments import (EvalReport, ExperimentConfig, evaluate,
                                  run_duplicate_experiment, run_heterogeneity_sweep,
                                  run_noise_sweep)
from kgorient.graph import (Graph, Triple, duplicate_graph, generate_synthetic_graph,
                            parse_triples, remove_triples)
from kgorient.matcher import (Alignment, Correspondence, build_anchor_set, inject_noise,
                              match_nearest, split_alignment)
from kgorient.orientation import (AnchorSet, RotationModel, apply_rotation,
                                  compute_rotation)
from kgorient.walker import WalkCorpus, generate_walks

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Alignment", "AnchorSet", "Correspondence", "EmbeddingSpace", "EvalReport",
    "ExperimentConfig", "Graph", "RotationModel", "TrainingConfig", "Triple", "WalkCorpus",
    "apply_rotation", "build_anchor_set", "compute_rotation", "duplicate_graph", "evaluate",
    "generate_synthetic_graph", "generate_walks", "inject_noise", "match_nearest",
    "parse_triples", "remove_triples", "run_duplicate_experiment",
    "run_heterogeneity_sweep", "run_noise_sweep", "split_alignment", "train",
]
