"""Absolute orientation: the orthogonal map taking centered target anchors
onto centered source anchors.

Vectors are rows. With centered anchor matrices ``A_c`` (source) and ``B_c``
(target), ``H = B_c.T @ A_c``; from ``H = U S V^T`` the rotation is
``R = U V^T`` and the target side is moved by ``B_c @ R``. No determinant
correction is applied, so ``R`` may be a reflection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from kgorient.embedder import EmbeddingSpace
from kgorient.linalg import SVDConvergenceError, jacobi_svd

log = logging.getLogger(__name__)

SOURCE = "source"
TARGET = "target"


@dataclass(frozen=True, eq=False)
class AnchorSet:
    """Paired anchor vectors, one row per pair.

    ``skipped`` lists the correspondences that could not be turned into a
    pair because a vector was missing.
    """

    source: np.ndarray
    target: np.ndarray
    pairs: tuple = ()
    skipped: tuple = field(default=())

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.source, dtype=np.float64))
        b = np.atleast_2d(np.asarray(self.target, dtype=np.float64))
        if a.shape != b.shape:
            raise ValueError(f"anchor sets differ in shape: {a.shape} vs {b.shape}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("need at least one anchor pair of dimension >= 1")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("anchor vectors must be finite")
        object.__setattr__(self, "source", a)
        object.__setattr__(self, "target", b)

    def __len__(self):
        return self.source.shape[0]

    @property
    def dimension(self) -> int:
        return self.source.shape[1]


@dataclass(frozen=True, eq=False)
class RotationModel:
    source_mean: np.ndarray
    target_mean: np.ndarray
    rotation: np.ndarray
    singular_values: np.ndarray = None  # type: ignore[assignment]
    rank: int = -1

    @property
    def dimension(self) -> int:
        return self.rotation.shape[0]

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.rotation))

    @property
    def rank_deficient(self) -> bool:
        return 0 <= self.rank < self.dimension

    def orthogonality_error(self) -> float:
        R = self.rotation
        return float(np.linalg.norm(R.T @ R - np.eye(self.dimension)))

    @classmethod
    def identity(cls, d: int) -> "RotationModel":
        return cls(np.zeros(d), np.zeros(d), np.eye(d), np.zeros(d), d)

    def dump(self, stream: IO[str]) -> None:
        def row(v):
            return " ".join(repr(float(x)) for x in v)

        stream.write(f"{self.dimension}\n")
        stream.write(row(self.source_mean) + "\n")
        stream.write(row(self.target_mean) + "\n")
        for r in self.rotation:
            stream.write(row(r) + "\n")

    @classmethod
    def load(cls, stream: IO[str]) -> "RotationModel":
        lines = [ln for ln in stream.read().splitlines() if ln.strip()]
        d = int(lines[0])
        if len(lines) != 3 + d:
            raise ValueError(f"rotation file for d={d} needs {3 + d} lines, got {len(lines)}")
        vals = [np.array([float(x) for x in ln.split()]) for ln in lines[1:]]
        if any(len(v) != d for v in vals):
            raise ValueError("row length does not match dimension")
        return cls(vals[0], vals[1], np.vstack(vals[2:]))


def compute_rotation(anchors: AnchorSet, svd: str = "jacobi") -> RotationModel:
    """Fit the rotation from paired anchors.

    ``svd`` selects the decomposition: the in-repo Jacobi routine or
    ``"numpy"`` (LAPACK). If the centered anchors do not span all ``d``
    dimensions the model is flagged ``rank_deficient``; with a single pair
    ``H`` vanishes and the identity comes back.
    """
    a, b = anchors.source, anchors.target
    a_mean = a.mean(axis=0)
    b_mean = b.mean(axis=0)
    a_c = a - a_mean
    b_c = b - b_mean
    H = b_c.T @ a_c

    if svd == "jacobi":
        U, s, Vt, rank = jacobi_svd(H)
    elif svd == "numpy":
        try:
            U, s, Vt = np.linalg.svd(H)
        except np.linalg.LinAlgError as exc:
            raise SVDConvergenceError(str(exc)) from exc
        rank = int((s > max(H.shape) * np.finfo(float).eps * (s[0] if len(s) else 0)).sum())
    else:
        raise ValueError(f"unknown svd backend {svd!r}")

    model = RotationModel(a_mean, b_mean, U @ Vt, s, rank)
    if model.rank_deficient:
        log.info("anchor cross-covariance has rank %d < %d; rotation is not unique",
                 rank, model.dimension)
    return model


def apply_rotation(model: RotationModel, space: EmbeddingSpace, side: str) -> EmbeddingSpace:
    """Move ``space`` into the common frame.

    The source side is only centered (``x - source_mean``); the target side is
    centered and rotated (``(y - target_mean) @ R``).
    """
    if space.dimension != model.dimension:
        raise ValueError(f"space has d={space.dimension}, model has d={model.dimension}")
    if side == SOURCE:
        return space.with_vectors(space.vectors - model.source_mean)
    if side == TARGET:
        return space.with_vectors((space.vectors - model.target_mean) @ model.rotation)
    raise ValueError(f"side must be {SOURCE!r} or {TARGET!r}")


def anchor_residual(model: RotationModel, anchors: AnchorSet) -> float:
    """Frobenius norm of ``B_c R - A_c`` over the anchors."""
    a_c = anchors.source - model.source_mean
    b_c = anchors.target - model.target_mean
    return float(np.linalg.norm(b_c @ model.rotation - a_c))


def anchors_from_arrays(source: Sequence, target: Sequence) -> AnchorSet:
    return AnchorSet(np.asarray(source, dtype=np.float64), np.asarray(target, dtype=np.float64))
