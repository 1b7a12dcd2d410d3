"""One-sided (Hestenes) Jacobi SVD for small dense matrices."""

from __future__ import annotations

import numpy as np

EPS = np.finfo(np.float64).eps


class SVDConvergenceError(ArithmeticError):
    pass


def _round_robin(n: int):
    """Yield rounds of disjoint index pairs covering every pair once (circle method)."""
    m = n + (n % 2)
    order = list(range(m))
    for _ in range(m - 1):
        half = m // 2
        ps, qs = [], []
        for a, b in zip(order[:half], reversed(order[half:])):
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        yield np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)
        order = [order[0], order[-1]] + order[1:-1]


def _orthonormalize(U: np.ndarray, valid: np.ndarray) -> np.ndarray:
    """Two-pass Gram-Schmidt over the ``valid`` columns (in order), then fill the
    rest with an orthonormal completion drawn from the standard basis.

    Columns of tiny singular values are only accurate to about
    ``eps * ||a|| / s_j``; this keeps ``U`` orthonormal regardless.
    """
    m, k = U.shape
    out = np.zeros_like(U)
    basis: list[np.ndarray] = []

    def residual(v):
        for _ in range(2):
            for b in basis:
                v = v - (b @ v) * b
        return v

    empty = []
    for j in range(k):
        if valid[j]:
            v = residual(U[:, j])
            norm = np.linalg.norm(v)
            if norm > 0.5:
                out[:, j] = v / norm
                basis.append(out[:, j])
                continue
        empty.append(j)
    # the best basis vector has squared residual >= (m - len(basis)) / m; a
    # fixed threshold can reject all of them when few columns are missing
    for j in empty:
        residuals = [residual(e) for e in np.eye(m)]
        norms = [np.linalg.norm(v) for v in residuals]
        best = int(np.argmax(norms))
        out[:, j] = residuals[best] / norms[best]
        basis.append(out[:, j])
    return out


def jacobi_svd(a, tol: float = 1e-15, max_sweeps: int = 100):
    """Thin SVD ``a = U @ diag(s) @ Vt`` of an ``m x n`` matrix with ``m >= n``.

    Columns are orthogonalized by plane rotations until every pair satisfies
    ``|a_p . a_q| <= tol * |a_p| |a_q|``; disjoint pairs of a round are
    rotated together. Singular values come back in descending order. Columns
    of ``U`` belonging to zero singular values are an arbitrary orthonormal
    completion, so ``U`` is always orthonormal.

    Returns ``(U, s, Vt, rank)``.
    """
    a = np.array(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite values")
    m, n = a.shape
    if m < n:
        U, s, Vt, rank = jacobi_svd(a.T, tol, max_sweeps)
        return Vt.T, s, U.T, rank

    A = np.asfortranarray(a)
    V = np.eye(n, order="F")
    rounds = list(_round_robin(n))
    # columns at rounding level of ||a|| are numerically zero; without this
    # floor, noise-only columns keep rotating forever
    floor = n * (EPS * np.linalg.norm(A)) ** 2
    for _ in range(max_sweeps):
        rotated = False
        for p, q in rounds:
            if len(p) == 0:
                continue
            ap, aq = A[:, p], A[:, q]
            alpha = np.einsum("ij,ij->j", ap, ap)
            beta = np.einsum("ij,ij->j", aq, aq)
            gamma = np.einsum("ij,ij->j", ap, aq)
            hit = (np.abs(gamma) > tol * np.sqrt(alpha * beta)) & (np.abs(gamma) > floor)
            if not hit.any():
                continue
            rotated = True
            p, q = p[hit], q[hit]
            alpha, beta, gamma = alpha[hit], beta[hit], gamma[hit]
            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            for M in (A, V):
                mp, mq = M[:, p], M[:, q]
                M[:, p] = c * mp - s * mq
                M[:, q] = s * mp + c * mq
        if not rotated:
            break
    else:
        raise SVDConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")

    sigma = np.linalg.norm(A, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, A, V = sigma[order], A[:, order], V[:, order]
    cutoff = max(m, n) * EPS * (sigma[0] if n else 0.0)
    valid = sigma > cutoff
    U = np.zeros((m, n))
    U[:, valid] = A[:, valid] / sigma[valid]
    U = _orthonormalize(U, valid)
    return U, sigma, np.ascontiguousarray(V.T), int(valid.sum())
