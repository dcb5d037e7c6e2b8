"""PPMI transformation, truncated SVD embeddings, and similarity queries.

The co-occurrence counts of one time slice become a sparse PPMI matrix with
context-distribution smoothing; a seeded randomized SVD factors it and word
vectors are the rows of U_d * Sigma_d^p. Similarities between slice vectors are
plain cosines, computed on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from chronolex.cooc import SparseCooc
from chronolex.corpus import Vocabulary
from chronolex.errors import (
    DimensionMismatch,
    EmptyMatrix,
    InvalidDimension,
    UnknownWord,
)

DEFAULT_DIMENSION = 300
DEFAULT_ALPHA = 0.75
DEFAULT_EIG_WEIGHT = 0.0
DEFAULT_OVERSAMPLE = 10
# slow spectral decay needs this many QR-stabilized iterations for 1e-6
# relative accuracy on truncated singular values at desk scale
DEFAULT_POWER_ITERATIONS = 10


@dataclass
class PpmiMatrix:
    """Sparse positive PMI matrix; zero and negative PMI entries are elided."""

    vocab_size: int
    matrix: sp.csr_matrix
    alpha: float

    @classmethod
    def from_dense(cls, dense: np.ndarray, alpha: float = 1.0) -> "PpmiMatrix":
        """Wrap an explicit matrix, keeping only its positive entries."""
        dense = np.asarray(dense, dtype=np.float64)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ValueError("expected a square matrix")
        kept = np.where(dense > 0, dense, 0.0)
        csr = sp.csr_matrix(kept)
        csr.eliminate_zeros()
        return cls(vocab_size=dense.shape[0], matrix=csr, alpha=alpha)

    def row(self, word_id: int) -> tuple[np.ndarray, np.ndarray]:
        """Context ids and PPMI values of one row."""
        start, end = self.matrix.indptr[word_id], self.matrix.indptr[word_id + 1]
        return self.matrix.indices[start:end], self.matrix.data[start:end]

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    @property
    def nnz(self) -> int:
        return self.matrix.nnz


def ppmi(cooc: SparseCooc, alpha: float = DEFAULT_ALPHA) -> PpmiMatrix:
    """Positive PMI with context-distribution smoothing.

    PPMI(w, c) = max(0, log[ P(w,c) / (P(w) * P_a(c)) ]) with
    P(w,c) = #(w,c)/total, P(w) = sum_c #(w,c)/total and the smoothed context
    marginal P_a(c) = #(c)^alpha / sum_c' #(c')^alpha.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if cooc.total_pairs <= 0:
        raise EmptyMatrix("co-occurrence counts sum to zero")
    targets, contexts, counts = cooc.arrays()
    size = cooc.vocab_size
    row_sums = np.bincount(targets, weights=counts, minlength=size)
    col_sums = np.bincount(contexts, weights=counts, minlength=size)
    col_alpha = col_sums**alpha
    z = col_alpha.sum()
    # log[P(w,c) / (P(w) P_a(c))] == log[#(w,c) * Z / (row_w * col_c^alpha)]
    values = np.log(counts * z / (row_sums[targets] * col_alpha[contexts]))
    positive = values > 0
    matrix = sp.csr_matrix(
        (values[positive], (targets[positive], contexts[positive])),
        shape=(size, size),
    )
    return PpmiMatrix(vocab_size=size, matrix=matrix, alpha=alpha)


@dataclass
class EmbeddingModel:
    """Per-slice dense word vectors: rows of U_d * Sigma_d^p."""

    slice_id: int
    dimension: int
    vectors: np.ndarray
    eig_weight: float
    svd_seed: int
    vocab: Vocabulary | None = None
    singular_values: np.ndarray | None = None
    basis_u: np.ndarray | None = field(default=None, repr=False)
    basis_vt: np.ndarray | None = field(default=None, repr=False)

    def __contains__(self, word: str) -> bool:
        return self.vocab is not None and word in self.vocab

    def vector(self, word: str) -> np.ndarray:
        if self.vocab is None or word not in self.vocab:
            raise UnknownWord(word, f"not in slice {self.slice_id} vocabulary")
        return self.vectors[self.vocab.id_of(word)]


def truncated_svd(
    matrix: PpmiMatrix,
    d: int,
    p: float = DEFAULT_EIG_WEIGHT,
    seed: int = 0,
    *,
    vocab: Vocabulary | None = None,
    slice_id: int = 0,
    oversample: int = DEFAULT_OVERSAMPLE,
    power_iterations: int = DEFAULT_POWER_ITERATIONS,
) -> EmbeddingModel:
    """Rank-d factorization via seeded randomized range finding.

    A Gaussian sketch of d + oversample columns is refined with QR-stabilized
    power iterations, the projected matrix is decomposed exactly, and each
    singular vector's sign is fixed so its largest-magnitude entry is
    non-negative. Trailing singular values that are numerically zero produce
    zero vector components rather than an error.
    """
    size = matrix.vocab_size
    if not (1 <= d <= size):
        raise InvalidDimension(f"d must lie in [1, {size}], got {d}")
    a = matrix.matrix
    rng = np.random.default_rng(seed)
    n_sketch = min(d + oversample, size)
    omega = rng.standard_normal((size, n_sketch))
    q, _ = np.linalg.qr(a @ omega)
    for _ in range(power_iterations):
        q, _ = np.linalg.qr(a.T @ q)
        q, _ = np.linalg.qr(a @ q)
    b = (a.T @ q).T
    u_small, sigma, vt = np.linalg.svd(b, full_matrices=False)
    u = q @ u_small

    u = u[:, :d]
    sigma = sigma[:d].copy()
    vt = vt[:d, :]

    # Deterministic sign: largest-magnitude entry of each left vector >= 0.
    flip = u[np.abs(u).argmax(axis=0), np.arange(d)] < 0
    u[:, flip] *= -1.0
    vt[flip, :] *= -1.0

    cutoff = sigma[0] * size * np.finfo(np.float64).eps if sigma.size else 0.0
    weights = np.where(sigma > cutoff, sigma, 0.0) ** p
    weights[sigma <= cutoff] = 0.0
    vectors = u * weights

    return EmbeddingModel(
        slice_id=slice_id,
        dimension=d,
        vectors=vectors,
        eig_weight=p,
        svd_seed=seed,
        vocab=vocab,
        singular_values=sigma,
        basis_u=u,
        basis_vt=vt,
    )


def cosine(u: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray) -> float:
    """Cosine similarity; zero-norm vectors compare as 0 by convention."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(f"vector shapes differ: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(u @ v / (nu * nv))


def cosine_to_all(vectors: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Cosine of one vector against every row; zero-norm rows yield 0."""
    norms = np.linalg.norm(vectors, axis=1)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return np.zeros(vectors.shape[0])
    safe = np.where(norms == 0.0, 1.0, norms)
    out = vectors @ v / (safe * nv)
    out[norms == 0.0] = 0.0
    return out


def top_k_similar(
    word: str, model: EmbeddingModel, k: int, exclude_self: bool = True
) -> list[tuple[str, float]]:
    """k nearest words by cosine, descending, ties broken lexicographically."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if model.vocab is None or word not in model.vocab:
        raise UnknownWord(word, f"not in slice {model.slice_id} vocabulary")
    vocab = model.vocab
    sims = cosine_to_all(model.vectors, model.vectors[vocab.id_of(word)])
    ranked = sorted(
        ((vocab.word_of(i), float(s)) for i, s in enumerate(sims)),
        key=lambda ws: (-ws[1], ws[0]),
    )
    if exclude_self:
        ranked = [ws for ws in ranked if ws[0] != word]
    return ranked[:k]
