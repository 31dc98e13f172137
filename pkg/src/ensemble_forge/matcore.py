"""Dense matrices over R, C and H, seeded sampling, and base factorization kernels.

Quaternion matrices are stored through their complex embedding: each quaternion
entry a + b*i + c*j + d*k becomes the 2x2 complex block [[alpha, beta],
[-conj(beta), conj(alpha)]] with alpha = a + b*i, beta = c + d*i, so a logical
r x c quaternion matrix is a (2r) x (2c) complex array.  The embedding is
characterized by X = J conj(X) J^T with J the block-diagonal matrix of 2x2
rotation blocks [[0, 1], [-1, 0]].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import (
    DegeneracyError,
    DimensionError,
    DomainError,
    SingularMatrixError,
    SymmetryError,
)

__all__ = [
    "FieldTag",
    "RngState",
    "DenseMatrix",
    "quaternion_j",
    "sample_gaussian_matrix",
    "sample_haar",
    "ql_decompose",
    "hermitian_eig",
    "svd",
]


class FieldTag(enum.Enum):
    """Division algebra a matrix lives over; fixes the Dyson index beta."""

    Real = "real"
    Complex = "complex"
    Quaternion = "quaternion"

    @property
    def beta(self) -> int:
        return {FieldTag.Real: 1, FieldTag.Complex: 2, FieldTag.Quaternion: 4}[self]

    @property
    def embedding_factor(self) -> int:
        """Ratio of stored complex size to logical size (2 for quaternions)."""
        return 2 if self is FieldTag.Quaternion else 1


def field_for_beta(beta: int) -> FieldTag:
    for tag in FieldTag:
        if tag.beta == beta:
            return tag
    raise DomainError(f"no field with beta={beta}")


class RngState:
    """Deterministic random stream: a seed plus a spawn-key stream counter.

    Identical seed and identical call sequence give bit-identical samples.
    ``substream(i)`` derives an independent stream for draw ``i`` so that
    batch sampling is reproducible independently of evaluation order.
    """

    def __init__(self, seed: int, spawn_key: Tuple[int, ...] = ()):
        self.seed = int(seed)
        self.spawn_key = tuple(int(k) for k in spawn_key)
        self.generator = np.random.default_rng(
            np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        )

    def substream(self, index: int) -> "RngState":
        return RngState(self.seed, self.spawn_key + (int(index),))

    def standard_normal(self, shape) -> np.ndarray:
        return self.generator.standard_normal(shape)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.generator.uniform(low, high, size)

    def __repr__(self):
        return f"RngState(seed={self.seed}, spawn_key={self.spawn_key})"


def quaternion_j(n: int) -> np.ndarray:
    """Block-diagonal J with n copies of [[0, 1], [-1, 0]] (interleaved pairs)."""
    j = np.zeros((2 * n, 2 * n))
    j[0::2, 1::2] = np.eye(n)
    j[1::2, 0::2] = -np.eye(n)
    return j


def _quaternion_residual(arr: np.ndarray) -> float:
    r2, c2 = arr.shape
    jr = quaternion_j(r2 // 2)
    jc = quaternion_j(c2 // 2)
    return float(np.max(np.abs(arr - jr @ arr.conj() @ jc.T))) if arr.size else 0.0


@dataclass(frozen=True)
class DenseMatrix:
    """A dense matrix tagged with its division algebra.

    ``rows``/``cols`` are logical dimensions; for quaternions the stored
    complex array has shape (2*rows, 2*cols).
    """

    field: FieldTag
    array: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.array, dtype=complex)
        object.__setattr__(self, "array", arr)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise DimensionError(f"expected a nonempty 2-d array, got shape {arr.shape}")
        if self.field is FieldTag.Quaternion:
            if arr.shape[0] % 2 or arr.shape[1] % 2:
                raise DimensionError(
                    f"quaternion embedding must have even shape, got {arr.shape}"
                )
            res = _quaternion_residual(arr)
            scale = max(1.0, float(np.max(np.abs(arr))))
            if res > 1e-8 * scale:
                raise DimensionError(
                    f"array violates the quaternion embedding symmetry (residual {res:.2e})"
                )

    @property
    def rows(self) -> int:
        return self.array.shape[0] // self.field.embedding_factor

    @property
    def cols(self) -> int:
        return self.array.shape[1] // self.field.embedding_factor

    @property
    def beta(self) -> int:
        return self.field.beta

    def adjoint(self) -> "DenseMatrix":
        return DenseMatrix(self.field, self.array.conj().T)

    def quaternion_structure_residual(self) -> float:
        if self.field is not FieldTag.Quaternion:
            return 0.0
        return _quaternion_residual(self.array)

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.field is not other.field:
            raise DimensionError("cannot multiply matrices over different fields")
        return DenseMatrix(self.field, self.array @ other.array)


def identity(field: FieldTag, n: int) -> DenseMatrix:
    return DenseMatrix(field, np.eye(n * field.embedding_factor, dtype=complex))


# ---------------------------------------------------------------------------
# sampling


def sample_gaussian_matrix(
    field: FieldTag, rows: int, cols: int, rng: RngState
) -> DenseMatrix:
    """i.i.d. Gaussian matrix; every real component of every entry is N(0, 1).

    With this convention (G + G^dagger)/2 has density exp(-tr(p^dagger p)/2),
    which reproduces the e^{-lambda/2} Laguerre and e^{-lambda^2/2} Hermite
    weights for all three betas.
    """
    if rows < 1 or cols < 1:
        raise DimensionError(f"matrix dimensions must be positive, got {rows}x{cols}")
    if field is FieldTag.Real:
        return DenseMatrix(field, rng.standard_normal((rows, cols)).astype(complex))
    if field is FieldTag.Complex:
        comp = rng.standard_normal((2, rows, cols))
        return DenseMatrix(field, comp[0] + 1j * comp[1])
    comp = rng.standard_normal((4, rows, cols))
    return DenseMatrix(field, _embed_quaternion(comp[0], comp[1], comp[2], comp[3]))


def _embed_quaternion(a, b, c, d) -> np.ndarray:
    """Embed a + b i + c j + d k entrywise into 2x2 complex blocks."""
    alpha = a + 1j * b
    beta = c + 1j * d
    r, ccols = alpha.shape
    out = np.empty((2 * r, 2 * ccols), dtype=complex)
    out[0::2, 0::2] = alpha
    out[0::2, 1::2] = beta
    out[1::2, 0::2] = -beta.conj()
    out[1::2, 1::2] = alpha.conj()
    return out


def sample_haar(field: FieldTag, n: int, rng: RngState) -> DenseMatrix:
    """Haar-distributed element of O(n), U(n) or U(n, H).

    QL of a Gaussian matrix with the triangular factor's diagonal made real
    positive; the uniqueness of that normalization makes Q exactly Haar.
    """
    g = sample_gaussian_matrix(field, n, n, rng)
    q, _ = ql_decompose(g)
    return q


# ---------------------------------------------------------------------------
# QL decomposition


def ql_decompose(m: DenseMatrix) -> Tuple[DenseMatrix, DenseMatrix]:
    """Factor M = Q L with orthonormal columns Q and lower-triangular L.

    L has positive real diagonal (at the quaternion level, lower
    block-triangular with positive real scalar diagonal blocks).  Requires
    rows >= cols and full column rank.
    """
    if m.rows < m.cols:
        raise DimensionError(f"QL needs rows >= cols, got {m.rows}x{m.cols}")
    if m.field is FieldTag.Quaternion:
        q_arr, l_arr = _quaternion_mgs_ql(m.array)
    else:
        q_arr, l_arr = _ql_via_qr(m.array)
        _check_ql_rank(l_arr, m.array, block=1)
    if m.field is FieldTag.Real:
        q_arr, l_arr = q_arr.real.astype(complex), l_arr.real.astype(complex)
    return DenseMatrix(m.field, q_arr), DenseMatrix(m.field, l_arr)


def _ql_via_qr(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    q, r = np.linalg.qr(a[::-1, ::-1])
    q = q[::-1, ::-1]
    l = r[::-1, ::-1]
    d = np.diagonal(l).copy()
    ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return q * ph, l / ph[:, None]


def _check_ql_rank(l_arr: np.ndarray, a: np.ndarray, block: int) -> None:
    scale = np.linalg.norm(a)
    diag = np.abs(np.diagonal(l_arr))
    bad = np.nonzero(diag < 1e-10 * max(scale, 1e-300))[0]
    if bad.size:
        raise SingularMatrixError(
            f"rank-deficient input: column {bad[0] // block} has negligible "
            f"triangular diagonal {diag[bad[0]]:.2e}"
        )


def _quaternion_mgs_ql(a: np.ndarray, passes: int = 2) -> Tuple[np.ndarray, np.ndarray]:
    """Structure-preserving QL over H via blocked modified Gram-Schmidt.

    Columns are processed in quaternionic pairs from right to left; two MGS
    passes keep orthogonality at machine level.
    """
    rows2, cols2 = a.shape
    k = cols2 // 2
    q = np.array(a, dtype=complex)
    l = np.zeros((cols2, cols2), dtype=complex)
    scale = np.linalg.norm(a)
    for j in range(k - 1, -1, -1):
        cblk = q[:, 2 * j : 2 * j + 2]
        for _ in range(passes):
            for i in range(k - 1, j, -1):
                vblk = q[:, 2 * i : 2 * i + 2]
                proj = vblk.conj().T @ cblk
                cblk -= vblk @ proj
                l[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] += proj
        gram = cblk.conj().T @ cblk
        rho = np.sqrt(max(float(gram[0, 0].real + gram[1, 1].real) / 2.0, 0.0))
        if rho < 1e-10 * max(scale, 1e-300):
            raise SingularMatrixError(
                f"rank-deficient input: column {j} has negligible norm {rho:.2e}"
            )
        cblk /= rho
        l[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = rho * np.eye(2)
    return q, l


# ---------------------------------------------------------------------------
# quaternionic structure utilities


def _quaternion_partner(v: np.ndarray) -> np.ndarray:
    """Second embedded column of the quaternionic column containing v."""
    j = quaternion_j(v.shape[0] // 2)
    return -(j @ v.conj())


def _structured_basis(cols: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Quaternion-structured orthonormal basis of a psi-invariant column space.

    ``cols`` holds an (approximate) orthonormal basis of a subspace closed
    under v -> -J conj(v).  Returns columns arranged in quaternionic pairs.
    """
    dim = cols.shape[1]
    if dim % 2:
        raise DegeneracyError("psi-invariant subspace must be even-dimensional")
    out = np.zeros((cols.shape[0], dim), dtype=complex)
    have = 0
    for c in range(dim):
        v = cols[:, c].copy()
        for _ in range(2):
            if have:
                v -= out[:, :have] @ (out[:, :have].conj().T @ v)
        nv = np.linalg.norm(v)
        if nv < tol:
            continue
        v /= nv
        w = _quaternion_partner(v)
        for _ in range(2):
            w -= v * (v.conj() @ w)
            if have:
                w -= out[:, :have] @ (out[:, :have].conj().T @ w)
        nw = np.linalg.norm(w)
        if nw < 0.5:
            raise DegeneracyError("quaternionic pairing failed inside eigenspace")
        out[:, have] = v
        out[:, have + 1] = w / nw
        have += 2
        if have == dim:
            break
    if have != dim:
        raise DegeneracyError("could not complete a quaternion-structured basis")
    return out


def _structured_completion(existing: np.ndarray, total: int) -> np.ndarray:
    """Extend quaternion-paired orthonormal columns to ``total`` columns."""
    n2 = existing.shape[0]
    cols = [existing[:, i] for i in range(existing.shape[1])]
    basis_idx = 0
    while len(cols) < total:
        if basis_idx >= n2:
            raise DegeneracyError("structured completion exhausted candidate vectors")
        v = np.zeros(n2, dtype=complex)
        v[basis_idx] = 1.0
        basis_idx += 1
        for _ in range(2):
            for u in cols:
                v -= u * (u.conj() @ v)
        nv = np.linalg.norm(v)
        if nv < 1e-6:
            continue
        v /= nv
        w = _quaternion_partner(v)
        for _ in range(2):
            w -= v * (v.conj() @ w)
            for u in cols:
                w -= u * (u.conj() @ w)
        w /= np.linalg.norm(w)
        cols.append(v)
        cols.append(w)
    return np.column_stack(cols[:total])


def _cluster_sorted(values: np.ndarray, gap: float):
    """Split indices of a sorted 1-d array into clusters at gaps > ``gap``."""
    clusters = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > gap:
            clusters.append(list(range(start, i)))
            start = i
    return clusters


# ---------------------------------------------------------------------------
# Hermitian eigendecomposition


def hermitian_eig(m: DenseMatrix) -> Tuple[np.ndarray, DenseMatrix]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    For quaternion matrices the Kramers doubling of the complex embedding is
    removed: the returned eigenvalue list has one entry per quaternionic
    eigenvalue, while the eigenvector matrix stays at embedding size with
    quaternion-paired columns (M V = V diag(repeat(lambda, 2))).
    """
    arr = m.array
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"hermitian_eig needs a square matrix, got {arr.shape}")
    scale = max(1.0, float(np.max(np.abs(arr))))
    asym = float(np.max(np.abs(arr - arr.conj().T)))
    if asym > 1e-10 * scale:
        raise SymmetryError(f"input is not Hermitian: max asymmetry {asym:.3e}")
    herm = 0.5 * (arr + arr.conj().T)
    lam, vec = np.linalg.eigh(herm)
    if m.field is not FieldTag.Quaternion:
        return lam.real, DenseMatrix(m.field, vec)
    gap = 1e-8 * scale
    structured = np.zeros_like(vec)
    for cluster in _cluster_sorted(lam, gap):
        idx = np.array(cluster)
        if len(idx) % 2:
            raise DegeneracyError("quaternionic spectrum failed to pair (odd cluster)")
        structured[:, idx] = _structured_basis(vec[:, idx])
    pairs = lam.reshape(-1, 2)
    if np.max(np.abs(pairs[:, 0] - pairs[:, 1])) > 1e-7 * scale:
        raise DegeneracyError("Kramers pairs did not match within tolerance")
    return pairs.mean(axis=1), DenseMatrix(m.field, structured)


# ---------------------------------------------------------------------------
# singular value decomposition


def svd(m: DenseMatrix) -> Tuple[DenseMatrix, np.ndarray, DenseMatrix]:
    """Thin SVD M = U diag(s) V^dagger with s nonnegative descending.

    Quaternion inputs keep the doubled embedding spectrum (callers that work
    at the quaternion level deduplicate the exactly-paired values), but U and
    V are rebuilt quaternion-structured.
    """
    arr = m.array
    u, s, vh = np.linalg.svd(arr, full_matrices=False)
    v = vh.conj().T
    if m.field is FieldTag.Real:
        u, v = u.real.astype(complex), v.real.astype(complex)
    if m.field is not FieldTag.Quaternion:
        return DenseMatrix(m.field, u), s, DenseMatrix(m.field, v)

    scale = max(1.0, float(s[0]) if s.size else 1.0)
    gap = 1e-8 * scale
    k = s.shape[0]
    vs = np.zeros_like(v)
    us = np.zeros_like(u)
    desc = -s  # ascending for the cluster helper
    zero_cols = []
    for cluster in _cluster_sorted(desc, gap):
        idx = np.array(cluster)
        if len(idx) % 2:
            raise DegeneracyError("quaternionic singular values failed to pair")
        vs[:, idx] = _structured_basis(v[:, idx])
        if s[idx[0]] > 1e-12 * scale:
            us[:, idx] = (arr @ vs[:, idx]) / s[idx][None, :]
        else:
            zero_cols.extend(idx.tolist())
    if zero_cols:
        keep = [i for i in range(k) if i not in set(zero_cols)]
        completed = _structured_completion(us[:, keep], k)
        us[:, keep] = completed[:, : len(keep)]
        us[:, zero_cols] = completed[:, len(keep) :]
    return DenseMatrix(m.field, us), s, DenseMatrix(m.field, vs)
