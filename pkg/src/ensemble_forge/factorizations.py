"""Coordinate-system factorizations of unitary matrices.

Implements the CS decomposition with general (p, q) x (r, s) partitions, the
generalized SVD of a matrix pair (QL of the stack followed by the 2-by-1 CSD),
the ODO decomposition U = O1 D O2 of a unitary matrix into real orthogonal
factors, and the QDQ decomposition of a 2n x 2n unitary matrix into unitary
symplectic factors.  All factor constraints are enforced to ~1e-12 by
construction; reconstruction residuals are recorded on the result objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DegeneracyError, DimensionError, UnitarityError
from .matcore import DenseMatrix, FieldTag, RngState, ql_decompose

__all__ = [
    "Partition",
    "CsdResult",
    "GsvdResult",
    "OdoResult",
    "QdqResult",
    "csd",
    "csd_middle_factor",
    "gsvd",
    "odo_decompose",
    "qdq_decompose",
    "symplectic_j_stacked",
]

_CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class Partition:
    """Row partition (p, q) and column partition (r, s) with n = p+q = r+s."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        if min(self.p, self.q, self.r, self.s) < 1:
            raise DimensionError("partition entries must be positive")
        if self.p + self.q != self.r + self.s:
            raise DimensionError(
                f"partition is inconsistent: p+q={self.p + self.q} != r+s={self.r + self.s}"
            )
        if not (self.r >= self.p >= self.q >= self.s):
            raise DimensionError(
                f"partition must satisfy r >= p >= q >= s, got {self}"
            )

    @property
    def n(self) -> int:
        return self.p + self.q


def _check_unitary(arr: np.ndarray, what: str, tol: float = 1e-10) -> None:
    gram = arr.conj().T @ arr
    res = float(np.max(np.abs(gram - np.eye(arr.shape[1]))))
    if res > tol:
        raise UnitarityError(f"{what} is not unitary: max residual {res:.3e}")


def _polar_unitary(x: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(x)
    return u @ vh


# ---------------------------------------------------------------------------
# CS decomposition


@dataclass
class CsdResult:
    """U = diag(U_p, U_q) . M(theta) . diag(V_r, V_s)^dagger.

    ``theta`` is ascending in [0, pi/2]; for quaternion input it holds the s
    deduplicated logical angles while the factors stay at embedding size.
    """

    u_p: DenseMatrix
    u_q: DenseMatrix
    v_r: DenseMatrix
    v_s: DenseMatrix
    theta: np.ndarray
    partition: Partition
    field: FieldTag
    residual: float
    _theta_full: np.ndarray = None

    def middle_factor(self) -> np.ndarray:
        th = self._theta_full if self._theta_full is not None else self.theta
        p, q, r, s = (self.partition.p, self.partition.q, self.partition.r, self.partition.s)
        if self.field is FieldTag.Quaternion:
            p, q, r, s = 2 * p, 2 * q, 2 * r, 2 * s
        return csd_middle_factor(th, p, q, r, s)

    def reconstruct(self) -> np.ndarray:
        left = _block_diag(self.u_p.array, self.u_q.array)
        right = _block_diag(self.v_r.array, self.v_s.array)
        return left @ self.middle_factor() @ right.conj().T


def csd_middle_factor(theta: np.ndarray, p: int, q: int, r: int, s: int) -> np.ndarray:
    """Torus element [[C,,S],[,I,],[-S,,C]] in (p,q) x (r,s) block layout."""
    n = p + q
    t = np.zeros((n, n))
    cos, sin = np.cos(theta), np.sin(theta)
    for j in range(s):
        t[j, j] = cos[j]
        t[j, r + j] = sin[j]
        t[p + q - s + j, j] = -sin[j]
        t[p + q - s + j, r + j] = cos[j]
    for i in range(p - s):
        t[s + i, s + i] = 1.0
    for i in range(q - s):
        t[p + i, p + i] = 1.0
    return t


def _block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


def _sine_side_frame(b: np.ndarray, v_s: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Left frame and sine values of B aligned to the cosine-side basis V_s.

    B = E diag(sin) V_s^dagger in exact arithmetic.  Extracting E from an SVD
    of B itself (exact data) and aligning with the polar of V_B^dagger V_s
    keeps the directions accurate even for angles within eps of a wall,
    where normalizing the columns of B V_s would amplify rounding by 1/sin;
    the alignment also absorbs the sort permutation, the phases, repeated
    angles and the gauge of vanishing sines in one step.
    """
    e_raw, _, vbh = np.linalg.svd(b, full_matrices=False)
    phi = _polar_unitary(vbh @ v_s)
    e = e_raw @ phi
    sines = np.linalg.norm(b @ v_s, axis=0)
    return e, sines


def _csd_core(u: np.ndarray, p: int, q: int, r: int, s: int):
    """CSD of a unitary array with explicit block sizes (all embedding-level)."""
    a = u[:p, :r]
    b = u[:p, r:]
    c = u[p:, :r]
    d = u[p:, r:]

    # cosines and the s-side right factor come from the D = q x s block
    f_d, cos_vals, zdh = np.linalg.svd(d, full_matrices=False)
    v_s = zdh.conj().T
    cos_vals = np.clip(cos_vals, 0.0, 1.0)

    # sine-side left vectors, aligned to the V_s gauge
    e_b, sin_vals = _sine_side_frame(b, v_s)
    theta = np.arctan2(sin_vals, cos_vals)

    # first s columns of V_r, from whichever of A / C is better conditioned
    v_r = np.zeros((r, r), dtype=complex)
    for j in range(s):
        if cos_vals[j] >= sin_vals[j]:
            v = (a.conj().T @ e_b[:, j]) / cos_vals[j]
        else:
            v = -(c.conj().T @ f_d[:, j]) / sin_vals[j]
        for i in range(j):
            v -= v_r[:, i] * (v_r[:, i].conj() @ v)
        v_r[:, j] = v / np.linalg.norm(v)

    u_p = np.zeros((p, p), dtype=complex)
    u_p[:, :s] = e_b
    u_q = np.zeros((q, q), dtype=complex)
    u_q[:, q - s :] = f_d

    # identity blocks: rank p-s (resp. q-s) partial isometries left in A and C
    if p > s:
        a_hat = a - e_b @ (cos_vals[:, None] * v_r[:, :s].conj().T)
        pa, _, qah = np.linalg.svd(a_hat)
        u_p[:, s:] = pa[:, : p - s]
        v_r[:, s:p] = qah.conj().T[:, : p - s]
    if q > s:
        c_hat = c + f_d @ (sin_vals[:, None] * v_r[:, :s].conj().T)
        pc, _, qch = np.linalg.svd(c_hat)
        u_q[:, : q - s] = pc[:, : q - s]
        v_r[:, p:] = qch.conj().T[:, : q - s]

    u_p = _polar_unitary(u_p)
    u_q = _polar_unitary(u_q)
    v_r = _polar_unitary(v_r)
    u_p, u_q, v_r, v_s = _procrustes_refine(u, p, q, theta, (u_p, u_q, v_r, v_s))
    recon = _block_diag(u_p, u_q) @ csd_middle_factor(theta, p, q, r, s) @ _block_diag(
        v_r, v_s
    ).conj().T
    residual = float(np.linalg.norm(recon - u))
    return u_p, u_q, v_r, v_s, theta, residual


def _procrustes_refine(u, p, q, theta, factors, sweeps: int = 2):
    """Alternating block-Procrustes polish of the CSD factors.

    With the torus angles fixed (they come from well-conditioned singular
    values), re-solving each block-diagonal factor as an orthogonal
    Procrustes problem removes the direction noise that angles very close
    to 0 or pi/2 leave in the sine/cosine-side vectors.
    """
    u_p, u_q, v_r, v_s = factors
    r = u.shape[0] - theta.shape[0]
    t = csd_middle_factor(theta, p, q, r, theta.shape[0])
    for _ in range(sweeps):
        right = _block_diag(v_r, v_s)
        m = u @ (t @ right.conj().T).conj().T
        u_p = _polar_unitary(m[:p, :p])
        u_q = _polar_unitary(m[p:, p:])
        z = _block_diag(u_p, u_q) @ t
        a = z.conj().T @ u
        v_r = _polar_unitary(a[:r, :r].conj().T)
        v_s = _polar_unitary(a[r:, r:].conj().T)
    return u_p, u_q, v_r, v_s


def csd(u: DenseMatrix, part: Partition) -> CsdResult:
    """CS decomposition of a unitary matrix for the given partition.

    Quaternion input: the partition counts quaternionic dimensions and the
    computation runs on the complex embedding with doubled block sizes; the
    exactly-doubled angles are deduplicated in ``theta`` and the factors are
    returned as complex matrices of the embedded size.
    """
    if part.n != u.rows or u.rows != u.cols:
        raise DimensionError(
            f"partition n={part.n} inconsistent with matrix size {u.rows}x{u.cols}"
        )
    _check_unitary(u.array, "csd input")
    k = u.field.embedding_factor
    p, q, r, s = k * part.p, k * part.q, k * part.r, k * part.s
    u_p, u_q, v_r, v_s, theta, residual = _csd_core(u.array, p, q, r, s)
    theta_full = None
    out_field = u.field if u.field is not FieldTag.Quaternion else FieldTag.Complex
    if u.field is FieldTag.Quaternion:
        theta_full = theta
        pairs = theta.reshape(-1, 2)
        if np.max(np.abs(pairs[:, 0] - pairs[:, 1])) > 1e-7:
            raise DegeneracyError("quaternionic CS angles failed to pair")
        theta = pairs.mean(axis=1)
    return CsdResult(
        u_p=DenseMatrix(out_field, u_p),
        u_q=DenseMatrix(out_field, u_q),
        v_r=DenseMatrix(out_field, v_r),
        v_s=DenseMatrix(out_field, v_s),
        theta=theta,
        partition=part,
        field=u.field,
        residual=residual,
        _theta_full=theta_full,
    )


# ---------------------------------------------------------------------------
# generalized SVD


@dataclass
class GsvdResult:
    """Pair factorization A = U C R, B = V S R with C^2 + S^2 = I.

    U (p x s) and V (q x s) have orthonormal columns, C and S are the
    diagonals (returned as 1-d arrays) and R is the shared s x s right
    factor.  Generalized singular values are the ratios C/S.
    """

    u: DenseMatrix
    v: DenseMatrix
    cos: np.ndarray
    sin: np.ndarray
    right: DenseMatrix
    field: FieldTag
    residual: float

    @property
    def theta(self) -> np.ndarray:
        return np.arctan2(self.sin, self.cos)


def gsvd(a: DenseMatrix, b: DenseMatrix) -> GsvdResult:
    """Generalized SVD of (A, B) via QL of the stack then the 2-by-1 CSD."""
    if a.field is not b.field:
        raise DimensionError("gsvd operands must share a field")
    if a.cols != b.cols:
        raise DimensionError(
            f"gsvd needs matching column counts, got {a.cols} and {b.cols}"
        )
    s_log = a.cols
    if a.rows < s_log or b.rows < s_log:
        raise DimensionError("gsvd needs both blocks at least s x s")
    stacked = DenseMatrix(a.field, np.vstack([a.array, b.array]))
    q_mat, l_mat = ql_decompose(stacked)

    k = a.field.embedding_factor
    p2, s2 = k * a.rows, k * s_log
    q1 = q_mat.array[:p2]
    q2 = q_mat.array[p2:]

    u1, cos_vals, zh = np.linalg.svd(q1, full_matrices=False)
    cos_vals = np.clip(cos_vals, 0.0, 1.0)
    z = zh.conj().T
    v1, sin_vals = _sine_side_frame(q2, z)
    right = z.conj().T @ l_mat.array

    recon_a = u1 @ (cos_vals[:, None] * right)
    recon_b = v1 @ (sin_vals[:, None] * right)
    residual = float(
        np.linalg.norm(recon_a - a.array) + np.linalg.norm(recon_b - b.array)
    )
    out_field = a.field if a.field is not FieldTag.Quaternion else FieldTag.Complex
    if a.field is FieldTag.Quaternion:
        cpairs = cos_vals.reshape(-1, 2)
        spairs = sin_vals.reshape(-1, 2)
        if max(
            np.max(np.abs(cpairs[:, 0] - cpairs[:, 1])),
            np.max(np.abs(spairs[:, 0] - spairs[:, 1])),
        ) > 1e-7:
            raise DegeneracyError("quaternionic generalized singular values failed to pair")
        cos_out, sin_out = cpairs.mean(axis=1), spairs.mean(axis=1)
    else:
        cos_out, sin_out = cos_vals, sin_vals
    return GsvdResult(
        u=DenseMatrix(out_field, u1),
        v=DenseMatrix(out_field, v1),
        cos=cos_out,
        sin=sin_out,
        right=DenseMatrix(out_field, right),
        field=a.field,
        residual=residual,
    )


# ---------------------------------------------------------------------------
# ODO decomposition


@dataclass
class OdoResult:
    """U = O1 diag(d) O2 with O1, O2 real orthogonal and |d_j| = 1."""

    o1: DenseMatrix
    o2: DenseMatrix
    d: np.ndarray
    residual: float

    def reconstruct(self) -> np.ndarray:
        return self.o1.array @ np.diag(self.d) @ self.o2.array


def _joint_diagonalize_symmetric(
    x: np.ndarray, y: np.ndarray, rng: RngState, tries: int = 6
) -> np.ndarray:
    """Real orthogonal basis diagonalizing two commuting real symmetric matrices.

    Eigendecomposes X + mu*Y for randomized mu, refines near-degenerate
    clusters by diagonalizing the projection of Y, retries with fresh mu.
    """
    n = x.shape[0]
    scale = max(1.0, float(np.max(np.abs(x)) + np.max(np.abs(y))))
    for attempt in range(tries):
        mu = float(rng.uniform(0.35, 1.9)) if attempt else 1.0
        w, o = np.linalg.eigh(x + mu * y)
        for cluster in _cluster_indices(w, _CLUSTER_TOL * scale):
            if len(cluster) == 1:
                continue
            idx = np.array(cluster)
            sub = o[:, idx]
            _, g = np.linalg.eigh(sub.T @ y @ sub)
            o[:, idx] = sub @ g
        off_x = _offdiag_norm(o.T @ x @ o)
        off_y = _offdiag_norm(o.T @ y @ o)
        if max(off_x, off_y) <= 1e-9 * scale:
            return o
    raise DegeneracyError(
        "joint diagonalization failed; eigenvalue clusters below the "
        f"{_CLUSTER_TOL:g} degeneracy threshold persisted across retries"
    )


def _cluster_indices(sorted_vals: np.ndarray, gap: float):
    clusters = []
    start = 0
    for i in range(1, len(sorted_vals) + 1):
        if i == len(sorted_vals) or sorted_vals[i] - sorted_vals[i - 1] > gap:
            clusters.append(list(range(start, i)))
            start = i
    return clusters


def _offdiag_norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - np.diag(np.diagonal(m))))) if m.size else 0.0


def odo_decompose(u: DenseMatrix, rng: Optional[RngState] = None) -> OdoResult:
    """Factor a unitary matrix into real orthogonal x unit diagonal x real orthogonal.

    Forms the unitary symmetric S = U U^T, eigendecomposes it with a real
    orthogonal eigenbasis (joint diagonalization of the commuting real and
    imaginary parts), and sets O2 = diag(d)^{-1} O1^T U.  ``d`` is sorted by
    angle in [0, 2*pi).
    """
    if u.rows != u.cols or u.field is FieldTag.Quaternion:
        raise DimensionError("odo_decompose expects a square real/complex matrix")
    _check_unitary(u.array, "odo input")
    rng = rng if rng is not None else RngState(2**31 - 1)
    s_mat = u.array @ u.array.T
    o1 = _joint_diagonalize_symmetric(s_mat.real, s_mat.imag, rng)
    d2 = np.diagonal(o1.T @ s_mat @ o1).copy()
    d2 = d2 / np.abs(d2)
    d = np.exp(0.5j * np.angle(d2))  # principal branch, so d -> 1 as S -> I
    order = np.argsort(np.mod(np.angle(d), 2.0 * np.pi), kind="stable")
    d = d[order]
    o1 = o1[:, order]
    o2 = (1.0 / d)[:, None] * (o1.T @ u.array)
    imag_res = float(np.max(np.abs(o2.imag)))
    if imag_res > 1e-8:
        raise DegeneracyError(f"ODO second factor failed to be real ({imag_res:.2e})")
    o2 = o2.real
    recon = o1 @ (d[:, None] * o2)
    residual = float(np.linalg.norm(recon - u.array))
    return OdoResult(
        o1=DenseMatrix(FieldTag.Real, o1.astype(complex)),
        o2=DenseMatrix(FieldTag.Real, o2.astype(complex)),
        d=d,
        residual=residual,
    )


# ---------------------------------------------------------------------------
# QDQ decomposition


def symplectic_j_stacked(n: int) -> np.ndarray:
    """J = [[0, I_n], [-I_n, 0]] (stacked convention used by the QDQ torus)."""
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


@dataclass
class QdqResult:
    """U = Q1 diag(d, d) Q2 with Q1, Q2 unitary symplectic, |d_j| = 1."""

    q1: DenseMatrix
    q2: DenseMatrix
    d: np.ndarray
    residual: float

    def reconstruct(self) -> np.ndarray:
        dd = np.concatenate([self.d, self.d])
        return self.q1.array @ (dd[:, None] * self.q2.array)


def qdq_decompose(u: DenseMatrix, rng: Optional[RngState] = None) -> QdqResult:
    """Factor a 2n x 2n unitary matrix into symplectic x diag(d, d) x symplectic.

    Uses the unitary skew-Hamiltonian W = U J U^T J^T, whose spectrum comes in
    doubled pairs with eigenvectors paired as (v, J conj(v)); symplectic
    Gram-Schmidt inside each eigenvalue cluster builds Q1.
    """
    if u.field is FieldTag.Quaternion or u.rows != u.cols or u.rows % 2:
        raise DimensionError("qdq_decompose expects a square complex matrix of even size")
    _check_unitary(u.array, "qdq input")
    n = u.rows // 2
    j = symplectic_j_stacked(n)
    w = u.array @ j @ u.array.T @ j.T
    lam, vec = np.linalg.eig(w)
    lam = lam / np.abs(lam)

    order = np.argsort(np.angle(lam), kind="stable")
    lam, vec = lam[order], vec[:, order]
    clusters = []
    start = 0
    for i in range(1, len(lam) + 1):
        if i == len(lam) or abs(lam[i] - lam[i - 1]) > 1e-9:
            clusters.append(list(range(start, i)))
            start = i
    # angle sort wraps at +-pi: merge first/last clusters if they share lambda
    if len(clusters) > 1 and abs(lam[clusters[0][0]] - lam[clusters[-1][-1]]) < 1e-9:
        clusters[0] = clusters.pop() + clusters[0]

    vs, ws, d_list = [], [], []
    for cluster in clusters:
        if len(cluster) % 2:
            raise DegeneracyError("skew-Hamiltonian spectrum failed to pair")
        m = len(cluster) // 2
        lam_c = lam[cluster].mean()
        lam_c = lam_c / abs(lam_c)
        space = vec[:, cluster]
        taken = 0
        for cidx in range(space.shape[1]):
            v = space[:, cidx].copy()
            for _ in range(2):
                for prev in vs + ws:
                    v -= prev * (prev.conj() @ v)
            nv = np.linalg.norm(v)
            if nv < 1e-7:
                continue
            v /= nv
            wv = j @ v.conj()
            for _ in range(2):
                wv -= v * (v.conj() @ wv)
                for prev in vs + ws:
                    wv -= prev * (prev.conj() @ wv)
            nw = np.linalg.norm(wv)
            if nw < 0.5:
                raise DegeneracyError("symplectic pairing failed inside eigencluster")
            wv /= nw
            vs.append(v)
            ws.append(wv)
            d_list.append(lam_c)
            taken += 1
            if taken == m:
                break
        if taken != m:
            raise DegeneracyError("could not extract a full symplectic basis")

    d2 = np.array(d_list)
    d = np.exp(0.5j * np.angle(d2))  # principal branch, so d -> 1 as W -> I
    order = np.argsort(np.mod(np.angle(d), 2.0 * np.pi), kind="stable")
    d = d[order]
    q1 = np.column_stack([ws[i] for i in order] + [vs[i] for i in order])
    dd = np.concatenate([d, d])
    q2 = (1.0 / dd)[:, None] * (q1.conj().T @ u.array)
    recon = q1 @ (dd[:, None] * q2)
    residual = float(np.linalg.norm(recon - u.array))
    return QdqResult(
        q1=DenseMatrix(FieldTag.Complex, q1),
        q2=DenseMatrix(FieldTag.Complex, q2),
        d=d,
        residual=residual,
    )
