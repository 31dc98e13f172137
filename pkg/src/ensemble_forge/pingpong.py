"""Numerical Lie-algebra machinery behind the Jacobian computations.

Builds ad_H as an explicit linear operator on a real orthonormal basis of a
matrix Lie algebra equipped with two commuting involutions, constructs the
ping-pong bases attached to each restricted root, verifies the exponential
identities, and re-derives root multiplicity tables empirically by sampling
several torus elements and fitting integer root coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import (
    ChamberError,
    DegeneracyError,
    DimensionError,
    IdentificationError,
    InvolutionError,
)
from .matcore import RngState
from .rootsystems import Root, RootDatum, SpaceKind, SpaceType

__all__ = [
    "Involution",
    "LieAlgebraSpec",
    "PingPongReport",
    "lie_algebra_spec",
    "build_ad",
    "split_kp_basis",
    "verify_exponential_map",
    "measure_root_multiplicities",
]

_GAP = 1e-8


# ---------------------------------------------------------------------------
# involutions


@dataclass(frozen=True)
class Involution:
    """An involutive automorphism of a matrix Lie algebra.

    Acts as X -> C op(X) C^{-1} with op one of the identity, entrywise
    conjugation, X -> -X^T or X -> -X^dagger.
    """

    name: str
    op: str = "identity"  # identity | conj | neg_transpose | neg_adjoint
    c: Optional[np.ndarray] = None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.op == "conj":
            y = x.conj()
        elif self.op == "neg_transpose":
            y = -x.T
        elif self.op == "neg_adjoint":
            y = -x.conj().T
        else:
            y = x
        if self.c is not None:
            y = self.c @ y @ self.c.conj().T
        return y


# ---------------------------------------------------------------------------
# algebra bases


def _basis_u(n):
    out = [1j * _e(n, j, j) for j in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            out.append(_e(n, j, k) - _e(n, k, j))
            out.append(1j * (_e(n, j, k) + _e(n, k, j)))
    return out


def _basis_o(n):
    return [
        _e(n, j, k) - _e(n, k, j) for j in range(n) for k in range(j + 1, n)
    ]


def _basis_gl_real(n):
    return [_e(n, j, k) for j in range(n) for k in range(n)]


def _basis_gl_complex(n):
    out = []
    for j in range(n):
        for k in range(n):
            out.append(_e(n, j, k))
            out.append(1j * _e(n, j, k))
    return out


def _basis_o_pq(p, q):
    n = p + q
    out = [_e(n, j, k) - _e(n, k, j) for j in range(p) for k in range(j + 1, p)]
    out += [
        _e(n, p + j, p + k) - _e(n, p + k, p + j)
        for j in range(q)
        for k in range(j + 1, q)
    ]
    out += [_e(n, j, p + k) + _e(n, p + k, j) for j in range(p) for k in range(q)]
    return out


def _basis_u_pq(p, q):
    n = p + q
    out = []
    for block, off in ((p, 0), (q, p)):
        for j in range(block):
            out.append(1j * _e(n, off + j, off + j))
            for k in range(j + 1, block):
                out.append(_e(n, off + j, off + k) - _e(n, off + k, off + j))
                out.append(1j * (_e(n, off + j, off + k) + _e(n, off + k, off + j)))
    for j in range(p):
        for k in range(q):
            out.append(_e(n, j, p + k) + _e(n, p + k, j))
            out.append(1j * (_e(n, j, p + k) - _e(n, p + k, j)))
    return out


def _stack_diag(a):
    """diag(A, conj(A)) in the stacked quaternionic embedding."""
    n = a.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = a
    out[n:, n:] = a.conj()
    return out


def _stack_off(b):
    """[[0, B], [-conj(B), 0]] in the stacked quaternionic embedding."""
    n = b.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, n:] = b
    out[n:, :n] = -b.conj()
    return out


def _basis_sp_compact(n):
    out = [_stack_diag(a) for a in _basis_u(n)]
    syms = [_e(n, j, j) for j in range(n)]
    syms += [_e(n, j, k) + _e(n, k, j) for j in range(n) for k in range(j + 1, n)]
    for s in syms:
        out.append(_stack_off(s))
        out.append(_stack_off(1j * s))
    return out


def _basis_gl_quaternion(n):
    out = []
    for j in range(n):
        for k in range(n):
            e = _e(n, j, k)
            out.append(_stack_diag(e))
            out.append(_stack_diag(1j * e))
            out.append(_stack_off(e))
            out.append(_stack_off(1j * e))
    return out


def _basis_sp_pq(p, q):
    n = p + q
    out = [_stack_diag(a) for a in _basis_u_pq(p, q)]
    # B with B = I_{p,q} B^T I_{p,q}: symmetric diagonal blocks, B_21 = -B_12^T
    bs = []
    for block, off in ((p, 0), (q, p)):
        for j in range(block):
            bs.append(_e(n, off + j, off + j))
            for k in range(j + 1, block):
                bs.append(_e(n, off + j, off + k) + _e(n, off + k, off + j))
    for j in range(p):
        for k in range(q):
            bs.append(_e(n, j, p + k) - _e(n, p + k, j))
    for b in bs:
        out.append(_stack_off(b))
        out.append(_stack_off(1j * b))
    return out


def _basis_u_plus_u(n):
    out = []
    for a in _basis_u(n):
        out.append(_stack_pair(a, np.zeros_like(a)))
        out.append(_stack_pair(np.zeros_like(a), a))
    return out


def _stack_pair(a, b):
    n = a.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = a
    out[n:, n:] = b
    return out


def _e(n, j, k):
    m = np.zeros((n, n), dtype=complex)
    m[j, k] = 1.0
    return m


def _signature(plus: int, minus: int) -> np.ndarray:
    return np.diag(np.concatenate([np.ones(plus), -np.ones(minus)])).astype(complex)


def _j_stacked(n):
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


# ---------------------------------------------------------------------------
# the algebra container


@dataclass
class LieAlgebraSpec:
    """A matrix Lie algebra with two commuting involutions and a torus basis.

    ``basis`` is real-orthonormal in the Frobenius inner product Re tr(A^+ B);
    ``cartan`` spans the maximal abelian subspace of p_sigma intersect p_tau
    whose coefficients the root tables are written in.
    """

    name: str
    basis: np.ndarray  # (dim, N, N) complex, orthonormalized
    sigma: Involution
    tau: Involution
    cartan: List[np.ndarray]
    compact: bool
    space: Optional[SpaceType] = None
    sigma_mat: np.ndarray = field(init=False, repr=False)
    tau_mat: np.ndarray = field(init=False, repr=False)
    _flat: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        dim = self.basis.shape[0]
        self._flat = self.basis.reshape(dim, -1)
        self.sigma_mat = self._operator_matrix(self.sigma, "sigma")
        self.tau_mat = self._operator_matrix(self.tau, "tau")
        for mat, nm in ((self.sigma_mat, "sigma"), (self.tau_mat, "tau")):
            if np.max(np.abs(mat @ mat - np.eye(dim))) > 1e-10:
                raise InvolutionError(f"{nm} does not square to the identity on {self.name}")
        if np.max(np.abs(self.sigma_mat @ self.tau_mat - self.tau_mat @ self.sigma_mat)) > 1e-10:
            raise InvolutionError(f"involutions of {self.name} do not commute")
        for h in self.cartan:
            for mat, nm in ((self.sigma_mat, "sigma"), (self.tau_mat, "tau")):
                if np.max(np.abs(mat @ self.coords(h) + self.coords(h))) > 1e-10:
                    raise ChamberError(f"torus generator of {self.name} is not odd under {nm}")
        for i, hi in enumerate(self.cartan):
            for hj in self.cartan[i + 1 :]:
                if np.max(np.abs(hi @ hj - hj @ hi)) > 1e-10:
                    raise ChamberError(f"torus generators of {self.name} do not commute")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return len(self.cartan)

    def coords(self, x: np.ndarray) -> np.ndarray:
        return np.real(self._flat.conj() @ x.reshape(-1))

    def from_coords(self, c: np.ndarray) -> np.ndarray:
        return np.tensordot(c, self.basis, axes=(0, 0))

    def project_residual(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(x - self.from_coords(self.coords(x))))

    def cartan_element(self, theta: Sequence[float]) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.rank,):
            raise ChamberError(
                f"torus coefficient vector must have length {self.rank}, got {theta.shape}"
            )
        return np.tensordot(theta, np.stack(self.cartan), axes=(0, 0))

    def _operator_matrix(self, op: Callable, nm: str) -> np.ndarray:
        images = np.stack([op(b) for b in self.basis])
        mat = np.real(self._flat.conj() @ images.reshape(self.dim, -1).T)
        recon = np.tensordot(mat.T, self.basis, axes=(1, 0))
        res = float(np.max(np.abs(recon - images)))
        if res > 1e-9:
            raise InvolutionError(
                f"{nm} does not preserve the span of the {self.name} basis (residual {res:.2e})"
            )
        return mat


def _orthonormalize(mats: List[np.ndarray]) -> np.ndarray:
    stack = np.stack([np.asarray(m, dtype=complex) for m in mats])
    flat = stack.reshape(len(mats), -1)
    gram = np.real(flat.conj() @ flat.T)
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise DimensionError("algebra basis is not linearly independent") from exc
    coeff = scipy.linalg.solve_triangular(chol, np.eye(len(mats)), lower=True)
    return np.tensordot(coeff, stack, axes=(1, 0))


# ---------------------------------------------------------------------------
# space -> algebra dictionary


def lie_algebra_spec(space: SpaceType) -> LieAlgebraSpec:
    """Concrete (g, sigma, tau, a) realization for each symmetric-space type."""
    k = space.kind
    if k in (SpaceKind.AI, SpaceKind.A, SpaceKind.AII, SpaceKind.AI_II):
        return _circular_spec(space)
    if k in (SpaceKind.BDI_I, SpaceKind.AIII_III, SpaceKind.CII_II):
        return _jacobi_spec(space)
    if k in (SpaceKind.AI_III, SpaceKind.CI_II, SpaceKind.DI_III, SpaceKind.AII_III):
        return _mixed_spec(space)
    return _noncompact_spec(space)


def _circular_spec(space: SpaceType) -> LieAlgebraSpec:
    n, k = space.n, space.kind
    if k is SpaceKind.AI:
        basis = _basis_u(n)
        inv = Involution("conjugation", op="conj")
        cartan = [1j * _e(n, j, j) for j in range(n)]
        return LieAlgebraSpec(space.label(), _orthonormalize(basis), inv, inv, cartan, True, space)
    if k is SpaceKind.A:
        basis = _basis_u_plus_u(n)
        swap = np.zeros((2 * n, 2 * n), dtype=complex)
        swap[:n, n:] = np.eye(n)
        swap[n:, :n] = np.eye(n)
        inv = Involution("factor swap", c=swap)
        cartan = [_stack_pair(1j * _e(n, j, j), -1j * _e(n, j, j)) for j in range(n)]
        return LieAlgebraSpec(space.label(), _orthonormalize(basis), inv, inv, cartan, True, space)
    basis = _basis_u(2 * n)
    sympl = Involution("symplectic", op="conj", c=_j_stacked(n).astype(complex))
    cartan = [1j * (_e(2 * n, j, j) + _e(2 * n, n + j, n + j)) for j in range(n)]
    if k is SpaceKind.AII:
        return LieAlgebraSpec(space.label(), _orthonormalize(basis), sympl, sympl, cartan, True, space)
    conj = Involution("conjugation", op="conj")
    return LieAlgebraSpec(space.label(), _orthonormalize(basis), conj, sympl, cartan, True, space)


def _jacobi_spec(space: SpaceType) -> LieAlgebraSpec:
    p, q, s = space.p, space.q, space.s
    n = p + q
    r = n - s
    d_pq = _signature(p, q)
    d_rs = _signature(r, s)
    rot = [_e(n, j, n - s + j) - _e(n, n - s + j, j) for j in range(s)]
    if space.kind is SpaceKind.BDI_I:
        basis, cartan = _basis_o(n), rot
        sig = Involution("Ad I_(r,s)", c=d_rs)
        tau = Involution("Ad I_(p,q)", c=d_pq)
    elif space.kind is SpaceKind.AIII_III:
        basis, cartan = _basis_u(n), rot
        sig = Involution("Ad I_(r,s)", c=d_rs)
        tau = Involution("Ad I_(p,q)", c=d_pq)
    else:  # CII_II on sp(n)
        basis = _basis_sp_compact(n)
        cartan = [_stack_diag(b) for b in rot]
        sig = Involution("Ad I_(r,s) x2", c=_stack_pair(d_rs, d_rs))
        tau = Involution("Ad I_(p,q) x2", c=_stack_pair(d_pq, d_pq))
    return LieAlgebraSpec(space.label(), _orthonormalize(basis), sig, tau, cartan, True, space)


def _mixed_spec(space: SpaceType) -> LieAlgebraSpec:
    p, q = space.p, space.q
    n = p + q
    d_pq = _signature(p, q)
    k = space.kind
    if k is SpaceKind.AI_III:
        basis = _basis_u(n)
        sig = Involution("Ad I_(p,q)", c=d_pq)
        tau = Involution("conjugation", op="conj")
        cartan = [1j * (_e(n, j, p + j) + _e(n, p + j, j)) for j in range(q)]
    elif k is SpaceKind.CI_II:
        basis = _basis_sp_compact(n)
        sig = Involution("Ad I_(p,q) x2", c=_stack_pair(d_pq, d_pq))
        tau = Involution("Ad diag(I,-I)", c=_stack_pair(np.eye(n, dtype=complex), -np.eye(n, dtype=complex)))
        cartan = [_stack_off(_e(n, j, p + j) + _e(n, p + j, j)) for j in range(q)]
    elif k is SpaceKind.DI_III:
        basis = _basis_o(2 * n)
        sig = Involution("Ad I_(p,q) x2", c=_stack_pair(d_pq, d_pq))
        tau = Involution("Ad J", c=_j_stacked(n).astype(complex))
        b = [_e(n, j, p + j) - _e(n, p + j, j) for j in range(q)]
        cartan = [_off_sym(bj) for bj in b]
    else:  # AII_III on u(2n)
        basis = _basis_u(2 * n)
        sig = Involution("Ad I_(p,q) x2", c=_stack_pair(d_pq, d_pq))
        tau = Involution("symplectic", op="conj", c=_j_stacked(n).astype(complex))
        b = [_e(n, j, p + j) - _e(n, p + j, j) for j in range(q)]
        cartan = [_off_sym(bj) for bj in b]
    return LieAlgebraSpec(space.label(), _orthonormalize(basis), sig, tau, cartan, True, space)


def _off_sym(b):
    """[[0, b], [b, 0]] stacked block matrix."""
    n = b.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, n:] = b
    out[n:, :n] = b
    return out


def _noncompact_spec(space: SpaceType) -> LieAlgebraSpec:
    k = space.kind
    if k is SpaceKind.AI_NONCOMPACT:
        n = space.n
        basis = _basis_gl_real(n)
        inv = Involution("negative transpose", op="neg_transpose")
        cartan = [_e(n, j, j) for j in range(n)]
    elif k is SpaceKind.A_NONCOMPACT:
        n = space.n
        basis = _basis_gl_complex(n)
        inv = Involution("negative adjoint", op="neg_adjoint")
        cartan = [_e(n, j, j) for j in range(n)]
    elif k is SpaceKind.AII_NONCOMPACT:
        n = space.n
        basis = _basis_gl_quaternion(n)
        inv = Involution("negative adjoint", op="neg_adjoint")
        cartan = [_stack_diag(_e(n, j, j)) for j in range(n)]
    elif k is SpaceKind.BDI_NONCOMPACT:
        p, q = space.p, space.q
        n = p + q
        basis = _basis_o_pq(p, q)
        inv = Involution("negative transpose", op="neg_transpose")
        cartan = [_e(n, j, p + j) + _e(n, p + j, j) for j in range(q)]
    elif k is SpaceKind.AIII_NONCOMPACT:
        p, q = space.p, space.q
        n = p + q
        basis = _basis_u_pq(p, q)
        inv = Involution("negative adjoint", op="neg_adjoint")
        cartan = [_e(n, j, p + j) + _e(n, p + j, j) for j in range(q)]
    else:  # CII_NONCOMPACT on sp(p, q)
        p, q = space.p, space.q
        basis = _basis_sp_pq(p, q)
        inv = Involution("negative adjoint", op="neg_adjoint")
        cartan = [_stack_diag(_e(p + q, j, p + j) + _e(p + q, p + j, j)) for j in range(q)]
    return LieAlgebraSpec(space.label(), _orthonormalize(basis), inv, inv, cartan, False, space)


# ---------------------------------------------------------------------------
# operators


def build_ad(spec: LieAlgebraSpec, h) -> np.ndarray:
    """Matrix of Y -> [H, Y] on the orthonormal basis coordinates.

    ``h`` is either a coefficient vector on the torus generators or an
    explicit matrix, which must lie in their span (chamber error otherwise).
    """
    h = np.asarray(h)
    if h.ndim == 1:
        hmat = spec.cartan_element(h.astype(float))
    else:
        hmat = h.astype(complex)
        stack = np.stack(spec.cartan).reshape(spec.rank, -1).T
        coeff, *_ = np.linalg.lstsq(stack, hmat.reshape(-1), rcond=None)
        if np.linalg.norm(stack @ coeff - hmat.reshape(-1)) > 1e-9 * max(
            1.0, float(np.linalg.norm(hmat))
        ):
            raise ChamberError("H does not lie in the declared maximal abelian subspace")
    brackets = hmat[None] @ spec.basis - spec.basis @ hmat[None]
    mat = np.real(spec._flat.conj() @ brackets.reshape(spec.dim, -1).T)
    recon = np.tensordot(mat.T, spec.basis, axes=(1, 0))
    res = float(np.max(np.abs(recon - brackets)))
    if res > 1e-8 * max(1.0, float(np.max(np.abs(brackets)))):
        raise ChamberError(f"ad_H does not preserve the algebra span (residual {res:.2e})")
    return mat


@dataclass
class PingPongReport:
    """Eigen-analysis of ad_H: roots, ping-pong residuals and subspace dims."""

    name: str
    dim: int
    compact: bool
    roots: List[Tuple[float, int, int]]  # (alpha(H), m_plus, m_minus)
    kp_dims: Tuple[int, int, int, int]   # (k.k, k.p, p.k, p.p) under (tau, sigma)
    zero_dim: int
    max_residual: float
    k_vectors: List[np.ndarray] = field(default_factory=list, repr=False)
    p_vectors: List[np.ndarray] = field(default_factory=list, repr=False)
    root_of_vector: List[float] = field(default_factory=list, repr=False)

    def multiplicity_sum(self) -> int:
        return sum(mp + mm for _, mp, mm in self.roots)


def _sym_cluster(w: np.ndarray, gap: float):
    clusters = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > gap:
            clusters.append(np.arange(start, i))
            start = i
    return clusters


def split_kp_basis(spec: LieAlgebraSpec, h, gap: float = _GAP) -> PingPongReport:
    """Eigen-split of ad_H with ping-pong pairs and sigma-tau refined counts.

    For every nonzero root cluster, a basis k_i of the tau-even half is
    mapped to p_i = ad_H k_i / alpha; the report verifies ad_H p = +/- alpha k
    (sign by compactness) and classifies (m+, m-) by the sign of sigma.tau
    on the k-vectors.
    """
    m = build_ad(spec, h)
    p2 = m @ m
    scale = max(1.0, float(np.max(np.abs(p2))))
    w, v = np.linalg.eigh((p2 + p2.T) / 2.0)
    sigtau = spec.sigma_mat @ spec.tau_mat
    proj_k = (np.eye(spec.dim) + spec.tau_mat) / 2.0

    roots, kvecs, pvecs, rvals = [], [], [], []
    zero_dim = 0
    worst = 0.0
    sign = 1.0 if not spec.compact else -1.0
    for idx in _sym_cluster(w, gap * scale):
        val = float(np.mean(w[idx]))
        if abs(val) <= gap * scale:
            zero_dim += len(idx)
            continue
        if val * sign < 0:
            raise DegeneracyError(
                f"{spec.name}: ad_H^2 eigenvalue {val:.3e} has the wrong sign"
            )
        alpha = float(np.sqrt(abs(val)))
        sub = v[:, idx]
        if len(idx) % 2:
            raise DegeneracyError(f"{spec.name}: odd root-space dimension {len(idx)}")
        half = len(idx) // 2
        ksub, svals, _ = np.linalg.svd(proj_k @ sub)
        if np.sum(svals > 0.5) != half:
            raise DegeneracyError(
                f"{spec.name}: tau-even half of a root space has the wrong dimension"
            )
        kcols = ksub[:, :half]
        pcols = (m @ kcols) / alpha
        worst = max(worst, float(np.max(np.abs(m @ pcols - sign * alpha * kcols))))
        worst = max(worst, float(np.max(np.abs(spec.tau_mat @ kcols - kcols))))
        worst = max(worst, float(np.max(np.abs(spec.tau_mat @ pcols + pcols))))
        st = kcols.T @ sigtau @ kcols
        ev = np.linalg.eigvalsh((st + st.T) / 2.0)
        if np.max(np.abs(np.abs(ev) - 1.0)) > 1e-6:
            raise DegeneracyError(
                f"{spec.name}: sigma.tau is not +-1 on a root space (eigs {ev})"
            )
        mp = int(np.sum(ev > 0))
        roots.append((alpha, mp, half - mp))
        for i in range(half):
            kvecs.append(kcols[:, i])
            pvecs.append(pcols[:, i])
            rvals.append(alpha)

    kp = []
    for st_sign in (1.0, -1.0):
        for ss_sign in (1.0, -1.0):
            proj = (
                (np.eye(spec.dim) + st_sign * spec.tau_mat)
                @ (np.eye(spec.dim) + ss_sign * spec.sigma_mat)
                / 4.0
            )
            kp.append(int(round(float(np.trace(proj)))))
    report = PingPongReport(
        name=spec.name,
        dim=spec.dim,
        compact=spec.compact,
        roots=sorted(roots),
        kp_dims=tuple(kp),
        zero_dim=zero_dim,
        max_residual=worst,
        k_vectors=kvecs,
        p_vectors=pvecs,
        root_of_vector=rvals,
    )
    if 2 * report.multiplicity_sum() + zero_dim != spec.dim:
        raise DegeneracyError(
            f"{spec.name}: root multiplicities {report.multiplicity_sum()} and kernel "
            f"{zero_dim} do not account for dim {spec.dim}"
        )
    return report


def verify_exponential_map(
    spec: LieAlgebraSpec, h, trials: int, rng: RngState
) -> float:
    """Worst residual of exp(ad_H) Y = e^H Y e^{-H} and the block action.

    Checks ``trials`` random Y in the algebra plus, for every ping-pong pair,
    exp(ad_H) k = cosh(a) k + sinh(a) p (noncompact) or the cos/sin rotation
    (compact).
    """
    m = build_ad(spec, h)
    expad = scipy.linalg.expm(m)
    hmat = spec.cartan_element(np.asarray(h, dtype=float)) if np.asarray(h).ndim == 1 else np.asarray(h, dtype=complex)
    eh = scipy.linalg.expm(hmat)
    ehm = scipy.linalg.expm(-hmat)
    worst = 0.0
    for _ in range(trials):
        c = rng.standard_normal(spec.dim)
        y = spec.from_coords(c)
        lhs = expad @ c
        rhs = spec.coords(eh @ y @ ehm)
        worst = max(worst, float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(c), 1e-12)))
    report = split_kp_basis(spec, h)
    for k_vec, p_vec, alpha in zip(
        report.k_vectors, report.p_vectors, report.root_of_vector
    ):
        if spec.compact:
            want_k = np.cos(alpha) * k_vec + np.sin(alpha) * p_vec
            want_p = -np.sin(alpha) * k_vec + np.cos(alpha) * p_vec
        else:
            want_k = np.cosh(alpha) * k_vec + np.sinh(alpha) * p_vec
            want_p = np.sinh(alpha) * k_vec + np.cosh(alpha) * p_vec
        worst = max(worst, float(np.linalg.norm(expad @ k_vec - want_k)))
        worst = max(worst, float(np.linalg.norm(expad @ p_vec - want_p)))
    return worst


# ---------------------------------------------------------------------------
# empirical root tables


def _rational_theta(rank: int, rng: RngState) -> np.ndarray:
    """Random rational torus coefficients with denominators <= 17."""
    vals = []
    for _ in range(rank):
        num = int(rng.generator.integers(1, 40)) * (1 if rng.uniform() < 0.5 else -1)
        den = int(rng.generator.integers(3, 18))
        vals.append(float(Fraction(num, den)))
    return np.array(vals)


def measure_root_multiplicities(
    spec: LieAlgebraSpec, rng: RngState, max_attempts: int = 8
) -> RootDatum:
    """Empirically re-derive the restricted-root table of an algebra.

    Samples max(3, rank) random rational torus elements, intersects the
    eigenspace clusterings of the squared ad operators, recovers signed root
    values on each joint eigenspace, solves for integer coefficient vectors,
    and classifies the sigma-tau refined multiplicities.  The fit is verified
    against one additional fresh torus element.
    """
    rank = spec.rank
    n_samples = max(3, rank)
    last_err: Optional[Exception] = None
    for _ in range(max_attempts):
        try:
            thetas = [_rational_theta(rank, rng) for _ in range(n_samples)]
            return _measure_once(spec, thetas, _rational_theta(rank, rng))
        except (DegeneracyError, IdentificationError) as exc:
            last_err = exc
    raise IdentificationError(
        f"root identification for {spec.name} failed after {max_attempts} attempts: {last_err}"
    )


def _measure_once(spec, thetas, theta_check) -> RootDatum:
    dim, rank = spec.dim, spec.rank
    mats = [build_ad(spec, th) for th in thetas]
    sqs = [m @ m for m in mats]
    scale = max(1.0, max(float(np.max(np.abs(p))) for p in sqs))
    gap = _GAP * scale

    # joint eigenspace refinement across all samples
    spaces = [np.eye(dim)]
    for p2 in sqs:
        new_spaces = []
        for q in spaces:
            a = q.T @ p2 @ q
            w, v = np.linalg.eigh((a + a.T) / 2.0)
            for idx in _sym_cluster(w, gap):
                new_spaces.append(q @ v[:, idx])
        spaces = new_spaces

    # classify zero spaces and check no root vanished at any single sample
    joint_zero = 0
    nonzero_spaces = []
    for q in spaces:
        vals = [float(np.mean(np.diagonal(q.T @ p2 @ q))) for p2 in sqs]
        if all(abs(v) <= gap for v in vals):
            joint_zero += q.shape[1]
        elif any(abs(v) <= gap for v in vals):
            raise DegeneracyError("a root value vanished at one of the sampled H")
        else:
            nonzero_spaces.append((q, vals))

    theta_mat = np.stack(thetas)  # (n_samples, rank)
    found = {}
    for q, vals in nonzero_spaces:
        if q.shape[1] % 2:
            raise DegeneracyError("odd-dimensional joint eigenspace")
        alpha1 = np.sqrt(abs(vals[0]))
        j_ref = (q.T @ mats[0] @ q) / alpha1
        denom = float(np.sum(j_ref * j_ref))
        signed = [float(np.sum((q.T @ m @ q) * j_ref)) / denom for m in mats]
        coeff, *_ = np.linalg.lstsq(theta_mat, np.array(signed), rcond=None)
        fit_res = float(np.max(np.abs(theta_mat @ coeff - signed)))
        coeff_int = np.round(coeff).astype(int)
        if fit_res > 1e-6 or np.max(np.abs(coeff - coeff_int)) > 1e-6:
            raise IdentificationError(
                f"root coefficients {coeff} did not resolve to integers (residual {fit_res:.2e})"
            )
        if np.count_nonzero(coeff_int) > 2 or not np.any(coeff_int):
            raise IdentificationError(f"implausible root coefficient vector {coeff_int}")
        first = coeff_int[np.nonzero(coeff_int)[0][0]]
        if first < 0:
            coeff_int = -coeff_int
        # sigma-tau refinement on the tau-even half (computed at sample 0)
        half = q.shape[1] // 2
        proj_k = (np.eye(dim) + spec.tau_mat) / 2.0
        ksub, svals, _ = np.linalg.svd(proj_k @ q)
        if np.sum(svals > 0.5) != half:
            raise DegeneracyError("tau-even half has unexpected dimension")
        kcols = ksub[:, :half]
        st = kcols.T @ (spec.sigma_mat @ spec.tau_mat) @ kcols
        ev = np.linalg.eigvalsh((st + st.T) / 2.0)
        if np.max(np.abs(np.abs(ev) - 1.0)) > 1e-6:
            raise DegeneracyError("sigma-tau eigenvalues are not +-1 on a root space")
        mp = int(np.sum(ev > 0))
        key = tuple(coeff_int.tolist())
        prev = found.get(key, (0, 0))
        found[key] = (prev[0] + mp, prev[1] + (half - mp))

    # verification at a fresh torus element
    m_check = build_ad(spec, theta_check)
    w_check = np.sort(np.abs(np.linalg.eigvalsh(
        (m_check @ m_check + (m_check @ m_check).T) / 2.0
    )))
    predicted = [0.0] * joint_zero
    for key, (mp, mm) in found.items():
        val = float(np.dot(key, theta_check)) ** 2
        predicted.extend([val] * (2 * (mp + mm)))
    predicted = np.sort(np.abs(predicted))
    if len(predicted) != dim or np.max(np.abs(predicted - w_check)) > 1e-7 * scale:
        raise IdentificationError("fitted roots failed to reproduce a fresh ad_H spectrum")

    roots = tuple(
        Root(coeffs=key, m_plus=mp, m_minus=mm)
        for key, (mp, mm) in sorted(found.items())
    )
    return RootDatum(rank, roots)
