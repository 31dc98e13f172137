"""Samplers and joint densities for the classical random matrix ensembles.

Every sampler realizes one of the factorization-based algorithms: Hermite
spectra are eigenvalues of (G + G^dagger)/2, Laguerre spectra are squared
singular values of rectangular Gaussians, Jacobi spectra are squared CS
cosines reached either through the GSVD of a Gaussian pair or the CSD of a
Haar matrix, and circular spectra come from eigenangles or from the ODO/QDQ
torus angles (doubled).  Hot paths are vectorized over draws; the
factorization-module routes are exercised draw by draw where the full
factorization is the point (ODO, QDQ).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, PathError
from .factorizations import Partition, csd, odo_decompose, qdq_decompose, symplectic_j_stacked
from .matcore import FieldTag, RngState, field_for_beta, sample_haar
from .rootsystems import (
    ClassicalParams,
    SpaceKind,
    SpaceType,
    classical_params,
)

__all__ = [
    "Family",
    "EnsembleSpec",
    "SampleBatch",
    "sample_hermite",
    "sample_laguerre",
    "sample_jacobi",
    "sample_circular",
    "sample_batch",
    "joint_log_density",
    "sample_jacobi_mixed_beta1",
]


class Family(str, enum.Enum):
    Hermite = "hermite"
    Laguerre = "laguerre"
    Jacobi = "jacobi"
    Circular = "circular"


_PATHS = {
    (Family.Hermite, 1): ("gaussian",),
    (Family.Hermite, 2): ("gaussian",),
    (Family.Hermite, 4): ("gaussian",),
    (Family.Laguerre, 1): ("gaussian",),
    (Family.Laguerre, 2): ("gaussian",),
    (Family.Laguerre, 4): ("gaussian",),
    (Family.Jacobi, 1): ("gsvd", "csd"),
    (Family.Jacobi, 2): ("gsvd", "csd"),
    (Family.Jacobi, 4): ("gsvd", "csd"),
    (Family.Circular, 1): ("odo", "uut_eig"),
    (Family.Circular, 2): ("eig",),
    (Family.Circular, 4): ("qdq", "skewham_eig"),
}

_PATH_ALIASES = {"gsvd_gaussian": "gsvd", "csd_haar": "csd"}


@dataclass(frozen=True)
class EnsembleSpec:
    """Family, Dyson index and dimension parameters of a classical ensemble."""

    family: Family
    beta: int
    n: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    s: Optional[int] = None
    sampler_path: Optional[str] = None

    def __post_init__(self):
        if self.beta not in (1, 2, 4):
            raise DomainError(f"beta must be 1, 2 or 4, got {self.beta}")
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if fam in (Family.Hermite, Family.Circular):
            if self.n is None or self.n < 1 or self.p is not None:
                raise DomainError(f"{fam.value} needs a single dimension n >= 1")
        elif fam is Family.Laguerre:
            if None in (self.p, self.q) or self.s is not None or self.n is not None:
                raise DomainError("laguerre needs dimensions (p, q)")
            if not (self.p >= self.q >= 1):
                raise DomainError(f"laguerre needs p >= q >= 1, got ({self.p}, {self.q})")
        else:
            if None in (self.p, self.q, self.s) or self.n is not None:
                raise DomainError("jacobi needs dimensions (p, q, s)")
            if not (self.p >= self.q >= self.s >= 1):
                raise DomainError(
                    f"jacobi needs p >= q >= s >= 1, got ({self.p}, {self.q}, {self.s})"
                )
        path = self.sampler_path
        if path is not None:
            path = _PATH_ALIASES.get(path, path)
            if path not in _PATHS[(fam, self.beta)]:
                raise PathError(
                    f"path {self.sampler_path!r} invalid for {fam.value} beta={self.beta}; "
                    f"choose from {_PATHS[(fam, self.beta)]}"
                )
            object.__setattr__(self, "sampler_path", path)

    @property
    def m(self) -> int:
        """Number of spectrum coordinates per draw."""
        if self.family in (Family.Hermite, Family.Circular):
            return self.n
        if self.family is Family.Laguerre:
            return self.q
        return self.s

    @property
    def path(self) -> str:
        return self.sampler_path or _PATHS[(self.family, self.beta)][0]

    @property
    def field(self) -> FieldTag:
        return field_for_beta(self.beta)

    def space_type(self) -> SpaceType:
        """Symmetric-space type whose coordinate system this ensemble samples."""
        fam, beta = self.family, self.beta
        if fam is Family.Circular:
            kind = {1: SpaceKind.AI, 2: SpaceKind.A, 4: SpaceKind.AII}[beta]
            return SpaceType(kind, n=self.n)
        if fam is Family.Hermite:
            kind = {
                1: SpaceKind.AI_NONCOMPACT,
                2: SpaceKind.A_NONCOMPACT,
                4: SpaceKind.AII_NONCOMPACT,
            }[beta]
            return SpaceType(kind, n=self.n)
        if fam is Family.Laguerre:
            kind = {
                1: SpaceKind.BDI_NONCOMPACT,
                2: SpaceKind.AIII_NONCOMPACT,
                4: SpaceKind.CII_NONCOMPACT,
            }[beta]
            return SpaceType(kind, p=self.p, q=self.q)
        kind = {1: SpaceKind.BDI_I, 2: SpaceKind.AIII_III, 4: SpaceKind.CII_II}[beta]
        return SpaceType(kind, p=self.p, q=self.q, s=self.s)

    def classical(self) -> ClassicalParams:
        return classical_params(self.space_type())

    def dims_label(self) -> str:
        if self.family in (Family.Hermite, Family.Circular):
            return f"n={self.n}"
        if self.family is Family.Laguerre:
            return f"p={self.p};q={self.q}"
        return f"p={self.p};q={self.q};s={self.s}"


@dataclass
class SampleBatch:
    """Sampled spectra: one sorted row per draw, plus provenance."""

    spec: EnsembleSpec
    seed: int
    spectra: np.ndarray
    sampler_path: str

    def __post_init__(self):
        self.spectra = np.asarray(self.spectra, dtype=float)
        if self.spectra.ndim != 2 or self.spectra.shape[1] != self.spec.m:
            raise DomainError(
                f"spectra must be draws x {self.spec.m}, got {self.spectra.shape}"
            )

    @property
    def draws(self) -> int:
        return self.spectra.shape[0]


# ---------------------------------------------------------------------------
# Gaussian batches at the embedding level


def _gaussian_batch(field: FieldTag, count: int, rows: int, cols: int, rng: RngState):
    if field is FieldTag.Real:
        return rng.standard_normal((count, rows, cols))
    if field is FieldTag.Complex:
        z = rng.standard_normal((2, count, rows, cols))
        return z[0] + 1j * z[1]
    z = rng.standard_normal((4, count, rows, cols))
    alpha, beta = z[0] + 1j * z[1], z[2] + 1j * z[3]
    out = np.empty((count, 2 * rows, 2 * cols), dtype=complex)
    out[:, 0::2, 0::2] = alpha
    out[:, 0::2, 1::2] = beta
    out[:, 1::2, 0::2] = -beta.conj()
    out[:, 1::2, 1::2] = alpha.conj()
    return out


def _haar_batch(field: FieldTag, count: int, n: int, rng: RngState):
    """Batched Haar sampling by QR of Gaussians with the diagonal phase fix."""
    g = _gaussian_batch(field, count, n, n, rng)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[:, None, :].conj()
    return q


def _dedup_pairs(values: np.ndarray, what: str, tol: float = 1e-6):
    """Collapse exactly-doubled quaternionic spectra: rows sorted, pairs adjacent."""
    pairs = values.reshape(values.shape[0], -1, 2)
    if float(np.max(np.abs(pairs[..., 0] - pairs[..., 1]))) > tol:
        raise DomainError(f"{what}: doubled spectrum failed to pair")
    return pairs.mean(axis=2)


# ---------------------------------------------------------------------------
# samplers


def sample_hermite(n: int, beta: int, count: int, rng: RngState) -> SampleBatch:
    """Hermite (Gaussian) ensemble: eigenvalues of p = (G + G^dagger)/2.

    Joint density prod |l_j - l_k|^beta exp(-sum l^2/2).
    """
    spec = EnsembleSpec(Family.Hermite, beta, n=n)
    g = _gaussian_batch(spec.field, count, n, n, rng)
    p = 0.5 * (g + np.conj(np.swapaxes(g, -1, -2)))
    lam = np.linalg.eigvalsh(p)
    if beta == 4:
        lam = _dedup_pairs(lam, "hermite beta=4 eigenvalues")
    return SampleBatch(spec, rng.seed, np.sort(lam, axis=1), "gaussian")


def sample_laguerre(p: int, q: int, beta: int, count: int, rng: RngState) -> SampleBatch:
    """Laguerre (Wishart) ensemble: squared singular values of a p x q Gaussian.

    Joint density prod |l_j - l_k|^beta prod l^{beta(p-q+1)/2 - 1} e^{-l/2}.
    """
    spec = EnsembleSpec(Family.Laguerre, beta, p=p, q=q)
    g = _gaussian_batch(spec.field, count, p, q, rng)
    sv = np.linalg.svd(g, compute_uv=False)
    lam = np.sort(sv**2, axis=1)
    if beta == 4:
        lam = _dedup_pairs(lam, "laguerre beta=4 spectrum")
    return SampleBatch(spec, rng.seed, lam, "gaussian")


def sample_jacobi(
    p: int,
    q: int,
    s: int,
    beta: int,
    count: int,
    rng: RngState,
    path: str = "gsvd",
) -> SampleBatch:
    """Jacobi (MANOVA) ensemble: squared CS cosines, x_j = cos^2 theta_j.

    The cosines attach to the q-side block, so the joint density is
    prod |x_j - x_k|^beta prod x^{beta(q-s+1)/2-1} (1-x)^{beta(p-s+1)/2-1}.
    ``path='gsvd'`` orthonormalizes a stacked Gaussian pair (p x s over
    q x s); ``path='csd'`` takes a Haar matrix of size p + q with partition
    (p, q, p+q-s, s).  Both push forward to the same density.
    """
    spec = EnsembleSpec(Family.Jacobi, beta, p=p, q=q, s=s, sampler_path=path)
    k = spec.field.embedding_factor
    if spec.path == "gsvd":
        g = _gaussian_batch(spec.field, count, p + q, s, rng)
        qmat, _ = np.linalg.qr(g)
        block = qmat[:, k * p :, :]
    else:
        u = _haar_batch(spec.field, count, p + q, rng)
        block = u[:, k * p :, k * (p + q - s) :]
    sv = np.linalg.svd(block, compute_uv=False)
    x = np.clip(sv**2, 0.0, 1.0)
    x = np.sort(x, axis=1)
    if beta == 4:
        x = _dedup_pairs(x, "jacobi beta=4 spectrum")
    return SampleBatch(spec, rng.seed, x, spec.path)


def _angles_sorted(lams: np.ndarray) -> np.ndarray:
    return np.sort(np.mod(np.angle(lams), 2.0 * np.pi), axis=-1)


def _dedup_circle_pairs(lams: np.ndarray, what: str) -> np.ndarray:
    """Halve a doubled unit-circle spectrum, robust to the 0/2pi wrap."""
    order = np.argsort(np.angle(lams), axis=-1)
    lam_sorted = np.take_along_axis(lams, order, axis=-1)
    out = np.empty(lam_sorted.shape[:-1] + (lam_sorted.shape[-1] // 2,), dtype=complex)
    for i, row in enumerate(lam_sorted):
        if np.abs(row[0] - row[1]) > 1e-6 and np.abs(row[0] - row[-1]) < 1e-6:
            row = np.roll(row, 1)
        pairs = row.reshape(-1, 2)
        if float(np.max(np.abs(pairs[:, 0] - pairs[:, 1]))) > 1e-6:
            raise DomainError(f"{what}: doubled circular spectrum failed to pair")
        mean = pairs.mean(axis=1)
        out[i] = mean / np.abs(mean)
    return out


def _circular_raw_angles(
    n: int, beta: int, count: int, rng: RngState, path: Optional[str] = None
) -> np.ndarray:
    """Angles in the eigensolver's native (unsorted) order; eig paths only."""
    spec = EnsembleSpec(Family.Circular, beta, n=n, sampler_path=path)
    route = spec.path
    u = _haar_batch(FieldTag.Complex, count, n, rng)
    if route == "eig":
        return np.mod(np.angle(np.linalg.eigvals(u)), 2.0 * np.pi)
    if route == "uut_eig":
        lam = np.linalg.eigvals(u @ np.swapaxes(u, -1, -2))
        return np.mod(np.angle(lam), 2.0 * np.pi)
    raise PathError(f"raw coordinate order is only defined for eigensolver paths, not {route!r}")


def sample_circular(
    n: int, beta: int, count: int, rng: RngState, path: Optional[str] = None
) -> SampleBatch:
    """Circular ensembles (COE/CUE/CSE): n sorted angles in [0, 2 pi).

    beta=1: doubled ODO torus angles of Haar U(n), or eigenangles of U U^T.
    beta=2: eigenangles of Haar U(n).
    beta=4: doubled QDQ torus angles of Haar U(2n), or eigenangles of the
            skew-Hamiltonian U J U^T J^T (doubled pairs halved).
    """
    spec = EnsembleSpec(Family.Circular, beta, n=n, sampler_path=path)
    route = spec.path
    if route == "eig":
        u = _haar_batch(FieldTag.Complex, count, n, rng)
        theta = _angles_sorted(np.linalg.eigvals(u))
    elif route == "uut_eig":
        u = _haar_batch(FieldTag.Complex, count, n, rng)
        theta = _angles_sorted(np.linalg.eigvals(u @ np.swapaxes(u, -1, -2)))
    elif route == "skewham_eig":
        u = _haar_batch(FieldTag.Complex, count, 2 * n, rng)
        j = symplectic_j_stacked(n)
        w = u @ j @ np.swapaxes(u, -1, -2) @ j.T
        lam = _dedup_circle_pairs(np.linalg.eigvals(w), "skew-Hamiltonian eigenvalues")
        theta = _angles_sorted(lam)
    elif route == "odo":
        theta = np.empty((count, n))
        for i in range(count):
            sub = rng.substream(i)
            res = odo_decompose(sample_haar(FieldTag.Complex, n, sub), sub)
            theta[i] = np.sort(np.mod(2.0 * np.angle(res.d), 2.0 * np.pi))
    else:  # qdq
        theta = np.empty((count, n))
        for i in range(count):
            sub = rng.substream(i)
            res = qdq_decompose(sample_haar(FieldTag.Complex, 2 * n, sub), sub)
            theta[i] = np.sort(np.mod(2.0 * np.angle(res.d), 2.0 * np.pi))
    return SampleBatch(spec, rng.seed, theta, route)


def sample_batch(spec: EnsembleSpec, count: int, rng: RngState) -> SampleBatch:
    """Dispatch to the family sampler for a fully-specified EnsembleSpec."""
    if spec.family is Family.Hermite:
        return sample_hermite(spec.n, spec.beta, count, rng)
    if spec.family is Family.Laguerre:
        return sample_laguerre(spec.p, spec.q, spec.beta, count, rng)
    if spec.family is Family.Jacobi:
        return sample_jacobi(spec.p, spec.q, spec.s, spec.beta, count, rng, spec.path)
    return sample_circular(spec.n, spec.beta, count, rng, spec.path)


def sample_jacobi_mixed_beta1(p: int, q: int, count: int, rng: RngState) -> np.ndarray:
    """beta=1 sampler for the mixed-type density prod x^{(p-q-1)/2} (q coords).

    Realized through the CS decomposition of a Haar (p+q+1)-dimensional
    orthogonal matrix with row blocks {p, q+1} and column blocks {p+1, q};
    this is an empirically-checked equivalence, not a proved one.
    """
    if not p >= q >= 1:
        raise DomainError("mixed-type sampler needs p >= q >= 1")
    n = p + q + 1
    u = _haar_batch(FieldTag.Real, count, n, rng)
    if p >= q + 1:
        part = Partition(p, q + 1, p + 1, q)
        rows_are_p_block = False  # q' block is the (q+1)-row block
    else:  # p == q
        part = Partition(q + 1, p, p + 1, q)
        rows_are_p_block = True  # q' block is the p-row block
    top = part.p
    block = u[:, top:, p + 1 :]
    sv = np.linalg.svd(block, compute_uv=False)
    cos2 = np.clip(sv**2, 0.0, 1.0)
    x = cos2 if rows_are_p_block else 1.0 - cos2
    return np.sort(x, axis=1)


# ---------------------------------------------------------------------------
# joint density


def joint_log_density(spec: EnsembleSpec, x) -> float:
    """Unnormalized log joint density of the spectrum at x (sorted or not).

    Returns -inf outside the support rather than raising.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.m,):
        raise DomainError(f"x must have length {spec.m}, got shape {x.shape}")
    beta = spec.beta
    fam = spec.family
    if fam is Family.Circular:
        if np.any(x < 0.0) or np.any(x >= 2.0 * np.pi):
            return -np.inf
        z = np.exp(1j * x)
        total = 0.0
        with np.errstate(divide="ignore"):
            for j in range(spec.m):
                for k in range(j + 1, spec.m):
                    total += beta * float(np.log(np.abs(z[j] - z[k])))
        return total
    total = 0.0
    with np.errstate(divide="ignore"):
        for j in range(spec.m):
            for k in range(j + 1, spec.m):
                total += beta * float(np.log(np.abs(x[j] - x[k])))
        if fam is Family.Hermite:
            total += float(-0.5 * np.sum(x**2))
        elif fam is Family.Laguerre:
            if np.any(x < 0.0):
                return -np.inf
            alpha = spec.classical().alpha
            total += float(np.sum(alpha * np.log(x) - 0.5 * x))
        else:
            if np.any(x < 0.0) or np.any(x > 1.0):
                return -np.inf
            cp = spec.classical()
            total += float(np.sum(cp.alpha1 * np.log(x) + cp.alpha2 * np.log1p(-x)))
    return float(total)
