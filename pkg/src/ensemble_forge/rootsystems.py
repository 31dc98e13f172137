"""Restricted-root multiplicity tables and the associated Jacobian densities.

Each symmetric-space type carries a table of positive restricted roots with
refined multiplicities (m+, m-): the sine/sinh exponent and cosine/cosh
exponent of the corresponding factor of the change-of-variables Jacobian.
The tables are hard-coded data; the pingpong module re-derives them
numerically from the Lie algebras as an independent cross-check.

Multiplicities are real dimensions of root spaces throughout.  For the two
mixed families on doubled tori (DI_III, AII_III) the single-root row printed
in the source table is half the real dimension; ``printed_table`` exposes the
printed variant, while ``root_data`` and everything built on it use the real
count, which is what the numerical re-derivation measures.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError, DimensionError, ModeError, UnsupportedSpaceError

__all__ = [
    "SpaceKind",
    "SpaceType",
    "Root",
    "RootDatum",
    "JacobianMode",
    "VariableMap",
    "ClassicalParams",
    "root_data",
    "printed_table",
    "log_jacobian",
    "classical_params",
]


class SpaceKind(str, enum.Enum):
    AI = "AI"
    A = "A"
    AII = "AII"
    BDI_I = "BDI_I"
    AIII_III = "AIII_III"
    CII_II = "CII_II"
    AI_II = "AI_II"
    AI_III = "AI_III"
    CI_II = "CI_II"
    DI_III = "DI_III"
    AII_III = "AII_III"
    AI_NONCOMPACT = "AI_noncompact"
    A_NONCOMPACT = "A_noncompact"
    AII_NONCOMPACT = "AII_noncompact"
    BDI_NONCOMPACT = "BDI_noncompact"
    AIII_NONCOMPACT = "AIII_noncompact"
    CII_NONCOMPACT = "CII_noncompact"


_N_KINDS = {
    SpaceKind.AI, SpaceKind.A, SpaceKind.AII, SpaceKind.AI_II,
    SpaceKind.AI_NONCOMPACT, SpaceKind.A_NONCOMPACT, SpaceKind.AII_NONCOMPACT,
}
_PQS_KINDS = {SpaceKind.BDI_I, SpaceKind.AIII_III, SpaceKind.CII_II}
_PQ_KINDS = {
    SpaceKind.AI_III, SpaceKind.CI_II, SpaceKind.DI_III, SpaceKind.AII_III,
    SpaceKind.BDI_NONCOMPACT, SpaceKind.AIII_NONCOMPACT, SpaceKind.CII_NONCOMPACT,
}

_BETA = {
    SpaceKind.AI: 1, SpaceKind.A: 2, SpaceKind.AII: 4,
    SpaceKind.BDI_I: 1, SpaceKind.AIII_III: 2, SpaceKind.CII_II: 4,
    SpaceKind.AI_II: 2, SpaceKind.AI_III: 1, SpaceKind.CI_II: 2,
    SpaceKind.DI_III: 2, SpaceKind.AII_III: 4,
    SpaceKind.AI_NONCOMPACT: 1, SpaceKind.A_NONCOMPACT: 2,
    SpaceKind.AII_NONCOMPACT: 4, SpaceKind.BDI_NONCOMPACT: 1,
    SpaceKind.AIII_NONCOMPACT: 2, SpaceKind.CII_NONCOMPACT: 4,
}

_COMPACT = {k: not k.value.endswith("noncompact") for k in SpaceKind}


@dataclass(frozen=True)
class SpaceType:
    """A symmetric-space triple with its dimension parameters.

    ``n`` for the circular/Hermite families, ``(p, q, s)`` for the compact
    Jacobi families, ``(p, q)`` for the mixed and Laguerre families.
    """

    kind: SpaceKind
    n: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    s: Optional[int] = None

    def __post_init__(self):
        k = self.kind
        if k in _N_KINDS:
            if self.n is None or self.n < 1 or self.p is not None:
                raise DomainError(f"{k.value} requires a single parameter n >= 1")
        elif k in _PQS_KINDS:
            if None in (self.p, self.q, self.s) or self.n is not None:
                raise DomainError(f"{k.value} requires parameters (p, q, s)")
            if not (self.p >= self.q >= self.s >= 1):
                raise DomainError(
                    f"{k.value} requires p >= q >= s >= 1, got ({self.p}, {self.q}, {self.s})"
                )
        else:
            if None in (self.p, self.q) or self.s is not None or self.n is not None:
                raise DomainError(f"{k.value} requires parameters (p, q)")
            if not (self.p >= self.q >= 1):
                raise DomainError(f"{k.value} requires p >= q >= 1")

    @property
    def beta(self) -> int:
        return _BETA[self.kind]

    @property
    def is_compact(self) -> bool:
        return _COMPACT[self.kind]

    @property
    def torus_rank(self) -> int:
        if self.kind in _N_KINDS:
            return self.n
        if self.kind in _PQS_KINDS:
            return self.s
        return self.q

    @property
    def params(self) -> dict:
        if self.kind in _N_KINDS:
            return {"n": self.n}
        if self.kind in _PQS_KINDS:
            return {"p": self.p, "q": self.q, "s": self.s}
        return {"p": self.p, "q": self.q}

    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind.value}({inner})"


@dataclass(frozen=True)
class Root:
    """A positive restricted root: integer coefficients on the torus plus
    the refined multiplicities (sine exponent m_plus, cosine exponent m_minus)."""

    coeffs: Tuple[int, ...]
    m_plus: int
    m_minus: int

    def __post_init__(self):
        if self.m_plus + self.m_minus < 1:
            raise DomainError("roots must have positive total multiplicity")

    def value(self, h: np.ndarray) -> float:
        return float(np.dot(self.coeffs, h))


@dataclass(frozen=True)
class RootDatum:
    torus_rank: int
    roots: Tuple[Root, ...]

    def as_dict(self):
        return {
            tuple(r.coeffs): (r.m_plus, r.m_minus) for r in self.roots
        }


def _unit(rank: int, j: int, scale: int = 1) -> Tuple[int, ...]:
    v = [0] * rank
    v[j] = scale
    return tuple(v)


def _pair(rank: int, j: int, k: int, sign: int) -> Tuple[int, ...]:
    v = [0] * rank
    v[j] = 1
    v[k] = sign
    return tuple(v)


def _family_table(space: SpaceType, printed: bool = False):
    """(pair_diff, pair_sum, single, double) multiplicity pairs for a space.

    ``None`` marks a family that does not occur for the space's rank pattern
    (circular/Hermite types only have differences).  ``printed=True`` returns
    the source table's counting convention for the doubled-torus mixed types.
    """
    k, beta = space.kind, space.beta
    if k in (SpaceKind.AI, SpaceKind.A, SpaceKind.AII,
             SpaceKind.AI_NONCOMPACT, SpaceKind.A_NONCOMPACT, SpaceKind.AII_NONCOMPACT):
        return ((beta, 0), None, None, None)
    if k is SpaceKind.AI_II:
        return ((2, 2), None, None, None)
    if k in _PQS_KINDS:
        p, q, s = space.p, space.q, space.s
        return (
            (beta, 0),
            (beta, 0),
            (beta * (p - s), beta * (q - s)),
            (beta - 1, 0),
        )
    if k in (SpaceKind.AI_III, SpaceKind.CI_II):
        d = space.p - space.q
        return ((beta, beta), (beta, beta), (beta * d, beta * d), (beta - 1, beta))
    if k in (SpaceKind.DI_III, SpaceKind.AII_III):
        d = space.p - space.q
        single = (beta * d // 2, beta * d // 2) if printed else (beta * d, beta * d)
        return ((beta, beta), (beta, beta), single, (beta - 1, beta // 2 - 1))
    # noncompact Laguerre families
    d = space.p - space.q
    return ((beta, 0), (beta, 0), (beta * d, 0), (beta - 1, 0))


def printed_table(space: SpaceType):
    """The multiplicity table in the source's printed convention.

    Rows are (family_label, m_plus, m_minus) including structural zeros.
    For DI_III / AII_III the printed single-root row counts half the real
    dimension (the doubled-torus convention); everywhere else printed and
    real counts coincide.
    """
    fams = _family_table(space, printed=True)
    labels = ("pair_diff", "pair_sum", "single", "double")
    return [
        (label, mult[0], mult[1])
        for label, mult in zip(labels, fams)
        if mult is not None
    ]


def root_data(space: SpaceType) -> RootDatum:
    """Positive restricted roots with real-dimension multiplicities.

    Families whose multiplicity vanishes for the given parameters (e.g. the
    double root at beta = 1, or single roots at p = q) are omitted, so every
    returned root satisfies m_plus + m_minus >= 1.
    """
    rank = space.torus_rank
    pair_diff, pair_sum, single, double = _family_table(space)
    roots = []
    for j in range(rank):
        for k in range(j + 1, rank):
            if pair_diff and sum(pair_diff) > 0:
                roots.append(Root(_pair(rank, j, k, -1), *pair_diff))
            if pair_sum and sum(pair_sum) > 0:
                roots.append(Root(_pair(rank, j, k, +1), *pair_sum))
    for j in range(rank):
        if single and sum(single) > 0:
            roots.append(Root(_unit(rank, j), *single))
        if double and sum(double) > 0:
            roots.append(Root(_unit(rank, j, 2), *double))
    return RootDatum(rank, tuple(roots))


class JacobianMode(str, enum.Enum):
    COMPACT = "compact"
    NONCOMPACT = "noncompact"
    FLAT = "flat"


def natural_mode(space: SpaceType) -> JacobianMode:
    """Group-level mode for compact types, flat (tangent-space) mode otherwise."""
    return JacobianMode.COMPACT if space.is_compact else JacobianMode.FLAT


def log_jacobian(space: SpaceType, h, mode: JacobianMode) -> float:
    """log of the K1AK2 Jacobian density at torus element H, up to a constant.

    compact:    sum m+ log|sin a(H)| + m- log|cos a(H)|
    noncompact: sum m+ log|sinh a(H)| + m- log|cosh a(H)|
    flat:       sum m  log|a(H)|   (only defined when every m- vanishes)

    Returns -inf on chamber walls (vanishing factors).
    """
    h = np.asarray(h, dtype=float)
    datum = root_data(space)
    if h.shape != (datum.torus_rank,):
        raise DimensionError(
            f"H must have length {datum.torus_rank}, got shape {h.shape}"
        )
    if mode is JacobianMode.FLAT and any(r.m_minus > 0 for r in datum.roots):
        raise ModeError(
            f"{space.label()} has cosine-type multiplicities; flat mode undefined"
        )
    total = 0.0
    for root in datum.roots:
        val = root.value(h)
        if mode is JacobianMode.COMPACT:
            f, g = abs(np.sin(val)), abs(np.cos(val))
        elif mode is JacobianMode.NONCOMPACT:
            f, g = abs(np.sinh(val)), np.cosh(val)
        else:
            f, g = abs(val), 1.0
        with np.errstate(divide="ignore"):
            total += root.m_plus * float(np.log(f)) + root.m_minus * float(np.log(g))
    return total


class VariableMap(str, enum.Enum):
    """Change of variables from torus coordinates to classical coordinates."""

    COS2 = "cos2"                 # x = cos^2(theta)
    SIN2_2THETA = "sin2_2theta"   # x = sin^2(2 theta)
    SIN2 = "sin2"                 # x = sin^2(theta)
    SQUARE = "square"             # lambda = h^2
    ANGLE_DOUBLE = "angle_double"        # theta_ens = 2 h  (mod 2 pi)
    ANGLE_QUADRUPLE = "angle_quadruple"  # theta_ens = 4 h  (mod 2 pi)
    IDENTITY = "identity"         # lambda = h


def apply_variable_map(vm: VariableMap, h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if vm is VariableMap.COS2:
        return np.cos(h) ** 2
    if vm is VariableMap.SIN2_2THETA:
        return np.sin(2.0 * h) ** 2
    if vm is VariableMap.SIN2:
        return np.sin(h) ** 2
    if vm is VariableMap.SQUARE:
        return h**2
    if vm is VariableMap.ANGLE_DOUBLE:
        return np.mod(2.0 * h, 2.0 * np.pi)
    if vm is VariableMap.ANGLE_QUADRUPLE:
        return np.mod(4.0 * h, 2.0 * np.pi)
    return h.copy()


def variable_map_jacobian(vm: VariableMap, h: np.ndarray) -> np.ndarray:
    """|dx/dh| per coordinate for the change of variables."""
    h = np.asarray(h, dtype=float)
    if vm is VariableMap.COS2:
        return np.abs(np.sin(2.0 * h))
    if vm is VariableMap.SIN2_2THETA:
        return np.abs(2.0 * np.sin(4.0 * h))
    if vm is VariableMap.SIN2:
        return np.abs(np.sin(2.0 * h))
    if vm is VariableMap.SQUARE:
        return np.abs(2.0 * h)
    if vm is VariableMap.ANGLE_DOUBLE:
        return np.full_like(h, 2.0)
    if vm is VariableMap.ANGLE_QUADRUPLE:
        return np.full_like(h, 4.0)
    return np.ones_like(h)


@dataclass(frozen=True)
class ClassicalParams:
    """Classical ensemble determined by a symmetric-space coordinate system."""

    family: str  # Hermite | Laguerre | Jacobi | Circular
    beta: int
    m: int
    variable_map: VariableMap
    alpha1: Optional[float] = None
    alpha2: Optional[float] = None
    alpha: Optional[float] = None


def classical_params(space: SpaceType) -> ClassicalParams:
    """Map a space to its classical ensemble family, parameters and variables.

    Jacobi alphas follow from pushing the root table through the variable
    map; for the mixed doubled-torus families this uses the real-dimension
    single-root multiplicity (see module docstring).
    """
    k, beta, rank = space.kind, space.beta, space.torus_rank
    if k in (SpaceKind.AI, SpaceKind.A, SpaceKind.AII):
        return ClassicalParams("Circular", beta, rank, VariableMap.ANGLE_DOUBLE)
    if k is SpaceKind.AI_II:
        return ClassicalParams("Circular", beta, rank, VariableMap.ANGLE_QUADRUPLE)
    if k in (SpaceKind.AI_NONCOMPACT, SpaceKind.A_NONCOMPACT, SpaceKind.AII_NONCOMPACT):
        return ClassicalParams("Hermite", beta, rank, VariableMap.IDENTITY)
    if k in (SpaceKind.BDI_NONCOMPACT, SpaceKind.AIII_NONCOMPACT, SpaceKind.CII_NONCOMPACT):
        alpha = beta * (space.p - space.q + 1) / 2.0 - 1.0
        return ClassicalParams("Laguerre", beta, rank, VariableMap.SQUARE, alpha=alpha)
    if k in _PQS_KINDS:
        p, q, s = space.p, space.q, space.s
        a1 = beta * (q - s + 1) / 2.0 - 1.0
        a2 = beta * (p - s + 1) / 2.0 - 1.0
        return ClassicalParams("Jacobi", beta, s, VariableMap.COS2, alpha1=a1, alpha2=a2)
    if k in (SpaceKind.AI_III, SpaceKind.CI_II):
        a1 = beta * (space.p - space.q + 1) / 2.0 - 1.0
        a2 = (beta - 1) / 2.0
        return ClassicalParams(
            "Jacobi", beta, rank, VariableMap.SIN2_2THETA, alpha1=a1, alpha2=a2
        )
    if k in (SpaceKind.DI_III, SpaceKind.AII_III):
        a1 = beta * (space.p - space.q + 1) / 2.0 - 1.0
        a2 = (beta - 4) / 4.0
        return ClassicalParams(
            "Jacobi", beta, rank, VariableMap.SIN2_2THETA, alpha1=a1, alpha2=a2
        )
    raise UnsupportedSpaceError(f"no classical mapping for {space.label()}")


def classical_log_density_algebraic(params: ClassicalParams, x: np.ndarray) -> float:
    """log of the algebraic part of the classical density (no Gaussian weight).

    Jacobi: Vandermonde^beta * prod x^a1 (1-x)^a2;  Laguerre: * prod x^alpha;
    Hermite: Vandermonde only; Circular: prod |e^{i t_j} - e^{i t_k}|^beta.
    """
    x = np.asarray(x, dtype=float)
    total = 0.0
    with np.errstate(divide="ignore"):
        if params.family == "Circular":
            z = np.exp(1j * x)
            for j in range(len(x)):
                for k in range(j + 1, len(x)):
                    total += params.beta * float(np.log(np.abs(z[j] - z[k])))
            return total
        for j in range(len(x)):
            for k in range(j + 1, len(x)):
                total += params.beta * float(np.log(abs(x[j] - x[k])))
        if params.family == "Jacobi":
            total += float(np.sum(params.alpha1 * np.log(x) + params.alpha2 * np.log1p(-x)))
        elif params.family == "Laguerre":
            total += float(np.sum(params.alpha * np.log(x)))
    return total
