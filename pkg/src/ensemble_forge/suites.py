"""Named verification suites: factorizations, pingpong, densities, crosspath.

Each suite returns a list of report dicts {test, spec, statistic, threshold,
pass}; a run passes iff every report passes.  The acceptance test module and
the CLI ``verify`` command both call these functions, so the pass/fail logic
lives in exactly one place.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence

import numpy as np

from .ensembles import (
    EnsembleSpec,
    Family,
    sample_circular,
    sample_hermite,
    sample_jacobi,
    sample_laguerre,
)
from .factorizations import Partition, csd, gsvd, odo_decompose, qdq_decompose, symplectic_j_stacked
from .matcore import FieldTag, RngState, sample_gaussian_matrix, sample_haar
from .pingpong import lie_algebra_spec, measure_root_multiplicities, verify_exponential_map
from .rootsystems import SpaceKind, SpaceType, root_data

__all__ = [
    "factorization_suite",
    "pingpong_suite",
    "density_suite",
    "crosspath_suite",
    "run_suite",
    "SUITE_NAMES",
    "jacobi_parameter_rows",
]

SUITE_NAMES = ("factorizations", "pingpong", "densities", "crosspath", "all")


def _report(test: str, spec: str, statistic: float, threshold: float) -> Dict:
    return {
        "test": test,
        "spec": spec,
        "statistic": float(statistic),
        "threshold": float(threshold),
        "pass": bool(statistic <= threshold),
    }


# ---------------------------------------------------------------------------
# factorizations


def factorization_suite(seed: int = 20240, trials: int = 200, max_size: int = 12) -> List[Dict]:
    """Reconstruction and factor-structure residuals on random inputs.

    Each factorization gets ``trials`` random matrices with sizes up to
    ``max_size``; the reported statistic is the worst residual, against the
    1e-10 * n reconstruction tolerance and 1e-10 structure tolerance.
    """
    rng = RngState(seed)
    gen = rng.generator
    reports = []

    worst_recon, worst_struct = 0.0, 0.0
    for _ in range(trials):
        field = (FieldTag.Real, FieldTag.Complex, FieldTag.Quaternion)[gen.integers(3)]
        cap = max_size if field is not FieldTag.Quaternion else max_size // 2
        s = int(gen.integers(1, max(cap // 4, 1) + 1))
        q = int(gen.integers(s, cap // 2 + 1))
        p = int(gen.integers(q, cap - q + 1)) if cap - q >= q else q
        part = Partition(p, q, p + q - s, s)
        u = sample_haar(field, p + q, rng)
        res = csd(u, part)
        worst_recon = max(worst_recon, res.residual / part.n)
        for f in (res.u_p, res.u_q, res.v_r, res.v_s):
            a = f.array
            worst_struct = max(
                worst_struct, float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[1]))))
            )
    reports.append(_report("csd reconstruction/n", f"{trials} random", worst_recon, 1e-10))
    reports.append(_report("csd factor unitarity", f"{trials} random", worst_struct, 1e-10))

    worst_recon, worst_struct = 0.0, 0.0
    for _ in range(trials):
        field = (FieldTag.Real, FieldTag.Complex, FieldTag.Quaternion)[gen.integers(3)]
        cap = max_size if field is not FieldTag.Quaternion else max_size // 2
        s = int(gen.integers(1, cap // 2 + 1))
        p = int(gen.integers(s, cap + 1))
        q = int(gen.integers(s, cap + 1))
        a = sample_gaussian_matrix(field, p, s, rng)
        b = sample_gaussian_matrix(field, q, s, rng)
        res = gsvd(a, b)
        worst_recon = max(worst_recon, res.residual / (p + q))
        c2s2 = res.cos**2 + res.sin**2
        worst_struct = max(worst_struct, float(np.max(np.abs(c2s2 - 1.0))))
        for f in (res.u, res.v):
            arr = f.array
            worst_struct = max(
                worst_struct, float(np.max(np.abs(arr.conj().T @ arr - np.eye(arr.shape[1]))))
            )
    reports.append(_report("gsvd reconstruction/n", f"{trials} random", worst_recon, 1e-10))
    reports.append(_report("gsvd factor structure", f"{trials} random", worst_struct, 1e-10))

    worst_recon, worst_struct = 0.0, 0.0
    for _ in range(trials):
        n = int(gen.integers(1, max_size + 1))
        u = sample_haar(FieldTag.Complex, n, rng)
        res = odo_decompose(u, rng)
        worst_recon = max(worst_recon, res.residual / n)
        for f in (res.o1, res.o2):
            arr = f.array
            worst_struct = max(worst_struct, float(np.max(np.abs(arr.imag))))
            worst_struct = max(
                worst_struct, float(np.max(np.abs(arr.T @ arr - np.eye(n))))
            )
        worst_struct = max(worst_struct, float(np.max(np.abs(np.abs(res.d) - 1.0))))
    reports.append(_report("odo reconstruction/n", f"{trials} random", worst_recon, 1e-10))
    reports.append(_report("odo factor structure", f"{trials} random", worst_struct, 1e-10))

    worst_recon, worst_struct = 0.0, 0.0
    for _ in range(trials):
        n = int(gen.integers(1, max_size // 2 + 1))
        u = sample_haar(FieldTag.Complex, 2 * n, rng)
        res = qdq_decompose(u, rng)
        worst_recon = max(worst_recon, res.residual / (2 * n))
        j = symplectic_j_stacked(n)
        for f in (res.q1, res.q2):
            arr = f.array
            worst_struct = max(
                worst_struct, float(np.max(np.abs(arr.conj().T @ arr - np.eye(2 * n))))
            )
            worst_struct = max(worst_struct, float(np.max(np.abs(arr.T @ j @ arr - j))))
    reports.append(_report("qdq reconstruction/n", f"{trials} random", worst_recon, 1e-10))
    reports.append(_report("qdq factor structure", f"{trials} random", worst_struct, 1e-10))
    return reports


# ---------------------------------------------------------------------------
# pingpong


def acceptance_space_list(p_max: int = 4, s_max: int = 2, n_max: int = 6) -> List[SpaceType]:
    """Every implemented SpaceType instance within the acceptance bounds."""
    spaces = []
    for kind in (SpaceKind.AI, SpaceKind.A, SpaceKind.AII, SpaceKind.AI_II,
                 SpaceKind.AI_NONCOMPACT, SpaceKind.A_NONCOMPACT, SpaceKind.AII_NONCOMPACT):
        for n in range(1, n_max + 1):
            spaces.append(SpaceType(kind, n=n))
    for kind in (SpaceKind.BDI_I, SpaceKind.AIII_III, SpaceKind.CII_II):
        for s in range(1, s_max + 1):
            for q in range(s, p_max + 1):
                for p in range(q, p_max + 1):
                    spaces.append(SpaceType(kind, p=p, q=q, s=s))
    for kind in (SpaceKind.AI_III, SpaceKind.CI_II, SpaceKind.DI_III, SpaceKind.AII_III,
                 SpaceKind.BDI_NONCOMPACT, SpaceKind.AIII_NONCOMPACT, SpaceKind.CII_NONCOMPACT):
        for q in range(1, p_max + 1):
            for p in range(q, p_max + 1):
                spaces.append(SpaceType(kind, p=p, q=q))
    return spaces


def pingpong_suite(
    seed: int = 777,
    p_max: int = 4,
    s_max: int = 2,
    n_max: int = 6,
    spaces: Optional[Sequence[SpaceType]] = None,
) -> List[Dict]:
    """Empirical root tables vs the hard-coded data, plus exponential maps."""
    rng = RngState(seed)
    reports = []
    for space in spaces if spaces is not None else acceptance_space_list(p_max, s_max, n_max):
        spec = lie_algebra_spec(space)
        measured = measure_root_multiplicities(spec, rng)
        expected = root_data(space)
        mismatches = _table_mismatches(measured, expected)
        reports.append(_report("root-table equality", space.label(), mismatches, 0.0))

    for space, label in (
        (SpaceType(SpaceKind.AI_NONCOMPACT, n=4), "gl_real(4)"),
        (SpaceType(SpaceKind.AIII_III, p=2, q=2, s=2), "u(4) A III torus"),
        (SpaceType(SpaceKind.BDI_NONCOMPACT, p=3, q=2), "o(3,2)"),
    ):
        spec = lie_algebra_spec(space)
        h = 0.25 * rng.standard_normal(spec.rank)
        res = verify_exponential_map(spec, h, trials=50, rng=rng)
        reports.append(_report("exponential map", label, res, 1e-9))
    return reports


def _table_mismatches(measured, expected) -> int:
    a, b = measured.as_dict(), expected.as_dict()
    keys = set(a) | set(b)
    return sum(1 for k in keys if a.get(k) != b.get(k))


# ---------------------------------------------------------------------------
# densities (acceptance criterion 4)


def density_suite(seed: int = 4242, n_samples: int = 50000, fast: bool = False) -> List[Dict]:
    """KS checks of sampled spectra against quadrature/analytic CDFs."""
    from .statsverify import ks_one_sample, numeric_marginal_cdf

    rng = RngState(seed)
    reports = []

    def one_sample(label, samples, cdf):
        r = ks_one_sample(np.sort(samples), cdf, alpha=0.01)
        reports.append(_report(f"density KS: {label}", f"N={samples.size}", r.statistic, r.threshold))

    # (a) Jacobi (2,1,1) beta=1 vs Beta(1/2, 1)
    spec = EnsembleSpec(Family.Jacobi, 1, p=2, q=1, s=1)
    cdf = numeric_marginal_cdf(spec)
    batch = sample_jacobi(2, 1, 1, 1, n_samples, rng.substream(1))
    one_sample("jacobi(2,1,1) b1 ~ Beta(1/2,1)", batch.spectra[:, 0], cdf)

    # (b) Jacobi (2,2,1) beta=2 vs Beta(2, 2)
    spec = EnsembleSpec(Family.Jacobi, 2, p=2, q=2, s=1)
    cdf = numeric_marginal_cdf(spec)
    batch = sample_jacobi(2, 2, 1, 2, n_samples, rng.substream(2))
    one_sample("jacobi(2,2,1) b2 ~ Beta(2,2)", batch.spectra[:, 0], cdf)

    # (c) Jacobi (2,1,1) beta=4: alpha1 = 2(q-s)+1 = 1, alpha2 = 2(p-s)+1 = 3
    spec = EnsembleSpec(Family.Jacobi, 4, p=2, q=1, s=1)
    cdf = numeric_marginal_cdf(spec)
    batch = sample_jacobi(2, 1, 1, 4, n_samples, rng.substream(3))
    one_sample("jacobi(2,1,1) b4 ~ Beta(2,4)", batch.spectra[:, 0], cdf)

    # (d) Laguerre (2,1) beta=1 vs the quadrature chi-square-type CDF
    spec = EnsembleSpec(Family.Laguerre, 1, p=2, q=1)
    cdf = numeric_marginal_cdf(spec)
    batch = sample_laguerre(2, 1, 1, n_samples, rng.substream(4))
    one_sample("laguerre(2,1) b1 ~ chi2-type", batch.spectra[:, 0], cdf)

    # (e) Hermite n=1, all betas, vs the standard normal CDF
    cdf = numeric_marginal_cdf(EnsembleSpec(Family.Hermite, 1, n=1))
    for beta in (1, 2, 4):
        batch = sample_hermite(1, beta, n_samples, rng.substream(10 + beta))
        one_sample(f"hermite n=1 b{beta} ~ N(0,1)", batch.spectra[:, 0], cdf)

    # (f) CUE n=2 minimum spacing vs the analytic (t - sin t)/pi CDF
    if not fast:
        batch = sample_circular(2, 2, n_samples, rng.substream(20))
        gap = batch.spectra[:, 1] - batch.spectra[:, 0]
        spacing = np.minimum(gap, 2.0 * np.pi - gap)
        one_sample(
            "CUE n=2 min-spacing ~ (t - sin t)/pi",
            spacing,
            lambda t: (t - np.sin(t)) / np.pi,
        )
    return reports


# ---------------------------------------------------------------------------
# cross-path equivalence (acceptance criterion 5)


def crosspath_suite(seed: int = 1337, n_samples: int = 20000) -> List[Dict]:
    """Two-sample KS between alternative sampler paths of one ensemble."""
    from .statsverify import ks_two_sample

    rng = RngState(seed)
    reports = []

    def compare(label, a, b):
        # min and max order statistics are i.i.d. across draws (design choice)
        cols = [0] if a.shape[1] == 1 else [0, a.shape[1] - 1]
        names = ["min", "max"][: len(cols)]
        for col, nm in zip(cols, names):
            r = ks_two_sample(np.sort(a[:, col]), np.sort(b[:, col]), alpha=0.01)
            reports.append(
                _report(f"crosspath KS ({nm}): {label}", f"N={a.shape[0]} per side", r.statistic, r.threshold)
            )

    a = sample_circular(3, 1, n_samples, rng.substream(1), "odo").spectra
    b = sample_circular(3, 1, n_samples, rng.substream(2), "uut_eig").spectra
    compare("COE n=3 odo vs uut_eig", a, b)

    a = sample_circular(2, 4, n_samples, rng.substream(3), "qdq").spectra
    b = sample_circular(2, 4, n_samples, rng.substream(4), "skewham_eig").spectra
    compare("CSE n=2 qdq vs skewham_eig", a, b)

    for beta in (1, 2):
        a = sample_jacobi(3, 2, 1, beta, n_samples, rng.substream(10 + beta), "gsvd").spectra
        b = sample_jacobi(3, 2, 1, beta, n_samples, rng.substream(20 + beta), "csd").spectra
        compare(f"jacobi(3,2,1) b{beta} gsvd vs csd", a, b)
    return reports


# ---------------------------------------------------------------------------
# parameter map (Figures 2 and 5 data)


def jacobi_parameter_rows(beta: int, bound: int, kinds: Optional[Sequence[str]] = None) -> List[Dict]:
    """(space, params, family, beta, alpha1, alpha2) rows for the Jacobi maps."""
    from .rootsystems import classical_params

    by_beta = {
        1: [SpaceKind.BDI_I, SpaceKind.AI_III],
        2: [SpaceKind.AIII_III, SpaceKind.CI_II, SpaceKind.DI_III],
        4: [SpaceKind.CII_II, SpaceKind.AII_III],
    }
    selected = by_beta[beta]
    if kinds:
        wanted = {k.upper() for k in kinds}
        selected = [k for k in selected if k.value.upper() in wanted]
    rows = []
    for kind in selected:
        if kind in (SpaceKind.BDI_I, SpaceKind.AIII_III, SpaceKind.CII_II):
            # p and q enumerate independently >= s: the two orderings mirror
            # (alpha1, alpha2); emit the canonical p >= q instance either way.
            for s in range(1, bound + 1):
                for a in range(s, bound + 1):
                    for b in range(s, bound + 1):
                        p, q = max(a, b), min(a, b)
                        space = SpaceType(kind, p=p, q=q, s=s)
                        cp = classical_params(space)
                        a1, a2 = cp.alpha1, cp.alpha2
                        if a < b:  # mirrored orientation x -> 1 - x
                            a1, a2 = a2, a1
                        rows.append(_param_row(space, cp, a1, a2, mirrored=a < b))
        else:
            for q in range(1, bound + 1):
                for p in range(q, bound + 1):
                    space = SpaceType(kind, p=p, q=q)
                    cp = classical_params(space)
                    rows.append(_param_row(space, cp, cp.alpha1, cp.alpha2, mirrored=False))
    return rows


def _param_row(space, cp, a1, a2, mirrored):
    return {
        "space": space.kind.value,
        "params": ";".join(f"{k}={v}" for k, v in space.params.items()),
        "family": cp.family,
        "beta": cp.beta,
        "alpha1": a1,
        "alpha2": a2,
        "mirrored": mirrored,
    }


# ---------------------------------------------------------------------------
# runner


def run_suite(name: str, seed: int = 0, fast: bool = False) -> List[Dict]:
    if name == "factorizations":
        return factorization_suite(seed=seed + 20240, trials=50 if fast else 200)
    if name == "pingpong":
        if fast:
            return pingpong_suite(seed=seed + 777, p_max=2, s_max=1, n_max=3)
        return pingpong_suite(seed=seed + 777)
    if name == "densities":
        return density_suite(seed=seed + 4242, n_samples=20000 if fast else 50000, fast=fast)
    if name == "crosspath":
        return crosspath_suite(seed=seed + 1337, n_samples=5000 if fast else 20000)
    if name == "all":
        out = []
        for sub in ("factorizations", "pingpong", "densities", "crosspath"):
            out.extend(run_suite(sub, seed=seed, fast=fast))
        return out
    raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
