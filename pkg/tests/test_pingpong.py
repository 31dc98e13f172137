"""Tests for the ad_H operator machinery and the empirical root re-derivation."""

import numpy as np
import pytest

from ensemble_forge.errors import ChamberError, InvolutionError
from ensemble_forge.matcore import RngState
from ensemble_forge.pingpong import (
    Involution,
    LieAlgebraSpec,
    _basis_u,
    _orthonormalize,
    build_ad,
    lie_algebra_spec,
    measure_root_multiplicities,
    split_kp_basis,
    verify_exponential_map,
)
from ensemble_forge.rootsystems import SpaceKind, SpaceType, root_data


def spec_for(kind, **kw):
    return lie_algebra_spec(SpaceType(kind, **kw))


def test_build_ad_gl_real_2_eigenvalues():
    spec = spec_for(SpaceKind.AI_NONCOMPACT, n=2)
    ad = build_ad(spec, [1.3, 0.4])
    eig = np.sort(np.linalg.eigvalsh(ad))
    assert np.allclose(eig, [-0.9, 0.0, 0.0, 0.9], atol=1e-12)


def test_build_ad_zero_element():
    spec = spec_for(SpaceKind.AI_NONCOMPACT, n=2)
    assert np.max(np.abs(build_ad(spec, [0.0, 0.0]))) == 0.0


def test_build_ad_o21_root_multiplicities():
    # o(2,1): single root h with multiplicity beta*(p-q) = 1, no double root
    spec = spec_for(SpaceKind.BDI_NONCOMPACT, p=2, q=1)
    report = split_kp_basis(spec, [0.8])
    assert report.roots == [(pytest.approx(0.8), 1, 0)]
    assert report.zero_dim == 1


def test_build_ad_matrix_input_and_chamber_error():
    spec = spec_for(SpaceKind.AI_NONCOMPACT, n=2)
    h = spec.cartan_element([0.5, -0.2])
    ad = build_ad(spec, h)
    assert np.allclose(ad, build_ad(spec, [0.5, -0.2]))
    off_chamber = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(ChamberError):
        build_ad(spec, off_chamber)


def test_split_gl_real_pattern():
    spec = spec_for(SpaceKind.AI_NONCOMPACT, n=3)
    report = split_kp_basis(spec, [0.9, 0.4, 0.1])
    assert all(mp == 1 and mm == 0 for _, mp, mm in report.roots)
    assert len(report.roots) == 3
    assert report.kp_dims[1] == 0 and report.kp_dims[2] == 0  # sigma = tau
    assert report.max_residual <= 1e-10


def test_split_kp_tau_parities():
    # theta k = k and theta p = -p enter the report's residual directly
    spec = spec_for(SpaceKind.AI, n=3)
    report = split_kp_basis(spec, [1.1, 0.6, 0.2])
    assert report.max_residual <= 1e-10
    for k, p in zip(report.k_vectors, report.p_vectors):
        assert np.linalg.norm(spec.tau_mat @ k - k) <= 1e-10
        assert np.linalg.norm(spec.tau_mat @ p + p) <= 1e-10


def test_split_ai_ii_refined_multiplicities():
    spec = spec_for(SpaceKind.AI_II, n=2)
    report = split_kp_basis(spec, [0.7, 0.2])
    assert report.roots == [(pytest.approx(0.5), 2, 2)]


def test_split_bdi_i_matches_table():
    space = SpaceType(SpaceKind.BDI_I, p=3, q=2, s=1)
    spec = lie_algebra_spec(space)
    report = split_kp_basis(spec, [0.62])
    table = root_data(space).as_dict()
    # rank 1: single root theta with (p-s, q-s) = (2, 1), no pairs, no double
    assert report.roots == [(pytest.approx(0.62), 2, 1)]
    assert table[(1,)] == (2, 1)


def test_dimension_bookkeeping():
    rng = RngState(40)
    for space in (
        SpaceType(SpaceKind.AIII_III, p=3, q=2, s=2),
        SpaceType(SpaceKind.CII_II, p=2, q=2, s=1),
        SpaceType(SpaceKind.DI_III, p=3, q=2),
        SpaceType(SpaceKind.AII_NONCOMPACT, n=3),
    ):
        spec = lie_algebra_spec(space)
        h = 0.3 * rng.standard_normal(spec.rank) + 0.5
        report = split_kp_basis(spec, h)
        assert 2 * report.multiplicity_sum() + report.zero_dim == spec.dim
        assert sum(report.kp_dims) == spec.dim


def test_exponential_map_eigen_action():
    import scipy.linalg

    spec = spec_for(SpaceKind.AI_NONCOMPACT, n=2)
    ad = build_ad(spec, [1.0, 0.0])
    e12 = np.zeros((2, 2), dtype=complex)
    e12[0, 1] = 1.0
    coords = spec.coords(e12)
    acted = scipy.linalg.expm(ad) @ coords
    assert np.allclose(spec.from_coords(acted), np.e * e12, atol=1e-12)


def test_exponential_map_zero_h():
    spec = spec_for(SpaceKind.AI_NONCOMPACT, n=3)
    res = verify_exponential_map(spec, [0.0, 0.0, 0.0], trials=5, rng=RngState(41))
    assert res <= 1e-12


def test_exponential_map_u4_torus():
    spec = spec_for(SpaceKind.AIII_III, p=2, q=2, s=2)
    res = verify_exponential_map(spec, [0.45, 0.15], trials=50, rng=RngState(42))
    assert res <= 1e-9


def test_measure_ai3():
    datum = measure_root_multiplicities(spec_for(SpaceKind.AI, n=3), RngState(43))
    assert datum.as_dict() == {
        (1, -1, 0): (1, 0),
        (1, 0, -1): (1, 0),
        (0, 1, -1): (1, 0),
    }


def test_measure_aiii_iii_221():
    datum = measure_root_multiplicities(
        spec_for(SpaceKind.AIII_III, p=2, q=2, s=1), RngState(44)
    )
    assert datum.as_dict() == {(1,): (2, 2), (2,): (1, 0)}


def test_measure_cii_noncompact_21():
    datum = measure_root_multiplicities(
        spec_for(SpaceKind.CII_NONCOMPACT, p=2, q=1), RngState(45)
    )
    assert datum.as_dict() == {(1,): (4, 0), (2,): (3, 0)}


def test_measured_coefficients_predict_fresh_spectrum():
    rng = RngState(46)
    space = SpaceType(SpaceKind.BDI_I, p=3, q=3, s=2)
    spec = lie_algebra_spec(space)
    datum = measure_root_multiplicities(spec, rng)
    h = np.array([0.8371, 0.2917])
    ad = build_ad(spec, h)
    got = np.sort(np.abs(np.linalg.eigvalsh((ad @ ad + (ad @ ad).T) / 2)))
    predicted = [0.0] * (spec.dim - 2 * sum(mp + mm for _, mp, mm in _root_list(datum)))
    for coeffs, (mp, mm) in datum.as_dict().items():
        predicted.extend([float(np.dot(coeffs, h)) ** 2] * (2 * (mp + mm)))
    assert np.allclose(np.sort(np.abs(predicted)), got, atol=1e-8)


def _root_list(datum):
    return [(r.coeffs, r.m_plus, r.m_minus) for r in datum.roots]


def test_involution_error_for_bad_tau():
    basis = _orthonormalize(_basis_u(2))
    rot = np.array([[np.cos(0.3), -np.sin(0.3)], [np.sin(0.3), np.cos(0.3)]], dtype=complex)
    with pytest.raises((InvolutionError, ChamberError)):
        LieAlgebraSpec(
            "u(2) bad tau",
            basis,
            Involution("conjugation", op="conj"),
            Involution("rotation", c=rot),
            [1j * np.eye(2, dtype=complex)],
            True,
        )
