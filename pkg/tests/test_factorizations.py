"""Tests for the CSD, GSVD, ODO and QDQ coordinate-system factorizations."""

import numpy as np
import pytest

from ensemble_forge.errors import DimensionError, UnitarityError
from ensemble_forge.factorizations import (
    Partition,
    csd,
    csd_middle_factor,
    gsvd,
    odo_decompose,
    qdq_decompose,
    symplectic_j_stacked,
)
from ensemble_forge.matcore import (
    DenseMatrix,
    FieldTag,
    RngState,
    sample_gaussian_matrix,
    sample_haar,
)


def haar(field, n, seed):
    return sample_haar(field, n, RngState(seed))


# ---------------------------------------------------------------------------
# Partition


def test_partition_validation():
    Partition(3, 2, 4, 1)
    with pytest.raises(DimensionError):
        Partition(2, 3, 4, 1)  # p < q
    with pytest.raises(DimensionError):
        Partition(3, 2, 3, 1)  # p+q != r+s
    with pytest.raises(DimensionError):
        Partition(3, 2, 1, 4)  # r < p


# ---------------------------------------------------------------------------
# CSD


def test_csd_identity_partition_2222():
    res = csd(DenseMatrix(FieldTag.Real, np.eye(4)), Partition(2, 2, 2, 2))
    assert np.allclose(res.theta, 0.0)
    assert np.max(np.abs(res.reconstruct() - np.eye(4))) <= 1e-12


def test_csd_2x2_rotation_angle():
    phi = 0.7
    u = DenseMatrix(
        FieldTag.Real,
        np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]]),
    )
    res = csd(u, Partition(1, 1, 1, 1))
    assert res.theta == pytest.approx([phi], abs=1e-12)


def test_csd_random_real_reconstruction_and_block_oracle():
    u = haar(FieldTag.Real, 5, 21)
    part = Partition(3, 2, 4, 1)
    res = csd(u, part)
    assert res.residual <= 1e-10
    # oracle: cos(theta) are the singular values of the q x s corner block
    d_block = u.array[3:, 4:]
    assert np.allclose(np.sort(np.cos(res.theta)), np.sort(np.linalg.svd(d_block, compute_uv=False)), atol=1e-10)
    # and sin(theta) appear among the p x s corner block's singular values
    b_block = u.array[:3, 4:]
    assert np.min(np.abs(np.linalg.svd(b_block, compute_uv=False) - np.sin(res.theta[0]))) < 1e-10


@pytest.mark.parametrize("field", list(FieldTag))
def test_csd_reconstruction_fields(field):
    u = haar(field, 6, 22)
    res = csd(u, Partition(4, 2, 5, 1))
    assert res.residual <= 1e-10 * 6
    assert np.all(np.diff(res.theta) >= 0)
    assert np.all((res.theta >= 0) & (res.theta <= np.pi / 2 + 1e-12))


def test_csd_quaternion_dedup():
    u = haar(FieldTag.Quaternion, 5, 23)
    res = csd(u, Partition(3, 2, 3, 2))
    assert res.theta.shape == (2,)
    assert np.max(np.abs(res.reconstruct() - u.array)) <= 1e-9


def test_csd_gauge_invariance_of_angles():
    """Pre/post multiplying by block-diagonal K elements keeps theta."""
    rng = RngState(24)
    u = sample_haar(FieldTag.Complex, 5, rng)
    part = Partition(3, 2, 4, 1)
    base = csd(u, part).theta
    gp = sample_haar(FieldTag.Complex, 3, rng).array
    gq = sample_haar(FieldTag.Complex, 2, rng).array
    gr = sample_haar(FieldTag.Complex, 4, rng).array
    gs = sample_haar(FieldTag.Complex, 1, rng).array
    left = np.zeros((5, 5), complex)
    left[:3, :3], left[3:, 3:] = gp, gq
    right = np.zeros((5, 5), complex)
    right[:4, :4], right[4:, 4:] = gr, gs
    moved = csd(DenseMatrix(FieldTag.Complex, left @ u.array @ right), part).theta
    assert np.allclose(moved, base, atol=1e-9)


def test_csd_idempotent_coordinates():
    u = haar(FieldTag.Complex, 7, 25)
    part = Partition(4, 3, 5, 2)
    first = csd(u, part)
    again = csd(DenseMatrix(FieldTag.Complex, first.reconstruct()), part)
    assert np.allclose(first.theta, again.theta, atol=1e-9)


def test_csd_middle_factor_is_orthogonal():
    theta = np.array([0.3, 1.1])
    t = csd_middle_factor(theta, 4, 3, 5, 2)
    assert np.max(np.abs(t.T @ t - np.eye(7))) < 1e-12


def test_csd_rejects_non_unitary_and_bad_partition():
    g = sample_gaussian_matrix(FieldTag.Real, 4, 4, RngState(26))
    with pytest.raises(UnitarityError):
        csd(g, Partition(2, 2, 2, 2))
    with pytest.raises(DimensionError):
        csd(haar(FieldTag.Real, 5, 27), Partition(2, 2, 2, 2))


def test_csd_repeated_angles_cluster():
    # u built from a torus with a doubled angle: reconstruction must survive
    theta = np.array([0.4, 0.4, 1.2])
    t = csd_middle_factor(theta, 4, 3, 4, 3)
    res = csd(DenseMatrix(FieldTag.Real, t), Partition(4, 3, 4, 3))
    assert np.allclose(np.sort(res.theta), theta, atol=1e-10)
    assert res.residual <= 1e-10


# ---------------------------------------------------------------------------
# GSVD


def test_gsvd_identity_pair_equal_weights():
    res = gsvd(DenseMatrix(FieldTag.Real, np.eye(2)), DenseMatrix(FieldTag.Real, np.eye(2)))
    assert np.allclose(res.cos, 1 / np.sqrt(2), atol=1e-12)
    assert np.allclose(res.sin, 1 / np.sqrt(2), atol=1e-12)


def test_gsvd_ratios_match_svd_oracle():
    rng = RngState(28)
    a = sample_gaussian_matrix(FieldTag.Complex, 3, 2, rng)
    b = sample_gaussian_matrix(FieldTag.Complex, 2, 2, rng)
    res = gsvd(a, b)
    ratios = np.sort(res.cos / res.sin)[::-1]
    oracle = np.linalg.svd(a.array @ np.linalg.inv(b.array), compute_uv=False)
    assert np.allclose(ratios, oracle, rtol=1e-9)


def test_gsvd_reconstruction():
    rng = RngState(29)
    a = sample_gaussian_matrix(FieldTag.Real, 3, 2, rng)
    b = sample_gaussian_matrix(FieldTag.Real, 2, 2, rng)
    res = gsvd(a, b)
    assert res.residual <= 1e-10
    rec_a = res.u.array @ (res.cos[:, None] * res.right.array)
    rec_b = res.v.array @ (res.sin[:, None] * res.right.array)
    assert np.allclose(rec_a, a.array, atol=1e-12)
    assert np.allclose(rec_b, b.array, atol=1e-12)


def test_gsvd_quaternion_pairs():
    rng = RngState(30)
    a = sample_gaussian_matrix(FieldTag.Quaternion, 3, 1, rng)
    b = sample_gaussian_matrix(FieldTag.Quaternion, 2, 1, rng)
    res = gsvd(a, b)
    assert res.cos.shape == (1,)
    assert res.cos[0] ** 2 + res.sin[0] ** 2 == pytest.approx(1.0, abs=1e-12)


def test_gsvd_shape_errors():
    rng = RngState(31)
    a = sample_gaussian_matrix(FieldTag.Real, 3, 2, rng)
    b = sample_gaussian_matrix(FieldTag.Real, 2, 3, rng)
    with pytest.raises(DimensionError):
        gsvd(a, b)


# ---------------------------------------------------------------------------
# ODO


def test_odo_real_orthogonal_input():
    res = odo_decompose(haar(FieldTag.Real, 3, 32))
    assert np.allclose(np.abs(res.d.imag), 0.0, atol=1e-10)
    assert np.allclose(np.abs(res.d.real), 1.0, atol=1e-10)
    assert res.residual <= 1e-10


def test_odo_scalar_phase():
    phi = 1.234
    res = odo_decompose(DenseMatrix(FieldTag.Complex, np.array([[np.exp(1j * phi)]])))
    assert np.angle(res.d[0]) == pytest.approx(phi) or np.angle(-res.d[0]) == pytest.approx(phi - np.pi)
    assert abs(abs(res.o1.array[0, 0]) - 1.0) < 1e-12


def test_odo_haar_reconstruction_and_angle_oracle():
    u = haar(FieldTag.Complex, 4, 33)
    res = odo_decompose(u)
    assert res.residual <= 1e-9
    s = u.array @ u.array.T
    oracle = np.sort(np.mod(np.angle(np.linalg.eigvals(s)), 2 * np.pi))
    got = np.sort(np.mod(2 * np.angle(res.d), 2 * np.pi))
    assert np.allclose(got, oracle, atol=1e-9)
    for o in (res.o1, res.o2):
        arr = o.array
        assert np.max(np.abs(arr.imag)) <= 1e-9
        assert np.max(np.abs(arr.T @ arr - np.eye(4))) <= 1e-10
    assert np.all(np.diff(np.mod(np.angle(res.d), 2 * np.pi)) >= 0)


def test_odo_gauge_invariant_angles():
    rng = RngState(34)
    u = sample_haar(FieldTag.Complex, 4, rng)
    o_left = sample_haar(FieldTag.Real, 4, rng).array.real
    o_right = sample_haar(FieldTag.Real, 4, rng).array.real
    a = np.sort(np.mod(np.angle(odo_decompose(u).d), 2 * np.pi))
    b = np.sort(np.mod(np.angle(
        odo_decompose(DenseMatrix(FieldTag.Complex, o_left @ u.array @ o_right)).d
    ), 2 * np.pi))
    assert np.allclose(a, b, atol=1e-9)


def test_odo_rejects_nonunitary():
    with pytest.raises(UnitarityError):
        odo_decompose(sample_gaussian_matrix(FieldTag.Complex, 3, 3, RngState(35)))


# ---------------------------------------------------------------------------
# QDQ


def test_qdq_symplectic_input_gives_unit_d():
    u = haar(FieldTag.Complex, 4, 36)
    q1 = qdq_decompose(u).q1  # a unitary symplectic matrix
    res = qdq_decompose(q1)
    assert np.allclose(res.d, 1.0, atol=1e-8)
    j = symplectic_j_stacked(2)
    w = q1.array @ j @ q1.array.T @ j.T
    assert np.max(np.abs(w - np.eye(4))) <= 1e-10


def test_qdq_torus_element():
    phi = 0.9
    u = DenseMatrix(FieldTag.Complex, np.exp(1j * phi) * np.eye(2))
    res = qdq_decompose(u)
    assert np.angle(res.d[0]) == pytest.approx(phi, abs=1e-10)


def test_qdq_haar_reconstruction_and_pairing_oracle():
    u = haar(FieldTag.Complex, 4, 37)
    res = qdq_decompose(u)
    assert res.residual <= 1e-9
    j = symplectic_j_stacked(2)
    lam = np.linalg.eigvals(u.array @ j @ u.array.T @ j.T)
    ang = np.sort(np.mod(np.angle(lam), 2 * np.pi))
    # eigenangles of W come in doubled pairs
    assert np.allclose(ang[0::2], ang[1::2], atol=1e-9)
    for f in (res.q1, res.q2):
        arr = f.array
        assert np.max(np.abs(arr.conj().T @ arr - np.eye(4))) <= 1e-10
        assert np.max(np.abs(arr.T @ j @ arr - j)) <= 1e-10


def test_qdq_odd_size_rejected():
    with pytest.raises(DimensionError):
        qdq_decompose(haar(FieldTag.Complex, 3, 38))


def test_qdq_idempotent_coordinates():
    u = haar(FieldTag.Complex, 6, 39)
    first = qdq_decompose(u)
    again = qdq_decompose(DenseMatrix(FieldTag.Complex, first.reconstruct()))
    a = np.sort(np.mod(np.angle(first.d), 2 * np.pi))
    b = np.sort(np.mod(np.angle(again.d), 2 * np.pi))
    assert np.allclose(a, b, atol=1e-9)


def test_csd_wall_adjacent_angles_stay_accurate():
    """Angles within eps of 0 or pi/2 keep reconstruction at tolerance.

    Guards the sine-side frame extraction: normalizing columns of B V_s
    would amplify rounding by 1/sin near the theta = 0 wall.
    """
    rng = RngState(424242)
    for thetas in ([1e-9, 2e-9, 0.3], [1e-11, 0.8], [np.pi / 2 - 1e-9, np.pi / 2],
                   [1e-13, 1e-12, 1e-11]):
        s = len(thetas)
        p = q = s + 1
        n = p + q
        tt = np.sort(np.array(thetas))
        t = csd_middle_factor(tt, p, q, n - s, s)
        gp = sample_haar(FieldTag.Complex, p, rng).array
        gq = sample_haar(FieldTag.Complex, q, rng).array
        gr = sample_haar(FieldTag.Complex, n - s, rng).array
        gs = sample_haar(FieldTag.Complex, s, rng).array
        left = np.zeros((n, n), complex)
        left[:p, :p], left[p:, p:] = gp, gq
        right = np.zeros((n, n), complex)
        right[: n - s, : n - s], right[n - s :, n - s :] = gr, gs
        u = DenseMatrix(FieldTag.Complex, left @ t @ right)
        res = csd(u, Partition(p, q, n - s, s))
        assert np.max(np.abs(res.reconstruct() - u.array)) <= 1e-10 * n
        assert np.max(np.abs(np.sort(res.theta) - tt)) <= 1e-9
