"""Tests for root tables, Jacobian evaluation and classical parameter maps."""

import numpy as np
import pytest

from chamber import chamber_sample
from ensemble_forge.errors import DimensionError, DomainError, ModeError
from ensemble_forge.rootsystems import (
    JacobianMode,
    SpaceKind,
    SpaceType,
    VariableMap,
    apply_variable_map,
    classical_log_density_algebraic,
    classical_params,
    log_jacobian,
    natural_mode,
    printed_table,
    root_data,
    variable_map_jacobian,
)

ALL_DENSITY_MAPPED = [
    SpaceType(SpaceKind.AI, n=3),
    SpaceType(SpaceKind.A, n=3),
    SpaceType(SpaceKind.AII, n=2),
    SpaceType(SpaceKind.AI_II, n=3),
    SpaceType(SpaceKind.BDI_I, p=3, q=2, s=2),
    SpaceType(SpaceKind.AIII_III, p=4, q=3, s=3),
    SpaceType(SpaceKind.CII_II, p=3, q=2, s=2),
    SpaceType(SpaceKind.AI_III, p=3, q=2),
    SpaceType(SpaceKind.CI_II, p=3, q=2),
    SpaceType(SpaceKind.DI_III, p=3, q=2),
    SpaceType(SpaceKind.AII_III, p=3, q=2),
    SpaceType(SpaceKind.AI_NONCOMPACT, n=3),
    SpaceType(SpaceKind.A_NONCOMPACT, n=3),
    SpaceType(SpaceKind.AII_NONCOMPACT, n=3),
    SpaceType(SpaceKind.BDI_NONCOMPACT, p=3, q=2),
    SpaceType(SpaceKind.AIII_NONCOMPACT, p=3, q=2),
    SpaceType(SpaceKind.CII_NONCOMPACT, p=3, q=2),
]


def test_space_validation():
    with pytest.raises(DomainError):
        SpaceType(SpaceKind.BDI_I, p=1, q=2, s=1)  # p < q
    with pytest.raises(DomainError):
        SpaceType(SpaceKind.AI, n=0)
    with pytest.raises(DomainError):
        SpaceType(SpaceKind.DI_III, p=2, q=2, s=1)  # stray s


def test_root_table_bdi_i_beta1_row():
    space = SpaceType(SpaceKind.BDI_I, p=3, q=2, s=2)
    table = dict((fam, (mp, mm)) for fam, mp, mm in printed_table(space))
    assert table["pair_diff"] == (1, 0)
    assert table["pair_sum"] == (1, 0)
    assert table["single"] == (3 - 2, 2 - 2)
    assert table["double"] == (0, 0)  # structural zero at beta = 1
    # the double root is dropped from the positive-multiplicity datum
    datum = root_data(space).as_dict()
    assert (0, 2) not in datum and (2, 0) not in datum
    assert datum[(1, -1)] == (1, 0) and datum[(1, 1)] == (1, 0)
    assert datum[(1, 0)] == (1, 0)


def test_root_table_ai_ii():
    datum = root_data(SpaceType(SpaceKind.AI_II, n=3)).as_dict()
    assert datum == {
        (1, -1, 0): (2, 2),
        (1, 0, -1): (2, 2),
        (0, 1, -1): (2, 2),
    }


def test_root_table_di_iii_real_vs_printed_counts():
    """The doubled-torus single root: real dimension is twice the printed count."""
    space = SpaceType(SpaceKind.DI_III, p=3, q=2)
    datum = root_data(space).as_dict()
    assert datum[(1, -1)] == (2, 2)
    assert datum[(1, 1)] == (2, 2)
    assert datum[(1, 0)] == (2, 2)  # real dimensions: beta*(p-q) each
    assert datum[(2, 0)] == (1, 0)
    printed = dict((fam, (mp, mm)) for fam, mp, mm in printed_table(space))
    assert printed["single"] == (1, 1)  # half of the real count
    assert printed["double"] == (1, 0)


def test_root_table_aiii_iii():
    datum = root_data(SpaceType(SpaceKind.AIII_III, p=3, q=2, s=1)).as_dict()
    assert datum[(1,)] == (2 * (3 - 1), 2 * (2 - 1))
    assert datum[(2,)] == (1, 0)


def test_root_table_laguerre():
    datum = root_data(SpaceType(SpaceKind.CII_NONCOMPACT, p=2, q=1)).as_dict()
    assert datum[(1,)] == (4, 0)
    assert datum[(2,)] == (3, 0)


def test_log_jacobian_vandermonde_zero():
    space = SpaceType(SpaceKind.AI, n=2)
    assert log_jacobian(space, [0.3, 0.3], JacobianMode.COMPACT) == -np.inf


def test_log_jacobian_analytic_value():
    space = SpaceType(SpaceKind.AI, n=2)
    val = log_jacobian(space, [np.pi / 4, 0.0], JacobianMode.COMPACT)
    assert val == pytest.approx(-0.5 * np.log(2.0), abs=1e-12)


def test_log_jacobian_flat_laguerre_rank1():
    space = SpaceType(SpaceKind.BDI_NONCOMPACT, p=2, q=1)
    t = 0.37
    assert log_jacobian(space, [t], JacobianMode.FLAT) == pytest.approx(np.log(t))


def test_log_jacobian_flat_rejects_cosine_multiplicities():
    with pytest.raises(ModeError):
        log_jacobian(SpaceType(SpaceKind.AI_III, p=2, q=1), [0.3], JacobianMode.FLAT)


def test_log_jacobian_length_mismatch():
    with pytest.raises(DimensionError):
        log_jacobian(SpaceType(SpaceKind.AI, n=3), [0.1, 0.2], JacobianMode.COMPACT)


def test_weyl_symmetry():
    gen = np.random.default_rng(0)
    jac_space = SpaceType(SpaceKind.BDI_I, p=4, q=3, s=3)
    circ_space = SpaceType(SpaceKind.A, n=3)
    for _ in range(25):
        h = gen.uniform(0.1, 0.7, size=3)
        base = log_jacobian(jac_space, h, JacobianMode.COMPACT)
        perm = gen.permutation(3)
        signs = gen.choice([-1.0, 1.0], size=3)
        assert log_jacobian(jac_space, h[perm] * signs, JacobianMode.COMPACT) == pytest.approx(base, rel=1e-12)
        base_c = log_jacobian(circ_space, h, JacobianMode.COMPACT)
        assert log_jacobian(circ_space, h[perm], JacobianMode.COMPACT) == pytest.approx(base_c, rel=1e-12)


def test_classical_params_examples():
    cp = classical_params(SpaceType(SpaceKind.AIII_III, p=3, q=2, s=1))
    assert (cp.family, cp.beta, cp.alpha1, cp.alpha2, cp.variable_map) == (
        "Jacobi", 2, 1.0, 2.0, VariableMap.COS2,
    )
    cp = classical_params(SpaceType(SpaceKind.CI_II, p=3, q=1))
    assert (cp.alpha1, cp.alpha2, cp.variable_map) == (2.0, 0.5, VariableMap.SIN2_2THETA)
    # doubled-torus types use the real-dimension single-root count, which
    # shifts alpha1 relative to the printed half-count table (see rootsystems)
    cp = classical_params(SpaceType(SpaceKind.AII_III, p=3, q=2))
    assert (cp.beta, cp.alpha1, cp.alpha2, cp.variable_map) == (
        4, 3.0, 0.0, VariableMap.SIN2_2THETA,
    )
    cp = classical_params(SpaceType(SpaceKind.DI_III, p=4, q=2))
    assert (cp.alpha1, cp.alpha2) == (2.0, -0.5)
    cp = classical_params(SpaceType(SpaceKind.BDI_NONCOMPACT, p=3, q=2))
    assert (cp.family, cp.alpha) == ("Laguerre", 0.0)
    cp = classical_params(SpaceType(SpaceKind.AI_II, n=2))
    assert (cp.family, cp.variable_map) == ("Circular", VariableMap.ANGLE_QUADRUPLE)


@pytest.mark.parametrize("space", ALL_DENSITY_MAPPED, ids=lambda s: s.label())
def test_change_of_variables_consistency(space):
    """exp(log_jacobian) equals the classical density after the variable map,
    up to one constant per space (the central density cross-check)."""
    gen = np.random.default_rng(hash(space.label()) % 2**31)
    cp = classical_params(space)
    mode = natural_mode(space)
    consts = []
    for _ in range(100):
        h = chamber_sample(space, cp, gen)
        x = apply_variable_map(cp.variable_map, h)
        log_jac = log_jacobian(space, h, mode)
        log_map = float(np.sum(np.log(variable_map_jacobian(cp.variable_map, h))))
        log_target = classical_log_density_algebraic(cp, x)
        consts.append(log_jac - log_map - log_target)
    consts = np.array(consts)
    assert np.max(consts) - np.min(consts) <= 1e-9


def test_figure_coverage_integer_grid_and_half_integer_rows():
    from ensemble_forge.suites import jacobi_parameter_rows

    rows = jacobi_parameter_rows(2, 12, kinds=["AIII_III"])
    grid = {(r["alpha1"], r["alpha2"]) for r in rows}
    expected = {(float(a), float(b)) for a in range(12) for b in range(12)}
    assert grid == expected

    rows = jacobi_parameter_rows(2, 12, kinds=["CI_II"])
    assert {r["alpha2"] for r in rows} == {0.5}
    assert {r["alpha1"] for r in rows} == {float(k) for k in range(12)}

    rows = jacobi_parameter_rows(2, 12, kinds=["DI_III"])
    assert {r["alpha2"] for r in rows} == {-0.5}


def test_all_alphas_above_minus_one():
    for space in ALL_DENSITY_MAPPED:
        cp = classical_params(space)
        for a in (cp.alpha1, cp.alpha2, cp.alpha):
            if a is not None:
                assert a > -1.0
