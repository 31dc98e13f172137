"""Acceptance suite: one test per primary criterion, printing PASS/FAIL lines.

All criteria run from fixed seeds.  Each test prints a single line of the
form "criterion N: PASS/FAIL (...)" and asserts that every underlying report
passed at its stated tolerance.
"""

import numpy as np

from ensemble_forge.rootsystems import (
    SpaceKind,
    SpaceType,
    apply_variable_map,
    classical_log_density_algebraic,
    classical_params,
    log_jacobian,
    natural_mode,
    variable_map_jacobian,
)
from ensemble_forge.suites import (
    crosspath_suite,
    density_suite,
    factorization_suite,
    jacobi_parameter_rows,
    pingpong_suite,
)


def _finish(number, label, reports):
    failed = [r for r in reports if not r["pass"]]
    status = "PASS" if not failed else "FAIL"
    print(f"criterion {number}: {status} ({label}; {len(reports)} checks)")
    for r in failed:
        print(f"  FAILED: {r}")
    assert not failed


_PINGPONG = None


def _pingpong_reports():
    global _PINGPONG
    if _PINGPONG is None:
        _PINGPONG = pingpong_suite(seed=777, p_max=4, s_max=2, n_max=6)
    return _PINGPONG


def test_criterion_1_root_table_equality():
    """Empirical root multiplicities equal the stored tables exactly."""
    reports = [r for r in _pingpong_reports() if r["test"] == "root-table equality"]
    assert len(reports) == 160
    _finish(1, "root tables, all SpaceTypes p,q<=4 s<=2 n<=6", reports)


def test_criterion_2_exponential_map():
    reports = [r for r in _pingpong_reports() if r["test"] == "exponential map"]
    assert len(reports) == 3
    _finish(2, "exp(ad_H) identities at 1e-9", reports)


def test_criterion_3_factorization_residuals():
    reports = factorization_suite(seed=20240, trials=200, max_size=12)
    _finish(3, "csd/gsvd/odo/qdq residuals on 200 random inputs", reports)


def test_criterion_4_density_acceptance():
    reports = density_suite(seed=4242, n_samples=50000)
    _finish(4, "KS at alpha=0.01, N=5e4, parameter formulas", reports)


def test_criterion_5_crosspath_equivalence():
    reports = crosspath_suite(seed=1337, n_samples=20000)
    _finish(5, "two-sample KS between alternative sampler paths", reports)


def test_criterion_6_parameter_map_coverage():
    rows = jacobi_parameter_rows(2, 12)
    by_space = {}
    for r in rows:
        by_space.setdefault(r["space"], set()).add((r["alpha1"], r["alpha2"]))
    ok = by_space["AIII_III"] == {(float(a), float(b)) for a in range(12) for b in range(12)}
    ok &= all(a2 == 0.5 for _, a2 in by_space["CI_II"])
    ok &= all(a2 == -0.5 for _, a2 in by_space["DI_III"])
    ok &= {a1 for a1, _ in by_space["CI_II"]} == {float(k) for k in range(12)}
    report = [{"test": "parameter map", "spec": "beta=2 bound=12",
               "statistic": 0.0 if ok else 1.0, "threshold": 0.0, "pass": ok}]
    _finish(6, "Figure-5 dot families at beta=2", report)


def test_criterion_7_change_of_variables_consistency():
    spaces = [
        SpaceType(SpaceKind.AI, n=3),
        SpaceType(SpaceKind.A, n=3),
        SpaceType(SpaceKind.AII, n=3),
        SpaceType(SpaceKind.AI_II, n=3),
        SpaceType(SpaceKind.BDI_I, p=4, q=3, s=3),
        SpaceType(SpaceKind.AIII_III, p=4, q=3, s=3),
        SpaceType(SpaceKind.CII_II, p=4, q=3, s=3),
        SpaceType(SpaceKind.AI_III, p=4, q=3),
        SpaceType(SpaceKind.CI_II, p=4, q=3),
        SpaceType(SpaceKind.DI_III, p=4, q=3),
        SpaceType(SpaceKind.AII_III, p=4, q=3),
        SpaceType(SpaceKind.AI_NONCOMPACT, n=3),
        SpaceType(SpaceKind.A_NONCOMPACT, n=3),
        SpaceType(SpaceKind.AII_NONCOMPACT, n=3),
        SpaceType(SpaceKind.BDI_NONCOMPACT, p=4, q=3),
        SpaceType(SpaceKind.AIII_NONCOMPACT, p=4, q=3),
        SpaceType(SpaceKind.CII_NONCOMPACT, p=4, q=3),
    ]
    reports = []
    for space in spaces:
        spread = _consistency_spread(space)
        reports.append({
            "test": "change-of-variables", "spec": space.label(),
            "statistic": spread, "threshold": 1e-9, "pass": spread <= 1e-9,
        })
    _finish(7, "Jacobian vs classical density, rank <= 3", reports)


def _consistency_spread(space, trials=100):
    from chamber import chamber_sample

    gen = np.random.default_rng(abs(hash(space.label())) % 2**31)
    cp = classical_params(space)
    mode = natural_mode(space)
    consts = []
    for _ in range(trials):
        h = chamber_sample(space, cp, gen)
        x = apply_variable_map(cp.variable_map, h)
        val = (
            log_jacobian(space, h, mode)
            - float(np.sum(np.log(variable_map_jacobian(cp.variable_map, h))))
            - classical_log_density_algebraic(cp, x)
        )
        consts.append(val)
    consts = np.array(consts)
    return float(np.max(consts) - np.min(consts))
