"""Shared helper: sample torus elements inside the open Weyl chamber."""

import numpy as np

from ensemble_forge.rootsystems import VariableMap, apply_variable_map


def chamber_sample(space, cp, gen, margin=0.06):
    """Random torus coefficients with all map values distinct and wall-free."""
    vm = cp.variable_map
    r = space.torus_rank
    while True:
        if vm is VariableMap.COS2:
            h = gen.uniform(margin, np.pi / 2 - margin, size=r)
        elif vm is VariableMap.SIN2_2THETA:
            h = gen.uniform(margin, np.pi / 4 - margin, size=r)
        elif vm is VariableMap.ANGLE_DOUBLE:
            h = gen.uniform(margin, np.pi - margin, size=r)
        elif vm is VariableMap.ANGLE_QUADRUPLE:
            h = gen.uniform(margin, np.pi / 2 - margin, size=r)
        elif vm is VariableMap.SQUARE:
            h = gen.uniform(margin, 3.0, size=r)
        else:
            h = gen.uniform(-3.0, 3.0, size=r)
        x = apply_variable_map(vm, h)
        if r == 1:
            return h
        diffs = np.abs(np.subtract.outer(x, x))[~np.eye(r, dtype=bool)]
        if np.min(diffs) > margin / 4:
            return h
