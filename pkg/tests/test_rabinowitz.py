"""Radial shear-block model: vanishing stratified index and grading."""

import numpy as np
import pytest

from sympind import (HalfInteger, RabinowitzData, SnmElement, exp_shear_path,
                     rabinowitz_block_family, rabinowitz_block_index,
                     rabinowitz_block_path, rabinowitz_index, rs_index,
                     rs_index_stratified)
from sympind.errors import InvalidInput
from sympind.rabinowitz import composite_radial_family, composite_radial_path
from sympind.snm import Dimensions


@pytest.mark.parametrize("lam,k1,k2", [
    (2.0 * np.pi, -1.0, 0.5),
    (-4.0, 0.7, -1.2),
    (1.5, 1.5, 0.0),      # flat level set: shear vanishes
    (0.0, -0.3, 0.9),
])
def test_block_index_always_vanishes(lam, k1, k2):
    res = rabinowitz_block_index(RabinowitzData(lam, k1, k2))
    assert res.value == HalfInteger(0)
    # the only crossing is the start, with an indefinite hyperbolic form
    assert [c.at_endpoint for c in res.crossings] == ["start"]
    assert res.crossings[0].signature == 0


def test_block_stays_in_the_subgroup():
    path = rabinowitz_block_path(RabinowitzData(3.0, -0.8, 0.4)).to_path()
    dims = Dimensions(1, 1)
    for t in (0.0, 0.37, 1.0):
        el = SnmElement.from_matrix(path(t), dims)
        assert abs(el.x[1, 0] - 0.8 * t) < 1e-12


def test_grading_covers_every_sign_combination():
    mu = HalfInteger(3)  # orbit index 3/2
    cases = [
        (1.0, -1.0, mu),       # lam > 0, k1 < 0: orientation +1
        (1.0, 1.0, -mu),       # lam > 0, k1 > 0: orientation -1
        (-1.0, -1.0, -mu),     # lam < 0 flips the sign
        (-1.0, 1.0, mu),
        (0.0, -1.0, HalfInteger(0)),
    ]
    for lam, k1, want in cases:
        got = rabinowitz_index(RabinowitzData(lam, k1, 0.3, mu_reeb=mu))
        assert got == want, (lam, k1)


def test_composite_index_reduces_to_transverse_block():
    transverse = exp_shear_path(np.diag([0.8, 0.5]), np.zeros((0, 0)))
    base = rs_index(transverse.to_path())
    assert base.value == HalfInteger(2)
    data = RabinowitzData(2.0 * np.pi, -1.0, 0.5)
    comp = composite_radial_path(data, transverse)
    fam = composite_radial_family(transverse.dims)
    res = rs_index_stratified(comp.to_path(), fam)
    assert res.value == base.value


def test_data_validation_and_coercion():
    with pytest.raises(InvalidInput):
        RabinowitzData(1.0, 0.0, 0.5)
    data = RabinowitzData(1.0, -1.0, 0.5, mu_reeb=1.5)
    assert data.mu_reeb == HalfInteger(3)
    assert data.shear == -0.5 and data.coupling == 1.0


def test_block_family_sits_in_every_kernel():
    path = rabinowitz_block_path(RabinowitzData(1.0, -1.0, 0.7)).to_path()
    basis = rabinowitz_block_family()(0.5)
    ts = np.linspace(0.0, 1.0, 7)
    resid = (path(ts) - np.eye(4)) @ basis
    assert float(np.max(np.abs(resid))) < 1e-12
