import numpy as np
import numpy.testing as npt
import pytest

from symtop.algebra3 import rotation_defect
from symtop.errors import DimensionMismatch
from symtop.phase import (
    LAYOUTS,
    CotSO3State,
    ReducedState,
    SpaceId,
    dim,
    flatten,
    random_state,
    unflatten,
)

ALL = list(SpaceId)


def test_chart_dimensions():
    assert [dim(s) for s in ALL] == [12, 6, 18, 12]


def test_cotso3_layout_frozen():
    s = CotSO3State(R=np.eye(3), pi=np.array([0.0, 0.0, 1.0]))
    npt.assert_array_equal(
        flatten(s, SpaceId.CotSO3), [1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1]
    )


def test_reduced_flat_length():
    z = flatten(random_state(SpaceId.Reduced, 0), SpaceId.Reduced)
    assert z.shape == (12,)


def test_round_trip_all_spaces():
    for space in ALL:
        for seed in range(10):
            s = random_state(space, seed)
            z = flatten(s, space)
            z2 = flatten(unflatten(space, z), space)
            npt.assert_array_equal(z, z2)


def test_random_state_deterministic():
    for space in ALL:
        a = flatten(random_state(space, 42), space)
        b = flatten(random_state(space, 42), space)
        npt.assert_array_equal(a, b)


def test_random_rotation_valid():
    for seed in range(20):
        s = random_state(SpaceId.CotSO3, seed)
        assert rotation_defect(s.R) <= 1e-9


def test_random_nu_unit():
    for seed in range(20):
        s = random_state(SpaceId.Reduced, seed)
        assert abs(s.nu @ s.nu - 1.0) < 1e-12


def test_flatten_type_mismatch():
    s = random_state(SpaceId.Reduced, 0)
    with pytest.raises(DimensionMismatch):
        flatten(s, SpaceId.CotSE3)


def test_unflatten_wrong_length():
    with pytest.raises(DimensionMismatch):
        unflatten(SpaceId.Se3Dual, np.zeros(7))


def test_reduced_state_rejects_off_sphere_nu():
    with pytest.raises(ValueError):
        ReducedState(x=np.zeros(3), p=np.zeros(3), nu=np.array([1.0, 0.0, 1.0]), pi=np.zeros(3))


def test_layout_entry_helpers():
    lay = LAYOUTS[SpaceId.CotSE3]
    # nu_i of the projected state sits at the attitude entry R[i, 2]
    assert [lay.r_entry(i, 2) for i in range(3)] == [8, 11, 14]
    assert lay.pi_entry(0) == 15
    with pytest.raises(DimensionMismatch):
        LAYOUTS[SpaceId.Se3Dual].r_entry(0, 0)
