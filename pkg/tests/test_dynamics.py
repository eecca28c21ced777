import numpy as np
import numpy.testing as npt
import pytest

from symtop.dynamics import (
    BodyParams,
    DipolePotential,
    LinearGravity,
    SumPotential,
    ZeroPotential,
    commutation_residual,
    free_top_analytic,
    full_hamiltonian,
    full_hamiltonian_field,
    nu_pi_of,
    reduced_hamiltonian,
    reduced_hamiltonian_field,
    simulate,
    step,
)
from symtop.errors import DimensionMismatch, NonFinite
from symtop.phase import (
    FullState,
    ReducedState,
    SpaceId,
    flatten,
    random_state,
    random_unit,
)
from symtop.poisson import ScalarField, fd_gradient
from symtop.reduction import right_action, section, z_rotation

BP = BodyParams(M=1.0, I1=1.0, I3=0.5)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def reduced_point(x=(0.1, -0.2, 0.3), p=(0.2, 0.1, -0.1), nu=(1.0, 0.0, 0.5), pi=(0.2, 0.3, 0.9)):
    return ReducedState(x=np.array(x), p=np.array(p), nu=unit(nu), pi=np.array(pi))


def full_point(s=None):
    s = s or reduced_point()
    return FullState(x=s.x, R=section(s.nu), p=s.p, pi=s.pi)


def test_body_params_validation():
    with pytest.raises(ValueError):
        BodyParams(M=0.0, I1=1.0, I3=1.0)
    with pytest.raises(ValueError):
        BodyParams(M=1.0, I1=-1.0, I3=1.0)


def test_reduced_hamiltonian_frozen():
    s = ReducedState(
        x=np.zeros(3), p=np.array([2.0, 0, 0]), nu=np.array([0.0, 0, 1]), pi=np.array([0.0, 0, 3])
    )
    h = reduced_hamiltonian(s, BodyParams(M=2.0, I1=1.0, I3=0.5), ZeroPotential())
    assert h == 5.5


def test_reduced_hamiltonian_zero_at_rest():
    s = ReducedState(x=np.zeros(3), p=np.zeros(3), nu=np.array([0.0, 0, 1]), pi=np.zeros(3))
    assert reduced_hamiltonian(s, BP, ZeroPotential()) == 0.0


def test_gravity_shifts_energy_additively():
    s = reduced_point()
    pot = LinearGravity(g=np.array([0.0, 0.0, -2.0]), chi=0.7)
    base = reduced_hamiltonian(s, BP, ZeroPotential())
    withg = reduced_hamiltonian(s, BP, pot)
    ghat = np.array([0.0, 0.0, -1.0])
    expected_shift = BP.M * float(pot.g @ s.x) + 0.7 * float(s.nu @ ghat)
    assert abs(withg - base - expected_shift) < 1e-15


def test_full_hamiltonian_frozen():
    s = FullState(x=np.zeros(3), R=np.eye(3), p=np.zeros(3), pi=np.array([0.0, 0, 2]))
    h = full_hamiltonian(s, BodyParams(M=1.0, I1=1.0, I3=2.0), ZeroPotential())
    assert h == 1.0


def test_full_equals_reduced_when_moments_match():
    bp = BodyParams(M=1.3, I1=0.9, I3=0.9)
    s = reduced_point()
    f = full_point(s)
    pot = LinearGravity(g=np.array([0.0, 0.0, -1.0]), chi=0.2)
    assert abs(full_hamiltonian(f, bp, pot) - reduced_hamiltonian(s, bp, pot)) < 1e-14


def test_full_hamiltonian_circle_invariant():
    s = full_point()
    pot = LinearGravity(g=np.array([0.1, -0.3, -1.0]), chi=0.4)
    h0 = full_hamiltonian(s, BP, pot)
    for theta in (0.3, 1.9, -2.5):
        assert abs(full_hamiltonian(right_action(z_rotation(theta), s), BP, pot) - h0) < 1e-12


@pytest.mark.parametrize(
    "pot",
    [
        ZeroPotential(),
        LinearGravity(g=np.array([0.0, 0.0, -1.0]), chi=0.3),
        DipolePotential(m=0.05, mu=np.array([0.0, 0.0, 1.0])),
        SumPotential(
            terms=(
                LinearGravity(g=np.array([0.0, 0.0, -1.0]), chi=0.3),
                DipolePotential(m=0.05, mu=np.array([0.3, 0.0, 1.0])),
            )
        ),
    ],
    ids=["zero", "gravity", "dipole", "sum"],
)
def test_potential_gradients_match_fd(pot):
    rng = np.random.default_rng(0)
    for _ in range(25):
        x = random_unit(rng) * rng.uniform(0.8, 2.0)
        nu = random_unit(rng)
        gx = pot.grad_x(x, nu, BP)
        gn = pot.grad_nu(x, nu, BP)
        fx = fd_gradient(lambda xx: pot.value(xx, nu, BP), x)
        fn = fd_gradient(lambda nn: pot.value(x, nn, BP), nu)
        scale = max(np.linalg.norm(gx), np.linalg.norm(gn), 1.0)
        assert np.abs(gx - fx).max() / scale < 1e-5
        assert np.abs(gn - fn).max() / scale < 1e-5


def test_hamiltonian_field_gradients_match_fd():
    pot = LinearGravity(g=np.array([0.0, 0.0, -1.0]), chi=0.3)
    for fld, space in (
        (reduced_hamiltonian_field(BP, pot), SpaceId.Reduced),
        (full_hamiltonian_field(BP, pot), SpaceId.CotSE3),
    ):
        for seed in range(10):
            z = flatten(random_state(space, seed), space)
            g = fld.gradient(z)
            fd = fd_gradient(fld.value, z)
            assert np.abs(g - fd).max() / max(np.linalg.norm(g), 1.0) < 1e-5


def test_field_values_match_state_functions():
    pot = LinearGravity(g=np.array([0.0, 0.0, -1.0]), chi=0.3)
    s = reduced_point()
    f = full_point(s)
    hred = reduced_hamiltonian_field(BP, pot)
    hfull = full_hamiltonian_field(BP, pot)
    assert abs(hred(flatten(s, SpaceId.Reduced)) - reduced_hamiltonian(s, BP, pot)) < 1e-15
    assert abs(hfull(flatten(f, SpaceId.CotSE3)) - full_hamiltonian(f, BP, pot)) < 1e-15


def test_step_exact_for_linear_flow():
    h = reduced_hamiltonian_field(BP, ZeroPotential())
    s = ReducedState(x=np.zeros(3), p=np.array([0.4, -0.2, 1.0]), nu=np.array([0.0, 0, 1]), pi=np.zeros(3))
    z = flatten(s, SpaceId.Reduced)
    z1 = step(SpaceId.Reduced, h, z, 0.25, method="rk4")
    npt.assert_allclose(z1[0:3], 0.25 * s.p / BP.M, atol=1e-16)
    npt.assert_array_equal(z1[3:6], s.p)


def test_step_repair_renormalizes_nu():
    h = reduced_hamiltonian_field(BP, ZeroPotential())
    z = flatten(reduced_point(), SpaceId.Reduced)
    for _ in range(50):
        z = step(SpaceId.Reduced, h, z, 0.05)
        assert abs(z[6:9] @ z[6:9] - 1.0) < 1e-12


def test_step_repair_reorthonormalizes_r():
    from symtop.algebra3 import orthogonality_defect

    h = full_hamiltonian_field(BP, ZeroPotential())
    z = flatten(full_point(), SpaceId.CotSE3)
    for _ in range(50):
        z = step(SpaceId.CotSE3, h, z, 0.05)
        assert orthogonality_defect(z[6:15].reshape(3, 3)) < 1e-12


def test_step_validates_inputs():
    h = reduced_hamiltonian_field(BP, ZeroPotential())
    z = flatten(reduced_point(), SpaceId.Reduced)
    with pytest.raises(DimensionMismatch):
        step(SpaceId.CotSE3, h, z, 0.1)
    with pytest.raises(ValueError):
        step(SpaceId.Reduced, h, z, -0.1)
    with pytest.raises(ValueError):
        step(SpaceId.Reduced, h, z, 0.1, method="euler")


def test_step_raises_on_non_finite():
    bad = ScalarField(
        SpaceId.Reduced,
        lambda z: 0.0,
        lambda z: np.full(12, np.nan),
    )
    z = flatten(reduced_point(), SpaceId.Reduced)
    with pytest.raises(NonFinite):
        step(SpaceId.Reduced, bad, z, 0.1, method="rk4")


def test_simulate_zero_hamiltonian_constant():
    h = ScalarField(SpaceId.Reduced, lambda z: 0.0, lambda z: np.zeros(12))
    z0 = flatten(reduced_point(), SpaceId.Reduced)
    traj = simulate(SpaceId.Reduced, h, z0, 0.1, 1.0, method="rk4")
    for i in range(len(traj)):
        npt.assert_array_equal(traj.z[i], z0)


def test_simulate_free_top_pi_constant():
    h = reduced_hamiltonian_field(BP, ZeroPotential())
    z0 = flatten(reduced_point(), SpaceId.Reduced)
    traj = simulate(SpaceId.Reduced, h, z0, 1e-3, 2.0, sample_stride=100)
    assert np.abs(traj.z[:, 9:12] - z0[9:12]).max() < 1e-10
    assert np.abs(traj.energy - traj.energy[0]).max() < 1e-10


def test_simulate_sampling_and_monotone_time():
    h = reduced_hamiltonian_field(BP, ZeroPotential())
    z0 = flatten(reduced_point(), SpaceId.Reduced)
    traj = simulate(SpaceId.Reduced, h, z0, 0.01, 0.5, sample_stride=7)
    assert traj.t[0] == 0.0
    assert abs(traj.t[-1] - 0.5) < 1e-12
    assert np.all(np.diff(traj.t) > 0)


def test_simulate_rejects_bad_horizon():
    h = reduced_hamiltonian_field(BP, ZeroPotential())
    z0 = flatten(reduced_point(), SpaceId.Reduced)
    with pytest.raises(ValueError):
        simulate(SpaceId.Reduced, h, z0, 0.01, 0.0)


def test_free_top_analytic_at_zero():
    s = reduced_point()
    out = free_top_analytic(s, 0.0, BP)
    npt.assert_array_equal(flatten(out, SpaceId.Reduced), flatten(s, SpaceId.Reduced))


def test_free_top_analytic_axis_spin_fixed():
    nu = unit((0.3, -0.4, 0.6))
    s = ReducedState(x=np.zeros(3), p=np.zeros(3), nu=nu, pi=2.5 * nu)
    for t in (0.7, 3.1):
        npt.assert_allclose(free_top_analytic(s, t, BP).nu, nu, atol=1e-12)


def test_free_top_analytic_full_period():
    nu = np.array([1.0, 0.0, 0.0])
    pi = np.array([0.0, 0.0, 1.0]) * BP.I1  # unit angular rate
    s = ReducedState(x=np.zeros(3), p=np.zeros(3), nu=nu, pi=pi)
    npt.assert_allclose(free_top_analytic(s, 2 * np.pi, BP).nu, nu, atol=1e-12)


def test_free_top_simulation_matches_oracle():
    s0 = reduced_point()
    h = reduced_hamiltonian_field(BP, ZeroPotential())
    traj = simulate(SpaceId.Reduced, h, flatten(s0, SpaceId.Reduced), 1e-3, 2.0, sample_stride=100)
    worst = 0.0
    for i, t in enumerate(traj.t):
        ref = flatten(free_top_analytic(s0, t, BP), SpaceId.Reduced)
        worst = max(worst, float(np.abs(traj.z[i] - ref).max()))
    assert worst < 1e-9


def test_commutation_residual_matched_moments():
    bp = BodyParams(M=1.0, I1=0.8, I3=0.8)
    res = commutation_residual(full_point(), bp, ZeroPotential(), 1e-2, 1.0)
    assert res < 1e-10


def test_commutation_residual_free_top_short():
    res = commutation_residual(full_point(), BP, ZeroPotential(), 1e-3, 1.0, sample_stride=20)
    assert res < 1e-7


def test_nu_pi_of_reads_attitude_column():
    s = full_point()
    nu, pi = nu_pi_of(SpaceId.CotSE3, flatten(s, SpaceId.CotSE3))
    npt.assert_array_equal(nu, s.R[:, 2])
    npt.assert_array_equal(pi, s.pi)
