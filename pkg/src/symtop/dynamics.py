"""Symmetric-top Hamiltonians, potentials, and structure-monitoring integration.

Body parameters are a mass M and two inertia moments: I1 for the pair of
equal transverse axes (the symmetry that makes the circle reduction valid)
and I3 for the body axis.  In the inertial frame the full Hamiltonian reads

    H = |p|^2/(2M) + |pi|^2/(2 I1) + (1/(2 I3) - 1/(2 I1)) <nu, pi>^2 + V(x, nu)

with nu the third attitude column, while the reduced Hamiltonian drops the
<nu, pi>^2 term (it is a function of the Casimir C2 and generates no motion
on the quotient):

    h = |p|^2/(2M) + |pi|^2/(2 I1) + V(x, nu).

commutation_residual integrates both and compares the projected full
trajectory with the reduced one, which checks precisely that the dropped
term only spins the body about its own axis.

Integration is classical RK4 on the flat chart of zdot = Lambda(z) grad H(z);
the "rk4_repair" variant renormalizes nu (reduced charts) or reorthonormalizes
R (attitude charts) after each step, keeping trajectories on the constraint
manifold without a full Lie-group integrator.  Plain "rk4" is kept so the
constraint drift itself can be measured.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra3 import Vec3, exp_so3, orthogonality_defect, reorthonormalize
from .errors import DimensionMismatch, NonFinite
from .phase import (
    LAYOUTS,
    FullState,
    ReducedState,
    SpaceId,
    flatten,
)
from .poisson import ScalarField, ham_vector_field
from .reduction import chart_projection, project_full, tau


@dataclass(frozen=True)
class BodyParams:
    """Mass and inertia moments; the two transverse moments are equal by
    construction, so only I1 is stored."""

    M: float
    I1: float
    I3: float

    def __post_init__(self):
        for name in ("M", "I1", "I3"):
            v = getattr(self, name)
            if not v > 0.0:
                raise ValueError(f"{name} = {v} must be positive")


class Potential:
    """Interface for V(x, nu) with analytic gradients.

    Implementations supply value / grad_x / grad_nu; gradients are part of
    the production path (finite differences are used only to verify them).
    """

    def value(self, x: Vec3, nu: Vec3, bp: BodyParams) -> float:
        raise NotImplementedError

    def grad_x(self, x: Vec3, nu: Vec3, bp: BodyParams) -> Vec3:
        raise NotImplementedError

    def grad_nu(self, x: Vec3, nu: Vec3, bp: BodyParams) -> Vec3:
        raise NotImplementedError


@dataclass(frozen=True)
class ZeroPotential(Potential):
    def value(self, x, nu, bp):
        return 0.0

    def grad_x(self, x, nu, bp):
        return np.zeros(3)

    def grad_nu(self, x, nu, bp):
        return np.zeros(3)


@dataclass(frozen=True)
class LinearGravity(Potential):
    """Uniform gravity on the center of mass plus an axis-alignment torque:
    V = M <g, x> + chi <nu, g/|g|>."""

    g: Vec3
    chi: float

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float)
        if np.linalg.norm(g) == 0.0:
            raise ValueError("gravity vector must be nonzero")
        object.__setattr__(self, "g", g)

    def _ghat(self):
        return self.g / np.linalg.norm(self.g)

    def value(self, x, nu, bp):
        return bp.M * float(self.g @ x) + self.chi * float(nu @ self._ghat())

    def grad_x(self, x, nu, bp):
        return bp.M * self.g

    def grad_nu(self, x, nu, bp):
        return self.chi * self._ghat()


@dataclass(frozen=True)
class DipolePotential(Potential):
    """Point-dipole interaction V = -m <nu, b(x)> with the standard field
    b(x) = (3 xhat <mu, xhat> - mu) / |x|^3 of a source moment mu at the origin.

    Singular at x = 0; trajectories entering the singularity surface as
    NonFinite during integration.
    """

    m: float
    mu: Vec3

    def __post_init__(self):
        object.__setattr__(self, "mu", np.asarray(self.mu, dtype=float))

    def _field(self, x):
        r2 = float(x @ x)
        r = np.sqrt(r2)
        return (3.0 * x * float(self.mu @ x) / r2 - self.mu) / r**3

    def value(self, x, nu, bp):
        return -self.m * float(nu @ self._field(x))

    def grad_nu(self, x, nu, bp):
        return -self.m * self._field(x)

    def grad_x(self, x, nu, bp):
        # J_b nu with the (symmetric) dipole-field Jacobian contracted analytically.
        r2 = float(x @ x)
        r = np.sqrt(r2)
        mx = float(self.mu @ x)
        mn = float(self.mu @ nu)
        xn = float(x @ nu)
        jb_nu = 3.0 * (nu * mx + x * mn + self.mu * xn) / r**5 - 15.0 * mx * xn * x / r**7
        return -self.m * jb_nu


@dataclass(frozen=True)
class SumPotential(Potential):
    terms: tuple[Potential, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def value(self, x, nu, bp):
        return sum(t.value(x, nu, bp) for t in self.terms)

    def grad_x(self, x, nu, bp):
        return sum((t.grad_x(x, nu, bp) for t in self.terms), np.zeros(3))

    def grad_nu(self, x, nu, bp):
        return sum((t.grad_nu(x, nu, bp) for t in self.terms), np.zeros(3))


def spin_coefficient(bp: BodyParams) -> float:
    """Coefficient of <nu, pi>^2 in the full Hamiltonian: 1/(2 I3) - 1/(2 I1)."""
    return 0.5 / bp.I3 - 0.5 / bp.I1


def reduced_hamiltonian(s: ReducedState, bp: BodyParams, potential: Potential) -> float:
    """h = |p|^2/(2M) + |pi|^2/(2 I1) + V(x, nu)."""
    return (
        float(s.p @ s.p) / (2.0 * bp.M)
        + float(s.pi @ s.pi) / (2.0 * bp.I1)
        + potential.value(s.x, s.nu, bp)
    )


def full_hamiltonian(s: FullState, bp: BodyParams, potential: Potential) -> float:
    """H = |p|^2/(2M) + |pi|^2/(2 I1) + kappa <nu, pi>^2 + V(x, nu), nu = tau(R)."""
    nu = tau(s.R)
    return (
        float(s.p @ s.p) / (2.0 * bp.M)
        + float(s.pi @ s.pi) / (2.0 * bp.I1)
        + spin_coefficient(bp) * float(nu @ s.pi) ** 2
        + potential.value(s.x, nu, bp)
    )


def reduced_hamiltonian_field(bp: BodyParams, potential: Potential) -> ScalarField:
    """Reduced Hamiltonian as a chart field with analytic gradient."""
    lay = LAYOUTS[SpaceId.Reduced]

    def value(z):
        x, p, nu, pi = z[lay.x], z[lay.p], z[lay.nu], z[lay.pi]
        return float(p @ p) / (2.0 * bp.M) + float(pi @ pi) / (2.0 * bp.I1) + potential.value(x, nu, bp)

    def grad(z):
        x, p, nu, pi = z[lay.x], z[lay.p], z[lay.nu], z[lay.pi]
        g = np.zeros(lay.dim)
        g[lay.x] = potential.grad_x(x, nu, bp)
        g[lay.p] = p / bp.M
        g[lay.nu] = potential.grad_nu(x, nu, bp)
        g[lay.pi] = pi / bp.I1
        return g

    return ScalarField(SpaceId.Reduced, value, grad, name="h")


def full_hamiltonian_field(bp: BodyParams, potential: Potential) -> ScalarField:
    """Full Hamiltonian as a chart field; R enters only through its third column."""
    lay = LAYOUTS[SpaceId.CotSE3]
    kappa = spin_coefficient(bp)
    nu_idx = [lay.r_entry(i, 2) for i in range(3)]

    def value(z):
        x, p, pi = z[lay.x], z[lay.p], z[lay.pi]
        nu = z[nu_idx]
        return (
            float(p @ p) / (2.0 * bp.M)
            + float(pi @ pi) / (2.0 * bp.I1)
            + kappa * float(nu @ pi) ** 2
            + potential.value(x, nu, bp)
        )

    def grad(z):
        x, p, pi = z[lay.x], z[lay.p], z[lay.pi]
        nu = z[nu_idx]
        c2 = float(nu @ pi)
        g = np.zeros(lay.dim)
        g[lay.x] = potential.grad_x(x, nu, bp)
        g[lay.p] = p / bp.M
        g[nu_idx] = 2.0 * kappa * c2 * pi + potential.grad_nu(x, nu, bp)
        g[lay.pi] = pi / bp.I1 + 2.0 * kappa * c2 * nu
        return g

    return ScalarField(SpaceId.CotSE3, value, grad, name="H")


METHODS = ("rk4", "rk4_repair")


def _repair(space: SpaceId, z: np.ndarray) -> np.ndarray:
    lay = LAYOUTS[space]
    z = z.copy()
    if lay.nu is not None:
        nu = z[lay.nu]
        z[lay.nu] = nu / np.linalg.norm(nu)
    if lay.r is not None:
        r = z[lay.r].reshape(3, 3)
        z[lay.r] = reorthonormalize(r).ravel()
    return z


def step(
    space: SpaceId,
    h: ScalarField,
    z: np.ndarray,
    dt: float,
    method: str = "rk4_repair",
) -> np.ndarray:
    """One RK4 step of zdot = Lambda(z) grad h(z), optionally constraint-repaired."""
    if h.space is not space:
        raise DimensionMismatch(f"Hamiltonian lives on {h.space.value}, not {space.value}")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if not dt > 0.0:
        raise ValueError(f"dt = {dt} must be positive")
    z = np.asarray(z, dtype=float)
    k1 = ham_vector_field(h, z)
    k2 = ham_vector_field(h, z + 0.5 * dt * k1)
    k3 = ham_vector_field(h, z + 0.5 * dt * k2)
    k4 = ham_vector_field(h, z + dt * k3)
    z1 = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if method == "rk4_repair":
        z1 = _repair(space, z1)
    if not np.all(np.isfinite(z1)):
        raise NonFinite("integration step produced a non-finite state")
    return z1


@dataclass
class Trajectory:
    """Sampled trajectory with per-sample invariant monitors."""

    space: SpaceId
    t: np.ndarray
    z: np.ndarray  # (n_samples, chart dim)
    energy: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    ortho_defect: np.ndarray

    def __len__(self) -> int:
        return self.t.size


def nu_pi_of(space: SpaceId, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Body axis and angular momentum read off a chart vector (nu via the
    attitude column on the full charts)."""
    lay = LAYOUTS[space]
    if lay.nu is not None:
        return z[lay.nu].copy(), z[lay.pi].copy()
    r = z[lay.r].reshape(3, 3)
    return r[:, 2].copy(), z[lay.pi].copy()


def _monitors(space: SpaceId, h: ScalarField, z: np.ndarray) -> tuple[float, float, float, float]:
    nu, pi = nu_pi_of(space, z)
    lay = LAYOUTS[space]
    defect = orthogonality_defect(z[lay.r].reshape(3, 3)) if lay.r is not None else 0.0
    return h(z), float(nu @ nu), float(nu @ pi), float(defect)


def simulate(
    space: SpaceId,
    h: ScalarField,
    z0: np.ndarray,
    dt: float,
    T: float,
    method: str = "rk4_repair",
    sample_stride: int = 1,
) -> Trajectory:
    """Integrate from t = 0 to T, recording every sample_stride-th step
    (plus the endpoint) with energy/Casimir/orthogonality monitors."""
    if not T > 0.0:
        raise ValueError(f"T = {T} must be positive")
    if sample_stride < 1:
        raise ValueError("sample_stride must be >= 1")
    z = np.asarray(z0, dtype=float).copy()
    n_steps = int(round(T / dt))
    ts, zs, mons = [0.0], [z.copy()], [_monitors(space, h, z)]
    for k in range(1, n_steps + 1):
        z = step(space, h, z, dt, method)
        if k % sample_stride == 0 or k == n_steps:
            ts.append(k * dt)
            zs.append(z.copy())
            mons.append(_monitors(space, h, z))
    m = np.array(mons)
    return Trajectory(
        space=space,
        t=np.array(ts),
        z=np.array(zs),
        energy=m[:, 0],
        c1=m[:, 1],
        c2=m[:, 2],
        ortho_defect=m[:, 3],
    )


def free_top_analytic(s0: ReducedState, t: float, bp: BodyParams) -> ReducedState:
    """Closed-form free motion (V = 0): straight-line translation, constant pi,
    and nu precessing about pi at angular rate |pi| / I1.

    The rotation direction follows from the reduced bracket table:
    nudot = (pi / I1) x nu, so nu(t) = exp_so3(t pi0 / I1) nu0.
    """
    return ReducedState(
        x=s0.x + t * s0.p / bp.M,
        p=s0.p,
        nu=exp_so3((t / bp.I1) * s0.pi) @ s0.nu,
        pi=s0.pi,
    )


def commutation_residual(
    z0: FullState,
    bp: BodyParams,
    potential: Potential,
    dt: float,
    T: float,
    method: str = "rk4_repair",
    sample_stride: int = 1,
) -> float:
    """Max over samples of |project(full trajectory) - reduced trajectory|_inf.

    Both sides integrate with identical dt and method; the full side carries
    the <nu, pi>^2 spin term, the reduced side does not, so a small residual
    certifies that dynamics commutes with projection and that the dropped
    term generates no reduced motion.
    """
    full_traj = simulate(
        SpaceId.CotSE3,
        full_hamiltonian_field(bp, potential),
        flatten(z0, SpaceId.CotSE3),
        dt,
        T,
        method,
        sample_stride,
    )
    red_traj = simulate(
        SpaceId.Reduced,
        reduced_hamiltonian_field(bp, potential),
        flatten(project_full(z0), SpaceId.Reduced),
        dt,
        T,
        method,
        sample_stride,
    )
    _, proj = chart_projection(SpaceId.Reduced)
    projected = full_traj.z @ proj.T
    return float(np.abs(projected - red_traj.z).max())
