"""Poisson brackets as point-dependent antisymmetric structure matrices.

Each of the four charts carries a bracket table in which every coordinate
bracket {z_a, z_b} is an affine function of the chart vector z.  The whole
structure is therefore encoded once per space as a constant part and a
linear part,

    Lambda(z)[a, b] = LAM0[a, b] + LIN[a, b, c] z[c],

with LIN[a, b, :] the exact gradient of the (a, b) entry.  That single
encoding drives bracket evaluation, Hamiltonian vector fields and the Jacobi
residual with no symbolic algebra and no finite differencing.

Bracket families (all unlisted brackets vanish):

    {x_i, p_j}   = delta_ij          translational block (CotSE3, Reduced)
    {pi_i, pi_j} = eps_ijl pi_l      angular momentum algebra (all spaces)
    {pi_i, R_jk} = eps_ijl R_lk      attitude columns (CotSO3, CotSE3)
    {pi_i, nu_j} = eps_ijl nu_l      body-axis direction (Se3Dual, Reduced)
    {nu_i, nu_j} = 0, {R_ij, R_kl} = 0

The R rule couples pi to each matrix column separately: the bracket of a
third-column entry involves third-column entries only.

Sign convention: trajectories follow zdot_a = Lambda_ab dH/dz_b, so the
translational block yields the standard xdot = dH/dp, pdot = -dH/dx.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra3 import EPS
from .errors import DimensionMismatch
from .phase import LAYOUTS, SpaceId, dim

_TENSORS: dict[SpaceId, tuple[np.ndarray, np.ndarray]] = {}


def _build_tensors(space: SpaceId) -> tuple[np.ndarray, np.ndarray]:
    lay = LAYOUTS[space]
    n = lay.dim
    lam0 = np.zeros((n, n))
    lin = np.zeros((n, n, n))

    if lay.x is not None:
        for i in range(3):
            lam0[lay.x.start + i, lay.p.start + i] = 1.0
            lam0[lay.p.start + i, lay.x.start + i] = -1.0

    # {pi_i, pi_j} = eps_ijl pi_l; looping over all (i, j) fills both orders.
    for i in range(3):
        for j in range(3):
            for l in range(3):
                if EPS[i, j, l] != 0.0:
                    lin[lay.pi_entry(i), lay.pi_entry(j), lay.pi_entry(l)] = EPS[i, j, l]

    if lay.r is not None:
        # {pi_i, R_jk} = eps_ijl R_lk, column by column.
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    for l in range(3):
                        e = EPS[i, j, l]
                        if e != 0.0:
                            a, b, c = lay.pi_entry(i), lay.r_entry(j, k), lay.r_entry(l, k)
                            lin[a, b, c] = e
                            lin[b, a, c] = -e

    if lay.nu is not None:
        # {pi_i, nu_j} = eps_ijl nu_l
        for i in range(3):
            for j in range(3):
                for l in range(3):
                    e = EPS[i, j, l]
                    if e != 0.0:
                        a, b, c = lay.pi_entry(i), lay.nu_entry(j), lay.nu_entry(l)
                        lin[a, b, c] = e
                        lin[b, a, c] = -e

    return lam0, lin


def structure_tensors(space: SpaceId) -> tuple[np.ndarray, np.ndarray]:
    """Constant and linear parts of Lambda; cached, treat as read-only."""
    if space not in _TENSORS:
        _TENSORS[space] = _build_tensors(space)
    return _TENSORS[space]


def _check_point(space: SpaceId, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape != (dim(space),):
        raise DimensionMismatch(
            f"{space.value} chart has dim {dim(space)}, got shape {z.shape}"
        )
    return z


def structure_matrix(space: SpaceId, z: np.ndarray) -> np.ndarray:
    """Antisymmetric matrix of coordinate brackets Lambda(z)[a,b] = {z_a, z_b}(z)."""
    z = _check_point(space, z)
    lam0, lin = structure_tensors(space)
    return lam0 + np.tensordot(lin, z, axes=([2], [0]))


def fd_gradient(f: Callable[[np.ndarray], float], z: np.ndarray, step: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient; verification oracle only."""
    z = np.asarray(z, dtype=float)
    g = np.zeros_like(z)
    for a in range(z.size):
        zp, zm = z.copy(), z.copy()
        zp[a] += step
        zm[a] -= step
        g[a] = (f(zp) - f(zm)) / (2.0 * step)
    return g


@dataclass
class ScalarField:
    """Function on a chart together with its gradient.

    analytic=True marks a closed-form gradient (the production path);
    fields built without one fall back to central differences and are
    flagged analytic=False so tests can tell the two apart.
    """

    space: SpaceId
    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    analytic: bool = True
    name: str = ""

    @classmethod
    def from_callable(
        cls,
        space: SpaceId,
        value: Callable[[np.ndarray], float],
        grad: Callable[[np.ndarray], np.ndarray] | None = None,
        name: str = "",
    ) -> "ScalarField":
        if grad is None:
            return cls(space, value, lambda z: fd_gradient(value, z), analytic=False, name=name)
        return cls(space, value, grad, analytic=True, name=name)

    def __call__(self, z: np.ndarray) -> float:
        return float(self.value(z))

    def gradient(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(self.grad(z), dtype=float)

    def __add__(self, other: "ScalarField") -> "ScalarField":
        _same_space(self, other)
        return ScalarField(
            self.space,
            lambda z: self.value(z) + other.value(z),
            lambda z: self.gradient(z) + other.gradient(z),
            analytic=self.analytic and other.analytic,
            name=f"({self.name}+{other.name})",
        )

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            _same_space(self, other)
            return ScalarField(
                self.space,
                lambda z: self.value(z) * other.value(z),
                lambda z: self.gradient(z) * other.value(z) + self.value(z) * other.gradient(z),
                analytic=self.analytic and other.analytic,
                name=f"({self.name}*{other.name})",
            )
        c = float(other)
        return ScalarField(
            self.space,
            lambda z: c * self.value(z),
            lambda z: c * self.gradient(z),
            analytic=self.analytic,
            name=f"({c}*{self.name})",
        )

    __rmul__ = __mul__


def _same_space(f: ScalarField, g: ScalarField) -> None:
    if f.space is not g.space:
        raise DimensionMismatch(f"fields live on {f.space.value} and {g.space.value}")


_COORD_NAMES: dict[SpaceId, list[str]] = {}


def coordinate_names(space: SpaceId) -> list[str]:
    if space not in _COORD_NAMES:
        lay = LAYOUTS[space]
        names = [""] * lay.dim
        for block, label in ((lay.x, "x"), (lay.p, "p"), (lay.nu, "nu"), (lay.pi, "pi")):
            if block is not None:
                for i in range(3):
                    names[block.start + i] = f"{label}{i + 1}"
        if lay.r is not None:
            for j in range(3):
                for k in range(3):
                    names[lay.r_entry(j, k)] = f"R{j + 1}{k + 1}"
        _COORD_NAMES[space] = names
    return _COORD_NAMES[space]


def coordinate(space: SpaceId, a: int) -> ScalarField:
    """The a-th chart coordinate as a ScalarField (exact unit gradient)."""
    n = dim(space)
    if not 0 <= a < n:
        raise DimensionMismatch(f"coordinate index {a} out of range for dim {n}")
    e = np.zeros(n)
    e[a] = 1.0
    return ScalarField(space, lambda z, a=a: z[a], lambda z, e=e: e.copy(),
                       name=coordinate_names(space)[a])


def coordinate_fields(space: SpaceId) -> list[ScalarField]:
    return [coordinate(space, a) for a in range(dim(space))]


def random_polynomial(space: SpaceId, rng: np.random.Generator, scale: float = 0.5) -> ScalarField:
    """Random quadratic with exact gradient, for property tests."""
    n = dim(space)
    c = rng.uniform(-scale, scale)
    a = rng.uniform(-scale, scale, n)
    q = rng.uniform(-scale, scale, (n, n))
    q = 0.5 * (q + q.T)
    return ScalarField(
        space,
        lambda z: c + a @ z + 0.5 * z @ q @ z,
        lambda z: a + q @ z,
        name="poly",
    )


def bracket(f: ScalarField, g: ScalarField, z: np.ndarray) -> float:
    """{F, G}(z) = grad F . Lambda(z) . grad G."""
    _same_space(f, g)
    lam = structure_matrix(f.space, z)
    return float(f.gradient(z) @ lam @ g.gradient(z))


def ham_vector_field(h: ScalarField, z: np.ndarray) -> np.ndarray:
    """Chart tangent vector zdot_a = Lambda(z)_ab dH/dz_b."""
    lam = structure_matrix(h.space, z)
    return lam @ h.gradient(z)


def jacobi_residual(space: SpaceId, a: int, b: int, c: int, z: np.ndarray) -> float:
    """Cyclic sum {z_a,{z_b,z_c}} + {z_b,{z_c,z_a}} + {z_c,{z_a,z_b}}.

    Coordinate brackets are affine in z, so the nested gradients are the
    exact rows of the linear part; no differencing enters.
    """
    z = _check_point(space, z)
    lam = structure_matrix(space, z)
    _, lin = structure_tensors(space)
    return float(lam[a] @ lin[b, c] + lam[b] @ lin[c, a] + lam[c] @ lin[a, b])


def jacobi_residual_all(space: SpaceId, z: np.ndarray) -> np.ndarray:
    """Residual tensor over every index triple at once (vectorized)."""
    z = _check_point(space, z)
    lam = structure_matrix(space, z)
    _, lin = structure_tensors(space)
    t = np.einsum("ad,bcd->abc", lam, lin)
    return t + np.transpose(t, (1, 2, 0)) + np.transpose(t, (2, 0, 1))
