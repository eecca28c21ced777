"""Phase-space point types and their flat chart layouts.

Four spaces appear in the reduction chain:

    CotSO3   rotational phase space, points (R, pi), chart dim 12
    Se3Dual  dual of the Euclidean algebra, points (nu, pi), chart dim 6
    CotSE3   full rigid-body phase space, points (x, R, p, pi), chart dim 18
    Reduced  quotient by the body-axis circle, points (x, p, nu, pi), dim 12

The 9 entries of R are carried as 9 redundant chart coordinates (the bracket
tables are polynomial in matrix entries); the redundancy is resolved by
constraint-preserving integration, not by a minimal chart.  Every module
indexes chart vectors through the Layout constants defined here.

Flat layouts (row-major R):

    CotSO3:  (R11..R33, pi1..pi3)
    Se3Dual: (nu1..nu3, pi1..pi3)
    CotSE3:  (x1..x3, p1..p3, R11..R33, pi1..pi3)
    Reduced: (x1..x3, p1..p3, nu1..nu3, pi1..pi3)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .algebra3 import Mat3, Vec3, exp_so3, require_rotation
from .errors import DimensionMismatch


class SpaceId(enum.Enum):
    CotSO3 = "CotSO3"
    Se3Dual = "Se3Dual"
    CotSE3 = "CotSE3"
    Reduced = "Reduced"


@dataclass(frozen=True)
class Layout:
    """Slice map of one chart; absent blocks are None."""

    dim: int
    x: slice | None = None
    p: slice | None = None
    r: slice | None = None
    nu: slice | None = None
    pi: slice | None = None

    def r_entry(self, j: int, k: int) -> int:
        """Absolute chart index of R[j,k] (0-based row/column)."""
        if self.r is None:
            raise DimensionMismatch("chart has no rotation block")
        return self.r.start + 3 * j + k

    def nu_entry(self, i: int) -> int:
        if self.nu is None:
            raise DimensionMismatch("chart has no nu block")
        return self.nu.start + i

    def pi_entry(self, i: int) -> int:
        return self.pi.start + i


LAYOUTS: dict[SpaceId, Layout] = {
    SpaceId.CotSO3: Layout(dim=12, r=slice(0, 9), pi=slice(9, 12)),
    SpaceId.Se3Dual: Layout(dim=6, nu=slice(0, 3), pi=slice(3, 6)),
    SpaceId.CotSE3: Layout(dim=18, x=slice(0, 3), p=slice(3, 6), r=slice(6, 15), pi=slice(15, 18)),
    SpaceId.Reduced: Layout(dim=12, x=slice(0, 3), p=slice(3, 6), nu=slice(6, 9), pi=slice(9, 12)),
}


def layout(space: SpaceId) -> Layout:
    return LAYOUTS[space]


def dim(space: SpaceId) -> int:
    return LAYOUTS[space].dim


def _vec3(v, name: str) -> Vec3:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"{name} must have shape (3,), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite components")
    return a


@dataclass(frozen=True)
class CotSO3State:
    """Point of the rotational phase space: attitude R and spatial angular momentum pi."""

    R: Mat3
    pi: Vec3

    def __post_init__(self):
        object.__setattr__(self, "R", require_rotation(self.R))
        object.__setattr__(self, "pi", _vec3(self.pi, "pi"))


@dataclass(frozen=True)
class Se3DualPoint:
    """General point (nu, pi) of the Euclidean algebra dual; on the unit-sphere
    slice W1 it represents a reduced rotational state."""

    nu: Vec3
    pi: Vec3

    def __post_init__(self):
        object.__setattr__(self, "nu", _vec3(self.nu, "nu"))
        object.__setattr__(self, "pi", _vec3(self.pi, "pi"))


@dataclass(frozen=True)
class FullState:
    """Rigid-body state in the inertial frame: position x, attitude R,
    linear momentum p, intrinsic angular momentum pi."""

    x: Vec3
    R: Mat3
    p: Vec3
    pi: Vec3

    def __post_init__(self):
        object.__setattr__(self, "x", _vec3(self.x, "x"))
        object.__setattr__(self, "R", require_rotation(self.R))
        object.__setattr__(self, "p", _vec3(self.p, "p"))
        object.__setattr__(self, "pi", _vec3(self.pi, "pi"))


@dataclass(frozen=True)
class ReducedState:
    """Quotient state (x, p, nu, pi) with nu on the unit sphere."""

    x: Vec3
    p: Vec3
    nu: Vec3
    pi: Vec3

    def __post_init__(self):
        object.__setattr__(self, "x", _vec3(self.x, "x"))
        object.__setattr__(self, "p", _vec3(self.p, "p"))
        object.__setattr__(self, "nu", _vec3(self.nu, "nu"))
        object.__setattr__(self, "pi", _vec3(self.pi, "pi"))
        defect = abs(float(self.nu @ self.nu) - 1.0)
        if defect > 1e-9:
            raise ValueError(f"|nu|^2 - 1 = {defect:.3e} exceeds 1e-9")


_STATE_TYPES = {
    SpaceId.CotSO3: CotSO3State,
    SpaceId.Se3Dual: Se3DualPoint,
    SpaceId.CotSE3: FullState,
    SpaceId.Reduced: ReducedState,
}

State = CotSO3State | Se3DualPoint | FullState | ReducedState


def flatten(state: State, space: SpaceId) -> np.ndarray:
    """Flat chart vector of a state, per the documented layouts."""
    if not isinstance(state, _STATE_TYPES[space]):
        raise DimensionMismatch(
            f"state of type {type(state).__name__} does not live on {space.value}"
        )
    if space is SpaceId.CotSO3:
        return np.concatenate([state.R.ravel(), state.pi])
    if space is SpaceId.Se3Dual:
        return np.concatenate([state.nu, state.pi])
    if space is SpaceId.CotSE3:
        return np.concatenate([state.x, state.p, state.R.ravel(), state.pi])
    return np.concatenate([state.x, state.p, state.nu, state.pi])


def unflatten(space: SpaceId, z: np.ndarray) -> State:
    """Exact inverse of flatten; validates the per-type invariants."""
    z = np.asarray(z, dtype=float)
    lay = LAYOUTS[space]
    if z.shape != (lay.dim,):
        raise DimensionMismatch(f"{space.value} chart has dim {lay.dim}, got shape {z.shape}")
    if space is SpaceId.CotSO3:
        return CotSO3State(R=z[lay.r].reshape(3, 3), pi=z[lay.pi])
    if space is SpaceId.Se3Dual:
        return Se3DualPoint(nu=z[lay.nu], pi=z[lay.pi])
    if space is SpaceId.CotSE3:
        return FullState(x=z[lay.x], R=z[lay.r].reshape(3, 3), p=z[lay.p], pi=z[lay.pi])
    return ReducedState(x=z[lay.x], p=z[lay.p], nu=z[lay.nu], pi=z[lay.pi])


def random_rotation(rng: np.random.Generator) -> Mat3:
    """Generic rotation from a composition of random axis-angle exponentials."""
    r = np.eye(3)
    for _ in range(3):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        r = r @ exp_so3(axis * rng.uniform(0.0, np.pi))
    return r


def random_unit(rng: np.random.Generator) -> Vec3:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_state(space: SpaceId, seed: int) -> State:
    """Deterministic generic test point: R from axis-angle compositions,
    nu uniform on the sphere, x/p/pi components uniform in [-1, 1]."""
    rng = np.random.default_rng(seed)
    if space is SpaceId.CotSO3:
        return CotSO3State(R=random_rotation(rng), pi=rng.uniform(-1, 1, 3))
    if space is SpaceId.Se3Dual:
        return Se3DualPoint(nu=random_unit(rng), pi=rng.uniform(-1, 1, 3))
    if space is SpaceId.CotSE3:
        return FullState(
            x=rng.uniform(-1, 1, 3),
            R=random_rotation(rng),
            p=rng.uniform(-1, 1, 3),
            pi=rng.uniform(-1, 1, 3),
        )
    return ReducedState(
        x=rng.uniform(-1, 1, 3),
        p=rng.uniform(-1, 1, 3),
        nu=random_unit(rng),
        pi=rng.uniform(-1, 1, 3),
    )


def random_chart_point(space: SpaceId, seed: int) -> np.ndarray:
    """Flat chart vector of random_state(space, seed)."""
    return flatten(random_state(space, seed), space)
