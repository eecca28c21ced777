"""Projections to the quotient spaces and the right circle action.

The body-axis circle sits inside the rotation group as

    S1 = { Z in SO(3) : Z[i, 2] = delta_i2 }   (third column/row fixed),

realized here by z_rotation(theta).  Right translation R -> R B leaves the
third column of R invariant exactly when B is in S1, so the third column

    tau(R) = R[:, 2] = nu

is a complete invariant of the circle action and defines the projections

    tilde_tau: (R, pi)       -> (nu, pi)         CotSO3  -> Se3Dual (onto W1)
    project_full: (x, R, p, pi) -> (x, p, nu, pi)   CotSE3  -> Reduced

Both maps are linear in chart coordinates (they select entries), which makes
the Poisson-map property directly checkable: pulling back reduced functions
along the projection and bracketing upstairs must agree with bracketing
downstairs.  poisson_map_residual computes exactly that difference.
"""

from __future__ import annotations

import numpy as np

from .algebra3 import Mat3, Vec3, exp_so3, orthogonal_unit
from .errors import DimensionMismatch
from .phase import (
    LAYOUTS,
    CotSO3State,
    FullState,
    ReducedState,
    Se3DualPoint,
    SpaceId,
    flatten,
)
from .poisson import ScalarField, bracket


def z_rotation(theta: float) -> Mat3:
    """Circle element Z(theta): rotation about the third axis; Z[:, 2] and
    Z[2, :] equal the third basis vector exactly."""
    return exp_so3(np.array([0.0, 0.0, float(theta)]))


def tau(r: Mat3) -> Vec3:
    """Third column of the attitude matrix: the body axis in the inertial frame."""
    r = np.asarray(r, dtype=float)
    return r[:, 2].copy()


def tilde_tau(s: CotSO3State) -> Se3DualPoint:
    """(R, pi) -> (tau(R), pi); lands on the unit-sphere slice W1."""
    return Se3DualPoint(nu=tau(s.R), pi=s.pi)


def project_full(s: FullState) -> ReducedState:
    """(x, R, p, pi) -> (x, p, tau(R), pi)."""
    return ReducedState(x=s.x, p=s.p, nu=tau(s.R), pi=s.pi)


def right_action(b: Mat3, s: FullState | CotSO3State):
    """Right translation of the attitude, R -> R B; all momenta unchanged."""
    b = np.asarray(b, dtype=float)
    if isinstance(s, FullState):
        return FullState(x=s.x, R=s.R @ b, p=s.p, pi=s.pi)
    if isinstance(s, CotSO3State):
        return CotSO3State(R=s.R @ b, pi=s.pi)
    raise DimensionMismatch(f"right_action expects a full or rotational state, got {type(s).__name__}")


def section(nu: Vec3) -> Mat3:
    """A rotation R with tau(R) = nu/|nu|: surjectivity witness for the projections.

    Completes nu to an orthonormal frame starting from the coordinate axis
    least aligned with it, so the construction stays well-conditioned on the
    whole sphere.
    """
    nu = np.asarray(nu, dtype=float)
    n = np.linalg.norm(nu)
    if n == 0.0:
        raise ValueError("cannot build a frame over nu = 0")
    nh = nu / n
    u = orthogonal_unit(nh)
    v = np.cross(nh, u)
    return np.column_stack([u, v, nh])


_PROJECTIONS: dict[SpaceId, tuple[SpaceId, np.ndarray]] = {}


def chart_projection(reduced_space: SpaceId) -> tuple[SpaceId, np.ndarray]:
    """Source space and matrix P of the linear chart projection onto reduced_space.

    Reduced comes from CotSE3 via project_full; Se3Dual comes from CotSO3 via
    tilde_tau.  P picks x, p, pi straight through and reads nu_i off the
    third-column entries R[i, 2].
    """
    if reduced_space not in _PROJECTIONS:
        if reduced_space is SpaceId.Reduced:
            src = SpaceId.CotSE3
        elif reduced_space is SpaceId.Se3Dual:
            src = SpaceId.CotSO3
        else:
            raise DimensionMismatch(f"{reduced_space.value} is not the image of a projection")
        dst_lay, src_lay = LAYOUTS[reduced_space], LAYOUTS[src]
        p = np.zeros((dst_lay.dim, src_lay.dim))
        for blk in ("x", "p", "pi"):
            d, s = getattr(dst_lay, blk), getattr(src_lay, blk)
            if d is not None:
                for i in range(3):
                    p[d.start + i, s.start + i] = 1.0
        for i in range(3):
            p[dst_lay.nu_entry(i), src_lay.r_entry(i, 2)] = 1.0
        _PROJECTIONS[reduced_space] = (src, p)
    return _PROJECTIONS[reduced_space]


def pullback(f: ScalarField) -> ScalarField:
    """Compose a reduced-space field with the projection; gradient by the
    (constant) chain rule P^T grad f."""
    src, p = chart_projection(f.space)
    return ScalarField(
        src,
        lambda z: f.value(p @ z),
        lambda z: p.T @ f.gradient(p @ z),
        analytic=f.analytic,
        name=f"{f.name}@proj",
    )


def poisson_map_residual(f: ScalarField, g: ScalarField, z) -> float:
    """{F o P, G o P}_source(z) - {F, G}_reduced(P z); zero iff the projection
    respects both bracket tables at z.

    f and g live on the reduced space (Reduced or Se3Dual); z is a state or
    chart vector of the corresponding source space.
    """
    if f.space is not g.space:
        raise DimensionMismatch("fields must live on the same reduced space")
    src, p = chart_projection(f.space)
    if isinstance(z, FullState):
        z = flatten(z, SpaceId.CotSE3)
    elif isinstance(z, CotSO3State):
        z = flatten(z, SpaceId.CotSO3)
    z = np.asarray(z, dtype=float)
    if z.shape != (LAYOUTS[src].dim,):
        raise DimensionMismatch(f"expected a {src.value} point, got shape {z.shape}")
    upstairs = bracket(pullback(f), pullback(g), z)
    downstairs = bracket(f, g, p @ z)
    return upstairs - downstairs
