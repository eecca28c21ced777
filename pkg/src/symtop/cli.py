"""Command-line front end.

Subcommands:

    simulate --config FILE --out FILE     integrate and write a CSV trajectory
    check    --suite NAME [--seed N]      run a named certification suite
    compare  --config FILE [--tol X]      full-vs-reduced commutation residual
    orbit    --nu a,b,c --pi a,b,c        Casimir level and orbit report

Configs are strict JSON: unknown keys anywhere are rejected (exit 2), as are
non-positive dt/T and rotations further than 1e-6 from orthogonal.  CSV rows
carry t, x, p, nu, pi, energy, C1, C2 and the attitude orthogonality defect
(0 for reduced runs), all floats with 17 significant digits so downstream
tools can round-trip them losslessly.

Exit codes: 0 success / all checks pass, 2 validation error, 3 non-finite
state during integration, 1 a check or comparison failed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import checks, dynamics, orbits
from .algebra3 import exp_so3, orthogonality_defect, reorthonormalize
from .errors import NonFinite
from .phase import LAYOUTS, Se3DualPoint, SpaceId, random_rotation, unflatten

CSV_COLUMNS = (
    "t,x1,x2,x3,p1,p2,p3,nu1,nu2,nu3,pi1,pi2,pi3,energy,C1,C2,ortho_defect"
)

ROTATION_LOAD_TOL = 1e-6


class ConfigError(Exception):
    """Invalid run configuration (maps to exit code 2)."""


def _require_keys(d: dict, required: set[str], optional: set[str], where: str) -> None:
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object")
    missing = required - d.keys()
    if missing:
        raise ConfigError(f"{where} missing keys: {sorted(missing)}")
    unknown = d.keys() - required - optional
    if unknown:
        raise ConfigError(f"{where} has unknown keys: {sorted(unknown)}")


def _vec(v, n: int, where: str) -> np.ndarray:
    try:
        a = np.asarray(v, dtype=float)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{where}: {e}") from None
    if a.shape != (n,) or not np.all(np.isfinite(a)):
        raise ConfigError(f"{where} must be {n} finite numbers")
    return a


def _positive(d: dict, key: str, where: str) -> float:
    v = d[key]
    if not isinstance(v, (int, float)) or not v > 0:
        raise ConfigError(f"{where}.{key} must be a positive number")
    return float(v)


def parse_potential(node, where: str = "potential") -> dynamics.Potential:
    if not isinstance(node, dict) or "type" not in node:
        raise ConfigError(f"{where} must be an object with a 'type' key")
    kind = node["type"]
    if kind == "zero":
        _require_keys(node, {"type"}, set(), where)
        return dynamics.ZeroPotential()
    if kind == "gravity":
        _require_keys(node, {"type", "g", "chi"}, set(), where)
        g = _vec(node["g"], 3, f"{where}.g")
        if np.linalg.norm(g) == 0.0:
            raise ConfigError(f"{where}.g must be nonzero")
        return dynamics.LinearGravity(g=g, chi=float(node["chi"]))
    if kind == "dipole":
        _require_keys(node, {"type", "m", "mu"}, set(), where)
        return dynamics.DipolePotential(m=float(node["m"]), mu=_vec(node["mu"], 3, f"{where}.mu"))
    if kind == "sum":
        _require_keys(node, {"type", "terms"}, set(), where)
        if not isinstance(node["terms"], list) or not node["terms"]:
            raise ConfigError(f"{where}.terms must be a non-empty list")
        return dynamics.SumPotential(
            terms=tuple(parse_potential(t, f"{where}.terms[{i}]") for i, t in enumerate(node["terms"]))
        )
    raise ConfigError(f"{where}.type {kind!r} not one of zero/gravity/dipole/sum")


def _load_rotation(initial: dict) -> np.ndarray:
    if ("R" in initial) == ("axis_angle" in initial):
        raise ConfigError("initial must give exactly one of 'R' (9 numbers) or 'axis_angle' (3 numbers)")
    if "R" in initial:
        r = _vec(initial["R"], 9, "initial.R").reshape(3, 3)
    else:
        r = exp_so3(_vec(initial["axis_angle"], 3, "initial.axis_angle"))
    defect = orthogonality_defect(r)
    if defect > ROTATION_LOAD_TOL:
        raise ConfigError(f"initial rotation defect {defect:.3e} exceeds {ROTATION_LOAD_TOL}")
    return reorthonormalize(r)


def _load_nu(initial: dict) -> np.ndarray:
    nu = _vec(initial["nu"], 3, "initial.nu")
    defect = abs(float(np.linalg.norm(nu)) - 1.0)
    if defect > ROTATION_LOAD_TOL:
        raise ConfigError(f"initial |nu| deviates from 1 by {defect:.3e} (limit {ROTATION_LOAD_TOL})")
    return nu / np.linalg.norm(nu)


class RunConfig:
    """Validated simulation configuration."""

    def __init__(self, raw: dict):
        _require_keys(
            raw,
            {"space", "body", "potential", "initial", "dt", "T"},
            {"method", "sample_stride", "seed"},
            "config",
        )
        if raw["space"] not in ("full", "reduced"):
            raise ConfigError("config.space must be 'full' or 'reduced'")
        self.space = SpaceId.CotSE3 if raw["space"] == "full" else SpaceId.Reduced

        _require_keys(raw["body"], {"M", "I1", "I3"}, set(), "body")
        self.body = dynamics.BodyParams(
            M=_positive(raw["body"], "M", "body"),
            I1=_positive(raw["body"], "I1", "body"),
            I3=_positive(raw["body"], "I3", "body"),
        )
        self.potential = parse_potential(raw["potential"])

        initial = raw["initial"]
        if self.space is SpaceId.Reduced:
            _require_keys(initial, {"x", "p", "nu", "pi"}, set(), "initial")
            self.z0 = np.concatenate([
                _vec(initial["x"], 3, "initial.x"),
                _vec(initial["p"], 3, "initial.p"),
                _load_nu(initial),
                _vec(initial["pi"], 3, "initial.pi"),
            ])
        else:
            _require_keys(initial, {"x", "p", "pi"}, {"R", "axis_angle"}, "initial")
            self.z0 = np.concatenate([
                _vec(initial["x"], 3, "initial.x"),
                _vec(initial["p"], 3, "initial.p"),
                _load_rotation(initial).ravel(),
                _vec(initial["pi"], 3, "initial.pi"),
            ])

        self.dt = _positive(raw, "dt", "config")
        self.T = _positive(raw, "T", "config")
        method = raw.get("method", "rk4_repair")
        if method not in dynamics.METHODS:
            raise ConfigError(f"config.method must be one of {dynamics.METHODS}")
        self.method = method
        stride = raw.get("sample_stride", 1)
        if not isinstance(stride, int) or stride < 1:
            raise ConfigError("config.sample_stride must be a positive integer")
        self.sample_stride = stride
        seed = raw.get("seed", 0)
        if not isinstance(seed, int):
            raise ConfigError("config.seed must be an integer")
        self.seed = seed

    def hamiltonian(self):
        if self.space is SpaceId.Reduced:
            return dynamics.reduced_hamiltonian_field(self.body, self.potential)
        return dynamics.full_hamiltonian_field(self.body, self.potential)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from None
    return RunConfig(raw)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def write_csv(path: str, traj: dynamics.Trajectory) -> None:
    lay = LAYOUTS[traj.space]
    with open(path, "w", encoding="utf-8") as f:
        f.write(CSV_COLUMNS + "\n")
        for i in range(len(traj)):
            z = traj.z[i]
            nu, pi = dynamics.nu_pi_of(traj.space, z)
            row = [traj.t[i], *z[lay.x], *z[lay.p], *nu, *pi,
                   traj.energy[i], traj.c1[i], traj.c2[i], traj.ortho_defect[i]]
            f.write(",".join(_fmt(v) for v in row) + "\n")


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    traj = dynamics.simulate(
        cfg.space, cfg.hamiltonian(), cfg.z0, cfg.dt, cfg.T, cfg.method, cfg.sample_stride
    )
    write_csv(args.out, traj)
    print(f"wrote {len(traj)} samples to {args.out}")
    print(f"energy drift  max|h - h0|   = {np.abs(traj.energy - traj.energy[0]).max():.3e}")
    print(f"C1 drift      max|C1 - 1|   = {np.abs(traj.c1 - 1.0).max():.3e}")
    print(f"C2 drift      max|C2 - C20| = {np.abs(traj.c2 - traj.c2[0]).max():.3e}")
    print(f"ortho defect  max           = {traj.ortho_defect.max():.3e}")
    return 0


def cmd_check(args) -> int:
    results = checks.run_suite(args.suite, seed=args.seed)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{'all checks passed' if ok else 'CHECK FAILURES PRESENT'}")
    return 0 if ok else 1


def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    if cfg.space is not SpaceId.CotSE3:
        raise ConfigError("compare requires a config with space = 'full'")
    z0 = unflatten(SpaceId.CotSE3, cfg.z0)
    residual = dynamics.commutation_residual(
        z0, cfg.body, cfg.potential, cfg.dt, cfg.T, cfg.method, cfg.sample_stride
    )
    ok = residual <= args.tol
    print(f"commutation residual {residual:.3e}  tol {args.tol:.1e}  {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _parse_triple(s: str, name: str) -> np.ndarray:
    parts = s.split(",")
    if len(parts) != 3:
        raise ConfigError(f"--{name} expects three comma-separated numbers")
    try:
        return np.array([float(p) for p in parts])
    except ValueError:
        raise ConfigError(f"--{name} expects numbers, got {s!r}") from None


def cmd_orbit(args) -> int:
    nu = _parse_triple(args.nu, "nu")
    pi = _parse_triple(args.pi, "pi")
    if np.linalg.norm(nu) == 0.0:
        raise ConfigError("orbit report requires nu != 0 (degenerate orbits excluded)")
    q0 = Se3DualPoint(nu=nu, pi=pi)
    level = orbits.casimirs(q0)
    print(f"Casimir level: C1 = {_fmt(level.c1)}, C2 = {_fmt(level.c2)}")

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.count):
        g = orbits.SE3Element(a=rng.uniform(-1, 1, 3), A=random_rotation(rng))
        q = orbits.coadjoint(g, q0)
        w = orbits.same_orbit_witness(q0, q)
        worst = max(worst, orbits.witness_residual(w, q0, q))
    print(f"sampled {args.count} same-level points via the coadjoint action")
    print(f"worst witness residual: {worst:.3e}  ({'PASS' if worst <= 1e-9 else 'FAIL'} at 1e-9)")

    nh = nu / np.linalg.norm(nu)
    print(f"magnetic form samples at c2 = {_fmt(level.c2)} (tangent pairs at nu/|nu|):")
    for _ in range(3):
        u = np.cross(nh, rng.uniform(-1, 1, 3))
        v = np.cross(nh, rng.uniform(-1, 1, 3))
        print(f"  B(u, v) = {_fmt(orbits.magnetic_form(nh, u, v, level.c2))}")
    return 0 if worst <= 1e-9 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symtop",
        description="Symmetric-top Poisson geometry: simulate, certify, compare, report.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a configured system and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("check", help="run a certification suite")
    p.add_argument("--suite", required=True, choices=sorted(checks.SUITES) + ["all"])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("compare", help="full-vs-reduced commutation residual")
    p.add_argument("--config", required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("orbit", help="Casimir level and coadjoint-orbit report")
    p.add_argument("--nu", required=True)
    p.add_argument("--pi", required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_orbit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NonFinite as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
