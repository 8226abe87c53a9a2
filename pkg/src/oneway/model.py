"""Velocity models, grids, acquisition geometry and run configuration.

All types are frozen dataclasses. They are not validated on construction;
:func:`validate` checks every field and cross-field invariant at once and
returns a :class:`RunPlan` that the solvers consume.
"""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np


class ConfigError(ValueError):
    """One or more configuration invariants are violated.

    ``problems`` holds ``(field, message)`` pairs, one per violation.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        lines = [f"{name}: {msg}" for name, msg in self.problems]
        super().__init__("invalid configuration\n  " + "\n  ".join(lines))


class DomainError(ValueError):
    """A depth lies outside the modelled region."""


def is_power_of_two(n) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class VelocityModel:
    """Stratified speed profile c(z) with constant density.

    ``layers`` lists ``(top_depth, speed)`` for every layer below the first
    one; the region between z=0 and the first top has speed ``c_sup``, the
    speed of the half-space above the domain. Each interface is smoothed
    linearly over a band of width ``delta`` centred on its depth.
    """

    layers: tuple = ()
    delta: float = 0.0
    rho: float = 1000.0
    z_max: float = 1000.0
    c_sup: float = 2000.0
    c_inf: float | None = None

    @property
    def interfaces(self) -> np.ndarray:
        return np.array([top for top, _ in self.layers], dtype=float)

    @property
    def speeds(self) -> np.ndarray:
        """Constant speeds from top to bottom, ``c_sup`` first."""
        return np.array([self.c_sup] + [c for _, c in self.layers], dtype=float)

    @property
    def speed_below(self) -> float:
        return float(self.c_inf if self.c_inf is not None else self.speeds[-1])


@dataclass(frozen=True)
class Grid:
    dx: float
    dz: float
    nx: int
    nz: int
    dt: float
    nt: int
    # full-wave reference only
    fd_refinement: int = 1
    fd_substeps: int | None = None
    sponge_cells: int = 50

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.nx) * self.dx

    @property
    def z(self) -> np.ndarray:
        """Depth nodes 0, dz, ..., nz*dz (nz + 1 values)."""
        return np.arange(self.nz + 1) * self.dz

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.nt) * self.dt


@dataclass(frozen=True)
class ShotGeometry:
    source_x: float
    receiver_depth: float
    peak_frequency: float = 25.0


@dataclass(frozen=True)
class RunConfig:
    epsilon: int = 0
    n_multiples: int = 1
    omega_max: float = 2 * math.pi * 75.0
    include_transmission: bool = True
    angle_cutoff: float = 85.0
    taper_width: float = 5.0
    # imaginary frequency shift against time wrap-around (rad/s); 0 disables
    damping: float = 2 * math.pi * 0.5


@dataclass(frozen=True)
class RunPlan:
    """A validated run: all inputs plus frequently used derived values."""

    config: RunConfig
    grid: Grid
    model: VelocityModel
    shot: ShotGeometry
    source_index: int
    receiver_index: int
    speeds: np.ndarray = field(repr=False, compare=False)

    def with_config(self, **changes) -> "RunPlan":
        return validate(replace(self.config, **changes), self.grid, self.model, self.shot)

    def digest(self) -> str:
        """Stable hash of every input that influences the results."""
        payload = repr(
            (
                sorted(asdict(self.config).items()),
                sorted(asdict(self.grid).items()),
                sorted(asdict(self.model).items()),
                sorted(asdict(self.shot).items()),
            )
        )
        return hashlib.sha256(payload.encode()).hexdigest()


def evaluate_speed(model: VelocityModel, z):
    """Speed at depth(s) ``z``.

    Constant inside layers; inside each smoothing band
    ``[z_i - delta/2, z_i + delta/2]`` the speed goes linearly from the layer
    above to the layer below. With ``delta == 0`` a depth exactly on an
    interface takes the speed below it.
    """
    zz = np.asarray(z, dtype=float)
    slop = 1e-9 * max(model.z_max, 1.0)
    if np.any(zz < -slop) or np.any(zz > model.z_max + slop) or np.any(~np.isfinite(zz)):
        raise DomainError(f"depth outside [0, {model.z_max}] m")
    tops = model.interfaces
    speeds = model.speeds
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    c = speeds[np.searchsorted(tops, zz, side="right")]
    half = 0.5 * model.delta
    if half > 0:
        for i, zi in enumerate(tops):
            band = np.abs(zz - zi) <= half
            frac = (zz[band] - (zi - half)) / model.delta
            c[band] = speeds[i] + (speeds[i + 1] - speeds[i]) * frac
    return float(c[0]) if scalar else c


def validate(config: RunConfig, grid: Grid, model: VelocityModel, shot: ShotGeometry | None = None,
             check_cfl: bool = False) -> RunPlan:
    """Check every invariant and return a :class:`RunPlan`.

    Raises :class:`ConfigError` listing all violations. ``check_cfl`` adds
    the stability condition of the finite-difference reference solver.
    """
    problems = []

    def need(ok, name, msg):
        if not ok:
            problems.append((name, msg))

    tops = model.interfaces
    need(model.z_max > 0, "model.z_max", f"must be > 0, got {model.z_max}")
    need(np.all(np.diff(tops) > 0), "model.layers", "layer tops must be strictly increasing")
    need(np.all((tops > 0) & (tops < model.z_max)), "model.layers",
         f"layer tops must lie in (0, {model.z_max})")
    need(np.all(model.speeds > 0) and model.speed_below > 0, "model.speeds", "all speeds must be > 0")
    need(model.rho > 0, "model.rho", f"must be > 0, got {model.rho}")
    need(model.delta >= 0, "model.delta", f"must be >= 0, got {model.delta}")
    bounds = np.concatenate(([0.0], tops, [model.z_max]))
    thinnest = float(np.min(np.diff(bounds))) if bounds.size > 1 else model.z_max
    need(model.delta <= thinnest, "model.delta", f"must be <= thinnest layer ({thinnest} m)")

    need(grid.dx > 0, "grid.dx", "must be > 0")
    need(grid.dz > 0, "grid.dz", "must be > 0")
    need(grid.dt > 0, "grid.dt", "must be > 0")
    need(is_power_of_two(grid.nx), "grid.nx", f"must be a power of two, got {grid.nx}")
    need(is_power_of_two(grid.nt), "grid.nt", f"must be a power of two, got {grid.nt}")
    need(isinstance(grid.nz, (int, np.integer)) and grid.nz > 0, "grid.nz", "must be a positive integer")
    need(math.isclose(grid.nz * grid.dz, model.z_max, rel_tol=1e-9), "grid.nz",
         f"nz*dz = {grid.nz * grid.dz} must equal z_max = {model.z_max}")
    if model.delta > 0:
        need(math.isclose(grid.dz, model.delta, rel_tol=1e-9), "grid.dz",
             f"must equal the smoothing width delta = {model.delta} when delta > 0")
    need(isinstance(grid.fd_refinement, (int, np.integer)) and grid.fd_refinement >= 1,
         "grid.fd_refinement", "must be an integer >= 1")
    need(grid.sponge_cells >= 0, "grid.sponge_cells", "must be >= 0")

    need(config.epsilon in (0, 1), "run.epsilon", f"must be 0 or 1, got {config.epsilon}")
    need(isinstance(config.n_multiples, (int, np.integer)) and config.n_multiples >= 0,
         "run.n_multiples", "must be an integer >= 0")
    need(config.omega_max > 0, "run.omega_max", "must be > 0")
    need(0 < config.angle_cutoff < 90, "run.angle_cutoff", "must lie in (0, 90) degrees")
    need(0 <= config.taper_width < config.angle_cutoff, "run.taper_width",
         "must lie in [0, angle_cutoff)")
    need(config.damping >= 0, "run.damping", "must be >= 0")
    if grid.dt > 0:
        nyquist = math.pi / grid.dt
        need(config.omega_max <= nyquist, "run.omega_max", f"must be <= Nyquist {nyquist:.6g} rad/s")

    source_index = receiver_index = 0
    if shot is None:
        shot = ShotGeometry(source_x=0.0, receiver_depth=0.0)
    width = grid.nx * grid.dx
    need(0 <= shot.source_x < width, "shot.source_x", f"must lie in [0, {width})")
    need(0 <= shot.receiver_depth <= model.z_max, "shot.receiver_depth", f"must lie in [0, {model.z_max}]")
    need(shot.peak_frequency > 0, "shot.peak_frequency", "must be > 0")
    if grid.dx > 0 and grid.dz > 0:
        source_index = int(round(shot.source_x / grid.dx))
        receiver_index = int(round(shot.receiver_depth / grid.dz))
        need(math.isclose(source_index * grid.dx, shot.source_x, abs_tol=1e-6 * grid.dx),
             "shot.source_x", "must lie on a grid node")
        need(math.isclose(receiver_index * grid.dz, shot.receiver_depth, abs_tol=1e-6 * grid.dz),
             "shot.receiver_depth", "must lie on a depth node")

    if check_cfl and not problems:
        from .fd import cfl_problem

        msg = cfl_problem(grid, model)
        need(msg is None, "grid.dt", msg)

    if problems:
        raise ConfigError(problems)
    speeds = evaluate_speed(model, np.minimum(grid.z, model.z_max))
    return RunPlan(config, grid, model, shot, source_index, receiver_index, np.atleast_1d(speeds))


# -- config files -----------------------------------------------------------

_KEYS = {
    "model": {"layers", "delta", "rho", "c_sup", "c_inf", "z_max"},
    "grid": {"dx", "dz", "nx", "nz", "dt", "nt", "fd_refinement", "fd_substeps", "sponge_cells"},
    "shot": {"source_x", "receiver_depth", "peak_frequency"},
    "run": {"epsilon", "multiples", "max_frequency", "transmission", "angle_cutoff",
            "taper_width", "damping"},
}


def parse_layers(text: str) -> tuple:
    """``"2500:2400, 4000:3000"`` -> ``((2500.0, 2400.0), (4000.0, 3000.0))``."""
    out = []
    for item in text.replace(",", " ").split():
        depth, _, speed = item.partition(":")
        if not speed:
            raise ConfigError([("model.layers", f"expected depth:speed, got {item!r}")])
        out.append((float(depth), float(speed)))
    return tuple(out)


def load_config(path) -> RunPlan:
    """Read a ``key = value`` config file and validate it.

    Unknown sections or keys raise :class:`ConfigError`.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError([("file", str(exc))]) from None
    return plan_from_parser(parser)


def loads_config(text: str) -> RunPlan:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([("file", str(exc))]) from None
    return plan_from_parser(parser)


def plan_from_parser(parser: configparser.ConfigParser) -> RunPlan:
    problems = []
    for section in parser.sections():
        if section not in _KEYS:
            problems.append((section, "unknown section"))
            continue
        for key in parser[section]:
            if key not in _KEYS[section]:
                problems.append((f"{section}.{key}", "unknown key"))
    for section in ("model", "grid", "shot"):
        if not parser.has_section(section):
            problems.append((section, "missing section"))
    if problems:
        raise ConfigError(problems)

    m, g, s = parser["model"], parser["grid"], parser["shot"]
    r = parser["run"] if parser.has_section("run") else {}
    try:
        dz, nz = float(g["dz"]), int(g["nz"])
        layers = parse_layers(m.get("layers", ""))
        c_sup = float(m["c_sup"])
        model = VelocityModel(
            layers=layers,
            delta=float(m.get("delta", 0.0)),
            rho=float(m.get("rho", 1000.0)),
            z_max=float(m.get("z_max", nz * dz)),
            c_sup=c_sup,
            c_inf=float(m["c_inf"]) if "c_inf" in m else None,
        )
        grid = Grid(
            dx=float(g["dx"]), dz=dz, nx=int(g["nx"]), nz=nz, dt=float(g["dt"]), nt=int(g["nt"]),
            fd_refinement=int(g.get("fd_refinement", 1)),
            fd_substeps=int(g["fd_substeps"]) if "fd_substeps" in g else None,
            sponge_cells=int(g.get("sponge_cells", 50)),
        )
        shot = ShotGeometry(
            source_x=float(s["source_x"]),
            receiver_depth=float(s["receiver_depth"]),
            peak_frequency=float(s.get("peak_frequency", 25.0)),
        )
        defaults = RunConfig()
        transmission = str(r.get("transmission", "true")).strip().lower()
        if transmission not in ("true", "false", "yes", "no", "1", "0", "on", "off"):
            raise ConfigError([("run.transmission", f"not a boolean: {transmission!r}")])
        config = RunConfig(
            epsilon=int(r.get("epsilon", defaults.epsilon)),
            n_multiples=int(r.get("multiples", defaults.n_multiples)),
            omega_max=2 * math.pi * float(r["max_frequency"]) if "max_frequency" in r
            else 2 * math.pi * 3.0 * shot.peak_frequency,
            include_transmission=transmission in ("true", "yes", "1", "on"),
            angle_cutoff=float(r.get("angle_cutoff", defaults.angle_cutoff)),
            taper_width=float(r.get("taper_width", defaults.taper_width)),
            damping=float(r.get("damping", defaults.damping)),
        )
    except KeyError as exc:
        raise ConfigError([(str(exc.args[0]), "missing required key")]) from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError([("value", str(exc))]) from None
    return validate(config, grid, model, shot)


def dump_config(plan: RunPlan) -> str:
    """Inverse of :func:`loads_config` (canonical text form)."""
    m, g, s, r = plan.model, plan.grid, plan.shot, plan.config
    lines = ["[model]"]
    lines.append("layers = " + ", ".join(f"{d!r}:{c!r}" for d, c in m.layers))
    lines += [f"delta = {m.delta!r}", f"rho = {m.rho!r}", f"z_max = {m.z_max!r}", f"c_sup = {m.c_sup!r}"]
    if m.c_inf is not None:
        lines.append(f"c_inf = {m.c_inf!r}")
    lines += ["", "[grid]"]
    for key in ("dx", "dz", "nx", "nz", "dt", "nt", "fd_refinement", "sponge_cells"):
        lines.append(f"{key} = {getattr(g, key)!r}")
    if g.fd_substeps is not None:
        lines.append(f"fd_substeps = {g.fd_substeps!r}")
    lines += ["", "[shot]", f"source_x = {s.source_x!r}", f"receiver_depth = {s.receiver_depth!r}",
              f"peak_frequency = {s.peak_frequency!r}", "", "[run]",
              f"epsilon = {r.epsilon}", f"multiples = {r.n_multiples}",
              f"max_frequency = {r.omega_max / (2 * math.pi)!r}",
              f"transmission = {str(r.include_transmission).lower()}",
              f"angle_cutoff = {r.angle_cutoff!r}", f"taper_width = {r.taper_width!r}",
              f"damping = {r.damping!r}", ""]
    return "\n".join(lines)


def write_config(plan: RunPlan, path) -> Path:
    path = Path(path)
    path.write_text(dump_config(plan))
    return path
