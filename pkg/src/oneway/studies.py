"""Comparison studies built on the one-way and full-wave solvers.

Each study takes a validated :class:`RunPlan` (or builds desk-scale ones)
and returns plain numbers or Q-curves, so the same code serves the command
line, the demo scripts and the acceptance tests.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .analysis import QCurve, near_shot_error, neighborhood_halfwidth, q_metric
from .fd import record_seismogram
from .model import Grid, RunConfig, RunPlan, ShotGeometry, VelocityModel, validate
from .simulate import run_oneway

log = logging.getLogger(__name__)

NEAR_SHOT = 100.0  # m, half-width of the "near the shot" window


def desk_grid(nx=256, nt=1024, nz=100, dx=10.0, dt=1e-3, fd_refinement=2) -> Grid:
    """2.56 km x 1 km at 10 m, 1 ms: the default small-scale grid."""
    return Grid(dx=dx, dz=dx, nx=nx, nz=nz, dt=dt, nt=nt, fd_refinement=fd_refinement)


def two_layer_plan(c_top, c_bottom, interface, receiver_depth, grid: Grid | None = None,
                   config: RunConfig | None = None, peak_frequency=25.0) -> RunPlan:
    """Shot in the middle of the surface, one sharp interface."""
    grid = grid or desk_grid()
    model = VelocityModel(layers=((float(interface), float(c_bottom)),), delta=0.0,
                          z_max=grid.nz * grid.dz, c_sup=float(c_top))
    shot = ShotGeometry(grid.nx * grid.dx / 2, float(receiver_depth), peak_frequency)
    return validate(config or RunConfig(n_multiples=0), grid, model, shot)


def with_bottom_speed(plan: RunPlan, speed: float) -> RunPlan:
    """Same plan with the deepest layer's speed replaced."""
    layers = list(plan.model.layers)
    if not layers:
        raise ValueError("model has no layer below the top one")
    layers[-1] = (layers[-1][0], float(speed))
    model = replace(plan.model, layers=tuple(layers))
    return validate(plan.config, plan.grid, model, plan.shot)


def central_mask(curve: QCurve, fraction: float = 0.5) -> np.ndarray:
    """Traces within ``fraction`` of the aperture, centred on the shot."""
    width = curve.x[-1] - curve.x[0] + (curve.x[1] - curve.x[0])
    return np.abs(curve.x - curve.shot_x) <= 0.5 * fraction * width


@dataclass
class TransmissionStudy:
    """Q-curves of several one-way variants against one full-wave run."""

    plan: RunPlan
    curves: dict  # name -> QCurve

    def median_error(self, name, mask=None) -> float:
        c = self.curves[name]
        sel = c.defined if mask is None else c.defined & mask
        return float(np.median(c.error[sel]))

    def min_error(self, name, mask=None) -> float:
        c = self.curves[name]
        sel = c.defined if mask is None else c.defined & mask
        return float(np.min(c.error[sel]))

    def dominance(self, better="eps0", worse="eps1", mask=None) -> float:
        """Fraction of jointly defined traces where ``better`` has the smaller error."""
        a, b = self.curves[better], self.curves[worse]
        sel = a.defined & b.defined
        if mask is not None:
            sel &= mask
        return float(np.mean(a.error[sel] <= b.error[sel]))


VARIANTS = {
    "eps0": dict(epsilon=0),
    "eps1": dict(epsilon=1),
    "no_transmission": dict(epsilon=0, include_transmission=False),
}


def transmission_study(plan: RunPlan, variants=("eps0", "eps1", "no_transmission"), full=None) -> TransmissionStudy:
    """Run the full-wave reference once and every requested one-way variant."""
    if full is None:
        full = record_seismogram(plan)
    curves = {}
    for name in variants:
        sub = plan.with_config(n_multiples=0, **VARIANTS[name])
        one = run_oneway(sub).sections[0]
        curves[name] = q_metric(full, one, plan.shot.source_x)
    return TransmissionStudy(plan, curves)


@dataclass
class SweepRow:
    speed: float
    curve: QCurve
    halfwidth: float
    near_shot: float


def contrast_sweep(plan: RunPlan, speeds, epsilon: int = 1, tol: float = 0.05) -> list:
    """Q-curve per lower-layer speed, with neighbourhood widths and near-shot errors."""
    rows = []
    for c in speeds:
        sub = with_bottom_speed(plan, c).with_config(epsilon=epsilon, n_multiples=0)
        full = record_seismogram(sub)
        curve = q_metric(full, run_oneway(sub).sections[0], sub.shot.source_x)
        row = SweepRow(float(c), curve, neighborhood_halfwidth(curve, tol), near_shot_error(curve, NEAR_SHOT))
        log.info("contrast %g: half-width %.0f m, near-shot error %.4f", c, row.halfwidth, row.near_shot)
        rows.append(row)
    return rows


def zero_offset_trace(plan: RunPlan, m: int = 0) -> np.ndarray:
    res = run_oneway(plan)
    return res.sections[m].values[:, plan.source_index]


def reflection_coefficient(c_top, c_bottom, interface=305.0, grid: Grid | None = None, epsilon=0) -> float:
    """Zero-offset primary peak over the peak of the image-source trace.

    The image source sits at twice the interface depth in the upper medium,
    so the ratio is the normal-incidence reflection coefficient seen by the
    one-way solver.
    """
    grid = grid or desk_grid(fd_refinement=1)
    cfg = RunConfig(epsilon=epsilon, n_multiples=0)
    refl = two_layer_plan(c_top, c_bottom, interface, 0.0, grid, cfg)
    image_grid = replace(grid, nz=int(round(2 * interface / grid.dz)) + 10)
    image = validate(cfg, image_grid, VelocityModel(z_max=image_grid.nz * grid.dz, c_sup=float(c_top)),
                     ShotGeometry(refl.shot.source_x, 2 * interface, refl.shot.peak_frequency))
    a = np.max(np.abs(zero_offset_trace(refl)))
    b = np.max(np.abs(zero_offset_trace(image)))
    return float(np.sign(c_bottom - c_top) * a / b)


def three_layer_plan(speeds, tops=(205.0, 405.0), grid: Grid | None = None, config: RunConfig | None = None) -> RunPlan:
    grid = grid or desk_grid(fd_refinement=1)
    model = VelocityModel(layers=tuple(zip(map(float, tops), map(float, speeds[1:]))),
                          z_max=grid.nz * grid.dz, c_sup=float(speeds[0]))
    shot = ShotGeometry(grid.nx * grid.dx / 2, 0.0)
    return validate(config or RunConfig(), grid, model, shot)


def peak_time(trace, dt, start=0.0, stop=None) -> float:
    """Time of max |trace| inside [start, stop)."""
    i0 = int(round(start / dt))
    i1 = len(trace) if stop is None else int(round(stop / dt))
    return (i0 + int(np.argmax(np.abs(trace[i0:i1])))) * dt


@dataclass
class MultipleMeasurement:
    reflection: float  # analytic normal-incidence coefficient of the upper interface
    delay: float  # first multiple minus second primary, s
    ray_delay: float  # 2 (z2 - z1) / c2
    amplitude: float  # peak |p| of the m=1 section at zero offset


def first_multiple_study(contrast, tops=(205.0, 405.0), c_top=1600.0, grid=None, epsilon=0,
                         angle_cutoff=60.0, taper_width=10.0) -> MultipleMeasurement:
    """Layers c, c(1+k), c(1+k)^2 with receivers at the surface."""
    speeds = [c_top, c_top * (1 + contrast), c_top * (1 + contrast) ** 2]
    cfg = RunConfig(epsilon=epsilon, n_multiples=1, angle_cutoff=angle_cutoff, taper_width=taper_width)
    plan = three_layer_plan(speeds, tops, grid, cfg)
    res = run_oneway(plan)
    primary = res.sections[0].values[:, plan.source_index]
    multiple = res.sections[1].values[:, plan.source_index]
    dt = plan.grid.dt
    z1, z2 = tops
    t2 = 2 * z1 / speeds[0] + 2 * (z2 - z1) / speeds[1]
    t_primary = peak_time(primary, dt, t2, t2 + 0.15)
    t_multiple = peak_time(multiple, dt)
    return MultipleMeasurement((speeds[1] - speeds[0]) / (speeds[1] + speeds[0]),
                               t_multiple - t_primary, 2 * (z2 - z1) / speeds[1],
                               float(np.max(np.abs(multiple))))


def epsilon_difference(contrast, tops=(205.0, 405.0), c_top=1600.0, c_deep=2400.0, grid=None) -> float:
    """Relative difference of the second primary between epsilon=0 and epsilon=1.

    The upper interface has the given contrast, the deeper one is fixed, so
    the two variants differ only by the two-way transmission through the
    upper interface.
    """
    speeds = [c_top, c_top * (1 + contrast), c_deep]
    amps = []
    for eps in (0, 1):
        plan = three_layer_plan(speeds, tops, grid, RunConfig(epsilon=eps, n_multiples=0))
        tr = zero_offset_trace(plan)
        z1, z2 = tops
        t2 = 2 * z1 / speeds[0] + 2 * (z2 - z1) / speeds[1]
        i0 = int(round(t2 / plan.grid.dt))
        amps.append(np.max(np.abs(tr[i0:i0 + 150])))
    return float(abs(amps[0] - amps[1]) / amps[1])


def loglog_slope(x, y) -> float:
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])
