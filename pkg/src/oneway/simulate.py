"""Frequency-domain driver for the one-way Bremmer solver.

For every bin of the frequency window the source is decomposed, the
Bremmer sweep runs over all requested multiples, and the field at the
receiver depth is composed back to pressure. The bins are independent and
may be processed by a thread pool; the gather is always in bin order.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bremmer
from .analysis import Seismogram
from .model import RunPlan
from .spectral import (
    TimeSignal,
    forward_time_transform,
    frequency_window,
    inverse_spatial_transform,
    inverse_time_transform,
    ricker_rate,
    spatial_transform,
    wavenumbers,
)

log = logging.getLogger(__name__)

WORKERS_ENV = "ONEWAY_WORKERS"


@dataclass
class OneWayResult:
    """Per-multiple seismograms and the spectra they came from.

    ``spectra[m, i, :]`` is the composed pressure at the receiver depth in
    the wavenumber domain for window bin ``i`` and multiple ``m``.
    """

    plan: RunPlan
    sections: list  # Seismogram per multiple index m = 0..N
    spectra: np.ndarray
    omega_bins: np.ndarray
    snapshots: dict | None = None

    @property
    def total(self) -> Seismogram:
        values = bremmer.assemble_recorded_field([s.values for s in self.sections])
        first = self.sections[0]
        return Seismogram(values, first.dt, first.dx, first.receiver_depth, "one_way")


def source_spectrum(plan: RunPlan) -> np.ndarray:
    """q-hat on the full real-FFT axis, damped by the run's imaginary shift."""
    g = plan.grid
    q = ricker_rate(g.t, plan.shot.peak_frequency)
    return forward_time_transform(TimeSignal(q, g.dt), plan.config.damping)


def source_row(plan: RunPlan) -> np.ndarray:
    """Spatial spectrum of a point source on the grid (delta / dx)."""
    row = np.zeros(plan.grid.nx)
    row[plan.source_index] = 1.0 / plan.grid.dx
    return spatial_transform(row)


def resolve_workers(workers: int | None = None) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", WORKERS_ENV, env)
    return max(1, int(workers or 1))


def solve_bin(plan: RunPlan, omega: complex, q_hat: complex, s_row: np.ndarray, kx: np.ndarray,
              keep_depth: bool = False):
    """One frequency: returns (per-multiple receiver spectra, depth field or None)."""
    cfg = plan.config
    tables = bremmer.step_tables(plan.speeds, kx, omega, plan.grid.dz, cfg.include_transmission,
                                 cfg.angle_cutoff, cfg.taper_width)
    # F = (0, q_hat * delta); S+ = q_hat / (2 gamma0), the S- half is discarded
    s_plus = q_hat * s_row / (2.0 * tables.gamma[0]) * tables.taper[0]
    acc = bremmer.sweep(s_plus, tables, cfg.n_multiples, cfg.epsilon)
    l_rec = plan.receiver_index
    if l_rec == 0:
        rec = acc.result
    else:
        rec = acc.down[:, l_rec] + acc.up[:, l_rec]
    rho = plan.model.rho
    depth = rho * (acc.down + acc.up).sum(axis=0) if keep_depth else None
    return rho * rec, depth


def run_oneway(plan: RunPlan, workers: int | None = None, snapshot_times=None) -> OneWayResult:
    """Synthesize the one-way seismograms for every multiple 0..N.

    ``snapshot_times`` (seconds) additionally returns p(x, z, t) on the
    depth grid at those times, summed over multiples.
    """
    g, cfg = plan.grid, plan.config
    window = frequency_window(g.nt, g.dt, cfg.omega_max)
    q_hat = source_spectrum(plan)
    s_row = source_row(plan)
    kx = wavenumbers(g.nx, g.dx)
    n_m = cfg.n_multiples + 1
    keep = snapshot_times is not None and len(snapshot_times) > 0
    log.info("one-way run: %d bins, %d multiples, epsilon=%d; source S- component discarded",
             window.omega_bins.size, n_m, cfg.epsilon)

    def job(i):
        w = window.omega[i] - 1j * cfg.damping
        return solve_bin(plan, w, q_hat[window.omega_bins[i]], s_row, kx, keep)

    n_workers = resolve_workers(workers)
    idx = range(window.omega_bins.size)
    if n_workers > 1:
        with ThreadPoolExecutor(n_workers) as pool:
            outputs = list(pool.map(job, idx))
    else:
        outputs = [job(i) for i in idx]

    spectra = np.zeros((n_m, window.omega_bins.size, g.nx), dtype=complex)
    for i, (rec, _) in enumerate(outputs):
        spectra[:, i] = rec
    full = np.zeros((n_m, g.nt // 2 + 1, g.nx), dtype=complex)
    full[:, window.omega_bins] = inverse_spatial_transform(spectra, g.nx)
    sections = []
    for m in range(n_m):
        trace = inverse_time_transform(full[m].T, g.nt, g.dt, cfg.damping).samples.T
        sections.append(Seismogram(np.ascontiguousarray(trace), g.dt, g.dx, plan.shot.receiver_depth, "one_way"))

    snapshots = None
    if keep:
        depth = np.stack([d for _, d in outputs])  # (bins, L + 1, nk)
        field = inverse_spatial_transform(depth, g.nx)
        snapshots = {float(t): _evaluate_at_time(field, window, g.nt, g.dt, cfg.damping, t)
                     for t in snapshot_times}
    return OneWayResult(plan, sections, spectra, window.omega_bins, snapshots)


def _evaluate_at_time(field, window, nt, dt, eta, t):
    # irfft evaluated at a single time: bins strictly inside (0, Nyquist) count twice
    weights = np.where(window.omega_bins == nt // 2, 1.0, 2.0)
    phase = np.exp(1j * window.omega * t) * weights
    return np.real(np.tensordot(phase, field, axes=(0, 0))) / nt * np.exp(eta * t)
