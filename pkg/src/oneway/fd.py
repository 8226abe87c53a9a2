"""Full-wave reference: explicit finite differences for the acoustic equation.

Solves (1/c^2) p_tt - lap p = S with second-order leapfrog in time and the
fourth-order centred Laplacian in space, starting from p = p_t = 0. A point
source rho * S(t) / (dx dz) is added at the shot node, which matches the
pressure normalization of the one-way solver.

The physical grid (nx columns, nz + 1 depth nodes) may be refined by an
integer factor and is padded on every side by a sponge. Rows above z = 0
carry the speed of the upper half-space, rows below z_max the bottom speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import Seismogram
from .model import Grid, RunPlan, VelocityModel, evaluate_speed
from .spectral import ricker_source

# von Neumann bound for leapfrog + 4th-order Laplacian: c dt sqrt(1/dx^2 + 1/dz^2) <= sqrt(3)/2
SCHEME_BOUND = math.sqrt(3.0) / 2.0
CFL_SAFETY = 0.9
STENCIL = (-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0)
BUFFER_CELLS = 5
SPONGE_STRENGTH = 0.35
GHOST = 2


class CflError(ValueError):
    def __init__(self, message, suggested_dt):
        super().__init__(message)
        self.suggested_dt = suggested_dt


def _max_speed(model: VelocityModel) -> float:
    return float(max(np.max(model.speeds), model.speed_below))


def courant(grid: Grid, model: VelocityModel, substeps: int) -> float:
    r = grid.fd_refinement
    dx, dz = grid.dx / r, grid.dz / r
    return _max_speed(model) * grid.dt / substeps * math.sqrt(1 / dx**2 + 1 / dz**2)


def stable_substeps(grid: Grid, model: VelocityModel) -> int:
    """Smallest number of solver steps per output sample that satisfies the CFL margin."""
    c1 = courant(grid, model, 1)
    return max(1, math.ceil(c1 / (CFL_SAFETY * SCHEME_BOUND) - 1e-12))


def suggested_dt(grid: Grid, model: VelocityModel) -> float:
    """Largest output dt that is stable with the configured substeps."""
    substeps = grid.fd_substeps or 1
    # shaved by a few ulps so the suggestion itself passes the check
    return grid.dt * CFL_SAFETY * SCHEME_BOUND / courant(grid, model, substeps) * (1 - 1e-12)


def cfl_problem(grid: Grid, model: VelocityModel):
    """None if stable, otherwise a message with a suggested step."""
    if grid.fd_substeps is None:
        return None
    c = courant(grid, model, grid.fd_substeps)
    if c <= CFL_SAFETY * SCHEME_BOUND:
        return None
    return (f"CFL number {c:.4f} exceeds {CFL_SAFETY} x {SCHEME_BOUND:.4f}; "
            f"use dt <= {suggested_dt(grid, model):.6g} s or fd_substeps >= {stable_substeps(grid, model)}")


def sponge_profile(n_inner: int, n_sponge: int, strength: float = SPONGE_STRENGTH) -> np.ndarray:
    """1 inside, exp(-(strength * d)^2) in the sponge with d in (0, 1] towards the edge."""
    prof = np.ones(n_inner + 2 * n_sponge)
    if n_sponge:
        d = np.arange(n_sponge, 0, -1) / n_sponge
        g = np.exp(-((strength * d) ** 2))
        prof[:n_sponge] = g
        prof[-n_sponge:] = g[::-1]
    return prof


@dataclass
class FdMedium:
    """Coefficient arrays and index maps of one padded, refined grid."""

    c: np.ndarray  # (nz_tot, nx_tot)
    c2dt2: np.ndarray
    damp: np.ndarray
    dx: float
    dz: float
    dt: float
    substeps: int
    refinement: int
    x0: int  # column of physical x = 0
    z0: int  # row of physical z = 0
    source_amplitude: float  # rho / (dx dz)

    @property
    def shape(self):
        return self.c.shape

    def column(self, ix_physical: int) -> int:
        return self.x0 + ix_physical * self.refinement

    def row(self, iz_physical: int) -> int:
        return self.z0 + iz_physical * self.refinement


@dataclass
class FdState:
    """Two time levels with a zero ghost frame of width 2; ``n`` counts steps."""

    p_prev: np.ndarray
    p_curr: np.ndarray
    p_next: np.ndarray
    n: int = 0

    def inner(self, arr=None):
        a = self.p_curr if arr is None else arr
        return a[GHOST:-GHOST, GHOST:-GHOST]


def build_medium(plan: RunPlan, sponge_strength: float = SPONGE_STRENGTH) -> FdMedium:
    g, m = plan.grid, plan.model
    r = g.fd_refinement
    dx, dz = g.dx / r, g.dz / r
    substeps = g.fd_substeps or stable_substeps(g, m)
    nb = g.sponge_cells * r
    buf = BUFFER_CELLS * r
    nx_in = (g.nx - 1) * r + 1
    nz_in = g.nz * r + 1
    nx_tot = nx_in + 2 * nb
    nz_tot = nz_in + 2 * (nb + buf)
    z_rows = (np.arange(nz_tot) - (nb + buf)) * dz
    inside = (z_rows >= 0) & (z_rows <= m.z_max)
    c_col = np.empty(nz_tot)
    c_col[z_rows < 0] = m.c_sup
    c_col[z_rows > m.z_max] = m.speed_below
    c_col[inside] = evaluate_speed(m, np.clip(z_rows[inside], 0.0, m.z_max))
    c = np.repeat(c_col[:, None], nx_tot, axis=1)
    dt = g.dt / substeps
    damp = np.outer(sponge_profile(nz_in + 2 * buf, nb, sponge_strength), sponge_profile(nx_in, nb, sponge_strength))
    return FdMedium(c, (c * dt) ** 2, damp, dx, dz, dt, substeps, r, nb, nb + buf, m.rho / (dx * dz))


def new_state(medium: FdMedium) -> FdState:
    shape = (medium.shape[0] + 2 * GHOST, medium.shape[1] + 2 * GHOST)
    return FdState(np.zeros(shape), np.zeros(shape), np.zeros(shape))


def laplacian(p: np.ndarray, dx: float, dz: float) -> np.ndarray:
    """4th-order Laplacian of the interior of a ghost-padded array."""
    a, b, c0, _, _ = STENCIL
    nz, nx = p.shape[0] - 2 * GHOST, p.shape[1] - 2 * GHOST
    cz = slice(GHOST, GHOST + nx)
    rz = slice(GHOST, GHOST + nz)
    lap_z = (a * (p[0:nz, cz] + p[4:nz + 4, cz]) + b * (p[1:nz + 1, cz] + p[3:nz + 3, cz])
             + c0 * p[rz, cz]) / dz**2
    lap_x = (a * (p[rz, 0:nx] + p[rz, 4:nx + 4]) + b * (p[rz, 1:nx + 1] + p[rz, 3:nx + 3])
             + c0 * p[rz, cz]) / dx**2
    return lap_z + lap_x


def fd_step(state: FdState, medium: FdMedium, source_value: float, source_cell) -> FdState:
    """Advance by one solver step; ``source_value`` is S(t_n)."""
    inner = (slice(GHOST, -GHOST), slice(GHOST, -GHOST))
    lap = laplacian(state.p_curr, medium.dx, medium.dz)
    if source_value:
        lap[source_cell] += medium.source_amplitude * source_value
    nxt = state.p_next
    nxt[inner] = 2.0 * state.p_curr[inner] - state.p_prev[inner] + medium.c2dt2 * lap
    nxt[inner] *= medium.damp
    state.p_curr[inner] *= medium.damp
    state.p_prev, state.p_curr, state.p_next = state.p_curr, nxt, state.p_prev
    state.n += 1
    return state


def discrete_energy(state: FdState, medium: FdMedium) -> float:
    """Conserved leapfrog energy between the last two levels (exact without sponge or source)."""
    p1, p0 = state.inner(state.p_curr), state.inner(state.p_prev)
    kinetic = np.sum((p1 - p0) ** 2 / medium.c2dt2)
    potential = -np.sum(p1 * laplacian(state.p_prev, medium.dx, medium.dz))
    return float((kinetic + potential) * medium.dx * medium.dz)


def record_row(plan: RunPlan, depth: float) -> int:
    iz = depth / plan.grid.dz
    if not math.isclose(iz, round(iz), abs_tol=1e-6) or not 0 <= round(iz) <= plan.grid.nz:
        raise ValueError(f"receiver depth {depth} m is not on the depth grid")
    return int(round(iz))


def simulate_fullwave(plan: RunPlan, receiver_depths=None, source_x_index: int | None = None,
                      source_depth_index: int = 0, scale: float = 1.0, sponge_strength: float = SPONGE_STRENGTH,
                      energy: bool = False):
    """Run the reference solver and record p(t, x) at the receiver depths.

    Returns a dict depth -> Seismogram (and the energy history when asked).
    Samples are taken every output dt at the physical receiver columns.
    """
    g = plan.grid
    if receiver_depths is None:
        receiver_depths = [plan.shot.receiver_depth]
    rows = {float(d): record_row(plan, d) for d in receiver_depths}
    msg = cfl_problem(g, plan.model)
    if msg:
        raise CflError(msg, suggested_dt(g, plan.model))
    med = build_medium(plan, sponge_strength)
    state = new_state(med)
    ix = plan.source_index if source_x_index is None else source_x_index
    src = (med.row(source_depth_index), med.column(ix))
    cols = med.column(np.arange(g.nx)) + GHOST
    out = {d: np.zeros((g.nt, g.nx)) for d in rows}
    t_fine = np.arange(g.nt * med.substeps) * med.dt
    s = scale * ricker_source(t_fine, plan.shot.peak_frequency)
    history = []
    for k in range(g.nt):
        for d, iz in rows.items():
            out[d][k] = state.p_curr[med.row(iz) + GHOST, cols]
        for j in range(med.substeps):
            n = k * med.substeps + j
            fd_step(state, med, s[n], src)
        if energy:
            history.append(discrete_energy(state, med))
        if not np.isfinite(state.p_curr[GHOST + src[0], GHOST + src[1]]):
            raise FloatingPointError("full-wave solution is not finite")
    seis = {d: Seismogram(v, g.dt, g.dx, d, "full_wave") for d, v in out.items()}
    if energy:
        return seis, np.array(history)
    return seis


def record_seismogram(plan: RunPlan, receiver_depth: float | None = None, **kwargs) -> Seismogram:
    depth = plan.shot.receiver_depth if receiver_depth is None else receiver_depth
    return simulate_fullwave(plan, [depth], **kwargs)[float(depth)]
