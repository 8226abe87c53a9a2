"""Bremmer-series engines for one temporal frequency.

Depth nodes are z_l = l*dz, l = 0..L. Step l joins nodes l and l+1 and is
split at its midpoint: the upper half-step propagates with the slowness of
node l, the lower half-step with that of node l+1, and the coupling symbols
(t0_dz, r0_dz), which compare the two nodes, act at the midpoint. A speed
jump between two nodes therefore reflects halfway between them. At the
coupling point:

* a down-going field that arrived from above is transmitted with
  ``1 + t0_dz`` (epsilon=0) or ``exp(+t0_dz)`` (epsilon=1) and reflected
  into the up-going field with ``-r0_dz``;
* an up-going field that arrived from below is transmitted with
  ``1 - t0_dz`` or ``exp(-t0_dz)`` and reflected down with ``+r0_dz``.

Every engine here processes a single frequency; callers loop over the
frequency window (see :mod:`oneway.simulate`).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .symbols import angle_taper, phase_shift, transmission_log, vertical_slowness

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepTables:
    """Per-step symbols for one frequency, each of shape (L, nk)."""

    upper: np.ndarray  # half-step phase with the slowness of node l
    lower: np.ndarray  # half-step phase with the slowness of node l + 1
    t0: np.ndarray
    r0: np.ndarray
    gamma: np.ndarray  # (L + 1, nk)
    taper: np.ndarray  # (L + 1, nk)

    @property
    def phase(self) -> np.ndarray:
        """Full-step phase factor."""
        return self.upper * self.lower

    @property
    def n_steps(self) -> int:
        return self.upper.shape[0]


def step_tables(speeds, kx, omega, dz, include_transmission=True, angle_cutoff=85.0, taper_width=5.0):
    """Build :class:`StepTables` for node speeds ``speeds`` (length L+1).

    With ``include_transmission=False`` the transmission symbol is zero but
    reflection is kept. Coupling is restricted to wavenumbers that pass the
    angle taper on both sides of a step.
    """
    speeds = np.asarray(speeds, dtype=float)
    kx = np.asarray(kx, dtype=float)
    c = speeds[:, None]
    gamma = vertical_slowness(c, kx[None, :], omega)
    taper = angle_taper(c, kx[None, :], omega, angle_cutoff, taper_width)
    half = phase_shift(gamma, omega, 0.5 * dz) * np.sqrt(taper)
    same = (speeds[1:] == speeds[:-1])[:, None]
    t = np.where(same, 0.0, transmission_log(gamma[:-1], gamma[1:]) * (taper[:-1] * taper[1:]))
    r0 = np.where(same, 0.0, -t)
    t0 = t if include_transmission else np.zeros_like(t)
    return StepTables(half[:-1], half[1:], t0, r0, gamma, taper)


@dataclass
class BremmerAccumulator:
    """Working tables and per-multiple results of one frequency sweep.

    ``result[m]`` is V-(0) after 2m+1 reflections; ``down[m]`` and ``up[m]``
    hold the down-going field with 2m reflections and the up-going field
    with 2m+1 reflections at every depth node.
    """

    temp: np.ndarray
    tab_plus: np.ndarray
    tab_minus: np.ndarray
    result: np.ndarray
    down: np.ndarray
    up: np.ndarray


@dataclass
class BremmerTerms:
    """Individual series terms V^(j), j = 0..J-1, at every depth node."""

    plus: np.ndarray  # (J, L + 1, nk)
    minus: np.ndarray


def first_term_downgoing(s_plus, tables: StepTables, epsilon: int = 0) -> np.ndarray:
    """V+^(0) at every node: the source marched down with g+^epsilon."""
    L = tables.n_steps
    out = np.zeros((L + 1,) + np.shape(s_plus), dtype=complex)
    out[0] = s_plus
    through = np.exp(tables.t0) if epsilon else np.ones_like(tables.t0)
    for l in range(L):
        out[l + 1] = tables.lower[l] * (through[l] * (tables.upper[l] * out[l]))
    return out


def _sweep(s_plus, tables: StepTables, n_multiples: int, through_down, through_up) -> BremmerAccumulator:
    # TEMP carries the field being marched, TAB- the up-going sources left by
    # the down pass, TAB+ the down-going sources left by the previous up pass.
    L, nk = tables.upper.shape
    upper, lower, r0 = tables.upper, tables.lower, tables.r0
    acc = BremmerAccumulator(
        temp=np.zeros(nk, dtype=complex),
        tab_plus=np.zeros((L + 1, nk), dtype=complex),
        tab_minus=np.zeros((L + 1, nk), dtype=complex),
        result=np.zeros((n_multiples + 1, nk), dtype=complex),
        down=np.zeros((n_multiples + 1, L + 1, nk), dtype=complex),
        up=np.zeros((n_multiples + 1, L + 1, nk), dtype=complex),
    )
    tab_plus, tab_minus = acc.tab_plus, acc.tab_minus
    for m in range(n_multiples + 1):
        temp = np.array(s_plus, dtype=complex) if m == 0 else np.zeros(nk, dtype=complex)
        down = acc.down[m]
        for l in range(L):
            down[l] = temp
            temp = upper[l] * temp
            tab_minus[l] = -r0[l] * temp
            temp = lower[l] * (through_down[l] * temp + tab_plus[l])
        down[L] = temp

        temp = np.zeros(nk, dtype=complex)
        up = acc.up[m]
        for l in range(L - 1, -1, -1):
            temp = lower[l] * temp
            tab_plus[l] = r0[l] * temp
            temp = upper[l] * (through_up[l] * temp + tab_minus[l])
            up[l] = temp
        acc.result[m] = temp
    acc.temp = temp
    return acc


def sweep_epsilon0(s_plus, tables: StepTables, n_multiples: int) -> BremmerAccumulator:
    """Transmission in the right-hand side, summed per reflection order.

    One down pass and one up pass per multiple index m. The down pass sums
    every term with 2m reflections (any number of transmissions), the up
    pass every term with 2m+1 reflections, so terms 2j and 2j+1 of the
    series come out of the same sweep.
    """
    return _sweep(s_plus, tables, n_multiples, 1.0 + tables.t0, 1.0 - tables.t0)


def sweep_epsilon1(s_plus, tables: StepTables, n_multiples: int) -> BremmerAccumulator:
    """Transmission inside the propagator.

    Alternates V+^(2m) down and V-^(2m+1) up; odd down-going and even
    up-going terms vanish and are never formed.
    """
    return _sweep(s_plus, tables, n_multiples, np.exp(tables.t0), np.exp(-tables.t0))


def sweep(s_plus, tables: StepTables, n_multiples: int, epsilon: int) -> BremmerAccumulator:
    if epsilon == 0:
        return sweep_epsilon0(s_plus, tables, n_multiples)
    if epsilon == 1:
        return sweep_epsilon1(s_plus, tables, n_multiples)
    raise ValueError(f"epsilon must be 0 or 1, got {epsilon}")


def bremmer_terms(s_plus, tables: StepTables, epsilon: int, n_terms: int) -> BremmerTerms:
    """Series terms one at a time, V^(j) = K^epsilon V^(j-1).

    Both components of every term are formed, including the ones that
    vanish identically for epsilon=1 (their coupling weight 1 - epsilon is 0).
    """
    L, nk = tables.upper.shape
    upper, lower, t0, r0 = tables.upper, tables.lower, tables.t0, tables.r0
    w = 1 - epsilon
    down_through = np.exp(t0) if epsilon else np.ones_like(t0)
    up_through = np.exp(-t0) if epsilon else np.ones_like(t0)
    plus = np.zeros((n_terms, L + 1, nk), dtype=complex)
    minus = np.zeros((n_terms, L + 1, nk), dtype=complex)
    if n_terms == 0:
        return BremmerTerms(plus, minus)
    plus[0] = first_term_downgoing(s_plus, tables, epsilon)
    for j in range(1, n_terms):
        p_prev, m_prev = plus[j - 1], minus[j - 1]
        # previous term at the coupling point of every step
        p_mid = upper * p_prev[:-1]
        m_mid = lower * m_prev[1:]
        d = np.zeros(nk, dtype=complex)
        for l in range(L):
            d = lower[l] * (down_through[l] * (upper[l] * d) + w * t0[l] * p_mid[l] + r0[l] * m_mid[l])
            plus[j, l + 1] = d
        u = np.zeros(nk, dtype=complex)
        for l in range(L - 1, -1, -1):
            u = upper[l] * (up_through[l] * (lower[l] * u) - w * t0[l] * m_mid[l] - r0[l] * p_mid[l])
            minus[j, l] = u
    return BremmerTerms(plus, minus)


def first_multiple(acc: BremmerAccumulator, m: int = 1) -> np.ndarray:
    """Recorded V-(0) of the m-th multiple (2m+1 reflections)."""
    if m < 1 or acc.result.shape[0] <= m:
        raise ValueError(f"multiple {m} not computed (have {acc.result.shape[0] - 1})")
    return acc.result[m]


def assemble_recorded_field(per_multiple, truncation: int | None = None) -> np.ndarray:
    """Sum of per-multiple records 0..truncation, added in index order."""
    per_multiple = np.asarray(per_multiple)
    stop = per_multiple.shape[0] if truncation is None else truncation + 1
    total = np.zeros(per_multiple.shape[1:], dtype=per_multiple.dtype)
    for m in range(min(stop, per_multiple.shape[0])):
        total = total + per_multiple[m]
    return total
