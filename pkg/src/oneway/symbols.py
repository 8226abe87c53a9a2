"""Symbols of the factorised one-way system in a stratified medium.

The 2x2 symbol ``[[0, rho], [1/(rho c^2) - kx^2/(w^2 rho), 0]]`` has
eigenvalues +/- gamma0 with gamma0 = sqrt(1/c^2 - kx^2/w^2), the vertical
slowness. Composition with ``P0 = [[rho, rho], [gamma0, -gamma0]]`` splits
(pressure, vertical velocity) into down- and up-going amplitudes V+ and V-,
with pressure = rho (V+ + V-).

Interface coupling is carried by the dimensionless per-step symbols
``t0_dz = -1/2 ln(gamma_below / gamma_above)`` (transmission) and
``r0_dz = -t0_dz`` (reflection).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

GLANCING_FLOOR = 1e-4  # |gamma0| >= GLANCING_FLOOR / c


class Region(enum.Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    GLANCING = "glancing"


@dataclass(frozen=True)
class SlownessSample:
    gamma0: complex
    region: Region
    c: float
    kx: float
    omega: float


@dataclass(frozen=True)
class EigenDecomposition:
    P0: np.ndarray
    P0_inv: np.ndarray
    M0: np.ndarray


@dataclass(frozen=True)
class InterfaceSymbols:
    t0_dz: complex
    r0_dz: complex
    depth: float = float("nan")


class Decomposition(NamedTuple):
    plus: np.ndarray
    minus: np.ndarray
    glancing: np.ndarray


def vertical_slowness(c, kx, omega, floor: float = GLANCING_FLOOR):
    """gamma0(c, kx, w) for arrays; ``omega`` may be complex (w - i eta).

    The branch makes w*gamma0 have a non-negative real part (down-going)
    and a non-positive imaginary part, so exp(-i dz w gamma0) never grows.
    For real w that is the positive root in the propagating region and
    -i sqrt(kx^2/w^2 - 1/c^2) in the evanescent one. Magnitudes are clamped
    from below at ``floor / c``.
    """
    c = np.asarray(c, dtype=float)
    omega = np.asarray(omega)
    kz2 = (omega / c) ** 2 - np.asarray(kx) ** 2
    w = -np.asarray(kz2, dtype=complex)
    w = w.real + 1j * np.abs(w.imag)  # keep the signed zero off the branch cut
    gamma = -1j * np.sqrt(w) / omega
    if floor:
        small = np.abs(gamma) < floor / c
        if np.any(small):
            gamma = np.where(small, floor / c + 0j, gamma)
    return gamma


def classify_and_slowness(c: float, kx: float, omega: float, tol: float = 1e-9) -> SlownessSample:
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    if not c > 0:
        raise ValueError(f"c must be > 0, got {c}")
    k2 = (omega / c) ** 2
    rel = (kx**2 - k2) / k2
    if abs(rel) <= tol:
        region = Region.GLANCING
    elif rel < 0:
        region = Region.HYPERBOLIC
    else:
        region = Region.ELLIPTIC
    gamma = complex(vertical_slowness(c, kx, omega))
    return SlownessSample(gamma, region, float(c), float(kx), float(omega))


def symbol_matrix(c, kx, omega, rho) -> np.ndarray:
    return np.array([[0.0, rho], [1.0 / (rho * c**2) - kx**2 / (omega**2 * rho), 0.0]], dtype=complex)


def eigendecomposition(sample: SlownessSample, rho: float) -> EigenDecomposition:
    g = sample.gamma0
    P0 = np.array([[rho, rho], [g, -g]], dtype=complex)
    P0_inv = np.array([[0.5 / rho, 0.5 / g], [0.5 / rho, -0.5 / g]], dtype=complex)
    M0 = np.diag([g, -g]).astype(complex)
    return EigenDecomposition(P0, P0_inv, M0)


def decompose(p, vz, gamma, rho, c=None) -> Decomposition:
    """(pressure, vertical velocity) -> (V+, V-) = P0^-1 (p, vz).

    With ``c`` given, components whose slowness sits on the glancing floor
    are set to zero and reported in ``glancing``.
    """
    gamma = np.asarray(gamma)
    plus = 0.5 * np.asarray(p) / rho + 0.5 * np.asarray(vz) / gamma
    minus = 0.5 * np.asarray(p) / rho - 0.5 * np.asarray(vz) / gamma
    if c is None:
        glancing = np.zeros(np.shape(plus), dtype=bool)
    else:
        glancing = np.broadcast_to(np.abs(gamma) <= GLANCING_FLOOR / np.asarray(c) * (1 + 1e-12),
                                   np.shape(plus))
        plus = np.where(glancing, 0, plus)
        minus = np.where(glancing, 0, minus)
    return Decomposition(plus, minus, glancing)


def compose(plus, minus, gamma, rho):
    """(V+, V-) -> (pressure, vertical velocity) = P0 (V+, V-)."""
    plus, minus = np.asarray(plus), np.asarray(minus)
    return rho * (plus + minus), np.asarray(gamma) * (plus - minus)


def transmission_log(gamma_above, gamma_below):
    """t0_dz = -1/2 ln(gamma_below / gamma_above), principal branch."""
    return -0.5 * np.log(np.asarray(gamma_below) / np.asarray(gamma_above))


def interface_symbols(gamma_above, gamma_below, depth: float = float("nan"), floor: float = 0.0):
    if np.any(np.abs(gamma_above) <= floor) or np.any(np.abs(gamma_below) <= floor):
        raise ValueError("vertical slowness at or below the glancing floor")
    t0 = transmission_log(gamma_above, gamma_below)
    if np.ndim(t0) == 0:
        t0 = complex(t0)
    return InterfaceSymbols(t0, -t0, depth)


def angle_taper(c, kx, omega, cutoff: float = 85.0, width: float = 5.0):
    """Dip filter on the propagation angle asin(|kx| c / w).

    1 below ``cutoff - width`` degrees, cosine roll-off to 0 at ``cutoff``,
    0 beyond (including every evanescent wavenumber).
    """
    s = np.abs(np.asarray(kx)) * np.asarray(c) / np.abs(np.real(omega))
    theta = np.degrees(np.arcsin(np.minimum(s, 1.0)))
    start = cutoff - width
    if width > 0:
        ramp = 0.5 * (1 + np.cos(np.pi * np.clip((theta - start) / width, 0.0, 1.0)))
    else:
        ramp = np.ones_like(theta)
    return np.where(theta >= cutoff, 0.0, np.where(theta <= start, 1.0, ramp))


def phase_shift(gamma, omega, dz):
    return np.exp(-1j * dz * np.asarray(omega) * np.asarray(gamma))


def propagator_step(field, gamma, omega, dz, direction="down", epsilon=0, t0_dz=0.0, taper=1.0):
    """One depth step of the one-way propagator g(+/-)^epsilon.

    Multiplies by exp(-i dz w gamma0) and, when ``epsilon == 1``, by the
    transmission exponential exp(+t0_dz) going down or exp(-t0_dz) going up.
    """
    if dz <= 0:
        raise ValueError("dz must be > 0")
    if direction not in ("down", "up"):
        raise ValueError(f"direction must be 'down' or 'up', got {direction!r}")
    out = np.asarray(field) * phase_shift(gamma, omega, dz) * taper
    if epsilon:
        sign = 1.0 if direction == "down" else -1.0
        out = out * np.exp(sign * np.asarray(t0_dz))
    return out
