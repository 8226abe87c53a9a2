"""Ricker source, time and space Fourier transforms, frequency window.

Time transforms use the kernel exp(-i w t), so d/dt maps to multiplication
by i w. An optional damping ``eta`` evaluates the spectrum at the complex
frequency w - i*eta (the signal is multiplied by exp(-eta t) before the
transform and by exp(+eta t) after the inverse); this keeps periodic
wrap-around of late energy small.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import is_power_of_two


class TransformLengthError(ValueError):
    pass


def _alpha(peak_frequency):
    return np.pi * peak_frequency


def ricker_delay(peak_frequency: float) -> float:
    return 1.0 / peak_frequency


def ricker_gaussian(t, peak_frequency):
    """exp(-alpha^2 (t - t*)^2) with alpha = pi*nu and t* = 1/nu."""
    a = _alpha(peak_frequency)
    tau = np.asarray(t, dtype=float) - ricker_delay(peak_frequency)
    return np.exp(-(a * tau) ** 2)


def ricker_rate(t, peak_frequency):
    """Injection rate q(t): first time derivative of the Ricker Gaussian."""
    a = _alpha(peak_frequency)
    tau = np.asarray(t, dtype=float) - ricker_delay(peak_frequency)
    return -2.0 * a**2 * tau * np.exp(-(a * tau) ** 2)


def ricker_source(t, peak_frequency):
    """Source term S(t) = dq/dt, the second derivative of the Gaussian."""
    a = _alpha(peak_frequency)
    tau = np.asarray(t, dtype=float) - ricker_delay(peak_frequency)
    return (4.0 * a**4 * tau**2 - 2.0 * a**2) * np.exp(-(a * tau) ** 2)


@dataclass(frozen=True)
class TimeSignal:
    samples: np.ndarray
    dt: float

    @property
    def nt(self) -> int:
        return self.samples.shape[-1]

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.nt) * self.dt


@dataclass(frozen=True)
class FrequencyWindow:
    """Contiguous bins 1..n of the real-FFT axis with 0 < w <= omega_max."""

    omega_bins: np.ndarray
    omega: np.ndarray


def angular_frequencies(nt: int, dt: float) -> np.ndarray:
    return 2 * np.pi * np.fft.rfftfreq(nt, dt)


def frequency_window(nt: int, dt: float, omega_max: float) -> FrequencyWindow:
    w = angular_frequencies(nt, dt)
    bins = np.nonzero((w > 0) & (w <= omega_max * (1 + 1e-12)))[0]
    return FrequencyWindow(bins, w[bins])


def _check_length(n, what):
    if not is_power_of_two(int(n)):
        raise TransformLengthError(f"{what} length must be a power of two, got {n}")


def forward_time_transform(signal: TimeSignal, eta: float = 0.0) -> np.ndarray:
    """Real FFT along the last axis; returns nt//2 + 1 bins."""
    _check_length(signal.nt, "time")
    x = signal.samples
    if eta:
        x = x * np.exp(-eta * signal.t)
    return np.fft.rfft(x, axis=-1)


def inverse_time_transform(spectrum, nt: int, dt: float, eta: float = 0.0) -> TimeSignal:
    _check_length(nt, "time")
    spectrum = np.asarray(spectrum)
    if spectrum.shape[-1] != nt // 2 + 1:
        raise TransformLengthError(f"expected {nt // 2 + 1} frequency bins, got {spectrum.shape[-1]}")
    x = np.fft.irfft(spectrum, n=nt, axis=-1)
    if eta:
        x = x * np.exp(eta * np.arange(nt) * dt)
    return TimeSignal(x, dt)


def wavenumbers(nx: int, dx: float) -> np.ndarray:
    """Horizontal wavenumbers in FFT order; as a set, 2 pi {-nx/2..nx/2-1} / (nx dx)."""
    _check_length(nx, "space")
    return 2 * np.pi * np.fft.fftfreq(nx, dx)


def spatial_transform(row, axis: int = -1) -> np.ndarray:
    """x -> kx with kernel exp(-i kx x)."""
    row = np.asarray(row)
    _check_length(row.shape[axis], "space")
    return np.fft.fft(row, axis=axis)


def inverse_spatial_transform(spectrum, nx: int | None = None, axis: int = -1) -> np.ndarray:
    spectrum = np.asarray(spectrum)
    if nx is not None and spectrum.shape[axis] != nx:
        raise TransformLengthError(f"expected {nx} wavenumbers, got {spectrum.shape[axis]}")
    _check_length(spectrum.shape[axis], "space")
    return np.fft.ifft(spectrum, axis=axis)
