import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oneway.spectral import (
    TimeSignal,
    TransformLengthError,
    forward_time_transform,
    frequency_window,
    inverse_spatial_transform,
    inverse_time_transform,
    ricker_delay,
    ricker_gaussian,
    ricker_rate,
    ricker_source,
    spatial_transform,
    wavenumbers,
)

NU = 25.0
ALPHA = np.pi * NU
T_STAR = 1.0 / NU


def test_rate_zero_at_delay():
    assert ricker_delay(NU) == pytest.approx(0.04)
    assert ricker_rate(T_STAR, NU) == 0.0


def test_rate_against_numerical_derivative():
    t = T_STAR + 1.0 / (ALPHA * np.sqrt(2.0))
    h = 1e-6 * T_STAR
    fd = (ricker_gaussian(t + h, NU) - ricker_gaussian(t - h, NU)) / (2 * h)
    expected = -ALPHA * np.sqrt(2.0) * np.exp(-0.5)
    assert ricker_rate(t, NU) == pytest.approx(expected, rel=1e-12)
    assert fd == pytest.approx(expected, rel=1e-6)


def test_rate_derivative_converges_second_order():
    t = T_STAR + 0.3 / ALPHA
    hs = np.array([1e-3, 5e-4, 2.5e-4, 1.25e-4])
    err = [abs((ricker_gaussian(t + h, NU) - ricker_gaussian(t - h, NU)) / (2 * h) - ricker_rate(t, NU)) for h in hs]
    slope = np.polyfit(np.log(hs), np.log(err), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.05)


def test_source_values():
    assert ricker_source(T_STAR, NU) == pytest.approx(-2 * ALPHA**2)
    tau = np.linspace(0, 0.04, 17)
    np.testing.assert_allclose(ricker_source(T_STAR + tau, NU), ricker_source(T_STAR - tau, NU), rtol=1e-13)
    # the integral telescopes to q(end) - q(start), zero once the support is covered
    t = np.linspace(T_STAR - 0.2, T_STAR + 0.2, 40001)
    s = ricker_source(t, NU)
    integral = np.sum(0.5 * (s[1:] + s[:-1]) * np.diff(t))
    assert abs(integral) < 1e-9 * np.max(np.abs(s))


def test_impulse_has_flat_spectrum():
    x = np.zeros(64)
    x[0] = 1.0
    np.testing.assert_allclose(forward_time_transform(TimeSignal(x, 1e-3)), np.ones(33))


@pytest.mark.parametrize("eta", [0.0, 2 * np.pi * 0.5])
def test_time_round_trip(eta):
    dt, nt = 1e-3, 1024
    x = ricker_rate(np.arange(nt) * dt, NU)
    back = inverse_time_transform(forward_time_transform(TimeSignal(x, dt), eta), nt, dt, eta).samples
    assert np.max(np.abs(back - x)) < 1e-12 * np.max(np.abs(x))


def test_ricker_spectrum_peaks_at_two_alpha():
    dt, nt = 1e-3, 4096
    t = np.arange(nt) * dt
    spec = np.abs(forward_time_transform(TimeSignal(ricker_rate(t, NU), dt)))
    w = 2 * np.pi * np.fft.rfftfreq(nt, dt)
    dw = w[1]
    # |q-hat| ~ w exp(-w^2 / (4 alpha^2)) peaks at sqrt(2) alpha; S-hat ~ w^2 ... peaks at 2 alpha
    assert abs(w[np.argmax(spec)] - np.sqrt(2) * ALPHA) <= dw
    spec_s = np.abs(forward_time_transform(TimeSignal(ricker_source(t, NU), dt)))
    assert abs(w[np.argmax(spec_s)] - 2 * ALPHA) <= dw


def test_non_power_of_two_rejected():
    with pytest.raises(TransformLengthError):
        forward_time_transform(TimeSignal(np.zeros(100), 1e-3))
    with pytest.raises(TransformLengthError):
        inverse_time_transform(np.zeros(10), 64, 1e-3)
    with pytest.raises(TransformLengthError):
        spatial_transform(np.zeros(48))
    with pytest.raises(TransformLengthError):
        inverse_spatial_transform(np.zeros(64), nx=32)


def test_frequency_window_excludes_dc_and_is_contiguous():
    win = frequency_window(1024, 1e-3, 2 * np.pi * 75)
    assert win.omega_bins[0] == 1
    assert np.all(np.diff(win.omega_bins) == 1)
    assert win.omega[-1] <= 2 * np.pi * 75 * (1 + 1e-12)


def test_wavenumber_grid():
    k = wavenumbers(8, 10.0)
    expected = 2 * np.pi * np.arange(-4, 4) / 80.0
    np.testing.assert_allclose(np.sort(k), expected)


def test_constant_row_and_plane_wave():
    nx = 32
    f = spatial_transform(np.full(nx, 3.0))
    assert f[0] == pytest.approx(3.0 * nx)
    assert np.all(np.abs(f[1:]) < 1e-12)
    k0 = 5
    wave = np.exp(2j * np.pi * k0 * np.arange(nx) / nx)
    spec = np.abs(spatial_transform(wave))
    assert np.count_nonzero(spec > 1e-9) == 1 and np.argmax(spec) == k0


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), a=st.floats(-10, 10), b=st.floats(-10, 10))
def test_linearity_and_parseval(seed, a, b):
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal((2, 64))
    z = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    fx = forward_time_transform(TimeSignal(x, 1.0))
    fy = forward_time_transform(TimeSignal(y, 1.0))
    fxy = forward_time_transform(TimeSignal(a * x + b * y, 1.0))
    scale = 1 + abs(a) + abs(b)
    assert np.max(np.abs(fxy - (a * fx + b * fy))) < 1e-12 * scale * np.max(np.abs(fx) + np.abs(fy))
    # Parseval, counting the interior rfft bins twice
    weights = np.full(33, 2.0)
    weights[[0, -1]] = 1.0
    assert np.sum(weights * np.abs(fx) ** 2) / 64 == pytest.approx(np.sum(x**2), rel=1e-10)
    fz = spatial_transform(z)
    assert np.sum(np.abs(fz) ** 2) / 64 == pytest.approx(np.sum(np.abs(z) ** 2), rel=1e-10)
    np.testing.assert_allclose(inverse_spatial_transform(fz), z, atol=1e-12 * np.max(np.abs(z)))
    np.testing.assert_allclose(spatial_transform(a * z), a * fz, atol=1e-12 * (1 + abs(a)) * np.max(np.abs(fz)))
