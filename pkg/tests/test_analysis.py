import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oneway.analysis import (
    HEADER_BYTES,
    GridMismatchError,
    QCurve,
    Seismogram,
    SectionFormatError,
    SpectralSection,
    amplitude_vs_offset,
    near_shot_error,
    neighborhood_halfwidth,
    q_metric,
    read_qcurve,
    read_section,
    write_qcurve,
    write_section,
    write_section_csv,
)


def seis(values, provenance="one_way", depth=0.0):
    return Seismogram(values, 1e-3, 10.0, depth, provenance)


def test_identical_sections_give_unit_q(rng):
    s = seis(rng.standard_normal((64, 16)))
    curve = q_metric(s, s, shot_x=80.0)
    assert np.all(curve.defined) and np.all(curve.q == 1.0)


def test_all_zero_and_single_spike():
    assert np.all(amplitude_vs_offset(seis(np.zeros((32, 8)))) == 0)
    v = np.zeros((32, 8))
    v[5, 3] = -2.0
    np.testing.assert_array_equal(amplitude_vs_offset(seis(v)), [0, 0, 0, 2, 0, 0, 0, 0])
    curve = q_metric(seis(v, "full_wave"), seis(v))
    assert list(curve.defined) == [False] * 3 + [True] + [False] * 4
    assert np.isnan(curve.q[0]) and curve.q[3] == 1.0


def test_q_is_ratio_of_peaks_and_scale_invariant(rng):
    one = rng.standard_normal((64, 16))
    full = one * np.linspace(0.5, 2.0, 16)
    curve = q_metric(seis(full, "full_wave"), seis(one))
    np.testing.assert_allclose(curve.q, np.linspace(0.5, 2.0, 16), rtol=1e-12)
    scaled = q_metric(seis(1000.0 * full, "full_wave"), seis(1000.0 * one))
    np.testing.assert_allclose(scaled.q, curve.q, rtol=1e-12)


def test_grid_mismatch_rejected():
    a = seis(np.ones((8, 4)))
    with pytest.raises(GridMismatchError):
        q_metric(a, seis(np.ones((8, 8))))
    with pytest.raises(GridMismatchError):
        q_metric(a, seis(np.ones((8, 4)), depth=100.0))


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        seis(np.array([[np.nan]]))


def test_neighbourhood_and_near_shot():
    x = np.arange(11) * 10.0
    q = np.array([1.2, 1.1, 1.04, 1.03, 1.01, 1.0, 0.99, 0.97, 1.2, 1.0, 1.0])
    curve = QCurve(x, q, np.ones(11, bool), 50.0)
    # left extent 30 m (to x=20), right extent 20 m (stops before x=80)
    assert neighborhood_halfwidth(curve) == pytest.approx(25.0)
    assert near_shot_error(curve, 10.0) == pytest.approx(0.0)
    bad = QCurve(x, np.full(11, 1.5), np.ones(11, bool), 50.0)
    assert neighborhood_halfwidth(bad) == 0.0


def test_section_round_trip(tmp_path, rng):
    s = seis(rng.standard_normal((32, 8)).astype(np.float32), "full_wave", 700.0)
    path = write_section(tmp_path / "a.owwf", s)
    assert path.stat().st_size == HEADER_BYTES + 32 * 8 * 4
    back = read_section(path)
    assert np.array_equal(back.values, s.values)
    assert (back.dt, back.dx, back.receiver_depth, back.provenance) == (1e-3, 10.0, 700.0, "full_wave")


def test_complex_section_round_trip(tmp_path, rng):
    v = (rng.standard_normal((4, 8)) + 1j * rng.standard_normal((4, 8))).astype(np.complex64)
    write_section(tmp_path / "c.owwf", SpectralSection(v, 1.0, 0.5, 0.0, "spectrum_m1"))
    back = read_section(tmp_path / "c.owwf")
    assert isinstance(back, SpectralSection)
    assert np.array_equal(back.values, v) and back.provenance == "spectrum_m1"


def test_bad_files_rejected(tmp_path):
    path = write_section(tmp_path / "a.owwf", seis(np.ones((4, 4))))
    raw = bytearray(path.read_bytes())
    raw[:5] = b"XXXX1"
    (tmp_path / "bad.owwf").write_bytes(bytes(raw))
    with pytest.raises(SectionFormatError):
        read_section(tmp_path / "bad.owwf")
    (tmp_path / "short.owwf").write_bytes(path.read_bytes()[:-4])
    with pytest.raises(SectionFormatError):
        read_section(tmp_path / "short.owwf")
    with pytest.raises(SectionFormatError):
        write_section(tmp_path / "x.owwf", seis(np.ones((4, 4)), provenance="has space"))


def test_csv_shape(tmp_path):
    s = seis(np.arange(24.0).reshape(6, 4))
    table = np.loadtxt(write_section_csv(tmp_path / "s.csv", s), delimiter=",")
    assert table.shape == (6, 5)
    np.testing.assert_allclose(table[:, 0], s.t)


def test_qcurve_file_round_trip(tmp_path):
    curve = QCurve(np.arange(4) * 10.0, np.array([1.0, np.nan, 0.5, 2.0]),
                   np.array([True, False, True, True]), 15.0)
    back = read_qcurve(write_qcurve(tmp_path / "q.csv", curve))
    assert back.shot_x == 15.0
    np.testing.assert_array_equal(back.defined, curve.defined)
    np.testing.assert_allclose(back.q[back.defined], curve.q[curve.defined])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), a=st.floats(1e-3, 1e3), b=st.floats(1e-3, 1e3))
def test_q_scales_with_amplitudes(seed, a, b):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((16, 8))
    curve = q_metric(seis(a * v, "full_wave"), seis(b * v))
    np.testing.assert_allclose(curve.q, a / b, rtol=1e-12)
