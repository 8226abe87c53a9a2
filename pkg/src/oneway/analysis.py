"""Seismograms, the Q(x) amplitude ratio, and section file formats.

Binary sections are a 64-byte ASCII header followed by little-endian
float32 samples in row-major order (complex grids store interleaved
real/imaginary pairs). The header reads

    OWWF1 <R|C> <n0> <n1> <d0> <d1> <depth> <provenance>

padded with spaces and terminated by a newline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = "OWWF1"
HEADER_BYTES = 64
UNDEFINED_FLOOR = 1e-6


class SectionFormatError(ValueError):
    pass


class GridMismatchError(ValueError):
    pass


@dataclass
class Seismogram:
    """Pressure p(t, x) recorded at one depth; ``values`` has shape (nt, nx)."""

    values: np.ndarray
    dt: float
    dx: float
    receiver_depth: float
    provenance: str = "one_way"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError(f"expected a (nt, nx) array, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("seismogram contains non-finite values")

    @property
    def nt(self) -> int:
        return self.values.shape[0]

    @property
    def nx(self) -> int:
        return self.values.shape[1]

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.nt) * self.dt

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.nx) * self.dx


@dataclass
class SpectralSection:
    """A complex grid (e.g. per-multiple spectra) in the same file format."""

    values: np.ndarray
    d0: float
    d1: float
    depth: float
    provenance: str = "spectrum"


@dataclass
class QCurve:
    """Q(x) = max_t |p_full| / max_t |p_oneway|; NaN where undefined."""

    x: np.ndarray
    q: np.ndarray
    defined: np.ndarray
    shot_x: float
    pair: tuple = field(default=("full_wave", "one_way"))

    @property
    def error(self) -> np.ndarray:
        return np.abs(self.q - 1.0)

    def restrict(self, mask) -> "QCurve":
        mask = np.asarray(mask, dtype=bool)
        return QCurve(self.x[mask], self.q[mask], self.defined[mask], self.shot_x, self.pair)


def amplitude_vs_offset(seis: Seismogram) -> np.ndarray:
    return np.max(np.abs(seis.values), axis=0)


def q_metric(full: Seismogram, oneway: Seismogram, shot_x: float = 0.0, floor: float = UNDEFINED_FLOOR) -> QCurve:
    """Per-trace ratio of peak amplitudes, full-wave over one-way.

    Traces where either peak is below ``floor`` times that section's global
    peak are flagged undefined (q = NaN).
    """
    if full.values.shape != oneway.values.shape:
        raise GridMismatchError(f"shapes differ: {full.values.shape} vs {oneway.values.shape}")
    for name in ("dt", "dx", "receiver_depth"):
        a, b = getattr(full, name), getattr(oneway, name)
        if not np.isclose(a, b, rtol=1e-9, atol=0.0):
            raise GridMismatchError(f"{name} differs: {a} vs {b}")
    a_full = amplitude_vs_offset(full)
    a_one = amplitude_vs_offset(oneway)
    defined = (a_full > floor * a_full.max()) & (a_one > floor * a_one.max()) & (a_one > 0)
    q = np.full(a_full.shape, np.nan)
    q[defined] = a_full[defined] / a_one[defined]
    return QCurve(full.x, q, defined, shot_x, (full.provenance, oneway.provenance))


def near_shot_error(curve: QCurve, halfwidth: float) -> float:
    """Smallest |Q - 1| among defined traces within ``halfwidth`` of the shot."""
    sel = curve.defined & (np.abs(curve.x - curve.shot_x) <= halfwidth)
    if not np.any(sel):
        return float("nan")
    return float(np.min(curve.error[sel]))


def neighborhood_halfwidth(curve: QCurve, tol: float = 0.05) -> float:
    """Half-width of the contiguous |Q - 1| < tol region around the shot.

    Walks outward from the trace nearest the shot on both sides and stops at
    the first trace that is undefined or out of tolerance; returns the mean
    of the two one-sided extents (0 if the shot trace itself fails).
    """
    i0 = int(np.argmin(np.abs(curve.x - curve.shot_x)))
    ok = curve.defined & (curve.error < tol)
    if not ok[i0]:
        return 0.0
    extents = []
    for step in (-1, 1):
        i = i0
        while 0 <= i + step < ok.size and ok[i + step]:
            i += step
        extents.append(abs(curve.x[i] - curve.x[i0]))
    return float(np.mean(extents))


# -- files --------------------------------------------------------------------


def _header(kind, n0, n1, d0, d1, depth, provenance):
    text = f"{MAGIC} {kind} {n0} {n1} {d0!r} {d1!r} {depth!r} {provenance}"
    if len(text) > HEADER_BYTES - 1 or any(ch.isspace() for ch in provenance):
        raise SectionFormatError(f"header does not fit in {HEADER_BYTES} bytes: {text!r}")
    return (text.ljust(HEADER_BYTES - 1) + "\n").encode("ascii")


def write_section(path, section) -> Path:
    """Write a :class:`Seismogram` or :class:`SpectralSection` (float32 payload)."""
    path = Path(path)
    if isinstance(section, Seismogram):
        values = section.values
        d0, d1, depth, prov = section.dt, section.dx, section.receiver_depth, section.provenance
    else:
        values = section.values
        d0, d1, depth, prov = section.d0, section.d1, section.depth, section.provenance
    if values.ndim != 2:
        raise SectionFormatError("only 2D grids can be written")
    kind = "C" if np.iscomplexobj(values) else "R"
    n0, n1 = values.shape
    if kind == "C":
        payload = np.empty((n0, n1, 2), dtype="<f4")
        payload[..., 0] = values.real
        payload[..., 1] = values.imag
    else:
        payload = np.asarray(values, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_header(kind, n0, n1, float(d0), float(d1), float(depth), prov))
        fh.write(np.ascontiguousarray(payload).tobytes())
    return path


def read_section(path):
    """Read a section file; returns a Seismogram (real) or SpectralSection (complex)."""
    raw = Path(path).read_bytes()
    head = raw[:HEADER_BYTES]
    try:
        text = head.decode("ascii")
    except UnicodeDecodeError:
        raise SectionFormatError("header is not ASCII") from None
    parts = text.split()
    if len(raw) < HEADER_BYTES or not text.endswith("\n") or len(parts) != 8 or parts[0] != MAGIC:
        raise SectionFormatError(f"bad section header in {path}")
    kind = parts[1]
    if kind not in ("R", "C"):
        raise SectionFormatError(f"unknown grid kind {kind!r}")
    try:
        n0, n1 = int(parts[2]), int(parts[3])
        d0, d1, depth = float(parts[4]), float(parts[5]), float(parts[6])
    except ValueError:
        raise SectionFormatError(f"bad numeric header field in {path}") from None
    width = 2 if kind == "C" else 1
    expected = n0 * n1 * width * 4
    if len(raw) - HEADER_BYTES != expected:
        raise SectionFormatError(f"payload is {len(raw) - HEADER_BYTES} bytes, expected {expected}")
    data = np.frombuffer(raw, dtype="<f4", offset=HEADER_BYTES)
    if kind == "C":
        data = data.reshape(n0, n1, 2)
        return SpectralSection(data[..., 0] + 1j * data[..., 1], d0, d1, depth, parts[7])
    return Seismogram(data.reshape(n0, n1).astype(float), d0, d1, depth, parts[7])


def write_section_csv(path, seis: Seismogram) -> Path:
    """Time column followed by one column per receiver."""
    path = Path(path)
    table = np.column_stack([seis.t, seis.values])
    header = "t," + ",".join(f"x={x:g}" for x in seis.x)
    np.savetxt(path, table, delimiter=",", header=header, fmt="%.9g")
    return path


def write_qcurve(path, curve: QCurve) -> Path:
    path = Path(path)
    table = np.column_stack([curve.x, curve.q, curve.defined.astype(int)])
    header = f"x,q,defined  shot_x={curve.shot_x!r} pair={curve.pair[0]}/{curve.pair[1]}"
    np.savetxt(path, table, delimiter=",", header=header, fmt=["%.9g", "%.9g", "%d"])
    return path


def read_qcurve(path) -> QCurve:
    path = Path(path)
    with open(path) as fh:
        first = fh.readline()
    shot_x = 0.0
    for token in first.split():
        if token.startswith("shot_x="):
            shot_x = float(token.split("=", 1)[1])
    table = np.loadtxt(path, delimiter=",", ndmin=2)
    return QCurve(table[:, 0], table[:, 1], table[:, 2].astype(bool), shot_x)
