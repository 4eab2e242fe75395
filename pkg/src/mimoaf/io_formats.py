"""File formats for signals, surfaces, heatmaps, and check reports.

Signals travel as SIG1 (plain text, one complex sample per line) or as the
binary twin SIGB; surfaces as the binary SUR1 container or CSV.  All float
text uses 17 significant digits, which round-trips IEEE doubles exactly,
and the binary layouts are fixed little-endian, so identical inputs
produce byte-identical files.

SUR1 layout: magic "SUR1", then little-endian u32 n_tau, u32 n_nu,
f64 tau0, f64 dtau, f64 nu0, f64 dnu, then n_tau*n_nu complex values as
interleaved (re, im) f64 pairs, row-major in lag.  The container stores
axes only; it is also used for spatial (fs, fs') grids.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .ambiguity import AmbiguitySurface
from .errors import FileFormatError
from .properties import CheckReport
from .signals import SampledSignal

__all__ = [
    "write_signal",
    "read_signal",
    "write_surface",
    "read_surface",
    "write_surface_csv",
    "read_surface_csv",
    "write_ppm",
    "write_report",
]

_SIGB_MAGIC = b"SIGB"
_SUR1_MAGIC = b"SUR1"


def _f(x: float) -> str:
    return f"{x:.17g}"


def write_signal(path: str | Path, signal: SampledSignal, binary: bool = False) -> None:
    path = Path(path)
    if binary:
        blob = bytearray(_SIGB_MAGIC)
        blob += struct.pack("<I", signal.n)
        blob += struct.pack("<dd", signal.dt, signal.t0)
        blob += signal.samples.astype("<c16").tobytes()
        path.write_bytes(bytes(blob))
        return
    lines = [f"n={signal.n}", f"dt={_f(signal.dt)}", f"t0={_f(signal.t0)}"]
    for z in signal.samples:
        lines.append(f"{_f(z.real)},{_f(z.imag)}")
    path.write_text("\n".join(lines) + "\n")


def _read_signal_binary(blob: bytes, path: Path) -> SampledSignal:
    header = struct.calcsize("<Idd")
    if len(blob) < 4 + header:
        raise FileFormatError(f"{path}: truncated binary signal")
    n, dt, t0 = struct.unpack_from("<Idd", blob, 4)
    body = blob[4 + header:]
    if len(body) != 16 * n:
        raise FileFormatError(f"{path}: expected {n} samples, found {len(body) // 16}")
    samples = np.frombuffer(body, dtype="<c16").astype(np.complex128)
    return SampledSignal(samples, dt, t0)


def read_signal(path: str | Path) -> SampledSignal:
    """Read a SIG1 text or SIGB binary signal file (auto-detected)."""
    path = Path(path)
    blob = path.read_bytes()
    if blob[:4] == _SIGB_MAGIC:
        return _read_signal_binary(blob, path)
    try:
        text = blob.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FileFormatError(f"{path}: neither SIGB nor text") from exc
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 4:
        raise FileFormatError(f"{path}: too short for a SIG1 file")
    header: dict[str, str] = {}
    for ln in lines[:3]:
        key, _, val = ln.partition("=")
        header[key.strip()] = val.strip()
    try:
        n = int(header["n"])
        dt = float(header["dt"])
        t0 = float(header["t0"])
    except (KeyError, ValueError) as exc:
        raise FileFormatError(f"{path}: bad SIG1 header") from exc
    body = lines[3:]
    if len(body) != n:
        raise FileFormatError(f"{path}: header says {n} samples, found {len(body)}")
    samples = np.empty(n, dtype=np.complex128)
    for i, ln in enumerate(body):
        try:
            re_s, im_s = ln.split(",")
            samples[i] = complex(float(re_s), float(im_s))
        except ValueError as exc:
            raise FileFormatError(f"{path}: bad sample line {i + 4}: {ln!r}") from exc
    return SampledSignal(samples, dt, t0)


def write_surface(
    path: str | Path,
    values: np.ndarray | AmbiguitySurface,
    tau0: float | None = None,
    dtau: float | None = None,
    nu0: float | None = None,
    dnu: float | None = None,
) -> None:
    """Write a SUR1 file from a surface or a raw 2-D array with axis data."""
    if isinstance(values, AmbiguitySurface):
        s = values
        values, tau0, dtau = s.values, float(s.tau_axis[0]), s.d_tau
        nu0, dnu = float(s.nu_axis[0]), s.d_nu
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 2:
        raise FileFormatError("surface values must be 2-D")
    blob = bytearray(_SUR1_MAGIC)
    blob += struct.pack("<II", arr.shape[0], arr.shape[1])
    blob += struct.pack("<dddd", tau0, dtau, nu0, dnu)
    blob += np.ascontiguousarray(arr).astype("<c16").tobytes()
    Path(path).write_bytes(bytes(blob))


def read_surface(path: str | Path) -> AmbiguitySurface:
    """Read a SUR1 file.

    The container carries axes only; the result is tagged "linear" with
    dt set to the lag step and t0 to 0 (SUR1 does not store signal
    provenance)."""
    path = Path(path)
    blob = path.read_bytes()
    if blob[:4] != _SUR1_MAGIC:
        raise FileFormatError(f"{path}: not a SUR1 file")
    header = struct.calcsize("<IIdddd")
    if len(blob) < 4 + header:
        raise FileFormatError(f"{path}: truncated SUR1 header")
    n_tau, n_nu, tau0, dtau, nu0, dnu = struct.unpack_from("<IIdddd", blob, 4)
    body = blob[4 + header:]
    if len(body) != 16 * n_tau * n_nu:
        raise FileFormatError(f"{path}: SUR1 payload size mismatch")
    values = np.frombuffer(body, dtype="<c16").astype(np.complex128)
    values = values.reshape(n_tau, n_nu)
    tau_axis = tau0 + dtau * np.arange(n_tau)
    nu_axis = nu0 + dnu * np.arange(n_nu)
    return AmbiguitySurface(values, tau_axis, nu_axis, "linear", dtau, 0.0)


def write_surface_csv(path: str | Path, s: AmbiguitySurface) -> None:
    """CSV with axis header comments and one `tau,nu,re,im` line per cell."""
    out = [
        f"# n_tau={s.n_lag} n_nu={s.n_doppler}",
        f"# tau0={_f(float(s.tau_axis[0]))} dtau={_f(s.d_tau)} "
        f"nu0={_f(float(s.nu_axis[0]))} dnu={_f(s.d_nu)}",
        "tau,nu,re,im",
    ]
    for i, tau in enumerate(s.tau_axis):
        row = s.values[i]
        for j, nu in enumerate(s.nu_axis):
            z = row[j]
            out.append(f"{_f(tau)},{_f(nu)},{_f(z.real)},{_f(z.imag)}")
    Path(path).write_text("\n".join(out) + "\n")


def read_surface_csv(path: str | Path) -> AmbiguitySurface:
    path = Path(path)
    lines = path.read_text().splitlines()
    if len(lines) < 3 or not lines[0].startswith("#") or not lines[1].startswith("#"):
        raise FileFormatError(f"{path}: missing CSV surface header")
    meta: dict[str, str] = {}
    for ln in lines[:2]:
        for tok in ln.lstrip("#").split():
            key, _, val = tok.partition("=")
            meta[key] = val
    try:
        n_tau = int(meta["n_tau"])
        n_nu = int(meta["n_nu"])
        tau0, dtau = float(meta["tau0"]), float(meta["dtau"])
        nu0, dnu = float(meta["nu0"]), float(meta["dnu"])
    except (KeyError, ValueError) as exc:
        raise FileFormatError(f"{path}: bad CSV surface header") from exc
    body = lines[3:]
    if len(body) != n_tau * n_nu:
        raise FileFormatError(f"{path}: expected {n_tau * n_nu} rows, found {len(body)}")
    values = np.empty(n_tau * n_nu, dtype=np.complex128)
    for i, ln in enumerate(body):
        parts = ln.split(",")
        if len(parts) != 4:
            raise FileFormatError(f"{path}: bad CSV row {i + 4}")
        values[i] = complex(float(parts[2]), float(parts[3]))
    values = values.reshape(n_tau, n_nu)
    tau_axis = tau0 + dtau * np.arange(n_tau)
    nu_axis = nu0 + dnu * np.arange(n_nu)
    return AmbiguitySurface(values, tau_axis, nu_axis, "linear", dtau, 0.0)


def write_ppm(
    path: str | Path,
    values: np.ndarray,
    db_floor: float = -60.0,
    scaling: str = "db",
) -> None:
    """8-bit grayscale P5 heatmap of |values| (rows = lag, columns = Doppler).

    "db" maps [db_floor, 0] dB relative to the peak onto [0, 255];
    "linear" maps [0, peak].  A zero surface renders black.
    """
    if scaling not in ("db", "linear"):
        raise FileFormatError(f"unknown scaling {scaling!r}")
    mag = np.abs(np.asarray(values))
    peak = float(mag.max())
    if peak <= 0.0:
        img = np.zeros(mag.shape)
    elif scaling == "linear":
        img = mag / peak
    else:
        if db_floor >= 0:
            raise FileFormatError(f"db_floor must be negative, got {db_floor}")
        with np.errstate(divide="ignore"):
            db = 20.0 * np.log10(mag / peak)
        img = 1.0 - np.clip(db, db_floor, 0.0) / db_floor
    data = np.round(img * 255.0).astype(np.uint8)
    h, w = data.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    Path(path).write_bytes(header + data.tobytes())


def write_report(path: str | Path, reports: list[CheckReport]) -> None:
    Path(path).write_text("".join(r.format_line() + "\n" for r in reports))
