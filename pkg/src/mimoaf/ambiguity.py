"""Cross-ambiguity surfaces, Wigner distributions, and MIMO correlation
structure.

The cross-ambiguity of two signals on a common grid is

    chi(u, v)(tau, nu) = dt * sum_n u[n] * conj(v[n + k]) * exp(i 2 pi nu t_n)

with tau = k dt, evaluated on a lag/Doppler grid.  Two lag conventions are
supported: "linear" (zero-filled products over lags -(n-1) .. n-1, the
default) and "cyclic" (mod-n products over lags -n/2 .. n/2-1, which is what
makes Fourier-rotation identities exact on matched grids).

Every FFT-accelerated routine here has a brute-force twin
(:func:`cross_ambiguity_oracle`) computed as a dense matrix product against
the explicit Doppler kernel exp(i 2 pi nu t_n).  The twins share nothing
past the product array, so agreement is a real cross-check.

The Doppler dimension can be processed in thread chunks; set the
MIMO_AMBIG_THREADS environment variable (0 = all cores).  Each lag row is
transformed independently, so the result is bit-identical regardless of
the thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .errors import (
    GridAlignmentError,
    GridMismatchError,
    InvalidParameterError,
    InvariantViolationError,
)
from .signals import SampledSignal

__all__ = [
    "AmbiguitySurface",
    "WignerDistribution",
    "CorrelationMatrix",
    "SteeringConfig",
    "cross_ambiguity",
    "cross_ambiguity_oracle",
    "wigner",
    "ambiguity_from_wigner",
    "correlation_matrix",
    "mimo_ambiguity",
    "mimo_slice_spatial",
    "spatial_integral",
    "mimo_energy_quadrature",
]


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class AmbiguitySurface:
    """Sampled surface over the delay-Doppler plane.

    Attributes:
        values: complex array indexed [lag, doppler].
        tau_axis: delays in seconds, ascending, uniform.
        nu_axis: Doppler frequencies in Hz, ascending, uniform.
        kind: "linear" or "cyclic" lag convention.
        dt: sample spacing of the underlying signals.
        t0: window start of the underlying signals.
    """

    values: npt.NDArray[np.complex128]
    tau_axis: npt.NDArray[np.float64]
    nu_axis: npt.NDArray[np.float64]
    kind: str
    dt: float
    t0: float
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.complex128)
        tau = np.asarray(self.tau_axis, dtype=np.float64)
        nu = np.asarray(self.nu_axis, dtype=np.float64)
        if vals.shape != (tau.size, nu.size):
            raise InvalidParameterError(
                f"values shape {vals.shape} does not match axes ({tau.size}, {nu.size})"
            )
        if self.kind not in ("linear", "cyclic"):
            raise InvalidParameterError(f"unknown surface kind {self.kind!r}")
        object.__setattr__(self, "values", _freeze(vals))
        object.__setattr__(self, "tau_axis", _freeze(tau))
        object.__setattr__(self, "nu_axis", _freeze(nu))

    @property
    def n_lag(self) -> int:
        return self.tau_axis.size

    @property
    def n_doppler(self) -> int:
        return self.nu_axis.size

    @property
    def d_tau(self) -> float:
        return float(self.tau_axis[1] - self.tau_axis[0])

    @property
    def d_nu(self) -> float:
        return float(self.nu_axis[1] - self.nu_axis[0])

    def lag_index(self, tau: float) -> int:
        pos = (tau - self.tau_axis[0]) / self.d_tau
        idx = round(pos)
        if abs(pos - idx) > 1e-6 or not (0 <= idx < self.n_lag):
            raise GridAlignmentError(f"delay {tau} is not on the lag axis")
        return idx

    def doppler_index(self, nu: float) -> int:
        pos = (nu - self.nu_axis[0]) / self.d_nu
        idx = round(pos)
        if abs(pos - idx) > 1e-6 or not (0 <= idx < self.n_doppler):
            raise GridAlignmentError(f"Doppler {nu} is not on the Doppler axis")
        return idx

    def value_at(self, tau: float, nu: float) -> complex:
        return complex(self.values[self.lag_index(tau), self.doppler_index(nu)])

    def energy(self) -> float:
        """Quadrature of |values|^2 over the whole surface."""
        return float(np.sum(np.abs(self.values) ** 2) * self.d_tau * self.d_nu)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get("MIMO_AMBIG_THREADS", "1").strip() or "1"
        try:
            threads = int(raw)
        except ValueError as exc:
            raise InvalidParameterError(
                f"MIMO_AMBIG_THREADS must be an integer, got {raw!r}"
            ) from exc
    if threads < 0:
        raise InvalidParameterError(f"thread count must be >= 0, got {threads}")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads


def _chunked_row_ifft(P: np.ndarray, n_out: int, threads: int) -> np.ndarray:
    if threads <= 1 or P.shape[0] < 2 * threads:
        return np.fft.ifft(P, n=n_out, axis=1)
    out = np.empty((P.shape[0], n_out), dtype=np.complex128)
    bounds = np.linspace(0, P.shape[0], threads + 1).astype(int)

    def work(lo: int, hi: int) -> None:
        out[lo:hi] = np.fft.ifft(P[lo:hi], n=n_out, axis=1)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(work, lo, hi)
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for fut in futures:
            fut.result()
    return out


def _lag_products(
    u: SampledSignal, v: SampledSignal, cyclic: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Rows P[i, n] = u[n] * conj(v[n + lag_i]) for the chosen lag set."""
    n = u.n
    us = u.samples
    vs = v.samples
    if cyclic:
        if n % 2:
            raise InvalidParameterError("cyclic lags require an even sample count")
        lags = np.arange(-(n // 2), n // 2)
        P = np.empty((lags.size, n), dtype=np.complex128)
        for i, k in enumerate(lags):
            P[i] = us * np.conj(np.roll(vs, -int(k)))
        return P, lags
    lags = np.arange(-(n - 1), n)
    P = np.zeros((lags.size, n), dtype=np.complex128)
    for i, k in enumerate(lags):
        k = int(k)
        if k >= 0:
            P[i, : n - k] = us[: n - k] * np.conj(vs[k:])
        else:
            P[i, -k:] = us[-k:] * np.conj(vs[: n + k])
    return P, lags


def _doppler_axis(n_doppler: int, dt: float) -> np.ndarray:
    return np.fft.fftshift(np.fft.fftfreq(n_doppler, d=dt))


def _check_doppler_count(n_doppler: int | None, n: int, cyclic: bool) -> int:
    if n_doppler is None:
        n_doppler = n if cyclic else 4 * n
    if n_doppler < n or n_doppler % 2:
        raise InvalidParameterError(
            f"n_doppler must be an even integer >= {n}, got {n_doppler}"
        )
    return n_doppler


def cross_ambiguity(
    u: SampledSignal,
    v: SampledSignal | None = None,
    n_doppler: int | None = None,
    cyclic: bool = False,
    threads: int | None = None,
) -> AmbiguitySurface:
    """Cross-ambiguity surface of u against v (v = u gives the auto surface).

    The Doppler transform runs as a zero-padded inverse FFT over the sample
    index, then picks up the window phase exp(i 2 pi nu t0) so the result
    matches the absolute-time definition.

    Args:
        u, v: signals on a common grid.
        n_doppler: Doppler bins; defaults to 4n (linear) or n (cyclic).
        cyclic: use mod-n lag products on lags -n/2 .. n/2-1.
        threads: Doppler FFT chunking; None reads MIMO_AMBIG_THREADS.
    """
    if v is None:
        v = u
    u.require_compatible(v)
    n_doppler = _check_doppler_count(n_doppler, u.n, cyclic)
    threads = _resolve_threads(threads)
    P, lags = _lag_products(u, v, cyclic)
    X = np.fft.fftshift(_chunked_row_ifft(P, n_doppler, threads), axes=1)
    nu_axis = _doppler_axis(n_doppler, u.dt)
    X *= n_doppler * u.dt
    X *= np.exp(1j * 2.0 * math.pi * nu_axis * u.t0)[None, :]
    return AmbiguitySurface(
        X, lags * u.dt, nu_axis, "cyclic" if cyclic else "linear", u.dt, u.t0
    )


def cross_ambiguity_oracle(
    u: SampledSignal,
    v: SampledSignal | None = None,
    n_doppler: int | None = None,
    cyclic: bool = False,
) -> AmbiguitySurface:
    """Brute-force twin of :func:`cross_ambiguity`.

    Sums the defining series against the dense kernel exp(i 2 pi nu t_n)
    with absolute sample times.  Quadratic cost; used for cross-checks.
    """
    if v is None:
        v = u
    u.require_compatible(v)
    n_doppler = _check_doppler_count(n_doppler, u.n, cyclic)
    P, lags = _lag_products(u, v, cyclic)
    nu_axis = _doppler_axis(n_doppler, u.dt)
    kernel = np.exp(1j * 2.0 * math.pi * np.outer(u.times, nu_axis))
    X = u.dt * (P @ kernel)
    return AmbiguitySurface(
        X, lags * u.dt, nu_axis, "cyclic" if cyclic else "linear", u.dt, u.t0
    )


@dataclass(frozen=True, eq=False)
class WignerDistribution:
    """Wigner (cross-)distribution sampled on the signal's time grid.

    values[n, l] approximates W(t_n, f_l); for a single signal the surface
    is real up to rounding and its frequency sum recovers |u|^2 exactly.
    """

    values: npt.NDArray[np.complex128]
    time_axis: npt.NDArray[np.float64]
    freq_axis: npt.NDArray[np.float64]
    dt: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _freeze(np.asarray(self.values, dtype=np.complex128)))
        object.__setattr__(self, "time_axis", _freeze(np.asarray(self.time_axis, dtype=np.float64)))
        object.__setattr__(self, "freq_axis", _freeze(np.asarray(self.freq_axis, dtype=np.float64)))

    @property
    def d_freq(self) -> float:
        return float(self.freq_axis[1] - self.freq_axis[0])

    def time_marginal(self) -> npt.NDArray[np.complex128]:
        """Frequency quadrature per time sample; equals u[n] * conj(v[n])."""
        return np.sum(self.values, axis=1) * self.d_freq


def wigner(
    u: SampledSignal, v: SampledSignal | None = None, n_freq: int | None = None
) -> WignerDistribution:
    """Wigner distribution via even-lag products:

        W[n, l] = 2 dt * sum_m u[n+m] conj(v[n-m]) exp(-i 2 pi l m / n_freq)

    sampled at f_l = l / (2 dt n_freq), covering half the Nyquist band.
    Keep signals inside that band (the generators' default padding does).
    """
    if v is None:
        v = u
    u.require_compatible(v)
    n = u.n
    if n_freq is None:
        n_freq = 2 * n
    if n_freq < n or n_freq % 2:
        raise InvalidParameterError(f"n_freq must be an even integer >= {n}")
    us = u.samples
    vs = v.samples
    R = np.zeros((n, n_freq), dtype=np.complex128)
    for ni in range(n):
        m_max = min(ni, n - 1 - ni)
        m = np.arange(-m_max, m_max + 1)
        R[ni, m % n_freq] = us[ni + m] * np.conj(vs[ni - m])
    W = 2.0 * u.dt * np.fft.fftshift(np.fft.fft(R, axis=1), axes=1)
    freq_axis = np.fft.fftshift(np.fft.fftfreq(n_freq, d=2.0 * u.dt))
    return WignerDistribution(W, u.times, freq_axis, u.dt)


def ambiguity_from_wigner(
    w: WignerDistribution,
    tau_axis: npt.NDArray[np.float64],
    nu_axis: npt.NDArray[np.float64],
) -> AmbiguitySurface:
    """Map a Wigner distribution back to the ambiguity plane:

        chi(tau, nu) = exp(-i pi nu tau) *
                       integral W(t, f) exp(i 2 pi nu t) exp(-i 2 pi f tau) dt df

    evaluated by dense quadrature on the requested output axes.  Used as a
    second route to the ambiguity surface.
    """
    tau_axis = np.asarray(tau_axis, dtype=np.float64)
    nu_axis = np.asarray(nu_axis, dtype=np.float64)
    Et = np.exp(1j * 2.0 * math.pi * np.outer(w.time_axis, nu_axis))
    Ef = np.exp(-1j * 2.0 * math.pi * np.outer(w.freq_axis, tau_axis))
    temp = w.values.T @ Et  # (n_freq, n_nu)
    vals = (Ef.T @ temp) * (w.dt * w.d_freq)
    vals *= np.exp(-1j * math.pi * np.outer(tau_axis, nu_axis))
    return AmbiguitySurface(
        vals, tau_axis, nu_axis, "linear", w.dt, float(w.time_axis[0])
    )


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """All pairwise cross-ambiguity surfaces of a waveform set.

    entries[i, j] holds chi(u_i, u_j) on shared axes.  The delay-Doppler
    correlation R_ij(tau, nu) = chi(u_i, u_j)(-tau, nu) is exposed through
    :meth:`delay_doppler`.
    """

    entries: npt.NDArray[np.complex128]
    tau_axis: npt.NDArray[np.float64]
    nu_axis: npt.NDArray[np.float64]
    kind: str
    dt: float
    t0: float

    def __post_init__(self) -> None:
        ent = np.asarray(self.entries, dtype=np.complex128)
        if ent.ndim != 4 or ent.shape[0] != ent.shape[1]:
            raise InvalidParameterError("entries must have shape (M, M, n_lag, n_doppler)")
        object.__setattr__(self, "entries", _freeze(ent))
        object.__setattr__(self, "tau_axis", _freeze(np.asarray(self.tau_axis, dtype=np.float64)))
        object.__setattr__(self, "nu_axis", _freeze(np.asarray(self.nu_axis, dtype=np.float64)))

    @property
    def n_waveforms(self) -> int:
        return self.entries.shape[0]

    def _surface(self, values: np.ndarray) -> AmbiguitySurface:
        return AmbiguitySurface(
            values, self.tau_axis, self.nu_axis, self.kind, self.dt, self.t0
        )

    def chi(self, i: int, j: int) -> AmbiguitySurface:
        return self._surface(self.entries[i, j])

    def delay_doppler(self, i: int, j: int) -> AmbiguitySurface:
        """R_ij(tau, nu) = chi_ij(-tau, nu); the symmetric lag axis makes the
        flip a pure reversal."""
        if self.kind != "linear":
            raise InvalidParameterError("delay_doppler requires the linear lag convention")
        return self._surface(self.entries[i, j][::-1, :])

    def trace_surface(self) -> AmbiguitySurface:
        return self._surface(np.einsum("mmij->ij", self.entries))


def correlation_matrix(
    waveforms: list[SampledSignal],
    n_doppler: int | None = None,
    threads: int | None = None,
) -> CorrelationMatrix:
    """Compute every pairwise cross-ambiguity surface of the set."""
    if len(waveforms) < 1:
        raise InvalidParameterError("need at least one waveform")
    first = waveforms[0]
    for w in waveforms[1:]:
        first.require_compatible(w)
    m = len(waveforms)
    ref = cross_ambiguity(first, first, n_doppler=n_doppler, threads=threads)
    entries = np.empty((m, m, ref.n_lag, ref.n_doppler), dtype=np.complex128)
    entries[0, 0] = ref.values
    for i in range(m):
        for j in range(m):
            if i == 0 and j == 0:
                continue
            entries[i, j] = cross_ambiguity(
                waveforms[i], waveforms[j], n_doppler=n_doppler, threads=threads
            ).values
    return CorrelationMatrix(entries, ref.tau_axis, ref.nu_axis, ref.kind, ref.dt, ref.t0)


@dataclass(frozen=True)
class SteeringConfig:
    """Uniform linear array geometry for spatial beam slices.

    Attributes:
        n_elements: transmit element count M.
        gamma: element spacing in carrier wavelengths.
        n_spatial: quadrature points K on the normalized sine axis [0, 1).
    """

    n_elements: int
    gamma: float
    n_spatial: int

    def __post_init__(self) -> None:
        if self.n_elements < 1:
            raise InvalidParameterError(f"n_elements must be >= 1, got {self.n_elements}")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise InvalidParameterError(f"gamma must be positive, got {self.gamma}")
        if self.n_spatial < 2:
            raise InvalidParameterError(f"n_spatial must be >= 2, got {self.n_spatial}")
        if self.n_spatial <= self.gamma * (self.n_elements - 1):
            raise InvalidParameterError(
                f"n_spatial = {self.n_spatial} cannot resolve steering frequencies up "
                f"to gamma*(M-1) = {self.gamma * (self.n_elements - 1)}"
            )

    @property
    def fs_grid(self) -> npt.NDArray[np.float64]:
        return np.arange(self.n_spatial) / self.n_spatial

    def steering_phases(self, fs: float) -> npt.NDArray[np.complex128]:
        """exp(i 2 pi gamma fs m), m = 0 .. M-1."""
        if not 0.0 <= fs < 1.0:
            raise InvalidParameterError(
                f"spatial frequency must lie in [0, 1), got {fs}"
            )
        return np.exp(
            1j * 2.0 * math.pi * self.gamma * fs * np.arange(self.n_elements)
        )

    def phase_matrix(self) -> npt.NDArray[np.complex128]:
        """(K, M) array of steering phases along the fs grid."""
        return np.exp(
            1j
            * 2.0
            * math.pi
            * self.gamma
            * np.outer(self.fs_grid, np.arange(self.n_elements))
        )

    def require_integer_gamma(self) -> int:
        g = round(self.gamma)
        if abs(self.gamma - g) > 1e-12:
            raise InvalidParameterError(
                f"this identity needs an integer spacing gamma, got {self.gamma}"
            )
        return int(g)


def _require_matching(corr: CorrelationMatrix, cfg: SteeringConfig) -> None:
    if corr.n_waveforms != cfg.n_elements:
        raise GridMismatchError(
            f"correlation matrix holds {corr.n_waveforms} waveforms but the "
            f"array has {cfg.n_elements} elements"
        )


def mimo_ambiguity(
    corr: CorrelationMatrix, cfg: SteeringConfig, fs: float, fs_prime: float
) -> AmbiguitySurface:
    """Spatial slice sum_{m,m'} chi_{m,m'}(tau, nu) exp(i 2 pi gamma (fs m - fs' m'))."""
    _require_matching(corr, cfg)
    a = cfg.steering_phases(fs)
    b = cfg.steering_phases(fs_prime)
    vals = np.einsum("m,p,mpij->ij", a, np.conj(b), corr.entries, optimize=True)
    return AmbiguitySurface(
        vals, corr.tau_axis, corr.nu_axis, corr.kind, corr.dt, corr.t0
    )


def mimo_slice_spatial(
    corr: CorrelationMatrix, cfg: SteeringConfig, tau: float, nu: float
) -> npt.NDArray[np.complex128]:
    """All K x K spatial slices at one delay-Doppler point: V = Z X Z^H with
    Z the phase matrix and X the entry matrix at (tau, nu)."""
    _require_matching(corr, cfg)
    ref = corr.chi(0, 0)
    k = ref.lag_index(tau)
    l = ref.doppler_index(nu)
    X = corr.entries[:, :, k, l]
    Z = cfg.phase_matrix()
    return Z @ X @ Z.conj().T


def spatial_integral(corr: CorrelationMatrix, cfg: SteeringConfig) -> AmbiguitySurface:
    """Integral of the co-steered slice over fs in [0, 1), which collapses to
    the trace sum_m chi_{m,m} for whole-wavelength spacings.

    Both routes are evaluated: the K-point Riemann sum (as steering-phase
    weights) and the trace.  A disagreement beyond 1e-9 of the trace peak
    raises InvariantViolationError.
    """
    _require_matching(corr, cfg)
    cfg.require_integer_gamma()
    m_idx = np.arange(cfg.n_elements)
    # (1/K) sum_a exp(i 2 pi gamma (m - p) a / K): the Riemann sum over fs
    weights = np.mean(
        np.exp(
            1j
            * 2.0
            * math.pi
            * cfg.gamma
            * np.einsum("a,mp->amp", cfg.fs_grid, m_idx[:, None] - m_idx[None, :])
        ),
        axis=0,
    )
    quad = np.einsum("mp,mpij->ij", weights, corr.entries, optimize=True)
    trace = np.einsum("mmij->ij", corr.entries)
    scale = max(float(np.max(np.abs(trace))), 1e-300)
    gap = float(np.max(np.abs(quad - trace)))
    if gap > 1e-9 * scale:
        raise InvariantViolationError(
            f"spatial quadrature and trace disagree: {gap:.3e} vs peak {scale:.3e}"
        )
    return AmbiguitySurface(
        trace, corr.tau_axis, corr.nu_axis, corr.kind, corr.dt, corr.t0
    )


def mimo_energy_quadrature(corr: CorrelationMatrix, cfg: SteeringConfig) -> float:
    """Four-fold energy of the spatial slices:

        (1/K^2) sum_{a,b} integral |slice(fs_a, fs_b)(tau, nu)|^2 dtau dnu

    computed by hoisting the delay-Doppler quadrature into a small Gram
    tensor over waveform indices, then contracting with steering phases.
    Equals the explicit slice-by-slice sum to rounding.
    """
    _require_matching(corr, cfg)
    w = corr.chi(0, 0)
    weight = w.d_tau * w.d_nu
    G = np.einsum("mpij,nqij->mpnq", corr.entries, np.conj(corr.entries), optimize=True)
    G = G * weight
    phs = cfg.phase_matrix()
    C = np.einsum("am,bp->abmp", phs, np.conj(phs))
    total = np.einsum("abmp,mpnq,abnq->", C, G, np.conj(C), optimize=True)
    return float(total.real) / cfg.n_spatial**2
