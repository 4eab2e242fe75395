"""SL(2,R) generators and their dual action on signals and surfaces.

The three generators

    J = [[0, 1], [-1, 0]]   (quarter-turn of the delay-Doppler plane)
    t(a) = [[1, 0], [a, 1]] (shear)
    m(b) = [[b, 0], [0, 1/b]] (dilation)

act on an ambiguity surface by coordinate remap, and on the underlying
signals by Fourier transform, chirp multiplication, and time dilation.
Each verify routine computes one identity along both routes (surface
remap vs transformed signals) and reports the relative Frobenius
distance.

Grid notes baked into the checks:

* The rotation identity needs the frequency grid to coincide with the
  time grid (n dt^2 = 1) and cyclic lag products, under which it is exact.
  With the forward Fourier transform the rotation appears as the inverse
  quarter-turn; the remap runs through J^{-1}.
* The mirror and double-rotation remaps are pure index permutations on
  symmetric axes and are held to 1e-9.
* Shear rolls the Doppler axis per lag row (the discrete surface is
  exactly periodic in Doppler); integer roll counts make it exact, with
  periodic linear interpolation as the off-grid fallback.
* Integer dilations are evaluated against a parent surface with a b times
  finer Doppler step, again landing on exact grid points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .ambiguity import (
    AmbiguitySurface,
    SteeringConfig,
    cross_ambiguity,
)
from .errors import GridMismatchError, InvalidParameterError
from .properties import CheckReport
from .signals import SampledSignal, chirp_multiply, dilate, fourier

__all__ = [
    "Sl2Element",
    "act_on_surface",
    "verify_fourier_rotation",
    "verify_mirror",
    "verify_lfm_shear",
    "verify_dilation",
    "verify_mimo_symmetry",
]

_SNAP = 1e-9
_COVERAGE_FLOOR = 0.9


@dataclass(frozen=True)
class Sl2Element:
    """Real 2x2 matrix [[a, b], [c, d]] with unit determinant.

    Generator constructors attach a tag ("J", "t", "m", "-I") so
    dispatching code can tell which one-parameter family an element came
    from; composed elements carry no tag.
    """

    a: float
    b: float
    c: float
    d: float
    tag: str | None = None

    def __post_init__(self) -> None:
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-12:
            raise InvalidParameterError(f"determinant {det} is not 1")

    @classmethod
    def identity(cls) -> "Sl2Element":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def rotation(cls) -> "Sl2Element":
        return cls(0.0, 1.0, -1.0, 0.0, tag="J")

    @classmethod
    def shear(cls, a: float) -> "Sl2Element":
        return cls(1.0, 0.0, a, 1.0, tag="t")

    @classmethod
    def scaling(cls, b: float) -> "Sl2Element":
        if b <= 0:
            raise InvalidParameterError(f"scaling parameter must be positive, got {b}")
        return cls(b, 0.0, 0.0, 1.0 / b, tag="m")

    @classmethod
    def mirror(cls) -> "Sl2Element":
        return cls(-1.0, 0.0, 0.0, -1.0, tag="-I")

    @property
    def matrix(self) -> npt.NDArray[np.float64]:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def compose(self, other: "Sl2Element") -> "Sl2Element":
        m = self.matrix @ other.matrix
        return Sl2Element(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    def inverse(self) -> "Sl2Element":
        return Sl2Element(self.d, -self.b, -self.c, self.a)

    def apply(self, tau: float, nu: float) -> tuple[float, float]:
        return self.a * tau + self.b * nu, self.c * tau + self.d * nu


def act_on_surface(s: AmbiguitySurface, g: Sl2Element) -> AmbiguitySurface:
    """Pull the surface back along g: output(tau, nu) = s(g (tau, nu)^T).

    Source coordinates landing on grid points (within 1e-9 of a step) are
    gathered exactly; otherwise bilinear interpolation applies.  Points
    mapped outside the grid are zero-filled; meta carries the valid-point
    mask and their fraction under "valid_mask" / "coverage".
    """
    tau0 = float(s.tau_axis[0])
    nu0 = float(s.nu_axis[0])
    L, V = s.values.shape
    T, Nu = np.meshgrid(s.tau_axis, s.nu_axis, indexing="ij")
    src_tau = g.a * T + g.b * Nu
    src_nu = g.c * T + g.d * Nu
    fi = (src_tau - tau0) / s.d_tau
    fj = (src_nu - nu0) / s.d_nu
    ri = np.round(fi)
    fi = np.where(np.abs(fi - ri) <= _SNAP, ri, fi)
    rj = np.round(fj)
    fj = np.where(np.abs(fj - rj) <= _SNAP, rj, fj)
    valid = (fi >= 0) & (fi <= L - 1) & (fj >= 0) & (fj <= V - 1)
    i0 = np.floor(fi).astype(np.int64)
    j0 = np.floor(fj).astype(np.int64)
    ai = fi - i0
    aj = fj - j0
    i0c = np.clip(i0, 0, L - 1)
    i1c = np.clip(i0 + 1, 0, L - 1)
    j0c = np.clip(j0, 0, V - 1)
    j1c = np.clip(j0 + 1, 0, V - 1)
    vals = s.values
    out = (
        (1.0 - ai) * (1.0 - aj) * vals[i0c, j0c]
        + (1.0 - ai) * aj * vals[i0c, j1c]
        + ai * (1.0 - aj) * vals[i1c, j0c]
        + ai * aj * vals[i1c, j1c]
    )
    out[~valid] = 0.0
    mask = valid.copy()
    mask.setflags(write=False)
    meta = {"coverage": float(np.mean(valid)), "valid_mask": mask}
    return AmbiguitySurface(out, s.tau_axis, s.nu_axis, s.kind, s.dt, s.t0, meta)


def _masked_frobenius(
    a: np.ndarray, b: np.ndarray, mask: np.ndarray | None
) -> tuple[float, float]:
    """(relative distance, mass coverage of b inside the mask)."""
    if mask is None:
        mask = np.ones(a.shape, dtype=bool)
    num = float(np.linalg.norm((a - b)[mask]))
    den = max(float(np.linalg.norm(b[mask])), 1e-300)
    total = max(float(np.sum(np.abs(b) ** 2)), 1e-300)
    inside = float(np.sum(np.abs(b[mask]) ** 2))
    return num / den, inside / total


def _dual_path_report(
    name: str,
    path_a: np.ndarray,
    path_b: np.ndarray,
    mask: np.ndarray | None,
    tol: float,
    info: dict,
) -> CheckReport:
    rel, coverage = _masked_frobenius(path_a, path_b, mask)
    info = dict(info)
    info["coverage"] = coverage
    covered = coverage >= _COVERAGE_FLOOR
    rel_err = rel if covered else max(rel, 1.0)
    if not covered:
        info["coverage_failure"] = True
    passed = rel_err <= tol
    return CheckReport(name, passed, rel, 0.0, rel, rel_err, tol, info)


def verify_fourier_rotation(
    u: SampledSignal,
    v: SampledSignal | None = None,
    tol: float = 1e-5,
) -> CheckReport:
    """Quarter-turn identity: the surface of (u, v) pulled back along the
    inverse rotation equals the surface of their Fourier transforms times
    exp(i 2 pi nu tau).

    Needs n dt^2 = 1 (frequency grid equal to time grid) and uses cyclic
    lag products, under which both routes agree to rounding.
    """
    if v is None:
        v = u
    u.require_compatible(v)
    n = u.n
    if abs(n * u.dt * u.dt - 1.0) > 1e-9:
        raise GridMismatchError(
            f"rotation check needs n*dt^2 = 1 so the Fourier grid matches; "
            f"got n={n}, dt={u.dt}"
        )
    s = cross_ambiguity(u, v, n_doppler=n, cyclic=True)
    path_a = act_on_surface(s, Sl2Element.rotation().inverse())
    s_hat = cross_ambiguity(fourier(u), fourier(v), n_doppler=n, cyclic=True)
    phase = np.exp(1j * 2.0 * math.pi * np.outer(s.tau_axis, s.nu_axis))
    path_b = s_hat.values * phase
    mask = path_a.meta["valid_mask"]
    return _dual_path_report("sym-J", path_a.values, path_b, mask, tol, {})


def _mirror_target(
    suv: AmbiguitySurface, svu: AmbiguitySurface
) -> tuple[np.ndarray, np.ndarray]:
    """conj(chi(v,u)) e^{-i 2 pi nu tau} and the index map giving
    chi(u,v)(-tau, -nu) on the same axes (edge Doppler bin excluded)."""
    phase = np.exp(-1j * 2.0 * math.pi * np.outer(svu.tau_axis, svu.nu_axis))
    target = np.conj(svu.values) * phase
    flipped = np.zeros_like(suv.values)
    # lag axis is symmetric; Doppler bin 0 (-Nyquist edge) has no partner
    flipped[:, 1:] = suv.values[::-1, 1:][:, ::-1]
    return target, flipped


def verify_mirror(
    u: SampledSignal,
    v: SampledSignal | None = None,
    n_doppler: int | None = None,
    tol: float = 1e-9,
) -> CheckReport:
    """Point reflection: chi(u,v)(-tau,-nu) = conj(chi(v,u)(tau,nu)) e^{-i2pi nu tau}.

    Checked twice, once by direct index relabeling and once through the
    double-rotation remap J.J, both pure permutations on the symmetric
    axes (the unpaired -Nyquist Doppler bin is excluded).
    """
    if v is None:
        v = u
    u.require_compatible(v)
    suv = cross_ambiguity(u, v, n_doppler=n_doppler)
    svu = cross_ambiguity(v, u, n_doppler=n_doppler)
    target, flipped = _mirror_target(suv, svu)
    edge = np.zeros(suv.values.shape, dtype=bool)
    edge[:, 1:] = True
    rel_direct, _ = _masked_frobenius(flipped, target, edge)
    remap = act_on_surface(suv, Sl2Element.rotation().compose(Sl2Element.rotation()))
    mask = remap.meta["valid_mask"] & edge
    rel_remap, coverage = _masked_frobenius(remap.values, target, mask)
    rel = max(rel_direct, rel_remap)
    info = {"direct": rel_direct, "remap": rel_remap, "coverage": coverage}
    covered = coverage >= _COVERAGE_FLOOR
    rel_err = rel if covered else max(rel, 1.0)
    return CheckReport("sym-mirror", rel_err <= tol, rel, 0.0, rel, rel_err, tol, info)


def _shear_resample(s: AmbiguitySurface, rate: float) -> tuple[np.ndarray, bool]:
    """Values of s at (tau, nu - rate*tau) times exp(-i pi rate tau^2).

    The discrete surface is exactly periodic in Doppler (the window start
    is a whole number of samples).  Integer per-row shifts roll cyclically;
    fractional shifts are still exact, because once the window-start phase
    splits off, each row is a trigonometric polynomial whose coefficients
    occupy Fourier bins 0 .. n-1, so an off-grid translate is a bin-wise
    phase rotation.
    """
    n_d = s.n_doppler
    shift_per_lag = rate * s.dt / s.d_nu  # Doppler bins per lag step
    lags = np.round(s.tau_axis / s.dt).astype(np.int64)
    aligned = abs(shift_per_lag - round(shift_per_lag)) <= _SNAP
    if aligned:
        out = np.empty_like(s.values)
        for row, lag in enumerate(lags):
            out[row] = np.roll(s.values[row], int(round(float(lag) * shift_per_lag)))
    else:
        phase_in = np.exp(-1j * 2.0 * math.pi * s.t0 * s.nu_axis)[None, :]
        spectrum = np.fft.fft(s.values * phase_in, axis=1)
        delta = (rate * s.tau_axis / s.d_nu)[:, None]
        spectrum *= np.exp(
            -1j * 2.0 * math.pi * delta * np.arange(n_d)[None, :] / n_d
        )
        shifted_nu = s.nu_axis[None, :] - rate * s.tau_axis[:, None]
        out = np.fft.ifft(spectrum, axis=1) * np.exp(
            1j * 2.0 * math.pi * s.t0 * shifted_nu
        )
    out *= np.exp(-1j * math.pi * rate * s.tau_axis**2)[:, None]
    return out, aligned


def verify_lfm_shear(
    u: SampledSignal,
    v: SampledSignal | None = None,
    rate: float = 4.0,
    n_doppler: int | None = None,
    tol: float = 1e-4,
) -> CheckReport:
    """Chirp shear: the surface of the chirped pair equals the original
    surface resampled at (tau, nu - rate*tau) times exp(-i pi rate tau^2),
    the pullback along t(-rate)."""
    if v is None:
        v = u
    u.require_compatible(v)
    path_a = cross_ambiguity(
        chirp_multiply(u, rate), chirp_multiply(v, rate), n_doppler=n_doppler
    )
    s = cross_ambiguity(u, v, n_doppler=n_doppler)
    path_b, aligned = _shear_resample(s, rate)
    return _dual_path_report(
        "sym-lfm", path_a.values, path_b, None, tol, {"rate": rate, "aligned": aligned}
    )


def _dilation_reference(
    u: SampledSignal,
    v: SampledSignal,
    b: float,
    n_doppler: int,
) -> tuple[np.ndarray, np.ndarray | None, str]:
    """(1/b) chi(u,v)(b tau, nu/b) on the standard (n_doppler) axes.

    Integer b: evaluated on a parent surface with Doppler step dnu/b, where
    every target point is a grid point.  Otherwise: bilinear pullback
    along m(b)."""
    b_int = round(b)
    if abs(b - b_int) <= _SNAP and b_int >= 1:
        parent = cross_ambiguity(u, v, n_doppler=b_int * n_doppler)
        n = u.n
        lags = np.arange(-(n - 1), n)
        out = np.zeros((lags.size, n_doppler), dtype=np.complex128)
        mask = np.zeros(out.shape, dtype=bool)
        rows = np.abs(lags) * b_int <= n - 1
        src_rows = (n - 1) + lags[rows] * b_int
        col0 = (b_int * n_doppler) // 2 - n_doppler // 2
        out[rows] = parent.values[src_rows, col0 : col0 + n_doppler] / b
        mask[rows] = True
        return out, mask, "exact-parent"
    s = cross_ambiguity(u, v, n_doppler=n_doppler)
    pulled = act_on_surface(s, Sl2Element.scaling(b))
    return pulled.values / b, pulled.meta["valid_mask"], "bilinear"


def verify_dilation(
    u: SampledSignal,
    v: SampledSignal | None = None,
    b: float = 2.0,
    n_doppler: int | None = None,
    tol: float = 1e-4,
) -> CheckReport:
    """Dilation: the surface of the time-dilated pair equals
    (1/b) chi(u,v)(b tau, nu/b), the pullback along m(b)."""
    if v is None:
        v = u
    u.require_compatible(v)
    if n_doppler is None:
        n_doppler = 4 * u.n
    path_a = cross_ambiguity(dilate(u, b), dilate(v, b), n_doppler=n_doppler)
    path_b, mask, route = _dilation_reference(u, v, b, n_doppler)
    return _dual_path_report(
        "sym-dilate", path_a.values, path_b, mask, tol, {"b": b, "route": route}
    )


def _pair_surfaces(
    waveforms: list[SampledSignal], n_doppler: int | None, cyclic: bool
) -> list[list[AmbiguitySurface]]:
    return [
        [cross_ambiguity(wi, wj, n_doppler=n_doppler, cyclic=cyclic) for wj in waveforms]
        for wi in waveforms
    ]


def _combine_slice(
    pairs: list[list[AmbiguitySurface]],
    cfg: SteeringConfig,
    fs: float,
    fs_prime: float,
) -> AmbiguitySurface:
    ref = pairs[0][0]
    vals = np.zeros_like(ref.values)
    w = 2.0 * math.pi * cfg.gamma
    for mi in range(cfg.n_elements):
        for mj in range(cfg.n_elements):
            vals += pairs[mi][mj].values * np.exp(1j * w * (fs * mi - fs_prime * mj))
    return AmbiguitySurface(vals, ref.tau_axis, ref.nu_axis, ref.kind, ref.dt, ref.t0)


def verify_mimo_symmetry(
    waveforms: list[SampledSignal],
    cfg: SteeringConfig,
    fs: float,
    fs_prime: float,
    g: Sl2Element,
    n_doppler: int | None = None,
    tol: float | None = None,
) -> CheckReport:
    """Generator identities lifted to spatial slices at fixed (fs, fs').

    The steering phases are constant in (tau, nu), so each scalar identity
    transfers linearly to the slice: path A rebuilds the slice from
    generator-transformed waveforms, path B applies the surface-domain
    action to the original slice.  The mirror case swaps (fs, fs') and
    conjugates instead of transforming waveforms.  Dispatches on the tag
    of g as built by the generator constructors.
    """
    if g.tag is None:
        raise InvalidParameterError("pass a tagged generator (rotation/shear/scaling/mirror)")
    if len(waveforms) != cfg.n_elements:
        raise GridMismatchError(
            f"{len(waveforms)} waveforms for an array of {cfg.n_elements} elements"
        )
    first = waveforms[0]
    for w in waveforms[1:]:
        first.require_compatible(w)
    base_tol = {"J": 1e-5, "-I": 1e-9, "t": 1e-4, "m": 1e-4}[g.tag]
    if tol is None:
        tol = base_tol

    if g.tag == "J":
        n = first.n
        if abs(n * first.dt * first.dt - 1.0) > 1e-9:
            raise GridMismatchError(
                f"rotation check needs n*dt^2 = 1; got n={n}, dt={first.dt}"
            )
        pairs = _pair_surfaces(waveforms, n, cyclic=True)
        s = _combine_slice(pairs, cfg, fs, fs_prime)
        pulled = act_on_surface(s, Sl2Element.rotation().inverse())
        hat_pairs = _pair_surfaces([fourier(w) for w in waveforms], n, cyclic=True)
        s_hat = _combine_slice(hat_pairs, cfg, fs, fs_prime)
        phase = np.exp(1j * 2.0 * math.pi * np.outer(s.tau_axis, s.nu_axis))
        return _dual_path_report(
            "sym-mimo", pulled.values, s_hat.values * phase,
            pulled.meta["valid_mask"], tol, {"kind": "J"},
        )

    if g.tag == "-I":
        pairs = _pair_surfaces(waveforms, n_doppler, cyclic=False)
        s = _combine_slice(pairs, cfg, fs, fs_prime)
        swapped = _combine_slice(pairs, cfg, fs_prime, fs)
        target, _ = _mirror_target(s, swapped)
        remap = act_on_surface(s, Sl2Element.rotation().compose(Sl2Element.rotation()))
        edge = np.zeros(s.values.shape, dtype=bool)
        edge[:, 1:] = True
        mask = remap.meta["valid_mask"] & edge
        return _dual_path_report(
            "sym-mimo", remap.values, target, mask, tol, {"kind": "-I", "swap": True}
        )

    if g.tag == "t":
        rate = -g.c  # g = t(-rate) shears onto the +rate chirp
        pairs = _pair_surfaces(
            [chirp_multiply(w, rate) for w in waveforms], n_doppler, cyclic=False
        )
        path_a = _combine_slice(pairs, cfg, fs, fs_prime)
        orig = _pair_surfaces(waveforms, n_doppler, cyclic=False)
        s = _combine_slice(orig, cfg, fs, fs_prime)
        path_b, aligned = _shear_resample(s, rate)
        return _dual_path_report(
            "sym-mimo", path_a.values, path_b, None, tol,
            {"kind": "t", "rate": rate, "aligned": aligned},
        )

    # g.tag == "m"
    b = g.a
    if n_doppler is None:
        n_doppler = 4 * first.n
    pairs = _pair_surfaces(
        [dilate(w, b) for w in waveforms], n_doppler, cyclic=False
    )
    path_a = _combine_slice(pairs, cfg, fs, fs_prime)
    b_int = round(b)
    if abs(b - b_int) <= _SNAP and b_int >= 1:
        parent_pairs = _pair_surfaces(waveforms, b_int * n_doppler, cyclic=False)
        parent = _combine_slice(parent_pairs, cfg, fs, fs_prime)
        n = first.n
        lags = np.arange(-(n - 1), n)
        path_b = np.zeros((lags.size, n_doppler), dtype=np.complex128)
        mask = np.zeros(path_b.shape, dtype=bool)
        rows = np.abs(lags) * b_int <= n - 1
        src_rows = (n - 1) + lags[rows] * b_int
        col0 = (b_int * n_doppler) // 2 - n_doppler // 2
        path_b[rows] = parent.values[src_rows, col0 : col0 + n_doppler] / b
        mask[rows] = True
        route = "exact-parent"
    else:
        orig = _pair_surfaces(waveforms, n_doppler, cyclic=False)
        s = _combine_slice(orig, cfg, fs, fs_prime)
        pulled = act_on_surface(s, Sl2Element.scaling(b))
        path_b = pulled.values / b
        mask = pulled.meta["valid_mask"]
        route = "bilinear"
    return _dual_path_report(
        "sym-mimo", path_a.values, path_b, mask, tol, {"kind": "m", "b": b, "route": route}
    )
