"""Periodic grids, spectral fields, norms, quadratic forms, and GNF1 field files.

Physical arrays are stored in centered order (index ``N//2`` is ``x = 0``,
coordinates run from ``-L`` to ``L - dx``).  Spectra are stored in FFT order
(DC bin at index 0, frequencies ``pi*k/L`` as produced by ``fftfreq``).  The
transform pair is scaled so that it approximates the continuum convention

    F[u](xi) = (2*pi)**(-n/2) * integral u(x) exp(-i xi.x) dx,

which makes the discrete transform unitary between the quadrature norms:
``sum |u|^2 dx^n == sum |u_hat|^2 dxi^n`` to rounding.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import GnfFormatError, ZeroFieldError

TAU = 2.0 * np.pi

GNF_MAGIC = b"GNF1"
GNF_LAYOUT = "interleaved-complex-f64-le"


class NegativeWeightWarning(UserWarning):
    """The quadratic-form weight p_v(xi) + omega is negative somewhere."""


def _is_power_of_two(k: int) -> bool:
    return k >= 1 and (k & (k - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid over the box ``prod_i [-L_i, L_i)``.

    sizes must be powers of two (>= 8); the frequency lattice per axis is the
    fftfreq lattice with spacing ``pi / L_i``, symmetric about 0 except for the
    single negative Nyquist mode.
    """

    sizes: tuple[int, ...]
    half_lengths: tuple[float, ...]

    def __post_init__(self):
        if not 1 <= len(self.sizes) <= 3:
            raise ValueError("grid dimension must be 1, 2, or 3")
        if len(self.half_lengths) != len(self.sizes):
            raise ValueError("sizes and half_lengths must have equal length")
        for n in self.sizes:
            if not _is_power_of_two(n) or n < 8:
                raise ValueError(f"grid sizes must be powers of two >= 8, got {n}")
        for length in self.half_lengths:
            if not (math.isfinite(length) and length > 0):
                raise ValueError(f"box half-lengths must be positive, got {length}")

    @classmethod
    def make(cls, sizes, half_lengths) -> "Grid":
        """Build a grid, broadcasting a scalar half-length over all axes."""
        if np.isscalar(sizes):
            sizes = (int(sizes),)
        else:
            sizes = tuple(int(n) for n in sizes)
        if np.isscalar(half_lengths):
            half_lengths = (float(half_lengths),) * len(sizes)
        else:
            half_lengths = tuple(float(x) for x in half_lengths)
        return cls(sizes, half_lengths)

    @property
    def ndim(self) -> int:
        return len(self.sizes)

    def spacing(self, axis: int) -> float:
        return 2.0 * self.half_lengths[axis] / self.sizes[axis]

    def freq_step(self, axis: int) -> float:
        return np.pi / self.half_lengths[axis]

    def coords(self, axis: int) -> np.ndarray:
        n = self.sizes[axis]
        return (np.arange(n) - n // 2) * self.spacing(axis)

    def freqs(self, axis: int) -> np.ndarray:
        # fftfreq(N, d=dx) * 2*pi == pi*k/L in FFT storage order
        return TAU * np.fft.fftfreq(self.sizes[axis], d=self.spacing(axis))

    def coord_mesh(self):
        axes = [self.coords(i) for i in range(self.ndim)]
        return np.meshgrid(*axes, indexing="ij", sparse=True)

    def freq_mesh(self):
        axes = [self.freqs(i) for i in range(self.ndim)]
        return np.meshgrid(*axes, indexing="ij", sparse=True)

    def cell_volume(self) -> float:
        return float(np.prod([self.spacing(i) for i in range(self.ndim)]))

    def freq_cell_volume(self) -> float:
        return float(np.prod([self.freq_step(i) for i in range(self.ndim)]))

    def nyquist_mask(self) -> np.ndarray:
        """Boolean FFT-order array, True on bins carrying a Nyquist index."""
        mask = np.zeros(self.sizes, dtype=bool)
        for axis, n in enumerate(self.sizes):
            sl = [slice(None)] * self.ndim
            sl[axis] = n // 2
            mask[tuple(sl)] = True
        return mask


def _forward_scale(grid: Grid) -> float:
    return float(np.prod([grid.spacing(i) / math.sqrt(TAU) for i in range(grid.ndim)]))


def _phys_to_spec(grid: Grid, values: np.ndarray) -> np.ndarray:
    return np.fft.fftn(np.fft.ifftshift(values)) * _forward_scale(grid)


def _spec_to_phys(grid: Grid, spectrum: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.ifftn(spectrum)) / _forward_scale(grid)


class Field:
    """Complex field on a :class:`Grid` with paired lazy representations."""

    __slots__ = ("grid", "_values", "_spectrum")

    def __init__(self, grid: Grid, values=None, spectrum=None):
        if values is None and spectrum is None:
            raise ValueError("need physical values or a spectrum")
        self.grid = grid
        self._values = None
        self._spectrum = None
        if values is not None:
            values = np.asarray(values, dtype=np.complex128)
            if values.shape != grid.sizes:
                raise ValueError(f"values shape {values.shape} != grid sizes {grid.sizes}")
            self._values = values.copy()
        if spectrum is not None:
            spectrum = np.asarray(spectrum, dtype=np.complex128)
            if spectrum.shape != grid.sizes:
                raise ValueError(f"spectrum shape {spectrum.shape} != grid sizes {grid.sizes}")
            self._spectrum = spectrum.copy()

    @classmethod
    def from_values(cls, grid: Grid, values) -> "Field":
        return cls(grid, values=values)

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum) -> "Field":
        return cls(grid, spectrum=spectrum)

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            self._values = _spec_to_phys(self.grid, self._spectrum)
        return self._values

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            self._spectrum = _phys_to_spec(self.grid, self._values)
        return self._spectrum

    def has_values(self) -> bool:
        return self._values is not None

    def has_spectrum(self) -> bool:
        return self._spectrum is not None

    def zero_nyquist(self) -> "Field":
        """Copy with the (unpaired) Nyquist bins zeroed in the spectrum."""
        spec = self.spectrum.copy()
        spec[self.grid.nyquist_mask()] = 0.0
        return Field.from_spectrum(self.grid, spec)

    def shifted(self, offsets) -> "Field":
        """Exact spectral translation: returns x -> u(x + a)."""
        offsets = np.atleast_1d(np.asarray(offsets, dtype=float))
        if offsets.shape != (self.grid.ndim,):
            raise ValueError("offset dimension mismatch")
        phase = np.zeros(self.grid.sizes)
        for axis, mesh in enumerate(self.grid.freq_mesh()):
            phase = phase + mesh * offsets[axis]
        return Field.from_spectrum(self.grid, self.spectrum * np.exp(1j * phase))

    def __add__(self, other):
        self._check_same_grid(other)
        return Field.from_values(self.grid, self.values + other.values)

    def __sub__(self, other):
        self._check_same_grid(other)
        return Field.from_values(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        return Field.from_values(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def _check_same_grid(self, other):
        if not isinstance(other, Field) or other.grid != self.grid:
            raise ValueError("fields live on different grids")


def transform(f: Field, direction: str = "forward") -> Field:
    """Materialize the unitary transform in the requested direction."""
    if direction == "forward":
        return Field.from_spectrum(f.grid, f.spectrum)
    if direction == "inverse":
        return Field.from_values(f.grid, f.values)
    raise ValueError("direction must be 'forward' or 'inverse'")


def norm_l2(f: Field) -> float:
    """Quadrature L2 norm, from whichever representation is current."""
    if f.has_values():
        return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * f.grid.cell_volume()))
    return float(np.sqrt(np.sum(np.abs(f.spectrum) ** 2) * f.grid.freq_cell_volume()))


def norm_lp(f: Field, p) -> float:
    """L^p quadrature norm for even integer p, or the max norm for p = inf."""
    if p == np.inf or p == "inf":
        return float(np.max(np.abs(f.values)))
    p = int(p)
    if p < 2 or p % 2 != 0:
        raise ValueError("p must be an even integer >= 2 or inf")
    val = np.sum(np.abs(f.values) ** p) * f.grid.cell_volume()
    return float(val ** (1.0 / p))


def norm_hs(f: Field, s: float) -> float:
    """Sobolev norm computed spectrally with the weight (1 + |xi|^2)^s."""
    xi2 = np.zeros(f.grid.sizes)
    for mesh in f.grid.freq_mesh():
        xi2 = xi2 + mesh**2
    val = np.sum((1.0 + xi2) ** s * np.abs(f.spectrum) ** 2) * f.grid.freq_cell_volume()
    return float(np.sqrt(val))


def inner(f: Field, g: Field) -> complex:
    """Quadrature L2 inner product <f, g> = sum conj(f) g dx^n."""
    f._check_same_grid(g)
    return complex(np.sum(np.conj(f.values) * g.values) * f.grid.cell_volume())


def quad_form(f: Field, bsym, omega: float, weight=None, warn: bool = True) -> float:
    """Boosted quadratic form sum (p(xi) - v.xi + omega) |u_hat|^2 dxi^n.

    ``bsym`` is any object with an ``evaluate(xi_components)`` method returning
    the boosted symbol on the frequency mesh.  A :class:`NegativeWeightWarning`
    is emitted when the weight dips below zero (omega <= -Sigma_v territory).
    """
    if weight is None:
        weight = np.broadcast_to(bsym.evaluate(f.grid.freq_mesh()), f.grid.sizes) + omega
    if warn and np.any(weight < 0):
        warnings.warn(
            "quadratic-form weight is negative somewhere; omega > -Sigma_v fails",
            NegativeWeightWarning,
            stacklevel=2,
        )
    val = np.sum(weight * np.abs(f.spectrum) ** 2) * f.grid.freq_cell_volume()
    return float(val)


def energy_mass(f: Field, sym, sigma: int) -> tuple[float, float]:
    """Conserved energy and L2 mass for nonlinearity power sigma."""
    sigma = int(sigma)
    if sigma < 1:
        raise ValueError("sigma must be a positive integer")
    p_vals = np.broadcast_to(sym.evaluate(f.grid.freq_mesh()), f.grid.sizes)
    kinetic = float(np.sum(p_vals * np.abs(f.spectrum) ** 2) * f.grid.freq_cell_volume())
    potential = norm_lp(f, 2 * sigma + 2) ** (2 * sigma + 2)
    energy = 0.5 * kinetic - potential / (2.0 * sigma + 2.0)
    mass = norm_l2(f) ** 2
    return energy, mass


def eval_at(f: Field, points) -> np.ndarray:
    """Trigonometric (band-limited) interpolation of f at arbitrary points.

    points: array of shape (m, n).  Exact for the grid's band-limited
    representative; cost is m times the lattice size.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != f.grid.ndim:
        raise ValueError("point dimension mismatch")
    spec = f.spectrum.ravel()
    lattice = np.stack([np.broadcast_to(m, f.grid.sizes).ravel() for m in f.grid.freq_mesh()], axis=1)
    phases = np.exp(1j * pts @ lattice.T)
    scale = f.grid.freq_cell_volume() / (TAU ** (f.grid.ndim / 2.0))
    return phases @ spec * scale


def require_nonzero(f: Field, what: str = "field") -> None:
    if f.has_values():
        top = np.max(np.abs(f.values))
    else:
        top = np.max(np.abs(f.spectrum))
    if top == 0.0:
        raise ZeroFieldError(f"{what} is identically zero")


# -- GNF1 field files ---------------------------------------------------------
#
# Header (ASCII, \n-terminated lines): GNF1 / n=<dim> / sizes=<N1,...> /
# L=<L1,...> / layout=interleaved-complex-f64-le / blank line, then the
# physical values in row-major order as little-endian complex128 (which is
# exactly interleaved re/im float64 pairs).


def write_gnf(path, f: Field) -> None:
    header = (
        "GNF1\n"
        f"n={f.grid.ndim}\n"
        f"sizes={','.join(str(n) for n in f.grid.sizes)}\n"
        f"L={','.join(repr(x) for x in f.grid.half_lengths)}\n"
        f"layout={GNF_LAYOUT}\n"
        "\n"
    )
    payload = np.ascontiguousarray(f.values, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(payload)


def read_gnf(path) -> Field:
    with open(path, "rb") as fh:
        blob = fh.read()
    sep = blob.find(b"\n\n")
    if sep < 0:
        raise GnfFormatError("missing blank line terminating the header", offset=len(blob))
    header = blob[: sep + 1]
    try:
        lines = header.decode("ascii").splitlines()
    except UnicodeDecodeError as exc:
        raise GnfFormatError("header is not ASCII", offset=exc.start) from exc

    offset = 0
    if not lines or lines[0] != "GNF1":
        raise GnfFormatError("bad magic, expected 'GNF1'", offset=0)
    offset += len(lines[0]) + 1

    fields = {}
    for line in lines[1:]:
        if "=" not in line:
            raise GnfFormatError(f"malformed header line {line!r}", offset=offset)
        key, _, value = line.partition("=")
        fields[key.strip()] = (value.strip(), offset)
        offset += len(line) + 1

    def take(key):
        if key not in fields:
            raise GnfFormatError(f"missing header field {key!r}", offset=offset)
        return fields[key]

    n_str, n_off = take("n")
    try:
        ndim = int(n_str)
    except ValueError:
        raise GnfFormatError(f"bad dimension {n_str!r}", offset=n_off)

    sizes_str, sz_off = take("sizes")
    try:
        sizes = tuple(int(tok) for tok in sizes_str.split(","))
    except ValueError:
        raise GnfFormatError(f"bad sizes {sizes_str!r}", offset=sz_off)

    l_str, l_off = take("L")
    try:
        half_lengths = tuple(float(tok) for tok in l_str.split(","))
    except ValueError:
        raise GnfFormatError(f"bad box lengths {l_str!r}", offset=l_off)

    layout, layout_off = take("layout")
    if layout != GNF_LAYOUT:
        raise GnfFormatError(f"unsupported layout {layout!r}", offset=layout_off)

    try:
        grid = Grid(sizes, half_lengths)
    except ValueError as exc:
        raise GnfFormatError(str(exc), offset=sz_off) from exc
    if len(sizes) != ndim:
        raise GnfFormatError("n does not match the sizes list", offset=n_off)

    data = blob[sep + 2 :]
    expected = 16 * int(np.prod(sizes))
    if len(data) != expected:
        raise GnfFormatError(
            f"payload has {len(data)} bytes, expected {expected}", offset=sep + 2
        )
    values = np.frombuffer(data, dtype="<c16").reshape(sizes)
    return Field.from_values(grid, values)
