"""Fourier multipliers p(xi), boosted symbols p(xi) - v.xi, and their checks.

Each shipped symbol carries growth-bound metadata (order s, coefficients A and
B, additive shifts) used by the sampled two-sided bound check, and a symmetry
axis about which the multiplier is cylindrical.  The dispersion floor
``inf_xi p(xi) - v.xi`` is computed by a bracketed line search along the axis;
by cylindrical monotonicity the minimizer has no transverse component when the
velocity is parallel to the axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import HypothesisViolatedError, UnboundedBelowError
from .fields import Field

KINDS = (
    "fractional",
    "biharmonic",
    "sqrt_klein_gordon",
    "half_wave",
    "anisotropic_hws",
    "custom",
)


@dataclass(frozen=True)
class Symbol:
    """A real continuous Fourier multiplier with growth/symmetry metadata.

    The sampled validation checks
    ``A |xi|^(2s) + c <= p(xi) <= B |xi|^(2s) + b`` (the additive ``b`` on the
    upper side accommodates multipliers with p(0) > 0, e.g. a Klein-Gordon
    mass) and, transversally to ``axis``, strict radial increase.
    """

    kind: str
    ndim: int
    order: float
    lower_coef: float
    upper_coef: float
    lower_shift: float
    upper_shift: float = 0.0
    axis_index: int = 0
    params: tuple = ()
    func: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if not 1 <= self.ndim <= 3:
            raise ValueError("symbol dimension must be 1, 2, or 3")
        if self.order <= 0:
            raise ValueError("order s must be positive")
        if self.lower_coef <= 0 or self.upper_coef <= 0:
            raise ValueError("bound coefficients A, B must be positive")
        if not 0 <= self.axis_index < self.ndim:
            raise ValueError("axis index out of range")

    @property
    def axis(self) -> np.ndarray:
        e = np.zeros(self.ndim)
        e[self.axis_index] = 1.0
        return e

    def param(self, name):
        return dict(self.params)[name]

    def evaluate(self, xi_components):
        """Evaluate p on broadcastable frequency component arrays."""
        xi = list(xi_components)
        if len(xi) != self.ndim:
            raise ValueError(f"expected {self.ndim} frequency components, got {len(xi)}")
        if self.kind == "fractional":
            r2 = _sum_sq(xi)
            return r2 ** self.order
        if self.kind == "biharmonic":
            mu = self.param("mu")
            r2 = _sum_sq(xi)
            return r2**2 - mu * r2
        if self.kind == "sqrt_klein_gordon":
            m = self.param("m")
            return np.sqrt(_sum_sq(xi) + m * m)
        if self.kind == "half_wave":
            return np.sqrt(_sum_sq(xi))
        if self.kind == "anisotropic_hws":
            gamma = self.param("gamma")
            k = self.param("split")
            quad = _sum_sq(xi[:k]) if k else 0.0
            lin = np.sqrt(_sum_sq(xi[k:])) if k < self.ndim else 0.0
            return quad + gamma * lin
        return self.func(*xi)


def _sum_sq(components):
    total = 0.0
    for c in components:
        total = total + np.asarray(c, dtype=float) ** 2
    return total


def fractional(s: float, ndim: int = 1) -> Symbol:
    """p(xi) = |xi|^(2s); exact bounds A = B = 1, c = 0."""
    return Symbol("fractional", ndim, float(s), 1.0, 1.0, 0.0, params=(("s", float(s)),))


def biharmonic(mu: float = 0.0, ndim: int = 1, lower_coef: float = 0.5) -> Symbol:
    """p(xi) = |xi|^4 - mu |xi|^2 with order s = 2.

    For mu > 0 the lower bound needs A < 1; the sharp shift for a given A is
    c = -mu^2 / (4 (1 - A)), the global minimum of p - A |xi|^4.  For mu < 0
    the upper bound needs headroom instead: p <= 2 |xi|^4 + mu^2 / 4, again
    sharp.
    """
    mu = float(mu)
    a, b_coef, c, b_shift = 1.0, 1.0, 0.0, 0.0
    if mu > 0:
        a = float(lower_coef)
        if not 0 < a < 1:
            raise ValueError("biharmonic with mu > 0 needs 0 < A < 1")
        c = -(mu * mu) / (4.0 * (1.0 - a))
    elif mu < 0:
        b_coef = 2.0
        b_shift = mu * mu / 4.0
    return Symbol(
        "biharmonic", ndim, 2.0, a, b_coef, c, upper_shift=b_shift, params=(("mu", mu),)
    )


def sqrt_klein_gordon(m: float, ndim: int = 1) -> Symbol:
    """p(xi) = sqrt(|xi|^2 + m^2), order s = 1/2; upper bound shifted by m."""
    m = float(m)
    if m < 0:
        raise ValueError("mass m must be nonnegative")
    return Symbol(
        "sqrt_klein_gordon", ndim, 0.5, 1.0, 1.0, 0.0, upper_shift=m, params=(("m", m),)
    )


def half_wave(ndim: int = 1) -> Symbol:
    """p(xi) = |xi|, the massless square-root symbol."""
    return Symbol("half_wave", ndim, 0.5, 1.0, 1.0, 0.0)


def anisotropic_half_wave(gamma: float, split: tuple[int, int] = (1, 1)) -> Symbol:
    """p(xi, eta) = |xi|^2 + gamma |eta| on R^k x R^l with (k, l) = split.

    No single global order fits both the quadratic and linear regimes; s = 1/2
    captures the small-frequency behaviour, and the upper coefficient is valid
    on the default validation box only (quadratic growth escapes any B |xi|
    bound at infinity).  Cylindrical about the first axis only when k = 1.
    """
    gamma = float(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    k, l = int(split[0]), int(split[1])
    if k < 1 or l < 1:
        raise ValueError("split needs at least one coordinate on each side")
    a = min(gamma, 1.0)
    extent = ValidationSpec().extent
    # on the box: |xi_x|^2 + gamma |xi_y| <= max(extent sqrt(k), gamma) (|xi_x| + |xi_y|)
    b_box = math.sqrt(2.0) * max(extent * math.sqrt(k), gamma)
    return Symbol(
        "anisotropic_hws",
        k + l,
        0.5,
        a,
        b_box,
        -a * a / 4.0,
        params=(("gamma", gamma), ("split", k)),
    )


def custom(func, order: float, lower_coef: float, upper_coef: float, lower_shift: float,
           ndim: int = 1, upper_shift: float = 0.0, axis_index: int = 0) -> Symbol:
    """Wrap a callable p(xi_1, ..., xi_n) with user-supplied bound metadata."""
    return Symbol(
        "custom", ndim, float(order), float(lower_coef), float(upper_coef),
        float(lower_shift), upper_shift=float(upper_shift), axis_index=axis_index,
        func=func,
    )


@dataclass(frozen=True)
class BoostedSymbol:
    """p_v(xi) = p(xi) - v.xi for a velocity vector v."""

    base: Symbol
    velocity: tuple[float, ...]

    def __post_init__(self):
        if len(self.velocity) != self.base.ndim:
            raise ValueError("velocity dimension does not match the symbol")
        if not all(math.isfinite(v) for v in self.velocity):
            raise ValueError("velocity must be finite")

    @classmethod
    def make(cls, base: Symbol, velocity) -> "BoostedSymbol":
        if np.isscalar(velocity):
            velocity = (float(velocity),) + (0.0,) * (base.ndim - 1)
        return cls(base, tuple(float(v) for v in velocity))

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.velocity))

    def evaluate(self, xi_components):
        out = self.base.evaluate(xi_components)
        for v, xi in zip(self.velocity, xi_components):
            if v != 0.0:
                out = out - v * np.asarray(xi, dtype=float)
        return out


def eval_symbol(sym: Symbol, xi) -> float:
    """Evaluate p at a single point, rejecting non-finite input."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.shape != (sym.ndim,):
        raise ValueError(f"expected a point in R^{sym.ndim}")
    if not np.all(np.isfinite(xi)):
        raise ValueError("symbol evaluation requires finite frequencies")
    return float(sym.evaluate(list(xi)))


# -- sampled assumption checks ------------------------------------------------


@dataclass(frozen=True)
class ValidationSpec:
    """Sampling plan: tensor grid on [-extent, extent]^n plus random points."""

    extent: float = 16.0
    points_per_axis: int = 64
    random_points: int = 512
    parallel_samples: int = 33
    radial_samples: int = 24
    seed: int = 0


@dataclass
class AssumptionReport:
    ass1_ok: bool
    ass2_ok: bool
    ass1_witness: tuple | None
    ass2_witness: tuple | None

    @property
    def ok(self) -> bool:
        return self.ass1_ok and self.ass2_ok


def _validation_points(sym: Symbol, spec: ValidationSpec) -> np.ndarray:
    axes = [np.linspace(-spec.extent, spec.extent, spec.points_per_axis)] * sym.ndim
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    rng = np.random.default_rng(spec.seed)
    extra = rng.uniform(-spec.extent, spec.extent, size=(spec.random_points, sym.ndim))
    return np.vstack([pts, extra])


def check_assumptions(sym: Symbol, spec: ValidationSpec | None = None) -> AssumptionReport:
    """Sampled check of the two-sided growth bound and transverse monotonicity.

    Never raises: returns a report; on a failed bound the corresponding witness
    is the violating frequency.  The check is a gate against obviously bad
    custom symbols, not a proof.
    """
    spec = spec or ValidationSpec()
    pts = _validation_points(sym, spec)
    p = np.asarray(sym.evaluate(list(pts.T)), dtype=float)
    r2s = np.sum(pts**2, axis=1) ** sym.order
    slack = 1e-9 * (1.0 + np.abs(p))
    lower_bad = p < sym.lower_coef * r2s + sym.lower_shift - slack
    upper_bad = p > sym.upper_coef * r2s + sym.upper_shift + slack
    ass1_bad = lower_bad | upper_bad
    ass1_ok = not bool(np.any(ass1_bad))
    ass1_witness = None if ass1_ok else tuple(pts[int(np.argmax(ass1_bad))])

    ass2_ok, ass2_witness = _check_transverse_monotone(sym, spec)
    return AssumptionReport(ass1_ok, ass2_ok, ass1_witness, ass2_witness)


def _transverse_basis(sym: Symbol) -> list[np.ndarray]:
    dirs = []
    for i in range(sym.ndim):
        if i == sym.axis_index:
            continue
        d = np.zeros(sym.ndim)
        d[i] = 1.0
        dirs.append(d)
    return dirs


def _check_transverse_monotone(sym: Symbol, spec: ValidationSpec):
    if sym.ndim == 1:
        return True, None
    e = sym.axis
    basis = _transverse_basis(sym)
    rng = np.random.default_rng(spec.seed + 1)
    dirs = list(basis)
    if len(basis) > 1:
        mix = rng.normal(size=len(basis))
        mix /= np.linalg.norm(mix)
        dirs.append(sum(c * d for c, d in zip(mix, basis)))

    ts = np.linspace(-spec.extent, spec.extent, spec.parallel_samples)
    radii = np.linspace(0.0, spec.extent, spec.radial_samples + 1)
    for t in ts:
        profiles = []
        for d in dirs:
            pts = t * e[None, :] + radii[:, None] * d[None, :]
            prof = np.asarray(sym.evaluate(list(pts.T)), dtype=float)
            diffs = np.diff(prof)
            if np.any(diffs <= 0):
                j = int(np.argmax(diffs <= 0))
                return False, tuple(pts[j + 1])
            profiles.append(prof)
        # cylindricity: all transverse directions must agree at equal radius
        for prof in profiles[1:]:
            dev = np.abs(prof - profiles[0])
            tol = 1e-9 * (1.0 + np.abs(profiles[0]))
            if np.any(dev > tol):
                j = int(np.argmax(dev > tol))
                return False, tuple(t * e + radii[j] * dirs[0])
    return True, None


# -- dispersion floor Sigma_v --------------------------------------------------


@dataclass(frozen=True)
class FloorSearch:
    """Bracketed-minimization settings for the dispersion floor."""

    initial_extent: float = 4.0
    max_extent: float = 1.0e9
    samples: int = 257
    xtol: float = 1e-12
    floor: float = -1.0e12


def _golden_min(f, a: float, b: float, xtol: float) -> float:
    """Golden-section minimizer of a unimodal f on [a, b] to width xtol."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > xtol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


def dispersion_floor(bsym: BoostedSymbol, search: FloorSearch | None = None) -> float:
    """Global minimum of p(xi) - v.xi (the paper-level coercivity constant).

    Requires s > 1/2, or s = 1/2 with |v| < A; otherwise the infimum may be
    -inf and a :class:`HypothesisViolatedError` is raised up front.  Custom
    symbols that keep decreasing past ``search.floor`` raise
    :class:`UnboundedBelowError`.
    """
    search = search or FloorSearch()
    base = bsym.base
    v = np.asarray(bsym.velocity, dtype=float)
    if base.order < 0.5:
        raise HypothesisViolatedError("dispersion floor needs order s >= 1/2")
    if base.order == 0.5 and np.linalg.norm(v) >= base.lower_coef:
        raise HypothesisViolatedError(
            "s = 1/2 requires |v| < A for a finite dispersion floor"
        )

    e = base.axis
    v_par = float(v @ e)
    v_perp = v - v_par * e
    if np.linalg.norm(v_perp) > 1e-10 * (1.0 + np.linalg.norm(v)):
        return _floor_off_axis(bsym, search)

    def g_vec(ts):
        pts = [ts * e[i] for i in range(base.ndim)]
        return np.asarray(base.evaluate(pts), dtype=float) - v_par * ts

    def g(t):
        return float(g_vec(np.asarray([t]))[0])

    extent = search.initial_extent
    while True:
        ts = np.linspace(-extent, extent, search.samples)
        gs = g_vec(ts)
        i = int(np.argmin(gs))
        if gs[i] < search.floor:
            raise UnboundedBelowError(
                f"boosted symbol drops below the floor {search.floor:g}"
            )
        if 0 < i < len(ts) - 1:
            break
        if extent >= search.max_extent:
            raise UnboundedBelowError(
                "no interior minimizer found before reaching the maximum search extent"
            )
        extent *= 2.0
    t_star = _golden_min(g, ts[i - 1], ts[i + 1], search.xtol)
    return min(g(t_star), float(gs[i]))


def _floor_off_axis(bsym: BoostedSymbol, search: FloorSearch) -> float:
    # velocity not parallel to the symmetry axis: coarse lattice + simplex polish
    from scipy import optimize

    n = bsym.base.ndim

    def g(x):
        return float(np.asarray(bsym.evaluate(list(np.asarray(x)[:, None]))).ravel()[0])

    extent = search.initial_extent
    best = None
    while True:
        axes = [np.linspace(-extent, extent, 33)] * n
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        vals = np.asarray(bsym.evaluate(list(pts.T)), dtype=float)
        i = int(np.argmin(vals))
        if vals[i] < search.floor:
            raise UnboundedBelowError("boosted symbol drops below the floor")
        on_edge = np.any(np.abs(pts[i]) >= extent * (1 - 1e-12))
        if not on_edge:
            best = pts[i]
            break
        if extent >= search.max_extent:
            raise UnboundedBelowError("no interior minimizer within the search extent")
        extent *= 2.0
    res = optimize.minimize(g, best, method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
    return float(min(res.fun, vals[i]))


def galilean_gauge(f: Field, velocity) -> Field:
    """Multiply by the boost phase exp(i v.x / 2); unitary on L2."""
    v = np.atleast_1d(np.asarray(velocity, dtype=float))
    if v.shape != (f.grid.ndim,):
        raise ValueError("velocity dimension mismatch")
    phase = np.zeros(f.grid.sizes)
    for axis, mesh in enumerate(f.grid.coord_mesh()):
        phase = phase + 0.5 * v[axis] * mesh
    return Field.from_values(f.grid, f.values * np.exp(1j * phase))
