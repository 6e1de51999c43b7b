"""Single-mode continuous-variable tomography on sampled grids.

Implements the symplectic tomogram

    w(X, mu, nu) = (1/2 pi |nu|) | Integral exp(i mu y^2 / 2 nu
                    - i y X / nu) psi(y) dy |^2

from wavefunctions and density matrices, the Wigner-Moyal transform pair

    W(q, p) = Integral rho(q + u/2, q - u/2) exp(-i p u) du
    rho(x, x') = (1/2 pi) Integral W((x + x')/2, p) exp(i p (x - x')) dp

and the tomogram <-> Wigner transits

    w(X, mu, nu) = (1/2 pi) Integral W(q, p) delta(X - mu q - nu p) dq dp
    W(q, p) = (1/2 pi) Integral w(X, mu, nu) exp(i (X - mu q - nu p))
              dX dmu dnu.

Normalization follows the conventions above: a unit-trace state has
Integral w dX = 1 and Integral W dq dp / (2 pi) = 1.

The chirp integral is singular as nu -> 0.  Whenever |nu| < |mu| the
evaluation switches to the momentum representation, where the axis
(mu, nu) becomes (nu, -mu); the switch is exact (a tomogram of the
Fourier-transformed state) and reproduces the mu-axis limit
w(X, mu, 0) = |psi(X/mu)|^2 / |mu| without any singular quadrature.
Every oscillatory integral checks its phase advance per grid step and
raises instead of aliasing silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .errors import NumericsError, ValidationError

__all__ = [
    "Grid1D",
    "WaveFunction1D",
    "DensityGrid",
    "WignerGrid",
    "TomographyAxis",
    "TomogramGrid",
    "harmonic_eigenstate",
    "gaussian_packet",
    "pure_density_grid",
    "tomogram_wavefunction",
    "tomogram_density",
    "wigner_from_density",
    "density_from_wigner",
    "tomogram_from_wigner",
    "wigner_from_tomogram",
    "tomogram_family",
]

_TWO_PI = 2.0 * math.pi
_PHASE_BUDGET = 0.9 * math.pi  # max tolerated phase advance per grid step


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1d grid with n >= 8 points on [lo, hi]."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.hi <= self.lo:
            raise ValidationError("grid bounds must be finite with hi > lo")
        if self.n < 8:
            raise ValidationError("grid needs at least 8 points")

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid quadrature weights."""
        w = np.full(self.n, self.h)
        w[0] = w[-1] = self.h / 2.0
        return w

    def half_grid(self) -> "Grid1D":
        """Same span at half the spacing (2n - 1 points)."""
        return Grid1D(self.lo, self.hi, 2 * self.n - 1)

    def matches(self, other: "Grid1D") -> bool:
        return (
            self.n == other.n
            and abs(self.lo - other.lo) <= 1e-12
            and abs(self.hi - other.hi) <= 1e-12
        )


_DEFAULT_Y = Grid1D(-8.0, 8.0, 512)
_DEFAULT_QP = Grid1D(-6.0, 6.0, 256)


@dataclass(frozen=True)
class WaveFunction1D:
    """Complex samples psi(y) on a uniform grid."""

    grid: Grid1D
    values: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n,):
            raise ValidationError("wavefunction samples must match the grid")
        object.__setattr__(self, "values", v)
        if self.normalized and abs(self.norm_sq() - 1.0) > 1e-6:
            raise ValidationError(
                f"wavefunction flagged normalized but integrates to {self.norm_sq()!r}"
            )

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2 * self.grid.weights))


@dataclass(frozen=True)
class DensityGrid:
    """Samples rho(y, y') on the product grid; Hermitian within 1e-10."""

    grid: Grid1D
    values: np.ndarray
    check_trace: bool = True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValidationError("density samples must match the product grid")
        scale = max(1.0, float(np.abs(v).max()))
        if np.abs(v - v.conj().T).max() > 1e-10 * scale:
            raise ValidationError("density grid is not Hermitian within 1e-10")
        object.__setattr__(self, "values", v)
        if self.check_trace and abs(self.trace() - 1.0) > 1e-6:
            raise ValidationError(f"density grid trace {self.trace()!r} differs from 1")

    def trace(self) -> float:
        return float(np.sum(np.diag(self.values).real * self.grid.weights))


@dataclass(frozen=True)
class WignerGrid:
    """Real W(q, p) samples; unit normalization under dq dp / (2 pi)."""

    qgrid: Grid1D
    pgrid: Grid1D
    values: np.ndarray
    norm_tolerance: float | None = 1e-4

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.qgrid.n, self.pgrid.n):
            raise ValidationError("Wigner samples must have shape (nq, np)")
        object.__setattr__(self, "values", v)
        if self.norm_tolerance is not None:
            total = self.norm()
            if abs(total - 1.0) > self.norm_tolerance:
                raise ValidationError(
                    f"Wigner normalization {total!r} deviates from 1 beyond "
                    f"{self.norm_tolerance}"
                )

    def norm(self) -> float:
        return float(
            self.qgrid.weights @ self.values @ self.pgrid.weights / _TWO_PI
        )


@dataclass(frozen=True)
class TomographyAxis:
    """Quadrature direction X = mu q + nu p; (mu, nu) != (0, 0)."""

    mu: float
    nu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.nu)):
            raise ValidationError("axis parameters must be finite")
        if self.mu ** 2 + self.nu ** 2 <= 0.0:
            raise ValidationError("axis (mu, nu) = (0, 0) is not a direction")


@dataclass(frozen=True)
class TomogramGrid:
    """w(X, mu, nu) sampled on a rectangular (X, mu, nu) grid."""

    xgrid: Grid1D
    mugrid: Grid1D
    nugrid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.xgrid.n, self.mugrid.n, self.nugrid.n):
            raise ValidationError("tomogram family must have shape (nX, nmu, nnu)")
        object.__setattr__(self, "values", v)


def _as_axis(axis) -> TomographyAxis:
    if isinstance(axis, TomographyAxis):
        return axis
    return TomographyAxis(*axis)


# ---------------------------------------------------------------------------
# reference states
# ---------------------------------------------------------------------------

def harmonic_eigenstate(grid: Grid1D | None = None, n: int = 0) -> WaveFunction1D:
    """n-th oscillator eigenstate psi_n on the grid (hbar = omega = 1)."""
    grid = grid or _DEFAULT_Y
    if n < 0:
        raise ValidationError("quantum number n must be nonnegative")
    y = grid.points
    coeff = np.zeros(n + 1)
    coeff[n] = 1.0
    norm = math.pi ** -0.25 / math.sqrt(2.0 ** n * math.factorial(n))
    values = norm * np.polynomial.hermite.hermval(y, coeff) * np.exp(-y ** 2 / 2.0)
    return WaveFunction1D(grid, values.astype(complex))


def gaussian_packet(
    grid: Grid1D | None = None, x0: float = 0.0, p0: float = 0.0, width: float = 1.0
) -> WaveFunction1D:
    """Coherent-like Gaussian packet centered at (x0, p0)."""
    grid = grid or _DEFAULT_Y
    if width <= 0:
        raise ValidationError("width must be positive")
    y = grid.points
    values = (math.pi * width ** 2) ** -0.25 * np.exp(
        -((y - x0) ** 2) / (2.0 * width ** 2) + 1j * p0 * y
    )
    return WaveFunction1D(grid, values)


def pure_density_grid(psi: WaveFunction1D) -> DensityGrid:
    """rho(y, y') = psi(y) psi*(y')."""
    v = psi.values
    return DensityGrid(psi.grid, np.outer(v, v.conj()), check_trace=psi.normalized)


def _momentum_rep(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    """Unitary Fourier transform onto the same grid (k-axis = y-axis)."""
    y = grid.points
    if grid.h * abs(y).max() > _PHASE_BUDGET:
        raise NumericsError("grid under-resolved for the Fourier kernel (Nyquist)")
    kernel = np.exp(-1j * np.outer(y, y))
    return kernel @ (values * grid.weights) / math.sqrt(_TWO_PI)


# ---------------------------------------------------------------------------
# tomograms from states
# ---------------------------------------------------------------------------

def _chirp_nyquist(mu: float, nu: float, ymax: float, xmax: float, h: float):
    rate = (abs(mu) * ymax + xmax) / abs(nu)
    if rate * h > _PHASE_BUDGET:
        raise NumericsError(
            f"grid under-resolved for axis (mu, nu) = ({mu}, {nu}): phase advance "
            f"{rate * h:.2f} rad per step (Nyquist)"
        )


def _chirp_kernel(grid: Grid1D, mu: float, nu: float, x: np.ndarray) -> np.ndarray:
    y = grid.points
    _chirp_nyquist(mu, nu, float(np.abs(y).max()), float(np.abs(x).max()), grid.h)
    return np.exp(1j * (mu / (2.0 * nu)) * y[None, :] ** 2 - 1j * np.outer(x, y) / nu)


def tomogram_wavefunction(psi: WaveFunction1D, axis, xgrid: Grid1D | None = None) -> np.ndarray:
    """Symplectic tomogram w(X) of a wavefunction along one axis.

    Parameters
    ----------
    psi : WaveFunction1D
    axis : TomographyAxis or (mu, nu) pair
    xgrid : Grid1D, optional
        Output X grid; defaults to the wavefunction grid span.

    Returns
    -------
    ndarray
        Nonnegative samples w(X, mu, nu); integrates to the squared norm
        of ``psi`` (1 for normalized states).
    """
    axis = _as_axis(axis)
    xgrid = xgrid or Grid1D(psi.grid.lo, psi.grid.hi, psi.grid.n)
    values, grid = psi.values, psi.grid
    mu, nu = axis.mu, axis.nu
    if abs(nu) < abs(mu):
        # momentum representation: exact, and the chirp stays resolvable
        values = _momentum_rep(values, grid)
        mu, nu = nu, -mu
    kernel = _chirp_kernel(grid, mu, nu, xgrid.points)
    amp = kernel @ (values * grid.weights)
    return np.abs(amp) ** 2 / (_TWO_PI * abs(nu))


def tomogram_density(rho: DensityGrid, axis, xgrid: Grid1D | None = None) -> np.ndarray:
    """Symplectic tomogram of a sampled density matrix.

    Evaluates the double integral of the chirp kernel against
    rho(y, y'); for rho = psi psi* it coincides with
    :func:`tomogram_wavefunction`.  Works for mixed states as well.
    """
    axis = _as_axis(axis)
    xgrid = xgrid or Grid1D(rho.grid.lo, rho.grid.hi, rho.grid.n)
    grid = rho.grid
    values = rho.values
    mu, nu = axis.mu, axis.nu
    if abs(nu) < abs(mu):
        fourier = np.exp(-1j * np.outer(grid.points, grid.points)) * grid.weights[None, :]
        values = fourier @ values @ fourier.conj().T / _TWO_PI
        mu, nu = nu, -mu
    kernel = _chirp_kernel(grid, mu, nu, xgrid.points) * grid.weights[None, :]
    inner = kernel @ values
    w = np.einsum("xy,xy->x", inner, kernel.conj()).real / (_TWO_PI * abs(nu))
    return w


# ---------------------------------------------------------------------------
# Wigner transform pair
# ---------------------------------------------------------------------------

def _complex_spline(grid_x: np.ndarray, grid_y: np.ndarray, values: np.ndarray, k: int):
    spl_r = RectBivariateSpline(grid_x, grid_y, values.real, kx=k, ky=k)
    if np.abs(values.imag).max() > 0:
        spl_i = RectBivariateSpline(grid_x, grid_y, values.imag, kx=k, ky=k)
    else:
        spl_i = None
    return spl_r, spl_i


def wigner_from_density(
    rho: DensityGrid, qgrid: Grid1D | None = None, pgrid: Grid1D | None = None
) -> WignerGrid:
    """Wigner-Moyal function W(q, p) of a sampled density matrix.

    The u-integral runs along the antidiagonal rho(q + u/2, q - u/2),
    resolved at the y-grid spacing.  The default q grid is the half-step
    refinement of the state grid, which makes the transform exactly
    invertible by :func:`density_from_wigner`; arbitrary grids are
    handled through quintic-spline interpolation of rho.
    """
    y = rho.grid.points
    h = rho.grid.h
    qgrid = qgrid or rho.grid.half_grid()
    pgrid = pgrid or _DEFAULT_QP
    p = pgrid.points
    if h * float(np.abs(p).max()) > _PHASE_BUDGET:
        raise NumericsError("state grid too coarse for requested p-range (Nyquist)")
    n = rho.grid.n
    u = (np.arange(2 * n - 1) - (n - 1)) * h
    spl_r, spl_i = _complex_spline(y, y, rho.values, k=5)
    if qgrid.matches(rho.grid.half_grid()):
        # aligned fast path: all sample points live on the half lattice
        half = qgrid.points
        f_r = spl_r(half, half)
        f_i = spl_i(half, half) if spl_i is not None else None
        s_idx = np.arange(2 * n - 1)[:, None]
        t_idx = np.arange(2 * n - 1)[None, :]
        a = s_idx + t_idx - (n - 1)
        b = s_idx - t_idx + (n - 1)
        valid = (a >= 0) & (a <= 2 * n - 2) & (b >= 0) & (b <= 2 * n - 2)
        a = np.clip(a, 0, 2 * n - 2)
        b = np.clip(b, 0, 2 * n - 2)
        f = f_r[a, b] + (1j * f_i[a, b] if f_i is not None else 0.0)
        f[~valid] = 0.0
    else:
        y1 = qgrid.points[:, None] + u[None, :] / 2.0
        y2 = qgrid.points[:, None] - u[None, :] / 2.0
        valid = (y1 >= y[0]) & (y1 <= y[-1]) & (y2 >= y[0]) & (y2 <= y[-1])
        y1c = np.clip(y1, y[0], y[-1]).ravel()
        y2c = np.clip(y2, y[0], y[-1]).ravel()
        f = spl_r.ev(y1c, y2c) + (1j * spl_i.ev(y1c, y2c) if spl_i is not None else 0.0)
        f = f.reshape(y1.shape)
        f[~valid] = 0.0
    w = (f * h) @ np.exp(-1j * np.outer(u, p))
    residue = float(np.abs(w.imag).max())
    if residue > 1e-10 * max(1.0, float(np.abs(w.real).max())):
        raise NumericsError(f"Wigner imaginary residue {residue:.3e} too large")
    trace = rho.trace()
    tol = 1e-4 if abs(trace - 1.0) < 1e-3 else None
    return WignerGrid(qgrid, pgrid, w.real, norm_tolerance=tol)


def density_from_wigner(wigner: WignerGrid, ygrid: Grid1D | None = None) -> DensityGrid:
    """Invert the Wigner transform back to rho(x, x').

    Requires the Wigner q grid to be the half-step refinement of the
    target y grid (the layout produced by :func:`wigner_from_density`
    with default grids), so every midpoint (x + x')/2 is a q node.
    """
    if ygrid is None:
        if wigner.qgrid.n % 2 == 0:
            raise ValidationError(
                "grid mismatch: cannot infer the state grid from an even q grid"
            )
        ygrid = Grid1D(wigner.qgrid.lo, wigner.qgrid.hi, (wigner.qgrid.n + 1) // 2)
    if not wigner.qgrid.matches(ygrid.half_grid()):
        raise ValidationError(
            "grid mismatch: Wigner q grid must be the half-step refinement of the "
            "state grid"
        )
    n = ygrid.n
    p = wigner.pgrid.points
    deltas = (np.arange(2 * n - 1) - (n - 1)) * ygrid.h
    phase = np.exp(1j * np.outer(p, deltas))
    g = (wigner.values * wigner.pgrid.weights[None, :]) @ phase / _TWO_PI
    i_idx = np.arange(n)[:, None]
    j_idx = np.arange(n)[None, :]
    rho = g[i_idx + j_idx, i_idx - j_idx + (n - 1)]
    return DensityGrid(ygrid, rho, check_trace=abs(wigner.norm() - 1.0) < 1e-3)


# ---------------------------------------------------------------------------
# tomogram <-> Wigner transits
# ---------------------------------------------------------------------------

def tomogram_from_wigner(wigner: WignerGrid, axis, xgrid: Grid1D | None = None) -> np.ndarray:
    """Radon transform of W: w(X) = (1/2 pi) Integral W delta(X - mu q - nu p).

    Each X defines a line mu q + nu p = X; the line integral is taken
    with cubic-spline interpolation of W at half-cell steps.  Raises
    when a line would carry non-negligible mass outside the grid.
    """
    axis = _as_axis(axis)
    xgrid = xgrid or Grid1D(-8.0, 8.0, 512)
    q = wigner.qgrid.points
    p = wigner.pgrid.points
    spline = RectBivariateSpline(q, p, wigner.values, kx=3, ky=3)
    mu, nu = axis.mu, axis.nu
    s = math.hypot(mu, nu)
    # unit direction along the line and its base point closest to origin
    eq, ep = -nu / s, mu / s
    step = 0.5 * min(wigner.qgrid.h, wigner.pgrid.h)
    out = np.zeros(xgrid.n)
    peak = max(float(np.abs(wigner.values).max()), 1e-300)
    for idx, x in enumerate(xgrid.points):
        q0, p0 = mu * x / s ** 2, nu * x / s ** 2
        tmin, tmax = -np.inf, np.inf
        for c0, e, lo, hi in ((q0, eq, q[0], q[-1]), (p0, ep, p[0], p[-1])):
            if abs(e) < 1e-15:
                # line parallel to this axis: only a containment condition
                if not lo <= c0 <= hi:
                    tmin, tmax = 1.0, -1.0
                continue
            t1, t2 = (lo - c0) / e, (hi - c0) / e
            tmin = max(tmin, min(t1, t2))
            tmax = min(tmax, max(t1, t2))
        if not tmax > tmin:
            continue  # line misses the grid entirely
        count = int(math.ceil((tmax - tmin) / step)) + 1
        t = np.linspace(tmin, tmax, count)
        vals = spline.ev(q0 + t * eq, p0 + t * ep)
        weights = np.full(count, t[1] - t[0])
        weights[0] = weights[-1] = (t[1] - t[0]) / 2.0
        # truncation guard: a line leaving the grid where W is still a
        # noticeable fraction of its peak is losing real mass
        boundary = max(abs(vals[0]), abs(vals[-1]))
        if boundary > 1e-4 * peak:
            raise NumericsError(
                f"insufficient grid support: line X = {x:.3g} exits the grid with "
                f"boundary magnitude {boundary:.3e}"
            )
        out[idx] = float(vals @ weights) / (_TWO_PI * s)
    return out


def wigner_from_tomogram(
    family: TomogramGrid, qgrid: Grid1D | None = None, pgrid: Grid1D | None = None
) -> WignerGrid:
    """Recover W(q, p) from a sampled tomogram family w(X, mu, nu).

    The X integral produces phi(mu, nu) = Integral w exp(i X) dX, and W
    is its 2d Fourier integral over (mu, nu).  All three grids are
    Nyquist-checked against the oscillatory kernels.
    """
    qgrid = qgrid or _DEFAULT_QP
    pgrid = pgrid or _DEFAULT_QP
    if family.xgrid.h > _PHASE_BUDGET:
        raise NumericsError("X grid under-resolved for the unit-frequency kernel")
    if family.mugrid.h * float(np.abs(qgrid.points).max()) > _PHASE_BUDGET:
        raise NumericsError("mu grid under-resolved for the requested q range (Nyquist)")
    if family.nugrid.h * float(np.abs(pgrid.points).max()) > _PHASE_BUDGET:
        raise NumericsError("nu grid under-resolved for the requested p range (Nyquist)")
    x = family.xgrid.points
    phi = np.tensordot(family.xgrid.weights * np.exp(1j * x), family.values, axes=(0, 0))
    eq = np.exp(-1j * np.outer(family.mugrid.points, qgrid.points))
    ep = np.exp(-1j * np.outer(family.nugrid.points, pgrid.points))
    eq = eq * family.mugrid.weights[:, None]
    ep = ep * family.nugrid.weights[:, None]
    w = (eq.T @ phi @ ep).real / _TWO_PI
    return WignerGrid(qgrid, pgrid, w, norm_tolerance=1e-3)


def _support_radius(density: np.ndarray, grid: Grid1D, tail: float = 1e-12) -> float:
    """Radius containing all but ``tail`` of the probability mass."""
    mass = density * grid.weights
    total = float(mass.sum())
    if total <= 0:
        return 0.0
    y = np.abs(grid.points)
    order = np.argsort(y)
    cumulative = np.cumsum(mass[order]) / total
    idx = int(np.searchsorted(cumulative, 1.0 - tail))
    return float(y[order][min(idx, grid.n - 1)])


def tomogram_family(
    psi: WaveFunction1D,
    xgrid: Grid1D,
    mugrid: Grid1D,
    nugrid: Grid1D,
) -> TomogramGrid:
    """Sample w(X, mu, nu) of a wavefunction on a full rectangular grid.

    The (mu, nu) grids must avoid the excluded point (0, 0); grids with
    an even point count straddle zero and are a natural choice.  For each
    axis the X evaluation is clipped to the support window
    |X| <= |mu| R_q + |nu| R_p + pad (R from the state's position and
    momentum tails); outside it w vanishes for localized states, and
    zeros are filled in.  This keeps small axes resolvable on X grids
    wide enough for the large ones.
    """
    x = xgrid.points
    psi_k = _momentum_rep(psi.values, psi.grid)
    radius_q = _support_radius(np.abs(psi.values) ** 2, psi.grid)
    radius_p = _support_radius(np.abs(psi_k) ** 2, psi.grid)
    pad = 10.0
    values = np.zeros((xgrid.n, mugrid.n, nugrid.n))
    wy = psi.grid.weights
    for i, mu in enumerate(mugrid.points):
        for k, nu in enumerate(nugrid.points):
            if mu * mu + nu * nu <= 0.0:
                raise ValidationError("tomogram family grid contains the axis (0, 0)")
            if abs(nu) < abs(mu):
                vals, m_eff, n_eff = psi_k, nu, -mu
            else:
                vals, m_eff, n_eff = psi.values, mu, nu
            window = abs(mu) * radius_q + abs(nu) * radius_p + pad
            inside = np.abs(x) <= window
            if not inside.any():
                continue
            kernel = _chirp_kernel(psi.grid, m_eff, n_eff, x[inside])
            amp = kernel @ (vals * wy)
            values[inside, i, k] = np.abs(amp) ** 2 / (_TWO_PI * abs(n_eff))
    return TomogramGrid(xgrid, mugrid, nugrid, values)
