"""Rotation-group kernels: Wigner small-d and D matrices, Wigner 3j
symbols, and band-limited quadrature on the Euler-angle group.

Conventions
-----------
Rotations are parametrized by z-y-z Euler angles ``(phi, theta, psi)``
and represented in the ``|j, m>`` basis ordered ``m = +j ... -j``:

    D^j(phi, theta, psi) = exp(-i phi Jz) exp(-i theta Jy) exp(-i psi Jz)

so that ``D^j_{m1 m2} = exp(-i m1 phi) d^j_{m1 m2}(theta) exp(-i m2 psi)``
with ``d^j_{m1 m2}(theta) = <j m1| exp(-i theta Jy) |j m2>`` real.  3j
symbols follow the Condon-Shortley phase convention.  Under these choices
``d^{1/2}(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2),
cos(theta/2)]]`` and ``(j1 j2 0; m -m 0) = (-1)^(j1-m)/sqrt(2 j1 + 1)``.

All functions are pure; grid reductions elsewhere in the package use
numpy sums, which are pairwise and therefore reproducible for fixed
inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ValidationError

__all__ = [
    "EulerAngles",
    "QuadratureGrid",
    "projections",
    "small_d",
    "wigner_d_matrix",
    "wigner_D",
    "wigner_D_matrix",
    "three_j",
    "sphere_quadrature",
]

# Largest 2j handled by the exact-arithmetic 3j path and by the direct
# factorial sum for small-d; beyond these the log-gamma / Jacobi
# recurrence routes take over.
_THREEJ_EXACT_MAX_TWO_J = 40
_SMALL_D_SUM_MAX_TWO_J = 20

_TWO_PI = 2.0 * math.pi


def _two(value: float, name: str) -> int:
    """Return round(2*value), insisting that value is a half-integer."""
    doubled = int(round(2 * value))
    if abs(2 * value - doubled) > 1e-9:
        raise ValidationError(f"{name} = {value!r} is not a half-integer")
    return doubled


def _check_jm(j: float, m: float, name: str = "m") -> tuple[int, int]:
    """Validate a (j, m) pair; return doubled integers (2j, 2m)."""
    tj = _two(j, "j")
    tm = _two(m, name)
    if tj < 0:
        raise ValidationError(f"j = {j!r} must be nonnegative")
    if (tj - tm) % 2 != 0:
        raise ValidationError(f"{name} = {m!r} and j = {j!r} differ by a non-integer")
    if abs(tm) > tj:
        raise ValidationError(f"|{name}| = {abs(m)!r} exceeds j = {j!r}")
    return tj, tm


def projections(j: float) -> np.ndarray:
    """Projection quantum numbers m = +j ... -j in basis order."""
    tj = _two(j, "j")
    return (tj - 2 * np.arange(tj + 1)) / 2.0


@dataclass(frozen=True)
class EulerAngles:
    """z-y-z Euler angles, normalized on construction.

    ``phi`` and ``psi`` are reduced modulo 2*pi into [0, 2*pi);
    ``theta`` must lie in [0, pi].  For half-integer spins the reduction
    modulo 2*pi fixes the SU(2) element only up to the double-cover sign,
    which cancels in every density-matrix conjugation.
    """

    phi: float
    theta: float
    psi: float = 0.0

    def __post_init__(self):
        for name in ("phi", "theta", "psi"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if not -1e-12 <= self.theta <= math.pi + 1e-12:
            raise ValidationError(f"theta = {self.theta!r} outside [0, pi]")
        object.__setattr__(self, "phi", self.phi % _TWO_PI)
        object.__setattr__(self, "psi", self.psi % _TWO_PI)
        object.__setattr__(self, "theta", min(max(self.theta, 0.0), math.pi))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.phi, self.theta, self.psi)


def _as_angles(angles) -> EulerAngles:
    if isinstance(angles, EulerAngles):
        return angles
    return EulerAngles(*angles)


# ---------------------------------------------------------------------------
# Wigner small-d
# ---------------------------------------------------------------------------

def _jacobi(n: int, a: int, b: int, x: float) -> float:
    """Jacobi polynomial P_n^{(a,b)}(x) by the classical three-term
    recurrence (stable on [-1, 1])."""
    if n == 0:
        return 1.0
    p_prev = 1.0
    p = (a - b) / 2.0 + (1.0 + (a + b) / 2.0) * x
    for k in range(2, n + 1):
        c1 = 2.0 * k * (k + a + b) * (2 * k + a + b - 2)
        c2 = (2 * k + a + b - 1) * (a * a - b * b)
        c3 = (2 * k + a + b - 1) * (2 * k + a + b) * (2 * k + a + b - 2)
        c4 = 2.0 * (k + a - 1) * (k + b - 1) * (2 * k + a + b)
        p, p_prev = ((c2 + c3 * x) * p - c4 * p_prev) / c1, p
    return p


def _d_jacobi(tj: int, tm1: int, tm2: int, theta: float) -> float:
    """Large-j route: Jacobi recurrence along the degree direction with a
    log-gamma prefactor; avoids the catastrophic cancellation of the
    alternating factorial sum."""
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    quarters = {
        "jp2": (tj + tm2) // 2,
        "jm2": (tj - tm2) // 2,
        "jp1": (tj + tm1) // 2,
        "jm1": (tj - tm1) // 2,
    }
    k = min(quarters.values())
    dm = (tm1 - tm2) // 2
    if k == quarters["jp2"] or k == quarters["jm1"]:
        a, lam = dm, dm
    else:
        a, lam = -dm, 0
    b = tj - 2 * k - a
    # sqrt(C(2j - k, k + a) / C(k + b, b)) via log-gamma
    log_ratio = 0.5 * (
        math.lgamma(tj - k + 1) - math.lgamma(k + a + 1) - math.lgamma(tj - 2 * k - a + 1)
        - math.lgamma(k + b + 1) + math.lgamma(b + 1) + math.lgamma(k + 1)
    )
    if s == 0.0 and a > 0:
        return 0.0
    if c == 0.0 and b > 0:
        return 0.0
    mag = math.exp(log_ratio) * s ** a * c ** b
    return (-1.0) ** lam * mag * _jacobi(k, a, b, math.cos(theta))


def small_d(j: float, m1: float, m2: float, theta: float) -> float:
    """Wigner small-d matrix element d^j_{m1 m2}(theta).

    Parameters
    ----------
    j : half-integer spin
    m1, m2 : projections (rows/columns of the rotation about y)
    theta : rotation angle in [0, pi]

    Returns
    -------
    float
        ``<j m1| exp(-i theta Jy) |j m2>``; always in [-1, 1].
    """
    tj, tm1 = _check_jm(j, m1, "m1")
    _, tm2 = _check_jm(j, m2, "m2")
    if not math.isfinite(theta):
        raise ValidationError("theta must be finite")
    if tj > _SMALL_D_SUM_MAX_TWO_J:
        return _d_jacobi(tj, tm1, tm2, theta)
    # exact-coefficient factorial sum
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    jp1 = (tj + tm1) // 2
    jm1 = (tj - tm1) // 2
    jp2 = (tj + tm2) // 2
    jm2 = (tj - tm2) // 2
    pref = math.sqrt(
        math.factorial(jp1) * math.factorial(jm1)
        * math.factorial(jp2) * math.factorial(jm2)
    )
    dm = (tm1 - tm2) // 2
    total = 0.0
    for k in range(max(0, -dm), min(jp2, jm1) + 1):
        denom = (
            math.factorial(jp2 - k) * math.factorial(k)
            * math.factorial(dm + k) * math.factorial(jm1 - k)
        )
        total += (-1) ** (dm + k) / denom * c ** (jp2 + jm1 - 2 * k) * s ** (dm + 2 * k)
    return pref * total


def wigner_d_matrix(j: float, theta: float) -> np.ndarray:
    """Full (2j+1) x (2j+1) small-d matrix, basis ordered m = +j ... -j."""
    tj = _two(j, "j")
    ms = projections(j)
    out = np.empty((tj + 1, tj + 1))
    for i, m1 in enumerate(ms):
        for k, m2 in enumerate(ms):
            out[i, k] = small_d(j, m1, m2, theta)
    return out


def wigner_D(j: float, m1: float, m2: float, angles) -> complex:
    """Wigner D-matrix element D^j_{m1 m2}(phi, theta, psi).

    ``angles`` may be an :class:`EulerAngles` or a (phi, theta, psi)
    triple.  The full matrix returned by :func:`wigner_D_matrix` is
    unitary.
    """
    ang = _as_angles(angles)
    d = small_d(j, m1, m2, ang.theta)
    return complex(np.exp(-1j * (m1 * ang.phi + m2 * ang.psi)) * d)


def wigner_D_matrix(j: float, angles) -> np.ndarray:
    """Full D-matrix at the given Euler angles (basis m = +j ... -j)."""
    ang = _as_angles(angles)
    ms = projections(j)
    d = wigner_d_matrix(j, ang.theta)
    return (
        np.exp(-1j * ms[:, None] * ang.phi) * d * np.exp(-1j * ms[None, :] * ang.psi)
    )


# ---------------------------------------------------------------------------
# Wigner 3j
# ---------------------------------------------------------------------------

def _fact2(tx: int) -> int:
    """Factorial of tx/2 for an even nonnegative doubled integer."""
    return math.factorial(tx // 2)


@lru_cache(maxsize=100_000)
def _threej_doubled(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> float:
    # selection rules; all violations give an exact zero
    if tm1 + tm2 + tm3 != 0:
        return 0.0
    if not abs(tj1 - tj2) <= tj3 <= tj1 + tj2:
        return 0.0
    if (tj1 + tj2 + tj3) % 2 != 0:
        return 0.0
    if max(tj1, tj2, tj3) > _THREEJ_EXACT_MAX_TWO_J:
        return _threej_lgamma(tj1, tj2, tj3, tm1, tm2, tm3)
    delta2 = Fraction(
        _fact2(tj1 + tj2 - tj3) * _fact2(tj1 - tj2 + tj3) * _fact2(-tj1 + tj2 + tj3),
        _fact2(tj1 + tj2 + tj3 + 2),
    )
    prod = (
        _fact2(tj1 + tm1) * _fact2(tj1 - tm1)
        * _fact2(tj2 + tm2) * _fact2(tj2 - tm2)
        * _fact2(tj3 + tm3) * _fact2(tj3 - tm3)
    )
    tmin = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    tmax = min((tj1 + tj2 - tj3) // 2, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    racah = Fraction(0)
    for t in range(tmin, tmax + 1):
        denom = (
            math.factorial(t)
            * _fact2(tj3 - tj2 + tm1 + 2 * t)
            * _fact2(tj3 - tj1 - tm2 + 2 * t)
            * _fact2(tj1 + tj2 - tj3 - 2 * t)
            * _fact2(tj1 - tm1 - 2 * t)
            * _fact2(tj2 + tm2 - 2 * t)
        )
        racah += Fraction((-1) ** t, denom)
    if racah == 0:
        return 0.0
    # |3j|^2 = delta2 * prod * racah^2 is an exact rational <= 1; the only
    # rounding is the final float conversion.
    sign = (-1) ** ((tj1 - tj2 - tm3) // 2) * (1 if racah > 0 else -1)
    return sign * math.sqrt(float(delta2 * prod * racah * racah))


def _threej_lgamma(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> float:
    """Floating-point Racah sum in log space for large quantum numbers."""

    def lf(tx: int) -> float:
        return math.lgamma(tx / 2 + 1)

    log_pref = 0.5 * (
        lf(tj1 + tj2 - tj3) + lf(tj1 - tj2 + tj3) + lf(-tj1 + tj2 + tj3)
        - lf(tj1 + tj2 + tj3 + 2)
        + lf(tj1 + tm1) + lf(tj1 - tm1) + lf(tj2 + tm2) + lf(tj2 - tm2)
        + lf(tj3 + tm3) + lf(tj3 - tm3)
    )
    tmin = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    tmax = min((tj1 + tj2 - tj3) // 2, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    logs = []
    signs = []
    for t in range(tmin, tmax + 1):
        logs.append(
            -(
                math.lgamma(t + 1)
                + lf(tj3 - tj2 + tm1 + 2 * t)
                + lf(tj3 - tj1 - tm2 + 2 * t)
                + lf(tj1 + tj2 - tj3 - 2 * t)
                + lf(tj1 - tm1 - 2 * t)
                + lf(tj2 + tm2 - 2 * t)
            )
        )
        signs.append((-1) ** t)
    peak = max(logs)
    racah = sum(s * math.exp(lg - peak) for s, lg in zip(signs, logs))
    return (-1) ** ((tj1 - tj2 - tm3) // 2) * racah * math.exp(log_pref + peak)


def three_j(j1: float, j2: float, j3: float, m1: float, m2: float, m3: float) -> float:
    """Wigner 3j symbol (j1 j2 j3; m1 m2 m3).

    Uses exact integer arithmetic (Racah sum over rationals) for
    ``2 j <= 40`` and a log-gamma evaluation above; returns exactly 0.0
    when a selection rule fails.
    """
    tj1, tm1 = _check_jm(j1, m1, "m1")
    tj2, tm2 = _check_jm(j2, m2, "m2")
    tj3, tm3 = _check_jm(j3, m3, "m3")
    return _threej_doubled(tj1, tj2, tj3, tm1, tm2, tm3)


# ---------------------------------------------------------------------------
# Quadrature over the Euler-angle measure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureGrid:
    """Product quadrature exact for band-limited functions on the
    rotation group.

    Gauss-Legendre in cos(theta) with ``band_limit`` nodes (exact for
    polynomial degree <= 2L-1) and periodic trapezoid with ``2L+1`` nodes
    in each of phi and psi (exact for trigonometric degree <= 2L).  Node
    weights sum to the total measure 8 pi^2 of
    ``sin(theta) dtheta dphi dpsi``.
    """

    band_limit: int
    theta: np.ndarray
    theta_weights: np.ndarray
    phi: np.ndarray
    phi_weight: float
    psi: np.ndarray = field(repr=False, default=None)
    psi_weight: float = 0.0

    def __post_init__(self):
        for arr in (self.theta, self.theta_weights, self.phi, self.psi):
            arr.setflags(write=False)

    @property
    def nodes(self) -> np.ndarray:
        """All (phi, theta, psi) triples, shape (K, 3)."""
        ph, th, ps = np.meshgrid(self.phi, self.theta, self.psi, indexing="ij")
        return np.column_stack([ph.ravel(), th.ravel(), ps.ravel()])

    @property
    def weights(self) -> np.ndarray:
        """Node weights matching :attr:`nodes`; sum is 8 pi^2."""
        wt = np.broadcast_to(
            self.theta_weights[None, :, None],
            (len(self.phi), len(self.theta), len(self.psi)),
        )
        return wt.ravel() * self.phi_weight * self.psi_weight

    def directions(self) -> tuple[np.ndarray, np.ndarray]:
        """(phi, theta) direction nodes and weights for the psi-reduced
        measure ``sin(theta) dtheta dphi`` (weights sum to 4 pi)."""
        ph, th = np.meshgrid(self.phi, self.theta, indexing="ij")
        ww = np.broadcast_to(self.theta_weights[None, :] * self.phi_weight, ph.shape)
        return np.column_stack([ph.ravel(), th.ravel()]), ww.ravel().copy()


def sphere_quadrature(band_limit: int) -> QuadratureGrid:
    """Build the product quadrature grid for the given band limit.

    Parameters
    ----------
    band_limit : int
        Positive integer L; the grid integrates exactly any integrand
        whose theta-dependence is a polynomial of degree <= 2L-1 in
        cos(theta) times trigonometric polynomials of degree <= 2L in
        phi and psi.

    Returns
    -------
    QuadratureGrid
    """
    if not isinstance(band_limit, (int, np.integer)) or band_limit < 1:
        raise ValidationError(f"band_limit must be a positive integer, got {band_limit!r}")
    x, wx = np.polynomial.legendre.leggauss(int(band_limit))
    order = np.argsort(np.arccos(x))
    theta = np.arccos(x)[order]
    wtheta = wx[order]
    n_azim = 2 * int(band_limit) + 1
    phi = _TWO_PI * np.arange(n_azim) / n_azim
    w_azim = _TWO_PI / n_azim
    return QuadratureGrid(
        band_limit=int(band_limit),
        theta=theta,
        theta_weights=wtheta,
        phi=phi,
        phi_weight=w_azim,
        psi=phi.copy(),
        psi_weight=w_azim,
    )
