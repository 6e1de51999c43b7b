"""Classical phase-space points, spinors, and density matrices, with the
linear maps between them.

A point of N coupled oscillators is stored as Q = (p_1..p_N, x_1..x_N);
its spinor is Psi_k = (x_k + i p_k)/sqrt(2).  The map is intentionally
norm-preserving and total (Q = 0 maps to the zero spinor); normalization
is a deliberate, flagged step in the density-matrix constructors because
canonical transforms do not preserve the spinor norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "PhaseSpacePoint",
    "Spinor",
    "DensityMatrix",
    "MixedEnsemble",
    "phase_to_spinor",
    "spinor_to_phase",
    "pure_density",
    "mixed_density",
]

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class PhaseSpacePoint:
    """2N real coordinates Q = (p-block, x-block), hbar = 1."""

    p: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        if p.ndim != 1 or x.ndim != 1 or p.shape != x.shape or p.size < 1:
            raise ValidationError("p and x must be equal-length 1d vectors")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(x))):
            raise ValidationError("phase-space coordinates must be finite")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "x", x)

    @classmethod
    def from_q(cls, q) -> "PhaseSpacePoint":
        """Build from the stacked vector Q = (p_1..p_N, x_1..x_N)."""
        q = np.asarray(q, dtype=float)
        if q.ndim != 1 or q.size % 2 != 0 or q.size == 0:
            raise ValidationError("Q must be a 1d vector of even length")
        n = q.size // 2
        return cls(p=q[:n], x=q[n:])

    @property
    def q(self) -> np.ndarray:
        """Stacked (p, x) vector of length 2N."""
        return np.concatenate([self.p, self.x])

    @property
    def modes(self) -> int:
        return self.p.size


@dataclass(frozen=True)
class Spinor:
    """Complex N-vector Psi; satisfies |Psi|^2 = (sum x^2 + p^2)/2."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.amplitudes, dtype=complex))
        if a.ndim != 1 or a.size < 1:
            raise ValidationError("spinor amplitudes must be a 1d vector")
        if not np.all(np.isfinite(a)):
            raise ValidationError("spinor amplitudes must be finite")
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def spin(self) -> float:
        """Spin j = (N - 1)/2 of the carrier SU(2) representation."""
        return (self.dim - 1) / 2.0

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian N x N state matrix for spin j = (N-1)/2.

    Hermiticity is enforced at construction (1e-12).  ``check_state``
    additionally requires unit trace (1e-12) and spectrum >= -1e-10;
    constructors of unnormalized products disable it.
    """

    matrix: np.ndarray
    check_state: bool = True

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValidationError("density matrix must be square")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.conj().T).max() > 1e-12 * scale:
            raise ValidationError("density matrix is not Hermitian within 1e-12")
        object.__setattr__(self, "matrix", m)
        if self.check_state:
            if abs(self.trace - 1.0) > 1e-12 * max(1.0, m.shape[0]):
                raise ValidationError(
                    f"density matrix trace {self.trace!r} differs from 1"
                )
            lo = float(np.linalg.eigvalsh(m).min())
            if lo < -1e-10:
                raise ValidationError(f"density matrix has eigenvalue {lo} < -1e-10")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spin(self) -> float:
        return (self.dim - 1) / 2.0

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True)
class MixedEnsemble:
    """Convex mixture of spinor states: weights w_k >= 0, sum w_k = 1."""

    weights: np.ndarray
    states: tuple

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        states = tuple(
            s if isinstance(s, Spinor) else Spinor(np.asarray(s)) for s in self.states
        )
        if w.ndim != 1 or len(states) != w.size or w.size == 0:
            raise ValidationError("need one weight per state")
        if np.any(w < 0):
            raise ValidationError("ensemble weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValidationError(f"ensemble weights sum to {w.sum()!r}, not 1")
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise ValidationError("all ensemble spinors must share one dimension")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", states)


def phase_to_spinor(point: PhaseSpacePoint) -> Spinor:
    """Psi_k = (x_k + i p_k)/sqrt(2); linear, no normalization."""
    if not isinstance(point, PhaseSpacePoint):
        point = PhaseSpacePoint.from_q(point)
    return Spinor((point.x + 1j * point.p) / _SQRT2)


def spinor_to_phase(spinor: Spinor) -> PhaseSpacePoint:
    """Inverse of :func:`phase_to_spinor`: x = sqrt(2) Re Psi, p = sqrt(2) Im Psi."""
    if not isinstance(spinor, Spinor):
        spinor = Spinor(np.asarray(spinor))
    a = spinor.amplitudes
    return PhaseSpacePoint(p=_SQRT2 * a.imag, x=_SQRT2 * a.real)


def pure_density(spinor: Spinor, normalize: bool = True) -> DensityMatrix:
    """Rank-1 projector rho = Psi Psi^dag / |Psi|^2 (or the raw outer
    product when ``normalize`` is False).

    Raises
    ------
    ValidationError
        If the spinor is zero and a normalized state was requested.
    """
    if not isinstance(spinor, Spinor):
        spinor = Spinor(np.asarray(spinor))
    a = spinor.amplitudes
    outer = np.outer(a, a.conj())
    if not normalize:
        return DensityMatrix(outer, check_state=False)
    n2 = float(np.vdot(a, a).real)
    if n2 <= 0.0:
        raise ValidationError("non-normalizable state: zero spinor")
    return DensityMatrix(outer / n2)


def mixed_density(ensemble: MixedEnsemble) -> DensityMatrix:
    """rho = sum_k w_k |Psi_k><Psi_k| / |Psi_k|^2."""
    if not isinstance(ensemble, MixedEnsemble):
        raise ValidationError("mixed_density expects a MixedEnsemble")
    dim = ensemble.states[0].dim
    rho = np.zeros((dim, dim), dtype=complex)
    for w, s in zip(ensemble.weights, ensemble.states):
        if w == 0.0:
            continue
        rho += w * pure_density(s).matrix
    return DensityMatrix(rho)
