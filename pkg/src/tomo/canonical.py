"""Linear canonical (symplectic) transformations and their spinor-level
Bogolyubov form.

A symplectic Lambda acting on Q = (p, x) acts on the spinor as
Psi' = u Psi + v Psi*, with

    u = (lambda1 + i lambda2)/2 + (lambda4 - i lambda3)/2
    v = (lambda4 + i lambda3)/2 - (lambda1 - i lambda2)/2

(the second matrix is printed as a duplicate "u" in some sources; the
substitution x, p -> Psi, Psi* fixes it as v, and the commuting-diagram
test enforces the identification).  Symplecticity transports to the pair
conditions u u^dag - v v^dag = I and u v^T symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ValidationError
from .spin_tomography import SpinTomogram, _direction_table, _resolve_directions
from .states import DensityMatrix, Spinor, pure_density

__all__ = [
    "SymplecticMatrix",
    "BogolyubovPair",
    "ConjugateMoment",
    "validate_symplectic",
    "uv_from_symplectic",
    "transform_spinor",
    "conjugate_moment",
    "transform_density",
    "point_transform_uv",
    "transformed_tomogram",
    "random_symplectic",
]

_SYMPLECTIC_TOL = 1e-10


def _sigma(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class SymplecticMatrix:
    """Validated real 2N x 2N matrix with Lambda^T Sigma Lambda = Sigma."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0 or m.shape[0] == 0:
            raise ValidationError("symplectic matrix must be square with even dimension")
        sig = _sigma(m.shape[0] // 2)
        residual = float(np.abs(m.T @ sig @ m - sig).max())
        if residual > _SYMPLECTIC_TOL:
            raise ValidationError(
                f"symplectic residual |Lambda^T Sigma Lambda - Sigma| = {residual:.3e} "
                f"exceeds {_SYMPLECTIC_TOL:.0e}"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def modes(self) -> int:
        return self.matrix.shape[0] // 2

    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(lambda1, lambda2, lambda3, lambda4) in (p, x) block order."""
        n = self.modes
        m = self.matrix
        return m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:]


@dataclass(frozen=True)
class BogolyubovPair:
    """Complex pair (u, v) realizing Psi' = u Psi + v Psi*."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        v = np.asarray(self.v, dtype=complex)
        if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValidationError("u and v must be equal-shape square matrices")
        eye = np.eye(u.shape[0])
        if np.abs(u @ u.conj().T - v @ v.conj().T - eye).max() > _SYMPLECTIC_TOL:
            raise ValidationError("Bogolyubov condition u u^dag - v v^dag = I violated")
        uvt = u @ v.T
        if np.abs(uvt - uvt.T).max() > _SYMPLECTIC_TOL:
            raise ValidationError("Bogolyubov condition u v^T symmetric violated")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def modes(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True)
class ConjugateMoment:
    """Symmetric second moment sigma = Psi Psi^T of a pure state."""

    sigma: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=complex)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValidationError("sigma must be square")
        if np.abs(s - s.T).max() > 1e-12 * max(1.0, float(np.abs(s).max())):
            raise ValidationError("sigma must be symmetric")
        object.__setattr__(self, "sigma", s)


def validate_symplectic(matrix) -> SymplecticMatrix:
    """Wrap a matrix after checking Lambda^T Sigma Lambda = Sigma (1e-10)."""
    if isinstance(matrix, SymplecticMatrix):
        return matrix
    return SymplecticMatrix(np.asarray(matrix, dtype=float))


def uv_from_symplectic(symplectic) -> BogolyubovPair:
    """Bogolyubov pair of a symplectic matrix (see module docstring)."""
    lam = validate_symplectic(symplectic)
    l1, l2, l3, l4 = lam.blocks()
    u = (l1 + 1j * l2) / 2.0 + (l4 - 1j * l3) / 2.0
    v = (l4 + 1j * l3) / 2.0 - (l1 - 1j * l2) / 2.0
    return BogolyubovPair(u=u, v=v)


def transform_spinor(uv: BogolyubovPair, psi: Spinor) -> Spinor:
    """Psi' = u Psi + v conj(Psi)."""
    if not isinstance(psi, Spinor):
        psi = Spinor(np.asarray(psi))
    if psi.dim != uv.modes:
        raise ValidationError("spinor dimension does not match the transform")
    a = psi.amplitudes
    return Spinor(uv.u @ a + uv.v @ a.conj())


def conjugate_moment(psi: Spinor) -> ConjugateMoment:
    """sigma = Psi Psi^T (no conjugation)."""
    if not isinstance(psi, Spinor):
        psi = Spinor(np.asarray(psi))
    a = psi.amplitudes
    return ConjugateMoment(np.outer(a, a))


def _recover_spinor(rho: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Principal spinor of a pure (rho, sigma) pair, global phase fixed by
    sigma (sigma picks e^{2 i alpha}, leaving the irrelevant sign)."""
    evals, vecs = np.linalg.eigh(rho)
    psi0 = np.sqrt(max(evals[-1], 0.0)) * vecs[:, -1]
    k = int(np.argmax(np.abs(psi0)))
    if abs(psi0[k]) > 0:
        ratio = sigma[k, k] / psi0[k] ** 2
        if abs(ratio) > 0:
            psi0 = psi0 * np.exp(0.5j * np.angle(ratio))
    return psi0


def transform_density(uv: BogolyubovPair, rho, sigma) -> np.ndarray:
    """Bogolyubov-transformed pure-state density matrix.

    Parameters
    ----------
    uv : BogolyubovPair
    rho : ndarray or DensityMatrix
        Psi Psi^dag of a pure state (unnormalized allowed).
    sigma : ndarray or ConjugateMoment
        Psi Psi^T of the same state.

    Returns
    -------
    ndarray
        rho' = u rho u^dag + v rho* v^dag + v sigma* u^dag + u sigma v^dag,
        equal to Psi' Psi'^dag for Psi' = u Psi + v Psi*.  The trace is
        |Psi'|^2, not 1 in general.

    Raises
    ------
    ValidationError
        If (rho, sigma) are not consistent moments of one pure state
        (the defining identity fails beyond 1e-8).
    """
    rho_m = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    sig_m = np.asarray(getattr(sigma, "sigma", sigma), dtype=complex)
    if rho_m.shape != sig_m.shape or rho_m.shape[0] != uv.modes:
        raise ValidationError("rho, sigma and the transform must share one dimension")
    u, v = uv.u, uv.v
    out = (
        u @ rho_m @ u.conj().T
        + v @ rho_m.conj() @ v.conj().T
        + v @ sig_m.conj() @ u.conj().T
        + u @ sig_m @ v.conj().T
    )
    psi = _recover_spinor(rho_m, sig_m)
    psi_prime = u @ psi + v @ psi.conj()
    reference = np.outer(psi_prime, psi_prime.conj())
    scale = max(1.0, float(np.abs(out).max()))
    if np.abs(out - reference).max() > 1e-8 * scale:
        raise ValidationError(
            "inconsistent (rho, sigma) pair: not the moments of a single pure state"
        )
    return out


def point_transform_uv(lambda1) -> BogolyubovPair:
    """Bogolyubov pair of the point transformation p' = lambda1 p,
    x' = lambda1^{-T} x (blocks lambda2 = lambda3 = 0).

    Delegates to :func:`uv_from_symplectic` so the special case cannot
    drift from the general formula; the result is
    u = (lambda1 + lambda1^{-T})/2, v = (lambda1^{-T} - lambda1)/2.
    """
    l1 = np.atleast_2d(np.asarray(lambda1, dtype=float))
    if l1.ndim != 2 or l1.shape[0] != l1.shape[1]:
        raise ValidationError("lambda1 must be square")
    try:
        l1_inv_t = np.linalg.inv(l1).T
    except np.linalg.LinAlgError as exc:
        raise ValidationError(f"singular lambda1: {exc}") from exc
    n = l1.shape[0]
    lam = np.zeros((2 * n, 2 * n))
    lam[:n, :n] = l1
    lam[n:, n:] = l1_inv_t
    return uv_from_symplectic(lam)


def transformed_tomogram(
    uv: BogolyubovPair, psi: Spinor, directions=None, renormalize: bool = False
) -> SpinTomogram:
    """Spin tomogram of the canonically transformed state.

    Evaluates the rotated diagonals of rho' = transform_density(uv, ...)
    built from the pure state psi.  By default the table is left
    unnormalized: its rows sum to |Psi'|^2, the trace of rho', matching
    the four-term expansion literally.  ``renormalize`` divides by
    |Psi'|^2 to recover a probability table.
    """
    if not isinstance(psi, Spinor):
        psi = Spinor(np.asarray(psi))
    rho = pure_density(psi, normalize=False).matrix
    sigma = conjugate_moment(psi).sigma
    rho_prime = transform_density(uv, rho, sigma)
    norm_sq = float(np.trace(rho_prime).real)
    if norm_sq <= 1e-300:
        raise ValidationError("zero transformed state")
    j = psi.spin
    dirs, weights, band_limit = _resolve_directions(directions, j)
    values = _direction_table(rho_prime, j, dirs)
    if renormalize:
        values = values / norm_sq
    return SpinTomogram(
        spin=j,
        directions=dirs,
        values=values,
        weights=weights,
        band_limit=band_limit,
        normalized=renormalize,
    )


def random_symplectic(n: int, rng: np.random.Generator) -> SymplecticMatrix:
    """Random element of the identity component of Sp(2n, R): exp(Sigma S)
    for symmetric S with entries uniform in [-1, 1]."""
    s = rng.uniform(-1.0, 1.0, size=(2 * n, 2 * n))
    s = (s + s.T) / 2.0
    return SymplecticMatrix(scipy.linalg.expm(_sigma(n) @ s))
