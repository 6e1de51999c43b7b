"""Linear Hamiltonian dynamics in both pictures.

A Hermitian H generates i dPsi/dt = H Psi; the same motion, written for
Q = (p, x), is dQ/dt = A Q with A = -Sigma B, where the real symmetric
quadratic form B satisfies (1/2) Q^T B Q = Psi^dag H Psi.  Energy levels
of H coincide with the normal-mode frequencies of A (up to sign), which
is the correspondence the tests pin down.

Sign conventions: Sigma = [[0, I], [-I, 0]] in (p, x) block order, and
B = [[Re H, Im H], [-Im H, Re H]].  The Poisson brackets implied by
these choices are the standard real ones ({p_q, x_q'} = -delta; the
stray imaginary unit sometimes printed in this bracket is a typo and is
fixed here by requiring the two pictures to agree).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericsError, ValidationError
from .states import PhaseSpacePoint, Spinor

__all__ = [
    "HermitianHamiltonian",
    "DoubledGenerator",
    "QuadraticFormB",
    "FlowMatrix",
    "two_level_hamiltonian",
    "sigma_matrix",
    "doubled_generator",
    "build_B",
    "build_A",
    "two_level_energies",
    "evolve_quantum",
    "evolve_classical",
    "normal_mode_frequencies",
]


def _matrix_of(obj) -> np.ndarray:
    return np.asarray(getattr(obj, "matrix", obj), dtype=complex)


@dataclass(frozen=True)
class HermitianHamiltonian:
    """N x N Hermitian matrix (checked to 1e-12 relative)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError("Hamiltonian must be a square matrix")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.conj().T).max() > 1e-12 * scale:
            raise ValidationError("Hamiltonian is not Hermitian within 1e-12")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DoubledGenerator:
    """Block-diagonal generator diag(H, -H*) acting on xi = (Psi, Psi*).

    Diagnostic object only: evolution uses H directly on Psi, the lower
    block being redundant under conjugation.
    """

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class QuadraticFormB:
    """Real symmetric 2N x 2N form: classical energy is (1/2) Q^T B Q."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        scale = max(1.0, float(np.abs(m).max()))
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
            raise ValidationError("B must be square with even dimension")
        if np.abs(m - m.T).max() > 1e-12 * scale:
            raise ValidationError("B is not symmetric within 1e-12")
        object.__setattr__(self, "matrix", m)

    @property
    def modes(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True)
class FlowMatrix:
    """Real 2N x 2N Hamiltonian matrix A = -Sigma B (Sigma A symmetric)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
            raise ValidationError("A must be square with even dimension")
        sa = self.sigma @ m
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(sa - sa.T).max() > 1e-10 * scale:
            raise ValidationError("Sigma A is not symmetric: not a Hamiltonian matrix")
        object.__setattr__(self, "matrix", m)

    @property
    def sigma(self) -> np.ndarray:
        return sigma_matrix(np.asarray(self.matrix).shape[0] // 2)

    @property
    def modes(self) -> int:
        return self.matrix.shape[0] // 2


def sigma_matrix(n: int) -> np.ndarray:
    """Block matrix Sigma = [[0, I], [-I, 0]] for N = n modes."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def two_level_hamiltonian(a: float, b: complex, c: float) -> HermitianHamiltonian:
    """Two-level H = [[a, b], [conj(b), c]] with a, c real."""
    return HermitianHamiltonian(np.array([[a, b], [np.conj(b), c]], dtype=complex))


def doubled_generator(hamiltonian) -> DoubledGenerator:
    """diag(H, -H*) on the doubled vector (Psi, Psi*)."""
    h = HermitianHamiltonian(_matrix_of(hamiltonian)).matrix
    n = h.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = h
    out[n:, n:] = -h.conj()
    return DoubledGenerator(out)


def build_B(hamiltonian) -> QuadraticFormB:
    """Real symmetric B with (1/2) Q^T B Q = Psi^dag H Psi.

    In (p, x) block order B = [[Re H, Im H], [-Im H, Re H]]; the
    off-diagonal blocks vanish for real symmetric H.
    """
    h = HermitianHamiltonian(_matrix_of(hamiltonian)).matrix
    hr, hi = h.real, h.imag
    return QuadraticFormB(np.block([[hr, hi], [-hi, hr]]))


def build_A(form) -> FlowMatrix:
    """Flow matrix A = -Sigma B of the Hamilton equations dQ/dt = A Q."""
    b = QuadraticFormB(np.asarray(getattr(form, "matrix", form), dtype=float)).matrix
    n = b.shape[0] // 2
    return FlowMatrix(-sigma_matrix(n) @ b)


def two_level_energies(a: float, b: complex, c: float) -> tuple[float, float]:
    """Energy levels of [[a, b], [b*, c]], returned as (E1, E2), E1 >= E2.

    Closed form (a + c)/2 +- sqrt((a + c)^2 + 4 (b b* - a c))/2; the
    radicand equals (a - c)^2 + 4 |b|^2 and is never negative.
    """
    half_sum = (a + c) / 2.0
    radicand = (a + c) ** 2 + 4.0 * (abs(b) ** 2 - a * c)
    half_gap = np.sqrt(max(radicand, 0.0)) / 2.0
    return (half_sum + half_gap, half_sum - half_gap)


def evolve_quantum(hamiltonian, psi0: Spinor, t: float) -> Spinor:
    """Psi(t) = exp(-i H t) Psi0 via Hermitian eigendecomposition.

    The unitary route conserves the norm to machine precision, which the
    picture-equivalence tests rely on.
    """
    h = HermitianHamiltonian(_matrix_of(hamiltonian)).matrix
    if not isinstance(psi0, Spinor):
        psi0 = Spinor(np.asarray(psi0))
    if psi0.dim != h.shape[0]:
        raise ValidationError("state dimension does not match the Hamiltonian")
    evals, vecs = np.linalg.eigh(h)
    phases = np.exp(-1j * evals * t)
    return Spinor(vecs @ (phases * (vecs.conj().T @ psi0.amplitudes)))


def evolve_classical(flow, q0: PhaseSpacePoint, t: float) -> PhaseSpacePoint:
    """Q(t) = exp(A t) Q0 by scaling-and-squaring Pade."""
    a = np.asarray(getattr(flow, "matrix", flow), dtype=float)
    if not isinstance(q0, PhaseSpacePoint):
        q0 = PhaseSpacePoint.from_q(q0)
    if q0.q.size != a.shape[0]:
        raise ValidationError("phase point dimension does not match the flow matrix")
    return PhaseSpacePoint.from_q(scipy.linalg.expm(a * t) @ q0.q)


def normal_mode_frequencies(flow) -> np.ndarray:
    """Normal-mode frequencies |omega_k| of dQ/dt = A Q, sorted ascending.

    The spectrum of A must be purely imaginary (pairs +-i omega); a real
    part above 1e-8 is rejected as a non-oscillatory mode.  The result
    equals |spec(H)| for A built from a Hermitian H.
    """
    a = np.asarray(getattr(flow, "matrix", flow), dtype=float)
    evals = np.linalg.eigvals(a)
    if np.abs(evals.real).max() > 1e-8:
        raise NumericsError(
            f"non-oscillatory mode: |Re lambda| = {np.abs(evals.real).max():.3e}"
        )
    freqs = np.sort(np.abs(evals.imag))
    # eigenvalues come in +-i omega pairs; keep one representative each
    return freqs[::2].copy()
