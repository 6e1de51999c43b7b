"""Built-in verification suite.

Each check exercises one library-level identity at a fixed tolerance
with a fixed seed, returning a :class:`CheckResult`; the CLI ``verify``
subcommand and the acceptance tests both run these.  The checks are
end-to-end properties (round trips, picture equivalence, analytic
oracles), not unit assertions.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import canonical, cv, dynamics, spin_tomography, states

__all__ = ["CheckResult", "ALL_CHECKS", "run_checks"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _result(name, passed, detail, t0) -> CheckResult:
    return CheckResult(name, bool(passed), detail, time.perf_counter() - t0)


def _random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2.0


def _random_density(rng, dim, pure=False):
    if pure:
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return states.pure_density(states.Spinor(v))
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = a @ a.conj().T
    return states.DensityMatrix(m / np.trace(m).real)


def check_two_level_energies() -> CheckResult:
    """1000 random 2x2 Hermitian matrices vs a general eigensolver."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        a, c = rng.uniform(-10, 10, size=2)
        b = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        e1, e2 = dynamics.two_level_energies(a, b, c)
        ref = np.linalg.eigvalsh(np.array([[a, b], [np.conj(b), c]]))
        scale = max(1.0, float(np.abs(ref).max()))
        worst = max(worst, abs(e1 - ref[1]) / scale, abs(e2 - ref[0]) / scale)
    return _result(
        "two-level energies vs eigensolver (1e-12 relative)",
        worst <= 1e-12,
        f"max relative deviation {worst:.3e}",
        t0,
    )


def check_picture_equivalence() -> CheckResult:
    """Quantum evolution mapped to phase space equals the classical flow."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(12)
    worst = 0.0
    for n in (2, 4, 8):
        for _ in range(50):
            h = _random_hermitian(rng, n)
            q0 = states.PhaseSpacePoint.from_q(rng.normal(size=2 * n))
            flow = dynamics.build_A(dynamics.build_B(h))
            psi0 = states.phase_to_spinor(q0)
            for t in (0.1, 1.0, 10.0):
                quantum = states.spinor_to_phase(dynamics.evolve_quantum(h, psi0, t))
                classical = dynamics.evolve_classical(flow, q0, t)
                worst = max(worst, float(np.abs(quantum.q - classical.q).max()))
    return _result(
        "picture equivalence quantum vs classical (1e-9)",
        worst <= 1e-9,
        f"max coordinate deviation {worst:.3e}",
        t0,
    )


def check_spectrum_correspondence() -> CheckResult:
    """Eigenvalues of A are +-i times the spectrum of H."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(13)
    worst = 0.0
    for n in (2, 4, 8):
        for _ in range(50):
            h = _random_hermitian(rng, n)
            a = dynamics.build_A(dynamics.build_B(h)).matrix
            got = np.linalg.eigvals(a)
            got = got[np.argsort(got.imag)]  # pair by frequency; Re is noise
            energies = np.linalg.eigvalsh(h)
            expected = np.sort(np.concatenate([energies, -energies])) * 1j
            worst = max(worst, float(np.abs(got - expected).max()))
    return _result(
        "normal modes match +-i spec(H) (1e-10)",
        worst <= 1e-10,
        f"max eigenvalue deviation {worst:.3e}",
        t0,
    )


def check_spin_round_trip() -> CheckResult:
    """reconstruct(tomogram(rho)) = rho for j = 1/2 .. 5/2."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(14)
    worst = 0.0
    worst_norm = 0.0
    worst_neg = 0.0
    for tj in (1, 2, 3, 4, 5):
        dim = tj + 1
        for pure in (True, False):
            for _ in range(50):
                rho = _random_density(rng, dim, pure=pure)
                tom = spin_tomography.tomogram(rho)
                worst_norm = max(worst_norm, float(np.abs(tom.values.sum(axis=1) - 1).max()))
                worst_neg = max(worst_neg, float(-tom.values.min()))
                rec = spin_tomography.reconstruct(tom)
                worst = max(worst, float(np.abs(rec.matrix - rho.matrix).max()))
    passed = worst <= 1e-8 and worst_norm <= 1e-12 and worst_neg <= 1e-12
    return _result(
        "spin tomography round trip (1e-8) with normalized positive tomograms (1e-12)",
        passed,
        f"round trip {worst:.3e}, row-sum deviation {worst_norm:.3e}, "
        f"most negative value {-worst_neg:.3e}",
        t0,
    )


def check_bogolyubov() -> CheckResult:
    """Commuting diagram, density transform, and tomogram factorization."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(15)
    worst_diagram = 0.0
    worst_density = 0.0
    worst_tomogram = 0.0
    count_per_n = (34, 33, 33)  # 100 symplectic matrices over N = 1, 2, 3
    for n, count in zip((1, 2, 3), count_per_n):
        for _ in range(count):
            lam = canonical.random_symplectic(n, rng)
            uv = canonical.uv_from_symplectic(lam)
            q0 = states.PhaseSpacePoint.from_q(rng.normal(size=2 * n))
            psi = states.phase_to_spinor(q0)
            mapped = canonical.transform_spinor(uv, psi)
            direct = states.phase_to_spinor(
                states.PhaseSpacePoint.from_q(lam.matrix @ q0.q)
            )
            worst_diagram = max(
                worst_diagram, float(np.abs(mapped.amplitudes - direct.amplitudes).max())
            )
            rho = states.pure_density(psi, normalize=False).matrix
            sigma = canonical.conjugate_moment(psi).sigma
            rho_prime = canonical.transform_density(uv, rho, sigma)
            reference = np.outer(mapped.amplitudes, mapped.amplitudes.conj())
            worst_density = max(worst_density, float(np.abs(rho_prime - reference).max()))
            tom = canonical.transformed_tomogram(uv, psi)
            norm_sq = mapped.norm() ** 2
            normalized = spin_tomography.tomogram(
                states.pure_density(mapped), directions=None
            )
            worst_tomogram = max(
                worst_tomogram,
                float(np.abs(tom.values - norm_sq * normalized.values).max()),
            )
    passed = worst_diagram <= 1e-11 and worst_density <= 1e-10 and worst_tomogram <= 1e-10
    return _result(
        "Bogolyubov transforms: diagram (1e-11), density (1e-10), tomogram (1e-10)",
        passed,
        f"diagram {worst_diagram:.3e}, density {worst_density:.3e}, "
        f"tomogram {worst_tomogram:.3e}",
        t0,
    )


def check_cv_tomography() -> CheckResult:
    """Analytic oracles and transit identities for the CV transforms."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(16)
    failures = []

    ground = cv.harmonic_eigenstate()
    xgrid = cv.Grid1D(-8.0, 8.0, 512)
    x = xgrid.points
    worst_gauss = 0.0
    worst_norm = 0.0
    for _ in range(20):
        s2 = rng.uniform(0.2, 5.0)
        ang = rng.uniform(0.0, 2 * math.pi)
        axis = cv.TomographyAxis(math.sqrt(s2) * math.cos(ang), math.sqrt(s2) * math.sin(ang))
        w = cv.tomogram_wavefunction(ground, axis, xgrid)
        ref = np.exp(-x ** 2 / s2) / math.sqrt(math.pi * s2)
        worst_gauss = max(worst_gauss, float(np.abs(w - ref).max()))
        worst_norm = max(worst_norm, abs(float(w @ xgrid.weights) - 1.0))
    if worst_gauss > 1e-6:
        failures.append(f"ground-state tomogram off analytic by {worst_gauss:.3e}")
    if worst_norm > 1e-5:
        failures.append(f"tomogram normalization off by {worst_norm:.3e}")

    # homogeneity w(lX, l mu, l nu) = w/|l| on exactly scalable grids
    base = cv.Grid1D(-6.0, 6.0, 481)
    packet = cv.gaussian_packet(x0=0.7, p0=-0.4)
    w_base = cv.tomogram_wavefunction(packet, (0.9, 1.1), base)
    worst_h = 0.0
    for lam in (2.0, -1.0, 0.5):
        scaled_grid = cv.Grid1D(min(lam * base.lo, lam * base.hi),
                                max(lam * base.lo, lam * base.hi), base.n)
        w_scaled = cv.tomogram_wavefunction(packet, (lam * 0.9, lam * 1.1), scaled_grid)
        if lam < 0:
            w_scaled = w_scaled[::-1]
        worst_h = max(worst_h, float(np.abs(w_scaled - w_base / abs(lam)).max()))
    if worst_h > 1e-5:
        failures.append(f"homogeneity violated by {worst_h:.3e}")

    # Wigner round trip on a random smooth state
    ygrid = cv.Grid1D(-8.0, 8.0, 384)
    mix = cv.harmonic_eigenstate(ygrid, 0).values + 0.6j * cv.harmonic_eigenstate(ygrid, 1).values
    mix = mix + 0.3 * cv.harmonic_eigenstate(ygrid, 2).values
    mix /= math.sqrt(float(np.sum(np.abs(mix) ** 2 * ygrid.weights)))
    rho = cv.pure_density_grid(cv.WaveFunction1D(ygrid, mix))
    wig = cv.wigner_from_density(rho)
    back = cv.density_from_wigner(wig)
    rt = float(np.abs(back.values - rho.values).max())
    if rt > 1e-7:
        failures.append(f"Wigner round trip off by {rt:.3e}")

    # first excited state: negative Wigner core, nonnegative tomogram
    centered = cv.Grid1D(-6.0, 6.0, 257)
    excited = cv.harmonic_eigenstate(n=1)
    wig1 = cv.wigner_from_density(cv.pure_density_grid(excited), centered, centered)
    w00 = wig1.values[centered.n // 2, centered.n // 2]
    if abs(w00 + 2.0) > 1e-5:
        failures.append(f"excited-state W(0,0) = {w00!r}, expected -2")
    w1 = cv.tomogram_wavefunction(excited, (0.8, 0.6), xgrid)
    if w1.min() < -1e-9:
        failures.append(f"excited-state tomogram negative: {w1.min():.3e}")

    # route equivalence on random packets
    worst_route = 0.0
    for _ in range(3):
        packet = cv.gaussian_packet(
            x0=rng.uniform(-1, 1), p0=rng.uniform(-1, 1), width=rng.uniform(0.8, 1.3)
        )
        axis = cv.TomographyAxis(rng.uniform(-1.5, 1.5), rng.uniform(0.3, 1.5))
        small_x = cv.Grid1D(-6.0, 6.0, 301)
        via_psi = cv.tomogram_wavefunction(packet, axis, small_x)
        via_rho = cv.tomogram_density(cv.pure_density_grid(packet), axis, small_x)
        wigner = cv.wigner_from_density(cv.pure_density_grid(packet))
        via_radon = cv.tomogram_from_wigner(wigner, axis, small_x)
        worst_route = max(
            worst_route,
            float(np.abs(via_psi - via_rho).max()),
            float(np.abs(via_psi - via_radon).max()),
        )
    if worst_route > 1e-4:
        failures.append(f"route equivalence off by {worst_route:.3e}")

    # tomogram family -> Wigner (and back through the Radon transform)
    fam_x = cv.Grid1D(-50.0, 50.0, 384)
    fam_mu = cv.Grid1D(-7.0, 7.0, 36)
    fam_nu = cv.Grid1D(-7.0, 7.0, 36)
    family = cv.tomogram_family(ground, fam_x, fam_mu, fam_nu)
    out = cv.Grid1D(-6.0, 6.0, 129)
    wig_rec = cv.wigner_from_tomogram(family, out, out)
    ref = 2.0 * np.exp(-out.points[:, None] ** 2 - out.points[None, :] ** 2)
    eq49 = float(np.abs(wig_rec.values - ref).max())
    if eq49 > 1e-3:
        failures.append(f"tomogram->Wigner reconstruction off by {eq49:.3e}")
    if abs(wig_rec.norm() - 1.0) > 1e-3:
        failures.append(f"tomogram->Wigner normalization off by {wig_rec.norm() - 1.0:.3e}")
    coherent = cv.gaussian_packet(x0=0.8, p0=0.5)
    fam_c = cv.tomogram_family(coherent, fam_x, fam_mu, fam_nu)
    wig_c = cv.wigner_from_tomogram(fam_c, out, out)
    axis = cv.TomographyAxis(0.6, 0.8)
    w_back = cv.tomogram_from_wigner(wig_c, axis, cv.Grid1D(-6.0, 6.0, 241))
    w_direct = cv.tomogram_wavefunction(coherent, axis, cv.Grid1D(-6.0, 6.0, 241))
    rt49 = float(np.abs(w_back - w_direct).max())
    if rt49 > 1e-3:
        failures.append(f"full tomogram round trip off by {rt49:.3e}")

    return _result(
        "CV tomography: analytic oracles, transits, round trips",
        not failures,
        "; ".join(failures) if failures else
        f"gauss {worst_gauss:.1e}, homogeneity {worst_h:.1e}, wigner rt {rt:.1e}, "
        f"routes {worst_route:.1e}, eq49 {eq49:.1e}, family rt {rt49:.1e}",
        t0,
    )


ALL_CHECKS = (
    check_two_level_energies,
    check_picture_equivalence,
    check_spectrum_correspondence,
    check_spin_round_trip,
    check_bogolyubov,
    check_cv_tomography,
)


def run_checks(selected=None) -> list[CheckResult]:
    """Run the verification suite; ``selected`` filters by 1-based index."""
    results = []
    for idx, check in enumerate(ALL_CHECKS, start=1):
        if selected and idx not in selected:
            continue
        results.append(check())
    return results
