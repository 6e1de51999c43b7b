"""tomo: invertible maps between classical linear Hamiltonian systems,
finite-level quantum states, and tomographic probability distributions.

Phase-space points map to spinors and rank-1 density matrices; spin
states map to measurable probability tables over quantization axes and
back; linear canonical transformations act on every representation; and
the single-mode continuous case connects wavefunctions, density
matrices, Wigner functions, and symplectic tomograms on sampled grids.
"""

import os as _os

# Cap BLAS thread pools before numpy is first imported anywhere in the
# package; TOMO_THREADS is the only environment knob.
if "TOMO_THREADS" in _os.environ:
    _count = _os.environ["TOMO_THREADS"]
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _count)

from .angular import (  # noqa: E402
    EulerAngles,
    QuadratureGrid,
    projections,
    small_d,
    sphere_quadrature,
    three_j,
    wigner_D,
    wigner_D_matrix,
    wigner_d_matrix,
)
from .canonical import (  # noqa: E402
    BogolyubovPair,
    ConjugateMoment,
    SymplecticMatrix,
    conjugate_moment,
    point_transform_uv,
    random_symplectic,
    transform_density,
    transform_spinor,
    transformed_tomogram,
    uv_from_symplectic,
    validate_symplectic,
)
from .cv import (  # noqa: E402
    DensityGrid,
    Grid1D,
    TomographyAxis,
    TomogramGrid,
    WaveFunction1D,
    WignerGrid,
    density_from_wigner,
    gaussian_packet,
    harmonic_eigenstate,
    pure_density_grid,
    tomogram_density,
    tomogram_family,
    tomogram_from_wigner,
    tomogram_wavefunction,
    wigner_from_density,
    wigner_from_tomogram,
)
from .dynamics import (  # noqa: E402
    DoubledGenerator,
    FlowMatrix,
    HermitianHamiltonian,
    QuadraticFormB,
    build_A,
    build_B,
    doubled_generator,
    evolve_classical,
    evolve_quantum,
    normal_mode_frequencies,
    sigma_matrix,
    two_level_energies,
    two_level_hamiltonian,
)
from .errors import NumericsError, TomoError, ValidationError  # noqa: E402
from .spin_tomography import (  # noqa: E402
    SpinTomogram,
    reconstruct,
    rotate_density,
    tomogram,
)
from .states import (  # noqa: E402
    DensityMatrix,
    MixedEnsemble,
    PhaseSpacePoint,
    Spinor,
    mixed_density,
    phase_to_spinor,
    pure_density,
    spinor_to_phase,
)

__version__ = "0.1.0"
