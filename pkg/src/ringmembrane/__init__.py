"""Natural frequencies of a ring membrane and identification of its fastening.

Forward: eigenvalues from a 2x4 boundary-condition matrix.  Inverse: the
matrix (up to row equivalence) from three eigenvalues, by way of its
Plucker coordinates.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateError,
    DomainError,
    NoSignChangeError,
    NotEnoughRootsError,
    NumericalError,
    OffQuadricError,
    RankDeficientError,
    RingMembraneError,
    SingularProjectionError,
    UnsupportedError,
    ValidationError,
)
from .special_functions import CylinderKind, bessel, cylinder_functions, radial_derivative  # noqa: E402
from .spectral import (  # noqa: E402
    Annulus,
    BoundaryConditions,
    EvaluationVector,
    Spectrum,
    basis_matrix,
    basis_minor,
    basis_minors,
    binet_cauchy_sum,
    characteristic_determinant,
)
from .forward import SearchConfig, find_eigenvalues, fit_outer_radius, refine_root  # noqa: E402
from .plucker import (  # noqa: E402
    PluckerVector,
    QuadricResidual,
    equivalent,
    minors_of,
    plucker_distance,
    plucker_residual,
    project_to_quadric,
    reconstruct_matrix,
)
from .inverse import (  # noqa: E402
    FrequencySystem,
    IdentificationResult,
    ProbeRow,
    frequency_matrix,
    identify_boundary_conditions,
    null_space_solution,
    roundtrip,
    stability_probe,
)
