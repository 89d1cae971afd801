"""Horn inequalities and the frequency-map polytopes of a symmetric matrix."""

from .eigen import eigenvalues_sym, eigh_jacobi, eigh_jacobi_batch
from .estimators import DiagonalProjector, HornPolytopeMembership, P1Membership, PMembership
from .experiments import (
    ExperimentConfig,
    RunReport,
    SampleRecord,
    run_adapted,
    run_imF,
    run_projection,
    summarize,
)
from .horn import (
    HornTriple,
    TripleTable,
    domino_double,
    generate_T,
    generate_U,
    horn_inequality_slack,
    verify_domino_theorem,
)
from .mechanics import (
    MassConfiguration,
    angular_momentum,
    frequency_map,
    inertia_matrix,
    relative_equilibrium_momentum,
)
from .polytope import (
    PartitionPair,
    PolytopeSpec,
    build_P,
    build_P1,
    check_P_membership,
    compare_partitions,
    is_hermitian_spectrum,
    membership_slack,
    project_to_delta,
)
from .sampling import (
    HermitianStructure,
    adapted_structure,
    haar_rotation,
    random_hermitian_structure,
    random_rotation_product,
)

__version__ = "0.1.0"
