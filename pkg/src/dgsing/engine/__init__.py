"""Free dg modules, their constructions, and windowed cohomology."""

from .modules import (
    BASIS_CAP,
    FreeDgModule,
    GradedModule,
    InvalidMapError,
    ModGen,
    ModuleMap,
    RBasis,
    ResourceError,
    cone,
    direct_sum,
    free_module,
    graded_dual,
    identity_map,
    r_basis_module,
    rank_one,
    shift,
    tensor_over_R,
    twist,
    zero_map,
    zero_module,
)
from .windowed import (
    DEFAULT_WINDOW,
    CohomologyTable,
    ConeModule,
    LinearMap,
    Verdict,
    Window,
    WindowedComplex,
    check_bijective,
    check_chain_map,
    check_quasi_iso,
    cohomology,
    cohomology_dim,
    cohomology_representatives,
    generic_cone,
    induced_rank,
    is_exact_at,
    materialize,
    rank_mod_boundaries,
)
