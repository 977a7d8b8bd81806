"""The algebras B and A built from a section, the functors between their modules, and localization."""

from .functors import koszul_dual, koszul_F, koszul_G
from .localization import (
    LocalizedTruncation,
    TPeriodicModule,
    WeightTruncation,
    check_counit,
    counit_map,
    localize_t,
    reduced_degrees,
    truncate_nonpositive,
    unit_map,
)
from .psi import LaurentQuotientModule, build_OY_laurent, psi_check, psi_map
from .quotient import QuotientBasis
from .regrade import regrade, regrade_mu, regrade_mu_inverse, same_presentation
from .section import (
    SectionData,
    build_A,
    build_B,
    build_base_ring,
    build_koszul_resolution,
    poly_degree,
    potential,
)
from .support import (
    INCONCLUSIVE,
    NOT_SUPPORTED,
    SUPPORTED,
    SupportCertificate,
    check_supported_on_X,
    t_stabilized_dim,
    t_stabilized_table,
)
