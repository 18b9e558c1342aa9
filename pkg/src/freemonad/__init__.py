"""Vector bundles on P^n given by free monads: cohomology tables, stable
extensions, splitting and extension bounds, all in exact arithmetic."""

from .cohomology import (
    CohomologyTable,
    GradedModule,
    SplitType,
    euler_poly,
    h0_piece,
    h1_module,
    h1_piece,
    h_top_pieces,
    intermediate_piece,
    mu,
    split_check,
    table,
)
from .extension import (
    ExtensionCertificate,
    extend,
    extend_once,
    restrict_hyperplane,
    restriction_map_h1,
    verify_stable_extension,
)
from .field import FieldSpec
from .monad import (
    EpiCheckResult,
    GradedMap,
    Monad,
    TwistSum,
    builtin,
    check_locally_split_mono,
    check_sheaf_epi,
    compose_check,
    direct_sum,
    dual,
    euler,
    linesum,
    nullcorr,
    random_monad,
    substitute_linear,
    twist,
    validate,
)
from .poly import HomogeneousForm, monomial_basis, mult_map_matrix
from .theorems import (
    BoundReport,
    condition_i,
    lemma2_check,
    lemma3_check,
    theorem0_check,
    theorem7_bound,
    vanishing_chain_check,
)

__version__ = "0.1.0"
