"""Construction and exact verification of spanning bipartite block designs."""
from .algebra import (
    FiniteField,
    FiniteGroup,
    field_mul,
    field_of_order,
    group_add,
    group_neg,
    make_field,
    parse_field,
    parse_group,
)
from .errors import (
    ConstructionError,
    DegenerateError,
    DesignError,
    SearchFailure,
    StructureError,
    VerificationError,
)
from .incidence import (
    DifferenceMatrix,
    GddParams,
    GroupedDesign,
    RLambdaParams,
    ag_hyperplane_gdd,
    bose_connor_check,
    complement,
    develop_difference_set,
    from_blocks,
    mult_table_dm,
    shift_dm_column,
    shift_dm_columns,
    transversal_design,
    verify_difference_matrix,
    verify_gdd,
    verify_r_lambda,
)
from .optimality import (
    EigenSpectrum,
    cs2_eigenvalues,
    e_certificate,
    e_optimal_gdd,
    min_positive_eigenvalue,
    numeric_spectrum,
)
from .sbbd import (
    BlockPartition,
    DesignMatrix,
    SbbdParams,
    SbbdResult,
    TileSet,
    apply_group_permutations,
    check_spanning,
    classify_information_matrix,
    construct_decomposed,
    construct_single,
    gdd_to_sbbd,
    information_matrix,
    partition_blocks,
    paste,
    repair_spanning_dm,
    repair_spanning_gdd,
    tiles_from_incidence,
    verify_sbbd,
)

__version__ = "0.1.0"
