"""prodbase: construct, verify and classify product bases of C^2 (x) C^n."""

from .analyzer import (
    PairBlock,
    ProductBasis,
    RayClass,
    StructureReport,
    check_groupable,
    check_pairwise_condition,
    classify,
    factorize_all,
    left_classify,
    mu_check,
    swap_factors,
    verify_orthonormal,
    verify_product_basis,
)
from .generator import (
    FAMILY_TAGS,
    FIXED_QUBIT_STATES,
    PAULI_EIGENBASES,
    SKEW_MARGIN,
    FamilyParams,
    TypeSpec,
    generate_from_type,
    named_family,
    random_unitary,
)
from .numerics import (
    DEFAULT_TOL,
    OMEGA,
    OMEGA2,
    Subspace,
    Tolerances,
    canonical_phase,
    gram_residual,
    inner,
    norm,
    orthonormalize,
    singular_values_2xn,
    subspace_equal,
)
from .partitions import (
    MAX_N,
    Partition,
    partition_count,
    partitions_of,
    type_count_lower_bound,
)
from .product_space import NotAProduct, ProductVector, factorize, kron, qubit_orthogonal

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DEFAULT_TOL",
    "FAMILY_TAGS",
    "FIXED_QUBIT_STATES",
    "MAX_N",
    "OMEGA",
    "OMEGA2",
    "PAULI_EIGENBASES",
    "SKEW_MARGIN",
    "FamilyParams",
    "NotAProduct",
    "PairBlock",
    "Partition",
    "ProductBasis",
    "ProductVector",
    "RayClass",
    "StructureReport",
    "Subspace",
    "Tolerances",
    "TypeSpec",
    "canonical_phase",
    "check_groupable",
    "check_pairwise_condition",
    "classify",
    "factorize",
    "factorize_all",
    "generate_from_type",
    "gram_residual",
    "inner",
    "kron",
    "left_classify",
    "mu_check",
    "named_family",
    "norm",
    "orthonormalize",
    "partition_count",
    "partitions_of",
    "qubit_orthogonal",
    "random_unitary",
    "singular_values_2xn",
    "subspace_equal",
    "swap_factors",
    "type_count_lower_bound",
    "verify_orthonormal",
    "verify_product_basis",
]
