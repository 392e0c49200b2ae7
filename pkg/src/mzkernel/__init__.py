"""Exact decision of the Mathieu-Zhao property for kernels of linear
maps on finite abelian group algebras, with a brute-force definitional
oracle for cross-validation."""

__version__ = "0.1.0"

from .fields import (
    FieldError,
    FieldSpec,
    field_make,
    format_element,
    parse_element,
)
from .groups import GroupError, GroupSpec, SubgroupEmbedding, sylow_split
from .algebra import (
    AlgebraError,
    LinearMap,
    alg_make,
    averaging_idempotent,
    format_algebra_element,
    is_idempotent,
    power_cycle,
)
from .characters import (
    character_table,
    gamma_matrix,
    primitive_idempotents,
)
from .subsetsum import SearchError, zero_sum_subset_search
from .decision import (
    DecisionError,
    DecisionReport,
    decide,
    instance_gamma,
    verify_witness,
)
from .oracle import (
    OracleBudget,
    OracleError,
    definitional_mz_check,
    harness_quotient,
    harness_subgroup_restriction,
    idempotent_survey,
    radical_elements,
)
from .backend import resolve_backend
from .instancefile import Instance, InstanceError, load_instance, parse_instance, render_instance

__all__ = [
    "__version__",
    "FieldError", "FieldSpec", "field_make", "format_element", "parse_element",
    "GroupError", "GroupSpec", "SubgroupEmbedding", "sylow_split",
    "AlgebraError", "LinearMap", "alg_make", "averaging_idempotent",
    "format_algebra_element", "is_idempotent", "power_cycle",
    "character_table", "gamma_matrix", "primitive_idempotents",
    "SearchError", "zero_sum_subset_search",
    "DecisionError", "DecisionReport", "decide", "instance_gamma",
    "verify_witness",
    "OracleBudget", "OracleError", "definitional_mz_check",
    "harness_quotient", "harness_subgroup_restriction",
    "idempotent_survey", "radical_elements",
    "resolve_backend",
    "Instance", "InstanceError", "load_instance", "parse_instance",
    "render_instance",
]
