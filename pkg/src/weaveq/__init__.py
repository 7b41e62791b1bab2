"""Genuine multipartite correlations, weaving and quantum neural complexity."""

from .config import CapacityError, DomainError, PreconditionError, WeaveqError, settings
from .correlations import (
    EXACT,
    SYMMETRIC,
    CorrelationProfile,
    WeightScheme,
    closest_product_partition,
    cluster_multiinfo_average,
    correlation_profile,
    correlations_above_k,
    genuine_k_correlations,
    make_weight_scheme,
    multi_information,
    neural_complexity,
    neural_component,
    weaving,
)
from .ghz_analytic import (
    GhzParams,
    ghz_above_k,
    ghz_global_entropy,
    ghz_marginal_entropy,
    ghz_neural_complexity,
    ghz_neural_component,
    ghz_profile,
    ghz_sweep,
    ghz_weaving,
)
from .partitions import PartitionShape, SetPartition, enumerate_partition_shapes, enumerate_set_partitions
from .qcore import (
    DensityMatrix,
    KrausChannel,
    apply_local_channel,
    make_ghz_state,
    partial_trace,
    random_density,
    random_symmetric_density,
    relative_entropy,
    standard_channel,
    tensor_product,
    validate_state,
    von_neumann_entropy,
)

__version__ = "0.1.0"
