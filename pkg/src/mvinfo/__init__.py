"""Multivariate information measures over discrete distributions."""
from .dist import DiscreteDistribution, SourceTargetSplit, condition, group, marginalize, validate
from .measures import (
    co_information,
    conditional_entropy,
    conditional_mutual_information,
    delta_i,
    dual_total_correlation,
    entropy,
    interaction_information,
    mi_delta_gap,
    mutual_information,
    redundancy_synergy_index,
    total_correlation,
    varadan_synergy,
)
from .pid import decompose

__all__ = [
    "DiscreteDistribution", "SourceTargetSplit", "condition", "group", "marginalize", "validate",
    "entropy", "conditional_entropy", "mutual_information", "conditional_mutual_information",
    "interaction_information", "co_information", "total_correlation", "dual_total_correlation",
    "delta_i", "mi_delta_gap", "redundancy_synergy_index", "varadan_synergy", "decompose",
]
