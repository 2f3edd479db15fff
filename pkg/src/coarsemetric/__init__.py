"""Finite coarse spaces, uniform spaces and poset-valued generalized metrics."""

from .coarse import (
    CoarseMetricCert,
    CoarseStructure,
    closure_bar,
    dominates,
    equivalent,
    generate,
    is_coarse_metric,
    is_saturated,
    metric_from_base,
    saturated_metric,
    structure_from_metric,
)
from .errors import (
    CapacityError,
    CoarseMetricError,
    FormatError,
    GroundMismatchError,
    HypothesisError,
    NotABaseError,
)
from .hyperspace import (
    Hyperspace,
    check_entourage,
    hausdorff_metric,
    hausdorff_structure,
)
from .metric import GenMetric
from .poset import INF, MonotoneMap, Poset, inclusion_poset
from .props import SpaceMap
from .relset import GroundSet, Relation, diagonal
from .uniform import UniformBase, metric_from_uniform_base
from .valuation import OMEGA, PadicRing, valuate, valuation_metric

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "check_entourage",
    "closure_bar",
    "CoarseMetricCert",
    "CoarseMetricError",
    "CoarseStructure",
    "diagonal",
    "dominates",
    "equivalent",
    "FormatError",
    "generate",
    "GenMetric",
    "GroundMismatchError",
    "GroundSet",
    "hausdorff_metric",
    "hausdorff_structure",
    "Hyperspace",
    "HypothesisError",
    "inclusion_poset",
    "INF",
    "is_coarse_metric",
    "is_saturated",
    "metric_from_base",
    "metric_from_uniform_base",
    "MonotoneMap",
    "NotABaseError",
    "OMEGA",
    "PadicRing",
    "Poset",
    "Relation",
    "saturated_metric",
    "SpaceMap",
    "structure_from_metric",
    "UniformBase",
    "valuate",
    "valuation_metric",
]
