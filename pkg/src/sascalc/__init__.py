"""sascalc: a calculus for symbiotic systems.

Core pieces: the system 8-tuple and its well-formedness checks (model),
symbiotic fusion with quantified relation gains (fusion), recursive layered
structure (topology), error-rate cancellation (reliability), the 16-taxon
behavior ladder with an event dispatcher (him), concept algebra measured in
bir (knowledge), predator-prey dynamics (dynamics), and the .sas text
format (dsl). The HTTP service lives in sascalc.service, the command-line
client in sascalc.cli.
"""

__version__ = "0.1.0"

from .errors import SasError
from .fusion import FusionResult, fuse, gain_oracle, symbiotic_gain
from .him import Dispatcher, classify, taxonomy
from .knowledge import (
    Concept,
    KnowledgeBase,
    KnowledgeItem,
    compose_layer,
    entire_knowledge_measure,
    knowledge_symbiosis_gain,
    memory_capacity_log10,
)
from .model import Behavior, System, Violation, new_system, validate
from .reliability import (
    ErrorProfile,
    cancellation_delta,
    collective_reliability,
    summed_reliability,
)
from .topology import LayeredSystem, abstract_up, big_r_fold, leaf, leaves, refine_down

__all__ = [
    "__version__",
    "SasError",
    "FusionResult",
    "fuse",
    "gain_oracle",
    "symbiotic_gain",
    "Dispatcher",
    "classify",
    "taxonomy",
    "Concept",
    "KnowledgeBase",
    "KnowledgeItem",
    "compose_layer",
    "entire_knowledge_measure",
    "knowledge_symbiosis_gain",
    "memory_capacity_log10",
    "Behavior",
    "System",
    "Violation",
    "new_system",
    "validate",
    "ErrorProfile",
    "cancellation_delta",
    "collective_reliability",
    "summed_reliability",
    "LayeredSystem",
    "abstract_up",
    "big_r_fold",
    "leaf",
    "leaves",
    "refine_down",
]
