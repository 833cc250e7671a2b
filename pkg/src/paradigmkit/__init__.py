"""Paradigm coordination models as labelled transition systems.

Translate a Paradigm model into synchronizing processes, compose them into a
state space, and shrink components first by abstracting from globally inert
actions modulo branching bisimulation.
"""

from .bisim import branching_quotient, equivalent, oracle_equivalent
from .generators import client_server
from .lts import (
    TAU,
    Label,
    LabelSet,
    Lts,
    SyncRule,
    SyncRuleSet,
    compose,
    deadlocks,
    export_aut,
    hide,
    import_aut,
    stats,
)
from .model import ParadigmModel, Partition, Phase, Role, Std, Trap, validate_model
from .modelfile import parse_model, print_model
from .reduction import (
    inert_transitions,
    instance_inert_report,
    quotient_detailed,
    reduced_system,
    verify_detailed_preservation,
    verify_reduction,
)
from .translate import translate_component_dg, translate_global, translate_model, translate_system

__all__ = [
    "TAU", "Label", "LabelSet", "Lts", "SyncRule", "SyncRuleSet", "compose", "deadlocks",
    "export_aut", "hide", "import_aut", "stats",
    "ParadigmModel", "Partition", "Phase", "Role", "Std", "Trap", "validate_model",
    "parse_model", "print_model", "client_server",
    "branching_quotient", "equivalent", "oracle_equivalent",
    "translate_component_dg", "translate_global", "translate_model", "translate_system",
    "inert_transitions", "instance_inert_report", "quotient_detailed", "reduced_system",
    "verify_detailed_preservation", "verify_reduction",
]
