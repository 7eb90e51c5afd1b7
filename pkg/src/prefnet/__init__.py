"""Preferential and fuzzy logical models of trained neural networks."""

from .concepts import parse_axioms, parse_concept, parse_kb, render
from .fuzzy import FuzzyModel, LogicChoice
from .mlp import Network, build_fuzzy_model, build_two_valued_model, evaluate_network
from .prefcore import MultiPrefModel, PreferenceRelation, check_inclusion, eval_concept
from .som import SomMap, build_som_model, train_som
from .wkb import WeightedKB, check_coherence, extract_kb

__version__ = "0.1.0"

__all__ = [
    "FuzzyModel", "LogicChoice", "MultiPrefModel", "Network", "PreferenceRelation", "SomMap", "WeightedKB",
    "build_fuzzy_model", "build_som_model", "build_two_valued_model", "check_coherence", "check_inclusion",
    "eval_concept", "evaluate_network", "extract_kb", "parse_axioms", "parse_concept", "parse_kb", "render",
    "train_som",
]
