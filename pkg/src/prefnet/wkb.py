"""Weighted conditional knowledge bases: extraction, weights and coherence."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .concepts import (
    Atom,
    KnowledgeBaseDoc,
    Top,
    Typ,
    TypicalityInclusion,
    is_identifier,
)
from .fuzzy import GOEDEL, FuzzyModel, LogicChoice, fuzzy_extension
from .mlp import Network
from .prefcore import (
    DEFAULT_EPSILON,
    ModelError,
    MultiPrefModel,
    PreferenceRelation,
    UnknownNameError,
    check_inclusion,
    eval_concept,
)


@dataclass(frozen=True)
class WeightedKB:
    """Strict axioms, per-concept blocks of (rhs, weight) for T(C) <= rhs, and assertions."""

    blocks: Mapping[str, tuple] = field(default_factory=dict)
    strict_axioms: tuple = ()
    assertions: tuple = ()

    def __post_init__(self):
        blocks = {}
        for name, entries in self.blocks.items():
            entries = tuple((rhs, float(w)) for rhs, w in entries)
            for _, w in entries:
                if not math.isfinite(w):
                    raise ValueError(f"block {name}: weights must be finite")
            blocks[name] = entries
        object.__setattr__(self, "blocks", blocks)

    @property
    def distinguished(self) -> tuple:
        """Concepts on the left of at least one typicality inclusion."""
        return tuple(name for name, entries in self.blocks.items() if entries)

    def to_document(self) -> KnowledgeBaseDoc:
        blocks = {
            name: tuple(TypicalityInclusion(Typ(Atom(name)), rhs, w) for rhs, w in entries)
            for name, entries in self.blocks.items()
        }
        return KnowledgeBaseDoc(self.strict_axioms, blocks, self.assertions)

    @classmethod
    def from_document(cls, doc: KnowledgeBaseDoc) -> "WeightedKB":
        blocks = {name: tuple((inc.rhs, inc.weight) for inc in incs) for name, incs in doc.weighted_blocks.items()}
        return cls(blocks, doc.strict_axioms, doc.assertions)


def extract_kb(net: Network, focus: Optional[Iterable[str]] = None) -> WeightedKB:
    """One block per focus unit k: (C_j, w_kj) per incoming edge, then (Top, b_k).

    Defaults to all computation units; input units yield empty blocks.
    """
    focus = [u.name for u in net.computation_units] if focus is None else list(focus)
    inputs = set(net.inputs)
    for name in focus:
        net.unit(name)
    for u in net.units:
        if not is_identifier(u.name):
            raise ModelError(f"unit name {u.name!r} cannot be used as a concept name")
    blocks = {}
    for name in (u.name for u in net.units if u.name in set(focus)):
        if name in inputs:
            blocks[name] = ()
            continue
        entries = [(Atom(e.source), e.weight) for e in net.incoming(name)]
        entries.append((Top(), net.unit(name).bias))
        blocks[name] = tuple(entries)
    return WeightedKB(blocks)


def _block(kb: WeightedKB, concept: str) -> tuple:
    if concept not in kb.blocks:
        raise UnknownNameError("concept", concept)
    return kb.blocks[concept]


def weight_two_valued(model: MultiPrefModel, kb: WeightedKB, concept: str, x) -> float:
    """Sum of the weights of the concept's inclusions that ``x`` verifies; -inf off the concept."""
    entries = _block(kb, concept)
    if x not in set(model.domain):
        raise ModelError(f"{x!r} is not a domain element")
    if x not in eval_concept(model, Atom(concept)):
        return -math.inf
    return sum(w for rhs, w in entries if x in eval_concept(model, rhs))


def weight_fuzzy(model: FuzzyModel, kb: WeightedKB, concept: str, x, logic: LogicChoice = GOEDEL) -> float:
    """sum_h w_h * D_h(x)."""
    return fuzzy_weights(model, kb, concept, logic)[x]


def fuzzy_weights(model: FuzzyModel, kb: WeightedKB, concept: str, logic: LogicChoice = GOEDEL) -> dict:
    entries = _block(kb, concept)
    total = dict.fromkeys(model.domain, 0.0)
    for rhs, w in entries:
        degrees = fuzzy_extension(model, rhs, logic)
        for x in model.domain:
            total[x] += w * degrees[x]
    return total


def weight_table(model, kb: WeightedKB, logic: LogicChoice = GOEDEL) -> dict:
    """W_i(x) for every distinguished concept i and element x (two-valued or fuzzy model)."""
    table = {}
    for name in kb.blocks:
        if isinstance(model, FuzzyModel):
            table[name] = fuzzy_weights(model, kb, name, logic)
        else:
            table[name] = {x: weight_two_valued(model, kb, name, x) for x in model.domain}
    return table


def preference_from_weights(table: Mapping[str, Mapping], concept: str,
                            epsilon: float = DEFAULT_EPSILON) -> PreferenceRelation:
    """x < y iff W(x) > W(y); -inf weights become +inf scores."""
    if concept not in table:
        raise UnknownNameError("concept", concept)
    return PreferenceRelation({x: -w for x, w in table[concept].items()}, epsilon)


@dataclass(frozen=True)
class Violation:
    concept: str
    x: object
    y: object
    degree_x: float
    degree_y: float
    weight_x: float
    weight_y: float


@dataclass(frozen=True)
class CoherenceReport:
    holds: bool
    violations: tuple = ()


def check_coherence(model: FuzzyModel, kb: WeightedKB, logic: LogicChoice = GOEDEL,
                    epsilon: float = DEFAULT_EPSILON) -> CoherenceReport:
    """Check C(x) >= C(y) iff W(x) >= W(y) for every distinguished C and ordered pair.

    A pair violates when one side holds (``>=``) while the other fails by
    more than ``epsilon``.
    """
    violations = []
    for name in kb.distinguished:
        if name not in model.membership:
            raise UnknownNameError("concept", name)
        deg = model.membership[name]
        weights = fuzzy_weights(model, kb, name, logic)
        for x in model.domain:
            for y in model.domain:
                cx, cy, wx, wy = deg[x], deg[y], weights[x], weights[y]
                if (cx >= cy and wx < wy - epsilon) or (wx >= wy and cx < cy - epsilon):
                    violations.append(Violation(name, x, y, cx, cy, wx, wy))
    return CoherenceReport(not violations, tuple(violations))


def strict_violations(model: MultiPrefModel, kb: WeightedKB) -> list:
    """Reports of the strict axioms that fail on ``model``."""
    return [r for r in (check_inclusion(model, ax) for ax in kb.strict_axioms) if not r.holds]

