"""Multipreference interpretations over finite domains and model checking.

A modular preference is stored as a score per element (lower is more
preferred, ``+inf`` allowed). Scores within ``epsilon`` of their sorted
neighbour are merged into one rank, so the strict relation
``rank(x) < rank(y)`` stays modular under tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Union

import numpy as np

from .concepts import (
    And,
    Atom,
    Axiom,
    Bottom,
    Concept,
    Exists,
    Forall,
    Not,
    Or,
    StrictInclusion,
    Top,
    Typ,
    TypicalityInclusion,
    render,
)

DEFAULT_EPSILON = 1e-9
TYPICALITY_MODES = ("per-concept", "global", "auto")


class ModelError(ValueError):
    pass


class UnknownNameError(ModelError):
    """A concept or role name the model does not interpret."""

    def __init__(self, kind: str, name: str):
        super().__init__(f"unknown {kind} name: {name}")
        self.kind = kind
        self.name = name


class TypicalityError(ModelError):
    pass


def _rank_scores(scores: Mapping[Hashable, float], epsilon: float) -> dict:
    for x, s in scores.items():
        if math.isnan(s):
            raise ModelError(f"score of {x!r} is NaN")
    order = sorted(scores, key=lambda x: scores[x])
    ranks = {}
    rank = -1
    prev = None
    for x in order:
        s = scores[x]
        if prev is None or not (s == prev or s - prev <= epsilon):
            rank += 1
        ranks[x] = rank
        prev = s
    return ranks


@dataclass(frozen=True)
class PreferenceRelation:
    """Modular strict order induced by scores; lower score = more preferred."""

    scores: Mapping[Hashable, float]
    epsilon: float = DEFAULT_EPSILON
    ranks: Mapping[Hashable, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.epsilon < 0:
            raise ModelError("epsilon must be non-negative")
        scores = {x: float(s) for x, s in self.scores.items()}
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "ranks", _rank_scores(scores, self.epsilon))

    @property
    def domain(self) -> frozenset:
        return frozenset(self.scores)

    def less(self, x, y) -> bool:
        return self.ranks[x] < self.ranks[y]

    def leq(self, x, y) -> bool:
        return self.ranks[x] <= self.ranks[y]

    def pairs(self) -> frozenset:
        return frozenset((x, y) for x in self.ranks for y in self.ranks if self.ranks[x] < self.ranks[y])


@dataclass(frozen=True)
class StrictOrder:
    """Explicit strict relation given as a set of ``(smaller, larger)`` pairs."""

    domain: frozenset
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "domain", frozenset(self.domain))
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))
        for x, y in self.pairs:
            if x not in self.domain or y not in self.domain:
                raise ModelError(f"pair {(x, y)!r} outside the domain")

    def less(self, x, y) -> bool:
        return (x, y) in self.pairs


Order = Union[PreferenceRelation, StrictOrder]


def minimal(order: Order, subset: Iterable) -> frozenset:
    """Elements of ``subset`` with no strictly smaller element in ``subset``."""
    subset = frozenset(subset)
    if not subset:
        return frozenset()
    if isinstance(order, PreferenceRelation):
        best = min(order.ranks[u] for u in subset)
        return frozenset(u for u in subset if order.ranks[u] == best)
    return frozenset(u for u in subset if not any((z, u) in order.pairs for z in subset))


def pareto_combine(prefs: Iterable[PreferenceRelation]) -> StrictOrder:
    """Global preference: x < y iff x <_i y for some i and x <=_i y for all i."""
    prefs = list(prefs)
    if not prefs:
        raise ModelError("need at least one preference to combine")
    domain = prefs[0].domain
    for p in prefs[1:]:
        if p.domain != domain:
            raise ModelError("preferences are defined over different domains")
    elems = sorted(domain, key=repr)
    ranks = np.array([[p.ranks[x] for x in elems] for p in prefs])
    lt = ranks[:, :, None] < ranks[:, None, :]
    le = ranks[:, :, None] <= ranks[:, None, :]
    glob = lt.any(axis=0) & le.all(axis=0)
    xs, ys = np.nonzero(glob)
    return StrictOrder(domain, frozenset((elems[i], elems[j]) for i, j in zip(xs, ys)))


@dataclass(frozen=True)
class PreferenceReport:
    irreflexive: bool
    transitive: bool
    modular: bool
    well_founded: bool

    @property
    def ok(self) -> bool:
        return self.irreflexive and self.transitive and self.modular and self.well_founded


def _has_cycle(domain, pairs) -> bool:
    succ = {x: [] for x in domain}
    for x, y in pairs:
        succ[x].append(y)
    state = dict.fromkeys(domain, 0)  # 0 new, 1 on stack, 2 done
    for root in domain:
        if state[root]:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if state[nxt] == 1:
                    return True
                if state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
                    break
            else:
                state[node] = 2
                stack.pop()
    return False


def validate_preference(relation, pairs=None) -> PreferenceReport:
    """Exhaustively check the order axioms.

    ``relation`` is a PreferenceRelation, a StrictOrder, or a domain iterable
    given together with an explicit ``pairs`` set. Well-foundedness on a
    finite domain is checked as absence of cycles.
    """
    if isinstance(relation, PreferenceRelation):
        domain, pairs = relation.domain, relation.pairs()
    elif isinstance(relation, StrictOrder):
        domain, pairs = relation.domain, relation.pairs
    else:
        pairs = frozenset(tuple(p) for p in pairs)
        domain = frozenset(relation) | {x for p in pairs for x in p}
    irreflexive = all(x != y for x, y in pairs)
    transitive = all((x, z) in pairs for x, y in pairs for y2, z in pairs if y == y2)
    modular = all((x, z) in pairs or (z, y) in pairs for x, y in pairs for z in domain)
    return PreferenceReport(irreflexive, transitive, modular, not _has_cycle(domain, pairs))


@dataclass(frozen=True)
class MultiPrefModel:
    """Finite domain, two-valued interpretation and per-concept preferences."""

    domain: tuple
    extensions: Mapping[str, frozenset]
    prefs: Mapping[str, PreferenceRelation] = field(default_factory=dict)
    roles: Mapping[str, frozenset] = field(default_factory=dict)
    labels: Mapping = field(default_factory=dict)
    global_order: Optional[StrictOrder] = None

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        dom = frozenset(self.domain)
        if not dom:
            raise ModelError("domain must be non-empty")
        if len(dom) != len(self.domain):
            raise ModelError("duplicate domain elements")
        exts = {k: frozenset(v) for k, v in self.extensions.items()}
        for name, ext in exts.items():
            if not ext <= dom:
                raise ModelError(f"extension of {name} leaves the domain")
        roles = {k: frozenset(tuple(p) for p in v) for k, v in self.roles.items()}
        for name, rel in roles.items():
            if any(x not in dom or y not in dom for x, y in rel):
                raise ModelError(f"role {name} leaves the domain")
        for name, pref in self.prefs.items():
            if name not in exts:
                raise ModelError(f"distinguished concept {name} has no extension")
            if pref.domain != dom:
                raise ModelError(f"preference for {name} is not over the model domain")
        if self.global_order is not None and self.global_order.domain != dom:
            raise ModelError("global order is not over the model domain")
        object.__setattr__(self, "extensions", exts)
        object.__setattr__(self, "roles", roles)
        object.__setattr__(self, "prefs", dict(self.prefs))

    @property
    def distinguished(self) -> tuple:
        return tuple(self.prefs)

    def with_global_order(self) -> "MultiPrefModel":
        """Copy of the model carrying the Pareto combination of its preferences."""
        if not self.prefs:
            raise ModelError("model has no distinguished concepts to combine")
        return MultiPrefModel(
            self.domain, self.extensions, self.prefs, self.roles, self.labels,
            pareto_combine(self.prefs.values()),
        )

    def sort(self, elems: Iterable) -> tuple:
        elems = set(elems)
        return tuple(x for x in self.domain if x in elems)


def _typ_order(model: MultiPrefModel, arg: Concept, mode: str) -> Order:
    if mode == "auto":
        mode = "per-concept" if isinstance(arg, Atom) and arg.name in model.prefs else "global"
    if mode == "per-concept":
        if not isinstance(arg, Atom):
            raise TypicalityError(f"T({render(arg)}) needs the global preference (typicality mode 'global')")
        if arg.name not in model.prefs:
            raise TypicalityError(f"{arg.name} is not a distinguished concept")
        return model.prefs[arg.name]
    if mode == "global":
        if model.global_order is None:
            raise TypicalityError("model has no global preference")
        return model.global_order
    raise ValueError(f"unknown typicality mode {mode!r}; expected one of {TYPICALITY_MODES}")


def eval_concept(model: MultiPrefModel, c: Concept, mode: str = "per-concept") -> frozenset:
    """Extension of ``c`` in ``model``."""
    dom = frozenset(model.domain)
    if isinstance(c, Atom):
        if c.name not in model.extensions:
            raise UnknownNameError("concept", c.name)
        return model.extensions[c.name]
    if isinstance(c, Top):
        return dom
    if isinstance(c, Bottom):
        return frozenset()
    if isinstance(c, Not):
        return dom - eval_concept(model, c.arg, mode)
    if isinstance(c, And):
        return eval_concept(model, c.left, mode) & eval_concept(model, c.right, mode)
    if isinstance(c, Or):
        return eval_concept(model, c.left, mode) | eval_concept(model, c.right, mode)
    if isinstance(c, (Exists, Forall)):
        if c.role not in model.roles:
            raise UnknownNameError("role", c.role)
        filler = eval_concept(model, c.filler, mode)
        succ: dict = {}
        for x, y in model.roles[c.role]:
            succ.setdefault(x, set()).add(y)
        if isinstance(c, Exists):
            return frozenset(x for x in dom if succ.get(x, set()) & filler)
        return frozenset(x for x in dom if succ.get(x, set()) <= filler)
    if isinstance(c, Typ):
        order = _typ_order(model, c.arg, mode)
        return minimal(order, eval_concept(model, c.arg, mode))
    raise TypeError(f"not a concept: {c!r}")


@dataclass(frozen=True)
class CheckReport:
    axiom: Axiom
    holds: bool
    counterexamples: tuple = ()
    degrees: Mapping = field(default_factory=dict)
    statistics: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.holds == bool(self.counterexamples):
            raise ValueError("counterexamples must be non-empty exactly when the check fails")


def check_inclusion(model: MultiPrefModel, axiom: Axiom, mode: str = "per-concept") -> CheckReport:
    """Model-check a strict or typicality inclusion: lhs extension within rhs."""
    if not isinstance(axiom, (StrictInclusion, TypicalityInclusion)):
        raise TypeError(f"cannot check {type(axiom).__name__} on a two-valued model")
    lhs = eval_concept(model, axiom.lhs, mode)
    rhs = eval_concept(model, axiom.rhs, mode)
    bad = model.sort(lhs - rhs)
    return CheckReport(axiom, not bad, bad)
