"""Fuzzy interpretations over finite domains.

Each t-norm is paired with its residuated implication and dual t-conorm;
negation is always ``1 - a``.

=============  ===========  =======================
t-norm         implication  t-conorm
=============  ===========  =======================
minimum        goedel       maximum
product        goguen       probabilistic sum
lukasiewicz    lukasiewicz  bounded sum
=============  ===========  =======================
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .concepts import (
    And,
    Atom,
    Bottom,
    Concept,
    Exists,
    Forall,
    FuzzyInclusion,
    Not,
    Or,
    Top,
    Typ,
    contains_roles,
    contains_typicality,
)
from .prefcore import (
    DEFAULT_EPSILON,
    CheckReport,
    ModelError,
    MultiPrefModel,
    PreferenceRelation,
    UnknownNameError,
    minimal,
)


class UnsupportedConstructError(ModelError):
    pass


def _goedel(a: float, b: float) -> float:
    return 1.0 if a <= b else b


def _goguen(a: float, b: float) -> float:
    return 1.0 if a <= b else b / a


def _lukasiewicz_imp(a: float, b: float) -> float:
    return min(1.0, 1.0 - a + b)


TNORMS: dict[str, Callable[[float, float], float]] = {
    "minimum": min,
    "product": lambda a, b: a * b,
    "lukasiewicz": lambda a, b: max(0.0, a + b - 1.0),
}
TCONORMS: dict[str, Callable[[float, float], float]] = {
    "minimum": max,
    "product": lambda a, b: a + b - a * b,
    "lukasiewicz": lambda a, b: min(1.0, a + b),
}
IMPLICATIONS: dict[str, Callable[[float, float], float]] = {
    "goedel": _goedel,
    "goguen": _goguen,
    "lukasiewicz": _lukasiewicz_imp,
}
RESIDUUM = {"minimum": "goedel", "product": "goguen", "lukasiewicz": "lukasiewicz"}
# CLI names for the three logics
LOGIC_NAMES = {"goedel": "minimum", "product": "product", "lukasiewicz": "lukasiewicz"}


@dataclass(frozen=True)
class LogicChoice:
    tnorm: str = "minimum"
    implication: str = "goedel"

    def __post_init__(self):
        if self.tnorm not in TNORMS:
            raise ValueError(f"unknown t-norm {self.tnorm!r}")
        if RESIDUUM[self.tnorm] != self.implication:
            raise ValueError(
                f"implication {self.implication!r} is not the residuum of the {self.tnorm} t-norm"
            )

    @classmethod
    def named(cls, name: str) -> "LogicChoice":
        """``goedel``, ``product`` or ``lukasiewicz``."""
        try:
            tnorm = LOGIC_NAMES[name]
        except KeyError:
            raise ValueError(f"unknown logic {name!r}; expected one of {sorted(LOGIC_NAMES)}") from None
        return cls(tnorm, RESIDUUM[tnorm])

    def conj(self, a: float, b: float) -> float:
        return TNORMS[self.tnorm](a, b)

    def disj(self, a: float, b: float) -> float:
        return TCONORMS[self.tnorm](a, b)

    def implies(self, a: float, b: float) -> float:
        return IMPLICATIONS[self.implication](a, b)


GOEDEL = LogicChoice("minimum", "goedel")
PRODUCT = LogicChoice("product", "goguen")
LUKASIEWICZ = LogicChoice("lukasiewicz", "lukasiewicz")


@dataclass(frozen=True)
class FuzzyModel:
    domain: tuple
    membership: Mapping[str, Mapping]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.domain:
            raise ModelError("domain must be non-empty")
        dom = set(self.domain)
        members = {}
        for name, degrees in self.membership.items():
            degrees = {x: float(d) for x, d in degrees.items()}
            if set(degrees) != dom:
                raise ModelError(f"degrees of {name} do not cover exactly the domain")
            for x, d in degrees.items():
                if not 0.0 <= d <= 1.0:
                    raise ModelError(f"degree {d} of {x!r} in {name} outside [0, 1]")
            members[name] = degrees
        object.__setattr__(self, "membership", members)

    def degree(self, name: str, x) -> float:
        if name not in self.membership:
            raise UnknownNameError("concept", name)
        return self.membership[name][x]


def fuzzy_extension(model: FuzzyModel, c: Concept, logic: LogicChoice = GOEDEL,
                    epsilon: float = DEFAULT_EPSILON) -> dict:
    """Degrees of every domain element in ``c``."""
    if isinstance(c, Atom):
        if c.name not in model.membership:
            raise UnknownNameError("concept", c.name)
        return dict(model.membership[c.name])
    if isinstance(c, Top):
        return dict.fromkeys(model.domain, 1.0)
    if isinstance(c, Bottom):
        return dict.fromkeys(model.domain, 0.0)
    if isinstance(c, Not):
        inner = fuzzy_extension(model, c.arg, logic, epsilon)
        return {x: 1.0 - d for x, d in inner.items()}
    if isinstance(c, (And, Or)):
        left = fuzzy_extension(model, c.left, logic, epsilon)
        right = fuzzy_extension(model, c.right, logic, epsilon)
        op = logic.conj if isinstance(c, And) else logic.disj
        return {x: op(left[x], right[x]) for x in model.domain}
    if isinstance(c, (Exists, Forall)):
        raise UnsupportedConstructError("role restrictions are not supported in fuzzy models")
    if isinstance(c, Typ):
        typical = typicality_set(model, c.arg, logic, epsilon)
        return {x: 1.0 if x in typical else 0.0 for x in model.domain}
    raise TypeError(f"not a concept: {c!r}")


def fuzzy_eval(model: FuzzyModel, c: Concept, x, logic: LogicChoice = GOEDEL,
               epsilon: float = DEFAULT_EPSILON) -> float:
    if x not in set(model.domain):
        raise ModelError(f"{x!r} is not a domain element")
    return fuzzy_extension(model, c, logic, epsilon)[x]


def degrees_preference(degrees: Mapping, epsilon: float = DEFAULT_EPSILON) -> PreferenceRelation:
    """Higher degree = more preferred."""
    return PreferenceRelation({x: -d for x, d in degrees.items()}, epsilon)


def induce_preference(model: FuzzyModel, name: str, epsilon: float = DEFAULT_EPSILON) -> PreferenceRelation:
    if name not in model.membership:
        raise UnknownNameError("concept", name)
    return degrees_preference(model.membership[name], epsilon)


def typicality_set(model: FuzzyModel, c: Concept, logic: LogicChoice = GOEDEL,
                   epsilon: float = DEFAULT_EPSILON) -> frozenset:
    """Minimal elements, under the degree-induced preference of ``c``, among those with degree > 0."""
    if contains_typicality(c):
        raise ModelError("typicality argument must not contain T(...)")
    if contains_roles(c):
        raise UnsupportedConstructError("role restrictions are not supported in fuzzy models")
    degrees = fuzzy_extension(model, c, logic, epsilon)
    support = [x for x in model.domain if degrees[x] > 0.0]
    return minimal(degrees_preference(degrees, epsilon), support)


def check_fuzzy_inclusion(model: FuzzyModel, axiom: FuzzyInclusion, logic: LogicChoice = GOEDEL,
                          epsilon: float = DEFAULT_EPSILON) -> CheckReport:
    """``<C <= D >= a>`` holds iff inf_x I(C(x), D(x)) >= a (up to epsilon)."""
    lhs = fuzzy_extension(model, axiom.lhs, logic, epsilon)
    rhs = fuzzy_extension(model, axiom.rhs, logic, epsilon)
    # a <= b up to epsilon counts as full implication, so float grains from
    # compound t-norms cannot push a tie below the threshold
    values = {x: 1.0 if lhs[x] <= rhs[x] + epsilon else logic.implies(lhs[x], rhs[x]) for x in model.domain}
    infimum = min(values.values())
    bound = axiom.threshold - epsilon
    bad = tuple(x for x in model.domain if values[x] < bound)
    return CheckReport(
        axiom, not bad, bad,
        degrees={x: values[x] for x in bad},
        statistics={"infimum": infimum},
    )


def crisp_model(model: FuzzyModel, threshold: float = 0.0, distinguished=None,
                epsilon: float = DEFAULT_EPSILON) -> MultiPrefModel:
    """Two-valued cut: extension = {x : degree > threshold}; preferences from degrees."""
    names = model.membership if distinguished is None else distinguished
    exts = {n: frozenset(x for x, d in m.items() if d > threshold) for n, m in model.membership.items()}
    prefs = {n: induce_preference(model, n, epsilon) for n in names}
    return MultiPrefModel(model.domain, exts, prefs)


def is_crisp(model: FuzzyModel) -> bool:
    return all(d in (0.0, 1.0) for m in model.membership.values() for d in m.values())

