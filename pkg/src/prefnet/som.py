"""Kohonen self-organising maps and their multipreference models."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .concepts import Atom, Axiom, StrictInclusion, TypicalityInclusion, render
from .prefcore import (
    DEFAULT_EPSILON,
    CheckReport,
    ModelError,
    MultiPrefModel,
    PreferenceRelation,
    UnknownNameError,
    check_inclusion,
)


class DimensionError(ValueError):
    pass


@dataclass(eq=False)
class SomMap:
    """Grid of units; ``weights[i]`` is unit ``i`` at row ``i // cols``, column ``i % cols``."""

    rows: int
    cols: int
    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid must be non-empty")
        if self.weights.ndim != 2 or self.weights.shape[0] != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} weight vectors, got array of shape {self.weights.shape}"
            )

    @property
    def input_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def n_units(self) -> int:
        return self.rows * self.cols

    def grid_coords(self) -> np.ndarray:
        idx = np.arange(self.n_units)
        return np.stack([idx // self.cols, idx % self.cols], axis=1).astype(float)

    def __eq__(self, other):
        if not isinstance(other, SomMap):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(self.weights, other.weights)


class CategoryData(dict):
    """Mapping category name -> (n, d) array of training stimuli."""

    def __init__(self, categories: Mapping[str, Sequence]):
        super().__init__()
        dim = None
        if not categories:
            raise ValueError("no categories given")
        for name, vectors in categories.items():
            arr = np.asarray(vectors, dtype=float)
            if arr.ndim == 1:
                arr = arr[None, :]
            if arr.ndim != 2 or arr.shape[0] == 0:
                raise ValueError(f"category {name} has no stimuli")
            if dim is None:
                dim = arr.shape[1]
            elif arr.shape[1] != dim:
                raise DimensionError(f"category {name} has dimension {arr.shape[1]}, expected {dim}")
            self[name] = arr
        self.dim = dim

    def stacked(self) -> np.ndarray:
        return np.concatenate(list(self.values()))


@dataclass(frozen=True)
class TrainingConfig:
    epochs: int = 50
    learning_rate: float = 0.5
    radius: Optional[float] = None  # default: half the larger grid side
    learning_rate_decay: Optional[float] = None  # time constant in steps; default: total steps
    radius_decay: Optional[float] = None  # default: total steps / ln(radius)
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be positive")
        for name in ("learning_rate", "radius", "learning_rate_decay", "radius_decay"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be positive")


def _init_weights(rng: np.random.Generator, n_units: int, stimuli: np.ndarray) -> np.ndarray:
    # uniform draws just outside the per-dimension data range
    lo, hi = stimuli.min(axis=0), stimuli.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    shape = (n_units, stimuli.shape[1])
    offset = rng.uniform(0.0, 1.0, shape) * span
    offset = np.where(offset > 0, offset, span)
    above = rng.random(shape) < 0.5
    return np.where(above, hi + offset, lo - offset)


def quantization_error(som: SomMap, stimuli: np.ndarray) -> float:
    """Mean distance of each stimulus to its best-matching unit."""
    stimuli = np.atleast_2d(np.asarray(stimuli, dtype=float))
    d = np.linalg.norm(stimuli[:, None, :] - som.weights[None, :, :], axis=2)
    return float(d.min(axis=1).mean())


def train_som(data: CategoryData, config: TrainingConfig = TrainingConfig(), rows: int = 10,
              cols: int = 10) -> SomMap:
    """Online Kohonen training with a Gaussian neighbourhood and exponential decay."""
    if not isinstance(data, CategoryData):
        data = CategoryData(data)
    stimuli = data.stacked()
    rng = np.random.default_rng(config.seed)
    som = SomMap(rows, cols, _init_weights(rng, rows * cols, stimuli))
    coords = som.grid_coords()
    w = som.weights

    total = config.epochs * len(stimuli)
    r0 = config.radius if config.radius is not None else max(rows, cols) / 2.0
    tau_lr = config.learning_rate_decay or total
    tau_r = config.radius_decay or (total / math.log(r0) if r0 > 1.0 else total)

    t = 0
    for _ in range(config.epochs):
        for i in rng.permutation(len(stimuli)):
            x = stimuli[i]
            bmu = int(np.argmin(np.linalg.norm(w - x, axis=1)))
            lr = config.learning_rate * math.exp(-t / tau_lr)
            sigma = r0 * math.exp(-t / tau_r)
            d2 = ((coords - coords[bmu]) ** 2).sum(axis=1)
            h = np.exp(-d2 / (2.0 * sigma * sigma))
            w += (lr * h)[:, None] * (x - w)
            t += 1
    return som


def _check_dim(som: SomMap, x: np.ndarray):
    if x.shape != (som.input_dim,):
        raise DimensionError(f"stimulus has shape {x.shape}, map expects ({som.input_dim},)")


def best_matching_unit(som: SomMap, x) -> tuple[int, float]:
    """Nearest unit by Euclidean distance; ties go to the lowest index."""
    x = np.asarray(x, dtype=float)
    _check_dim(som, x)
    d = np.sqrt(((som.weights - x) ** 2).sum(axis=1))
    i = int(np.argmin(d))
    return i, float(d[i])


@dataclass(frozen=True)
class CategoryRepresentation:
    """A category's BMU ensemble and its precision (worst member-to-BMU distance)."""

    bmus: tuple  # sorted distinct unit indices
    member_bmus: tuple  # BMU of each training stimulus, in order
    precision: float


def represent(som: SomMap, data: CategoryData) -> dict[str, CategoryRepresentation]:
    reps = {}
    for name, xs in data.items():
        if xs.shape[1] != som.input_dim:
            raise DimensionError(f"category {name} has dimension {xs.shape[1]}, map expects {som.input_dim}")
        found = [best_matching_unit(som, x) for x in xs]
        member_bmus = tuple(u for u, _ in found)
        reps[name] = CategoryRepresentation(tuple(sorted(set(member_bmus))), member_bmus,
                                            max(d for _, d in found))
    return reps


def _rd(som: SomMap, rep: CategoryRepresentation, y: np.ndarray) -> float:
    num = float(np.sqrt(((som.weights[list(rep.bmus)] - y) ** 2).sum(axis=1)).min())
    if rep.precision == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / rep.precision


def relative_distance(som: SomMap, data: CategoryData, y, category: str,
                      reps: Optional[dict] = None) -> float:
    """Distance of ``y`` from the category's BMUs divided by the category's precision."""
    if category not in data:
        raise UnknownNameError("category", category)
    reps = reps or represent(som, data)
    y = np.asarray(y, dtype=float)
    _check_dim(som, y)
    return _rd(som, reps[category], y)


def som_domain(som: SomMap, data: CategoryData, extra: Sequence = ()) -> list[tuple[str, np.ndarray]]:
    """Inputs, the BMU weight vectors of inputs, then extra stimuli, as (id, vector) pairs."""
    elems = []
    for name, xs in data.items():
        elems += [(f"{name}[{i}]", x) for i, x in enumerate(xs)]
    units = sorted({u for rep in represent(som, data).values() for u in rep.member_bmus})
    elems += [(f"unit{u}", som.weights[u].copy()) for u in units]
    for i, y in enumerate(extra):
        y = np.asarray(y, dtype=float)
        _check_dim(som, y)
        elems.append((f"extra[{i}]", y))
    return elems


def build_som_model(som: SomMap, data: CategoryData, extra: Sequence = (),
                    epsilon: float = DEFAULT_EPSILON) -> MultiPrefModel:
    """Multipreference model of a trained map over its inputs, their BMUs and extra stimuli."""
    if not isinstance(data, CategoryData):
        data = CategoryData(data)
    reps = represent(som, data)
    elems = som_domain(som, data, extra)
    ids = [e for e, _ in elems]
    exts, prefs = {}, {}
    for name, xs in data.items():
        rd = {e: _rd(som, reps[name], y) for e, y in elems}
        rd_max = max(_rd(som, reps[name], x) for x in xs)
        exts[name] = frozenset(e for e in ids if rd[e] <= rd_max)
        prefs[name] = PreferenceRelation(rd, epsilon)
    labels = {e: tuple(float(v) for v in y) for e, y in elems}
    return MultiPrefModel(ids, exts, prefs, labels=labels)


def _category_pair(axiom: Axiom, data: CategoryData) -> tuple[str, str]:
    lhs = axiom.lhs.arg if isinstance(axiom, TypicalityInclusion) else axiom.lhs
    if not (isinstance(axiom, (StrictInclusion, TypicalityInclusion))
            and isinstance(lhs, Atom) and isinstance(axiom.rhs, Atom)):
        raise ModelError(f"expected 'Ci <= Cj' or 'T(Ci) <= Cj', got {render(axiom)!r}")
    for name in (lhs.name, axiom.rhs.name):
        if name not in data:
            raise UnknownNameError("category", name)
    return lhs.name, axiom.rhs.name


def check_category_inclusion(som: SomMap, data: CategoryData, axiom: Axiom, extra: Sequence = (),
                             model: Optional[MultiPrefModel] = None) -> CheckReport:
    """Model-check ``Ci <= Cj`` or ``T(Ci) <= Cj`` on the map's model.

    For typicality inclusions the statistic rd(BMU_Ci, Cj), the worst
    relative distance from Cj of a Ci member's BMU, is reported next to
    rd_max of Cj; the model-checking verdict is what ``holds`` returns.
    """
    if not isinstance(data, CategoryData):
        data = CategoryData(data)
    ci, cj = _category_pair(axiom, data)
    model = model or build_som_model(som, data, extra)
    report = check_inclusion(model, axiom, "per-concept")
    stats = {}
    if isinstance(axiom, TypicalityInclusion):
        reps = represent(som, data)
        rd_bmu = max(_rd(som, reps[cj], som.weights[u]) for u in reps[ci].member_bmus)
        rd_max = max(_rd(som, reps[cj], x) for x in data[cj])
        stats = {"rd_bmu": rd_bmu, "rd_max": rd_max, "statistic_holds": rd_bmu <= rd_max}
    return CheckReport(report.axiom, report.holds, report.counterexamples, statistics=stats)

