"""Trained networks as unit graphs, and their two-valued and fuzzy models."""

from __future__ import annotations

import math
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .fuzzy import FuzzyModel, degrees_preference
from .prefcore import DEFAULT_EPSILON, MultiPrefModel, UnknownNameError


class NetworkError(ValueError):
    pass


class NonConvergenceError(RuntimeError):
    """No stationary state found within the iteration budget; ``row`` is 0-based."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message if row is None else f"stimulus row {row + 1}: {message}")
        self.row = row


class ActivationRangeError(ValueError):
    pass


def _sigmoid(v: float) -> float:
    if v >= 0:
        return 1.0 / (1.0 + math.exp(-v))
    e = math.exp(v)
    return e / (1.0 + e)


@dataclass(frozen=True)
class Activation:
    """An activation function with its declared properties.

    ``conforming`` marks functions that are monotonically increasing with
    values in (0, 1], the side condition under which a network is a
    coherent model of its extracted KB.
    """

    name: str
    fn: Callable[[float], float]
    lower: float
    upper: float
    strictly_increasing: bool
    conforming: bool

    def __call__(self, v: float) -> float:
        return self.fn(v)


ACTIVATIONS: dict[str, Activation] = {}


def register_activation(name: str, fn: Callable[[float], float], lower: float, upper: float,
                        strictly_increasing: bool = True, conforming: bool = False) -> Activation:
    """Register a custom monotone activation under ``name``."""
    act = Activation(name, fn, lower, upper, strictly_increasing, conforming)
    ACTIVATIONS[name] = act
    return act


register_activation("identity", lambda v: v, -math.inf, math.inf)
register_activation("sigmoid", _sigmoid, 0.0, 1.0, conforming=True)
register_activation("tanh", math.tanh, -1.0, 1.0)
register_activation("tanh-rescaled", lambda v: 0.5 * (math.tanh(v) + 1.0), 0.0, 1.0, conforming=True)
register_activation("threshold", lambda v: 1.0 if v >= 0 else 0.0, 0.0, 1.0, strictly_increasing=False)


@dataclass(frozen=True)
class Unit:
    name: str
    activation: str = "sigmoid"
    bias: float = 0.0


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: float


@dataclass(frozen=True)
class Network:
    units: tuple
    edges: tuple
    inputs: tuple

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        names = [u.name for u in self.units]
        if len(set(names)) != len(names):
            raise NetworkError("unit names must be unique")
        known = set(names)
        for e in self.edges:
            for end in (e.source, e.target):
                if end not in known:
                    raise NetworkError(f"edge references unknown unit {end}")
        for name in self.inputs:
            if name not in known:
                raise NetworkError(f"unknown input unit {name}")
        if len(set(self.inputs)) != len(self.inputs):
            raise NetworkError("duplicate input unit")
        inputs = set(self.inputs)
        for e in self.edges:
            if e.target in inputs:
                raise NetworkError(f"input unit {e.target} has an incoming edge")
        for u in self.units:
            if u.name not in inputs and u.activation not in ACTIVATIONS:
                raise NetworkError(f"unit {u.name}: unknown activation {u.activation!r}")

    def unit(self, name: str) -> Unit:
        for u in self.units:
            if u.name == name:
                return u
        raise UnknownNameError("unit", name)

    def incoming(self, name: str) -> list[Edge]:
        return [e for e in self.edges if e.target == name]

    @property
    def computation_units(self) -> tuple:
        inputs = set(self.inputs)
        return tuple(u for u in self.units if u.name not in inputs)

    def topological_order(self) -> Optional[list[str]]:
        """Unit names in dependency order, or None when the graph has a cycle."""
        graph = {u.name: set() for u in self.units}
        for e in self.edges:
            graph[e.target].add(e.source)
        try:
            return list(TopologicalSorter(graph).static_order())
        except CycleError:
            return None

    @property
    def feedforward(self) -> bool:
        return self.topological_order() is not None


def _check_stimulus(net: Network, x: Sequence[float]) -> list[float]:
    x = [float(v) for v in x]
    if len(x) != len(net.inputs):
        raise NetworkError(f"stimulus has {len(x)} values, network has {len(net.inputs)} input units")
    return x


def local_fields(net: Network, outputs: Mapping[str, float]) -> dict[str, float]:
    """Induced local field sum_j w_kj y_j + b_k of every computation unit."""
    fields = {u.name: u.bias for u in net.computation_units}
    for e in net.edges:
        fields[e.target] += e.weight * outputs[e.source]
    return fields


def evaluate_network(net: Network, x: Sequence[float], tolerance: float = 1e-9,
                     max_iterations: int = 10_000, iterate: bool = False) -> dict[str, float]:
    """Activation of every unit for stimulus ``x`` at a stationary state.

    Feedforward nets take one pass in topological order. Cyclic nets (or
    ``iterate=True``) use synchronous updates from zero until the largest
    per-unit change drops below ``tolerance``.
    """
    x = _check_stimulus(net, x)
    act = {u.name: ACTIVATIONS[u.activation] for u in net.computation_units}
    incoming = {u.name: net.incoming(u.name) for u in net.computation_units}
    bias = {u.name: u.bias for u in net.computation_units}
    y = dict(zip(net.inputs, x))

    order = None if iterate else net.topological_order()
    if order is not None:
        for name in order:
            if name in act:
                y[name] = act[name](bias[name] + sum(e.weight * y[e.source] for e in incoming[name]))
        return {u.name: y[u.name] for u in net.units}

    for name in act:
        y[name] = 0.0
    for _ in range(max_iterations):
        new = {
            name: act[name](bias[name] + sum(e.weight * y[e.source] for e in incoming[name]))
            for name in act
        }
        delta = max((abs(new[k] - y[k]) for k in new), default=0.0)
        y.update(new)
        if delta < tolerance:
            return {u.name: y[u.name] for u in net.units}
    raise NonConvergenceError(f"no stationary state within {max_iterations} iterations")


def evaluate_domain(net: Network, stimuli: Iterable[Sequence[float]], **fixpoint) -> list[dict]:
    out = []
    for row, x in enumerate(stimuli):
        try:
            out.append(evaluate_network(net, x, **fixpoint))
        except NonConvergenceError as exc:
            raise NonConvergenceError(str(exc), row) from None
    return out


def stimulus_ids(n: int) -> list[str]:
    return [f"s{i}" for i in range(n)]


def build_two_valued_model(net: Network, domain: Sequence[Sequence[float]], focus: Optional[Iterable[str]] = None,
                           threshold: float = 0.0, epsilon: float = DEFAULT_EPSILON,
                           **fixpoint) -> MultiPrefModel:
    """One concept per unit: members have output > ``threshold``; focus units get x < x' iff y(x) > y(x')."""
    names = [u.name for u in net.units]
    focus = names if focus is None else list(focus)
    for f in focus:
        net.unit(f)
    outputs = evaluate_domain(net, domain, **fixpoint)
    ids = stimulus_ids(len(outputs))
    exts = {k: frozenset(i for i, y in zip(ids, outputs) if y[k] > threshold) for k in names}
    prefs = {k: degrees_preference({i: y[k] for i, y in zip(ids, outputs)}, epsilon) for k in focus}
    labels = {i: tuple(float(v) for v in x) for i, x in zip(ids, domain)}
    return MultiPrefModel(ids, exts, prefs, labels=labels)


def build_fuzzy_model(net: Network, domain: Sequence[Sequence[float]], rescale_tanh: bool = False,
                      **fixpoint) -> FuzzyModel:
    """Membership of stimulus x in unit k's concept is the output y_k(x)."""
    outputs = evaluate_domain(net, domain, **fixpoint)
    ids = stimulus_ids(len(outputs))
    inputs = set(net.inputs)
    membership = {}
    for u in net.units:
        degrees = {i: y[u.name] for i, y in zip(ids, outputs)}
        if u.name not in inputs and u.activation == "tanh":
            if not rescale_tanh:
                raise ActivationRangeError(
                    f"unit {u.name} uses tanh (range (-1, 1)); pass rescale_tanh=True for degrees (y + 1) / 2"
                )
            degrees = {i: 0.5 * (d + 1.0) for i, d in degrees.items()}
        for i, d in degrees.items():
            if not 0.0 <= d <= 1.0:
                hint = " normalize the stimuli into [0, 1]" if u.name in inputs else ""
                raise ActivationRangeError(f"unit {u.name} has value {d} at {i}, outside [0, 1];{hint}")
        membership[u.name] = degrees
    return FuzzyModel(ids, membership)


def random_layered_network(rng: np.random.Generator, layer_sizes: Sequence[int], activation: str = "sigmoid",
                           weight_scale: float = 2.0, bias_scale: float = 1.0) -> Network:
    """Fully connected feedforward net; layer 0 holds the input units."""
    if len(layer_sizes) < 2:
        raise ValueError("need an input layer and at least one computation layer")
    layers = [[f"L{li}_{j}" for j in range(n)] for li, n in enumerate(layer_sizes)]
    units = [Unit(n, "identity") for n in layers[0]]
    edges = []
    for prev, layer in zip(layers, layers[1:]):
        for n in layer:
            units.append(Unit(n, activation, float(rng.uniform(-bias_scale, bias_scale))))
            edges += [Edge(p, n, float(rng.uniform(-weight_scale, weight_scale))) for p in prev]
    return Network(tuple(units), tuple(edges), tuple(layers[0]))
