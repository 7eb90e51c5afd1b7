"""Command-line entry point.

Exit codes: 0 all checks hold / coherent, 1 some check fails, 2 malformed
input, 3 dimension errors or unknown names, 4 no stationary state.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as fmt
from .concepts import (
    Atom,
    ConceptAssertion,
    FuzzyInclusion,
    ParseError,
    Typ,
    TypicalityInclusion,
    parse_axioms,
    render,
    subconcepts,
)
from .fuzzy import LogicChoice, check_fuzzy_inclusion, crisp_model
from .mlp import (
    ActivationRangeError,
    NetworkError,
    NonConvergenceError,
    build_fuzzy_model,
    build_two_valued_model,
)
from .prefcore import DEFAULT_EPSILON, TYPICALITY_MODES, ModelError, UnknownNameError, check_inclusion
from .som import (
    DimensionError,
    TrainingConfig,
    build_som_model,
    check_category_inclusion,
    quantization_error,
    represent,
    train_som,
)
from .wkb import check_coherence, extract_kb

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED, EXIT_NAMES, EXIT_NONCONVERGENT = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _grid(text: str) -> tuple[int, int]:
    try:
        rows, cols = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ROWSxCOLS, got {text!r}") from None
    if rows < 1 or cols < 1:
        raise argparse.ArgumentTypeError("grid sides must be positive")
    return rows, cols


def _epsilon(text: str) -> float:
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError("epsilon must be >= 0")
    return v


def _read(path: str) -> str:
    try:
        return fmt.read_text(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_MALFORMED) from None


def _emit(args, text_lines: list[str], doc: dict):
    out = json.dumps(doc, indent=1, sort_keys=False) if args.format == "structured" else "\n".join(text_lines)
    print(out)


def _jsonable(v):
    if isinstance(v, float) and v in (float("inf"), float("-inf")):
        return "inf" if v > 0 else "-inf"
    return v


# --- train-som -------------------------------------------------------------


def cmd_train_som(args) -> int:
    try:
        data = fmt.read_labeled_csv(_read(args.data), args.label_column)
    except fmt.FormatError as exc:
        raise CliError(str(exc), EXIT_MALFORMED) from None
    except DimensionError as exc:
        raise CliError(str(exc), EXIT_NAMES) from None
    rows, cols = args.grid
    config = TrainingConfig(epochs=args.epochs, learning_rate=args.learning_rate, radius=args.radius,
                            seed=args.seed)
    som = train_som(data, config, rows, cols)
    snapshot = fmt.dump_som(som)
    if args.output:
        Path(args.output).write_text(snapshot, encoding="utf-8")
    qe = quantization_error(som, data.stacked())
    reps = represent(som, data)
    lines = [f"quantization error: {qe!r}"]
    lines += [f"BMU({name}): {' '.join(map(str, rep.bmus))}" for name, rep in reps.items()]
    _emit(args, lines, {
        "quantization_error": qe,
        "bmus": {name: list(rep.bmus) for name, rep in reps.items()},
        "output": args.output,
    })
    return EXIT_OK


# --- check -----------------------------------------------------------------


def _load_sources(args):
    """Returns (crisp model, fuzzy model or None, som context or None)."""
    sources = [s for s in (args.som, args.network, args.model) if s]
    if len(sources) != 1:
        raise CliError("give exactly one of --som, --network, --model", EXIT_MALFORMED)
    try:
        if args.som:
            if not args.data:
                raise CliError("--som needs --data", EXIT_MALFORMED)
            som = fmt.load_som(_read(args.som))
            data = fmt.read_labeled_csv(_read(args.data), args.label_column)
            extra = fmt.read_stimuli_csv(_read(args.extra)) if args.extra else []
            model = build_som_model(som, data, extra, args.epsilon)
            return model, None, (som, data, extra)
        if args.network:
            if not args.stimuli:
                raise CliError("--network needs --stimuli", EXIT_MALFORMED)
            net = fmt.load_network(_read(args.network))
            stimuli = fmt.read_stimuli_csv(_read(args.stimuli), net.inputs)
            if not stimuli:
                raise CliError("no stimuli given", EXIT_MALFORMED)
            focus = args.focus.split(",") if args.focus else None
            model = build_two_valued_model(net, stimuli, focus, args.threshold, args.epsilon)
            try:
                fuzzy = build_fuzzy_model(net, stimuli, rescale_tanh=args.rescale_tanh)
            except ActivationRangeError:
                fuzzy = None
            return model, fuzzy, None
        model, fuzzy = fmt.load_model(_read(args.model), args.epsilon)
        if model is None:
            model = crisp_model(fuzzy, args.threshold, epsilon=args.epsilon)
        return model, fuzzy, None
    except fmt.FormatError as exc:
        raise CliError(str(exc), EXIT_MALFORMED) from None
    except (DimensionError, NetworkError) as exc:
        raise CliError(str(exc), EXIT_NAMES) from None
    except NonConvergenceError as exc:
        raise CliError(str(exc), EXIT_NONCONVERGENT) from None
    except ModelError as exc:
        raise CliError(str(exc), EXIT_MALFORMED) from None


def _needs_global(ax, model, mode: str) -> bool:
    if isinstance(ax, (ConceptAssertion, FuzzyInclusion)) or mode == "per-concept":
        return False
    typs = [c for side in (ax.lhs, ax.rhs) for c in subconcepts(side) if isinstance(c, Typ)]
    if mode == "global":
        return bool(typs)
    return any(not (isinstance(t.arg, Atom) and t.arg.name in model.prefs) for t in typs)


def _check_one(ax, model, fuzzy, som_ctx, args):
    if isinstance(ax, ConceptAssertion):
        raise CliError(f"cannot check assertion {render(ax)!r}: models carry no individuals", EXIT_MALFORMED)
    if isinstance(ax, FuzzyInclusion):
        if fuzzy is None:
            raise CliError(f"{render(ax)!r} needs a fuzzy model (network or fuzzy model file)", EXIT_MALFORMED)
        return check_fuzzy_inclusion(fuzzy, ax, LogicChoice.named(args.logic), args.epsilon)
    if (som_ctx is not None and isinstance(ax, TypicalityInclusion) and isinstance(ax.lhs.arg, Atom)
            and isinstance(ax.rhs, Atom) and args.typicality != "global"):
        som, data, extra = som_ctx
        return check_category_inclusion(som, data, ax, extra, model)
    return check_inclusion(model, ax, args.typicality)


def cmd_check(args) -> int:
    model, fuzzy, som_ctx = _load_sources(args)
    try:
        axioms = parse_axioms(_read(args.query))
    except ParseError as exc:
        raise CliError(f"{args.query}: {exc}", EXIT_MALFORMED) from None
    if model.prefs and any(_needs_global(ax, model, args.typicality) for ax in axioms):
        model = model.with_global_order()
    reports = []
    for ax in axioms:
        try:
            reports.append(_check_one(ax, model, fuzzy, som_ctx, args))
        except UnknownNameError as exc:
            raise CliError(f"{exc} (in {render(ax)!r})", EXIT_NAMES) from None
        except ModelError as exc:
            raise CliError(f"{render(ax)!r}: {exc}", EXIT_MALFORMED) from None
    lines, records = [], []
    for r in reports:
        line = f"{'HOLDS' if r.holds else 'FAILS'}  {render(r.axiom)}"
        if r.counterexamples:
            line += "  counterexamples: " + ", ".join(map(str, r.counterexamples))
        if r.statistics:
            line += "  [" + ", ".join(f"{k}={_jsonable(v)}" for k, v in r.statistics.items()) + "]"
        lines.append(line)
        records.append({
            "axiom": render(r.axiom),
            "holds": r.holds,
            "counterexamples": list(r.counterexamples),
            "degrees": {str(k): v for k, v in r.degrees.items()},
            "statistics": {k: _jsonable(v) for k, v in r.statistics.items()},
        })
    ok = all(r.holds for r in reports)
    _emit(args, lines, {"all_hold": ok, "results": records})
    return EXIT_OK if ok else EXIT_FAIL


# --- extract-and-verify ------------------------------------------------------


def cmd_extract_and_verify(args) -> int:
    try:
        net = fmt.load_network(_read(args.network))
        stimuli = fmt.read_stimuli_csv(_read(args.stimuli), net.inputs)
        if not stimuli:
            raise CliError("no stimuli given", EXIT_MALFORMED)
        focus = args.focus.split(",") if args.focus else None
        kb = extract_kb(net, focus)
        fuzzy = build_fuzzy_model(net, stimuli, rescale_tanh=args.rescale_tanh)
    except (fmt.FormatError, ActivationRangeError) as exc:
        raise CliError(str(exc), EXIT_MALFORMED) from None
    except (NetworkError, UnknownNameError, ModelError) as exc:
        raise CliError(str(exc), EXIT_NAMES) from None
    except NonConvergenceError as exc:
        raise CliError(str(exc), EXIT_NONCONVERGENT) from None
    text = render(kb.to_document())
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    report = check_coherence(fuzzy, kb, LogicChoice.named(args.logic), args.epsilon)
    lines = [] if args.output else [text.rstrip("\n")]
    if report.holds:
        lines.append("coherent")
    else:
        lines.append(f"incoherent: {len(report.violations)} violating pairs")
        lines += [
            f"  {v.concept}: {v.x} vs {v.y}  degrees {v.degree_x!r} / {v.degree_y!r}"
            f"  weights {v.weight_x!r} / {v.weight_y!r}"
            for v in report.violations
        ]
    _emit(args, lines, {
        "coherent": report.holds,
        "kb": args.output or text,
        "violations": [v.__dict__ for v in report.violations],
    })
    return EXIT_OK if report.holds else EXIT_FAIL


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--logic", choices=("goedel", "product", "lukasiewicz"), default="goedel")
    common.add_argument("--epsilon", type=_epsilon, default=DEFAULT_EPSILON)
    common.add_argument("--threshold", type=float, default=0.0,
                        help="two-valued membership boundary: y > threshold")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("-o", "--output")

    parser = argparse.ArgumentParser(prog="prefnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-som", parents=[common], help="train a self-organising map on labeled CSV data")
    p.add_argument("data")
    p.add_argument("--grid", type=_grid, default=(10, 10))
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--radius", type=float)
    p.add_argument("--label-column", default="label")
    p.set_defaults(func=cmd_train_som)

    p = sub.add_parser("check", parents=[common], help="model-check inclusions from a query file")
    p.add_argument("query")
    p.add_argument("--som")
    p.add_argument("--data")
    p.add_argument("--extra")
    p.add_argument("--label-column", default="label")
    p.add_argument("--network")
    p.add_argument("--stimuli")
    p.add_argument("--model")
    p.add_argument("--focus", help="comma-separated unit names with preferences")
    p.add_argument("--rescale-tanh", action="store_true")
    p.add_argument("--typicality", choices=TYPICALITY_MODES, default="auto")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("extract-and-verify", parents=[common],
                       help="extract a weighted KB from a network and check coherence")
    p.add_argument("network")
    p.add_argument("stimuli")
    p.add_argument("--focus")
    p.add_argument("--rescale-tanh", action="store_true")
    p.set_defaults(func=cmd_extract_and_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"prefnet {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
