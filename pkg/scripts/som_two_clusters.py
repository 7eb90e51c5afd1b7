"""Train maps on two Gaussian clusters and model-check category inclusions.

    python3 scripts/som_two_clusters.py --runs 5 --separation 6
"""

import argparse

import numpy as np

from prefnet.concepts import parse_axiom, render
from prefnet.prefcore import minimal
from prefnet.som import (
    CategoryData,
    TrainingConfig,
    build_som_model,
    check_category_inclusion,
    quantization_error,
    represent,
    train_som,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--per-category", type=int, default=50)
    ap.add_argument("--separation", type=float, default=6.0)
    ap.add_argument("--spread", type=float, default=0.5)
    ap.add_argument("--grid", type=int, default=10)
    ap.add_argument("--epochs", type=int, default=50)
    args = ap.parse_args()

    queries = [parse_axiom(q) for q in ("T(Cat1) <= Cat1", "T(Cat1) <= Cat2", "Cat1 <= Cat2")]
    print("run  qe      |BMU1| |BMU2|  bmu-typical  q1  q2  q3")
    for run in range(args.runs):
        rng = np.random.default_rng(run)
        n, s = args.per_category, args.spread
        data = CategoryData({
            "Cat1": rng.normal([0.0, 0.0], s, (n, 2)),
            "Cat2": rng.normal([args.separation] * 2, s, (n, 2)),
        })
        som = train_som(data, TrainingConfig(epochs=args.epochs, seed=run), args.grid, args.grid)
        model = build_som_model(som, data)
        reps = represent(som, data)
        typical = all(
            {f"unit{u}" for u in reps[c].bmus} <= minimal(model.prefs[c], model.extensions[c]) for c in data
        )
        verdicts = [check_category_inclusion(som, data, q, model=model).holds for q in queries]
        print(f"{run:<4} {quantization_error(som, data.stacked()):.4f}  {len(reps['Cat1'].bmus):<6} "
              f"{len(reps['Cat2'].bmus):<6}  {str(typical):<11}  " + "  ".join("T" if v else "F" for v in verdicts))
    print("queries:", "; ".join(f"q{i + 1} = {render(q)}" for i, q in enumerate(queries)))


if __name__ == "__main__":
    main()
