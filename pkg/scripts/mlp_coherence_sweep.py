"""Coherence of extracted KBs across random networks and activations.

Sigmoid nets should always come out coherent; threshold units are not
strictly increasing, so saturated stimuli break coherence.

    python3 scripts/mlp_coherence_sweep.py --nets 200
"""

import argparse

import numpy as np

from prefnet.mlp import build_fuzzy_model, random_layered_network
from prefnet.wkb import check_coherence, extract_kb


def sweep(activation, nets, stimuli, epsilon, seed):
    rng = np.random.default_rng(seed)
    coherent, pairs = 0, 0
    for _ in range(nets):
        sizes = [int(v) for v in rng.integers(1, 4, int(rng.integers(2, 5)))]
        net = random_layered_network(rng, sizes, activation)
        domain = rng.uniform(0, 1, (stimuli, sizes[0]))
        report = check_coherence(build_fuzzy_model(net, domain), extract_kb(net), epsilon=epsilon)
        coherent += report.holds
        pairs += len(report.violations)
    return coherent, pairs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nets", type=int, default=100)
    ap.add_argument("--stimuli", type=int, default=20)
    ap.add_argument("--epsilon", type=float, default=1e-6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for act in ("sigmoid", "tanh-rescaled", "threshold"):
        ok, pairs = sweep(act, args.nets, args.stimuli, args.epsilon, args.seed)
        print(f"{act:<14} coherent {ok}/{args.nets}  violating pairs {pairs}")


if __name__ == "__main__":
    main()
