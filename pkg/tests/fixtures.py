"""Hand-built fixtures shared by several test modules."""

from prefnet.concepts import parse_kb
from prefnet.mlp import Edge, Network, Unit
from prefnet.prefcore import MultiPrefModel
from prefnet.wkb import WeightedKB

PENGUIN_KB = """\
# Example knowledge base about birds and penguins
strict:
  Penguin <= Bird
  Black and Grey <= Bot
block Bird:
  T(Bird) <= Fly @ 20
  T(Bird) <= some has_Wings.Top @ 50
  T(Bird) <= some has_Feather.Top @ 50
block Penguin:
  T(Penguin) <= Fly @ -70
  T(Penguin) <= Black @ 50
  T(Penguin) <= Grey @ 10
"""


def penguin_kb() -> WeightedKB:
    return WeightedKB.from_document(parse_kb(PENGUIN_KB))


def penguin_model() -> MultiPrefModel:
    # wings and feathers are role successors; each animal points at itself
    dom = ["b", "p1", "p2"]
    everyone = {(x, x) for x in dom}
    return MultiPrefModel(
        dom,
        {
            "Bird": {"b", "p1", "p2"},
            "Penguin": {"p1", "p2"},
            "Fly": {"b", "p2"},
            "Black": {"p1"},
            "Grey": {"p2"},
        },
        roles={"has_Wings": everyone, "has_Feather": everyone},
    )


def step_network() -> Network:
    """Sigmoid hidden unit feeding a threshold unit that saturates on both test stimuli."""
    return Network(
        [Unit("x1", "identity"), Unit("x2", "identity"), Unit("h", "sigmoid", 0.0), Unit("k", "threshold", 0.0)],
        [Edge("x1", "h", 1.0), Edge("x2", "h", -1.0), Edge("h", "k", 2.0)],
        ["x1", "x2"],
    )


# local fields of k differ (2 sigmoid(0.2) vs 2 sigmoid(0.7)) while both outputs are 1
STEP_STIMULI = [[0.3, 0.1], [0.9, 0.2]]
