"""Weights and typicality for the three-animal bird/penguin model.

    python3 scripts/penguin_example.py
"""

from prefnet import parse_kb
from prefnet.concepts import parse_axiom, render
from prefnet.prefcore import MultiPrefModel, check_inclusion, eval_concept
from prefnet.wkb import WeightedKB, preference_from_weights, strict_violations, weight_table

KB_TEXT = """\
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


def main():
    kb = WeightedKB.from_document(parse_kb(KB_TEXT))
    dom = ["b", "p1", "p2"]
    selves = {(x, x) for x in dom}
    model = MultiPrefModel(
        dom,
        {"Bird": set(dom), "Penguin": {"p1", "p2"}, "Fly": {"b", "p2"}, "Black": {"p1"}, "Grey": {"p2"}},
        roles={"has_Wings": selves, "has_Feather": selves},
    )
    table = weight_table(model, kb)
    for concept, row in table.items():
        print(f"W_{concept}: " + ", ".join(f"{x}={w:g}" for x, w in row.items()))

    prefs = {c: preference_from_weights(table, c) for c in kb.distinguished}
    model = MultiPrefModel(model.domain, model.extensions, prefs, model.roles)
    print("typical birds:", sorted(eval_concept(model, parse_axiom("T(Bird) <= Bird").lhs)))
    print("typical penguins:", sorted(eval_concept(model, parse_axiom("T(Penguin) <= Bird").lhs)))
    for text in ("T(Bird) <= Fly", "T(Penguin) <= not Fly", "T(Penguin) <= Black"):
        r = check_inclusion(model, parse_axiom(text))
        print(f"{'holds' if r.holds else 'fails'}: {render(r.axiom)}", *r.counterexamples)
    print("strict axioms violated:", len(strict_violations(model, kb)))


if __name__ == "__main__":
    main()
