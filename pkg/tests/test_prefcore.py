import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefnet.concepts import (
    And,
    Atom,
    Exists,
    FuzzyInclusion,
    Not,
    StrictInclusion,
    Top,
    Typ,
    TypicalityInclusion,
    parse_axiom,
    parse_concept,
)
from prefnet.prefcore import (
    CheckReport,
    ModelError,
    MultiPrefModel,
    PreferenceRelation,
    StrictOrder,
    TypicalityError,
    UnknownNameError,
    check_inclusion,
    eval_concept,
    minimal,
    pareto_combine,
    validate_preference,
)
from oracles import brute_minimal, member, pareto_pairs, score_pairs
from strategies import concepts, typ_free_concepts

NAMES3 = st.sampled_from(["A", "B", "C"])
ROLES2 = st.sampled_from(["r", "s"])

score_values = st.one_of(st.integers(-3, 3).map(float), st.just(math.inf))


@st.composite
def score_maps(draw, n=None):
    n = n or draw(st.integers(1, 8))
    return {f"e{i}": draw(score_values) for i in range(n)}


@st.composite
def models(draw, roles=True, size=None):
    n = size or draw(st.integers(1, 6))
    dom = [f"e{i}" for i in range(n)]
    ext = {a: frozenset(x for x in dom if draw(st.booleans())) for a in ("A", "B", "C")}
    scores = {a: {x: float(draw(st.integers(0, 3))) for x in dom} for a in ("A", "B", "C")}
    role_pairs = {r: frozenset(p for p in itertools.product(dom, dom) if draw(st.integers(0, 3)) == 0)
                  for r in ("r", "s")} if roles else {}
    model = MultiPrefModel(dom, ext, {a: PreferenceRelation(s) for a, s in scores.items()}, role_pairs)
    plain = {"domain": dom, "ext": ext, "roles": role_pairs}
    return model, plain, scores


def test_minimal_of_empty_set():
    assert minimal(PreferenceRelation({"a": 0.0}), set()) == frozenset()


def test_minimal_with_ties():
    pref = PreferenceRelation({"a": 1, "b": 1, "c": 2})
    assert minimal(pref, {"a", "b", "c"}) == {"a", "b"}
    assert minimal(pref, {"a", "b", "c"}) == brute_minimal(lambda x, y: pref.scores[x] < pref.scores[y],
                                                          {"a", "b", "c"})


def test_minimal_on_explicit_order():
    order = StrictOrder({"a", "b", "c"}, {("a", "b")})
    assert minimal(order, {"a", "b", "c"}) == {"a", "c"}


def test_epsilon_ties():
    pref = PreferenceRelation({"a": 0.0, "b": 5e-10, "c": 1.0})
    assert not pref.less("a", "b") and not pref.less("b", "a")
    assert pref.less("a", "c")
    exact = PreferenceRelation({"a": 0.0, "b": 5e-10}, epsilon=0.0)
    assert exact.less("a", "b")


def test_infinite_scores_tie():
    pref = PreferenceRelation({"a": math.inf, "b": math.inf, "c": 3.0})
    assert not pref.less("a", "b")
    assert pref.less("c", "a")
    assert minimal(pref, {"a", "b"}) == {"a", "b"}


def test_nan_rejected():
    with pytest.raises(ModelError):
        PreferenceRelation({"a": math.nan})


@given(score_maps(), st.data())
def test_minimal_never_empty_on_nonempty_subsets(scores, data):
    pref = PreferenceRelation(scores)
    subset = data.draw(st.sets(st.sampled_from(sorted(scores)), min_size=1))
    assert minimal(pref, subset)


@given(score_maps(), st.floats(-100, 100), st.data())
def test_minimal_invariant_under_translation(scores, shift, data):
    subset = data.draw(st.sets(st.sampled_from(sorted(scores))))
    shifted = {x: s + shift for x, s in scores.items()}
    assert minimal(PreferenceRelation(scores), subset) == minimal(PreferenceRelation(shifted), subset)


def test_pareto_single_preference():
    pref = PreferenceRelation({"a": 0, "b": 1, "c": 1})
    assert pareto_combine([pref]).pairs == pref.pairs()


def test_pareto_conflict_makes_incomparable():
    stud = PreferenceRelation({"tom": 0, "bob": 1})
    emp = PreferenceRelation({"tom": 1, "bob": 0})
    assert stud.less("tom", "bob") and emp.less("bob", "tom")
    glob = pareto_combine([stud, emp])
    assert not glob.less("tom", "bob") and not glob.less("bob", "tom")


def test_pareto_random_three_elements():
    rng = random.Random(3)
    for _ in range(50):
        s1 = {x: float(rng.randint(0, 2)) for x in "abc"}
        s2 = {x: float(rng.randint(0, 2)) for x in "abc"}
        glob = pareto_combine([PreferenceRelation(s1), PreferenceRelation(s2)])
        assert set(glob.pairs) == pareto_pairs([s1, s2])


def test_pareto_domain_mismatch():
    with pytest.raises(ModelError):
        pareto_combine([PreferenceRelation({"a": 0}), PreferenceRelation({"b": 0})])


@given(st.lists(score_maps(n=5), min_size=1, max_size=4))
def test_pareto_properties(maps):
    glob = pareto_combine([PreferenceRelation(m) for m in maps])
    report = validate_preference(glob)
    assert report.irreflexive and report.transitive and report.well_founded
    assert all((y, x) not in glob.pairs for x, y in glob.pairs)
    assert set(glob.pairs) == pareto_pairs(maps)


@given(score_maps())
def test_score_preferences_satisfy_all_axioms(scores):
    pref = PreferenceRelation(scores)
    assert validate_preference(pref).ok
    assert set(pref.pairs()) == score_pairs(scores)


def test_validate_two_cycle():
    report = validate_preference({"a", "b"}, {("a", "b"), ("b", "a")})
    assert not report.transitive
    assert not report.well_founded


def test_validate_missing_composite():
    report = validate_preference({"a", "b", "c"}, {("a", "b"), ("b", "c")})
    assert not report.transitive
    assert report.irreflexive and report.well_founded


def test_validate_non_modular():
    report = validate_preference({"a", "b", "c"}, {("a", "b")})
    assert report.transitive and not report.modular


def test_validate_self_loop():
    report = validate_preference({"a"}, {("a", "a")})
    assert not report.irreflexive and not report.well_founded


def small_model():
    dom = ["a", "b", "c", "d"]
    return MultiPrefModel(
        dom,
        {"Bird": {"a", "b", "c"}, "Penguin": {"b", "c"}, "Fly": {"a", "d"}},
        {"Bird": PreferenceRelation({"a": 0, "b": 1, "c": 2, "d": 5}),
         "Penguin": PreferenceRelation({"a": 3, "b": 2, "c": 0, "d": 3})},
        {"eats": {("a", "b"), ("b", "b"), ("c", "d")}},
    )


def test_not_top_empty():
    assert eval_concept(small_model(), Not(Top())) == frozenset()


def test_unique_typical_bird():
    assert eval_concept(small_model(), Typ(Atom("Bird"))) == {"a"}
    assert eval_concept(small_model(), Typ(Atom("Penguin"))) == {"c"}


def test_role_constructors():
    m = small_model()
    assert eval_concept(m, Exists("eats", Atom("Penguin"))) == {"a", "b"}
    assert eval_concept(m, parse_concept("all eats.Penguin")) == {"a", "b", "d"}


def test_eval_errors():
    m = small_model()
    with pytest.raises(UnknownNameError):
        eval_concept(m, Atom("Fish"))
    with pytest.raises(UnknownNameError):
        eval_concept(m, Exists("likes", Top()))
    with pytest.raises(TypicalityError):
        eval_concept(m, Typ(Atom("Fly")))
    with pytest.raises(TypicalityError):
        eval_concept(m, Typ(And(Atom("Bird"), Atom("Fly"))))
    with pytest.raises(TypicalityError):
        eval_concept(m, Typ(Atom("Bird")), "global")


def test_global_typicality():
    m = small_model().with_global_order()
    # Bird ranks a<b<c<d, Penguin ranks c<b<a=d; d is dominated by b and c
    assert eval_concept(m, Typ(Top()), "global") == {"a", "b", "c"}
    assert eval_concept(m, Typ(Atom("Penguin")), "auto") == {"c"}
    assert eval_concept(m, Typ(And(Atom("Bird"), Not(Atom("Fly")))), "auto") == {"b", "c"}


@given(models(), concepts(names=NAMES3, max_leaves=8, rnames=ROLES2))
@settings(max_examples=200)
def test_eval_matches_element_oracle(mp, c):
    model, plain, scores = mp
    try:
        got = eval_concept(model, c)
    except TypicalityError:
        # per-concept mode needs atomic T arguments
        got = None
    if got is not None:
        assert got == {x for x in plain["domain"] if member(plain, c, x, scores)}
    glob = model.with_global_order()
    expected_pairs = pareto_pairs([scores[a] for a in model.prefs])
    assert set(glob.global_order.pairs) == expected_pairs
    got_global = eval_concept(glob, c, "global")
    assert got_global == {x for x in plain["domain"] if member(plain, c, x, global_pairs=expected_pairs)}


@given(models(roles=False), typ_free_concepts(roles=False, names=NAMES3))
@settings(max_examples=100)
def test_role_free_truth_table(mp, c):
    model, plain, _ = mp

    def truth(c, x):
        return member(plain, c, x)

    assert eval_concept(model, c) == {x for x in plain["domain"] if truth(c, x)}


def test_check_reflexive():
    m = small_model()
    r = check_inclusion(m, StrictInclusion(Atom("Bird"), Atom("Bird")))
    assert r.holds and r.counterexamples == ()


def test_typical_penguins_are_birds():
    r = check_inclusion(small_model(), parse_axiom("T(Penguin) <= Bird"))
    assert r.holds
    r = check_inclusion(small_model(), parse_axiom("Bird <= Fly"))
    assert not r.holds and r.counterexamples == ("b", "c")


def test_check_rejects_fuzzy_axiom():
    with pytest.raises(TypeError):
        check_inclusion(small_model(), FuzzyInclusion(Atom("Bird"), Atom("Fly"), 0.5))


def test_check_report_invariant():
    with pytest.raises(ValueError):
        CheckReport(StrictInclusion(Top(), Top()), False, ())


@given(models(size=6), typ_free_concepts(names=NAMES3, max_leaves=5, rnames=ROLES2), typ_free_concepts(names=NAMES3, max_leaves=5, rnames=ROLES2),
       NAMES3)
@settings(max_examples=150)
def test_check_verdict_matches_subset_oracle(mp, lhs, rhs, dist):
    model, plain, scores = mp
    for ax in (StrictInclusion(lhs, rhs), TypicalityInclusion(Typ(Atom(dist)), rhs)):
        left = {x for x in plain["domain"] if member(plain, ax.lhs, x, scores)}
        right = {x for x in plain["domain"] if member(plain, ax.rhs, x, scores)}
        r = check_inclusion(model, ax)
        assert r.holds == (left <= right)
        assert set(r.counterexamples) == left - right


def test_model_invariants():
    with pytest.raises(ModelError):
        MultiPrefModel([], {})
    with pytest.raises(ModelError):
        MultiPrefModel(["a"], {"A": {"b"}})
    with pytest.raises(ModelError):
        MultiPrefModel(["a"], {}, {"A": PreferenceRelation({"a": 0})})
    with pytest.raises(ModelError):
        MultiPrefModel(["a", "b"], {"A": {"a"}}, {"A": PreferenceRelation({"a": 0})})
