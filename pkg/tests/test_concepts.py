import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefnet.concepts import (
    And,
    Atom,
    Bottom,
    ConceptAssertion,
    Exists,
    Forall,
    FuzzyInclusion,
    KnowledgeBaseDoc,
    NestedTypicalityError,
    Not,
    Or,
    ParseError,
    StrictInclusion,
    Top,
    Typ,
    TypicalityInclusion,
    parse_axiom,
    parse_axioms,
    parse_concept,
    parse_kb,
    render,
)
from fixtures import PENGUIN_KB
from strategies import concepts


def test_simple_conjunction():
    assert parse_concept("Bird and not Fly") == And(Atom("Bird"), Not(Atom("Fly")))


def test_typicality_of_atom():
    assert parse_concept("T(Penguin)") == Typ(Atom("Penguin"))


@pytest.mark.parametrize("text", ["T(T(Bird))", "T(A and T(B))", "not T(some r.T(A))"])
def test_nested_typicality_rejected(text):
    with pytest.raises(NestedTypicalityError):
        parse_concept(text)


def test_nested_typicality_rejected_by_constructor():
    with pytest.raises(NestedTypicalityError):
        Typ(Not(Typ(Atom("A"))))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("A or B and C", Or(Atom("A"), And(Atom("B"), Atom("C")))),
        ("not A and B", And(Not(Atom("A")), Atom("B"))),
        ("A and B and C", And(And(Atom("A"), Atom("B")), Atom("C"))),
        ("some r.A and B", And(Exists("r", Atom("A")), Atom("B"))),
        ("all r.not A", Forall("r", Not(Atom("A")))),
        ("some r.(A or B)", Exists("r", Or(Atom("A"), Atom("B")))),
        ("not (A or B)", Not(Or(Atom("A"), Atom("B")))),
        ("Top or Bot", Or(Top(), Bottom())),
        ("andy and Tx", And(Atom("andy"), Atom("Tx"))),
    ],
)
def test_precedence(text, expected):
    assert parse_concept(text) == expected


@pytest.mark.parametrize(
    "value, text",
    [
        (And(Atom("A"), Or(Atom("B"), Atom("C"))), "A and (B or C)"),
        (Typ(Atom("Bird")), "T(Bird)"),
        (Or(Or(Atom("A"), Atom("B")), Atom("C")), "A or B or C"),
        (Or(Atom("A"), Or(Atom("B"), Atom("C"))), "A or (B or C)"),
        (Not(And(Atom("A"), Atom("B"))), "not (A and B)"),
        (Exists("r", And(Atom("A"), Atom("B"))), "some r.(A and B)"),
        (Typ(And(Atom("A"), Atom("B"))), "T(A and B)"),
    ],
)
def test_render(value, text):
    assert render(value) == text


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("A and", 1, 6),
        ("A B", 1, 3),
        ("(A", 1, 3),
        ("some .A", 1, 6),
        ("A & B", 1, 3),
        ("T A", 1, 3),
    ],
)
def test_syntax_error_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_concept(text)
    assert (err.value.line, err.value.column) == (line, column)


@pytest.mark.parametrize("text", ["", "and", "T", "not", "A <= B", "A.B", "1", "Top(A)"])
def test_rejects_non_concepts(text):
    with pytest.raises(ParseError):
        parse_concept(text)


def test_axiom_kinds():
    assert parse_axiom("A <= B") == StrictInclusion(Atom("A"), Atom("B"))
    assert parse_axiom("T(A and B) <= C") == TypicalityInclusion(Typ(And(Atom("A"), Atom("B"))), Atom("C"))
    assert parse_axiom("T(A) <= C @ -1.5e2") == TypicalityInclusion(Typ(Atom("A")), Atom("C"), -150.0)
    assert parse_axiom("A <= B >= 0.25") == FuzzyInclusion(Atom("A"), Atom("B"), 0.25)
    assert parse_axiom("tweety : Bird and not Fly") == ConceptAssertion(And(Atom("Bird"), Not(Atom("Fly"))), "tweety")


@pytest.mark.parametrize("text", ["A <= B @ 3", "T(A and B) <= C @ 1", "A <= B >= 1.5", "A <= B >= -0.1"])
def test_axiom_errors(text):
    with pytest.raises(ParseError):
        parse_axiom(text)


def test_parse_axioms_reports_line():
    with pytest.raises(ParseError) as err:
        parse_axioms("A <= B\n# comment\n\nA <= (B\n")
    assert err.value.line == 4


def test_penguin_kb_blocks():
    doc = parse_kb(PENGUIN_KB)
    assert doc.strict_axioms == (
        StrictInclusion(Atom("Penguin"), Atom("Bird")),
        StrictInclusion(And(Atom("Black"), Atom("Grey")), Bottom()),
    )
    assert doc.weighted_blocks["Bird"][0] == TypicalityInclusion(Typ(Atom("Bird")), Atom("Fly"), 20.0)
    assert doc.weighted_blocks["Penguin"][0].weight == -70.0
    assert [inc.weight for inc in doc.weighted_blocks["Penguin"]] == [-70.0, 50.0, 10.0]
    assert doc.weighted_blocks["Bird"][1].rhs == Exists("has_Wings", Top())


def test_empty_document():
    doc = parse_kb("")
    assert doc == KnowledgeBaseDoc()
    assert render(doc) == ""
    assert parse_kb("# nothing\n\n") == KnowledgeBaseDoc()


def test_kb_round_trip_penguin():
    doc = parse_kb(PENGUIN_KB)
    assert parse_kb(render(doc)) == doc


def test_empty_block_round_trips():
    doc = parse_kb("block A:\nblock B:\n  T(B) <= A @ 1\n")
    assert doc.weighted_blocks["A"] == ()
    assert parse_kb(render(doc)) == doc


@pytest.mark.parametrize(
    "text, line",
    [
        ("block Bird:\n  T(Bird) <= Fly @ 1\nblock Bird:\n", 3),
        ("block Bird:\n  T(Penguin) <= Fly @ 1\n", 2),
        ("block Bird:\n  T(Bird) <= Fly\n", 2),
        ("block Bird:\n  Bird <= Fly @ 2\n", 2),
        ("strict:\n  T(Bird) <= Fly @ 2\n", 2),
        ("Bird <= Fly\n", 1),
        ("assertions:\n  A <= B\n", 2),
        ("strict:\n  a : B\n", 2),
        ("block and:\n", 1),
    ],
)
def test_kb_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_kb(text)
    assert err.value.line == line


def test_weights_keep_declaration_order():
    doc = parse_kb("block C:\n  T(C) <= B @ 3\n  T(C) <= A @ 1\n  T(C) <= B @ 2\n")
    assert [(render(i.rhs), i.weight) for i in doc.weighted_blocks["C"]] == [("B", 3.0), ("A", 1.0), ("B", 2.0)]


@given(concepts())
@settings(max_examples=300)
def test_concept_round_trip(c):
    text = render(c)
    assert parse_concept(text) == c
    assert render(parse_concept(text)) == text


@given(concepts(), st.floats(allow_nan=False, allow_infinity=False, width=64))
@settings(max_examples=100)
def test_weight_round_trip(c, w):
    ax = TypicalityInclusion(Typ(Atom("Q")), c, w)
    assert parse_axiom(render(ax)) == ax


@given(st.text(alphabet="ABT() andorsmel.rT@<=", max_size=25))
@settings(max_examples=300)
def test_parser_accepts_exactly_renderable_strings(text):
    # anything that parses must render to a string that parses to the same AST
    try:
        c = parse_concept(text)
    except ParseError:
        return
    assert parse_concept(render(c)) == c
