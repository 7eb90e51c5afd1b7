"""Concept language: AST, parser and renderer for concepts and KB documents.

Surface syntax (ASCII)::

    concept  := or_expr
    or_expr  := and_expr ("or" and_expr)*
    and_expr := unary ("and" unary)*
    unary    := "not" unary | ("some" | "all") ROLE "." unary | primary
    primary  := NAME | "Top" | "Bot" | "T" "(" concept ")" | "(" concept ")"

Binary operators associate to the left. Axiom lines::

    C <= D            strict inclusion
    T(C) <= D @ w     (weighted) typicality inclusion
    C <= D >= a       fuzzy inclusion with threshold a in [0, 1]
    a : C             concept assertion

KB documents group axiom lines under ``strict:``, ``block <Name>:`` and
``assertions:`` headers. ``#`` starts a comment.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

KEYWORDS = frozenset({"and", "or", "not", "some", "all", "Top", "Bot", "T"})
IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    """Syntax error at a 1-based line/column position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class NestedTypicalityError(ParseError):
    pass


def is_identifier(name: str) -> bool:
    return bool(IDENTIFIER.match(name)) and name not in KEYWORDS


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Concept"


@dataclass(frozen=True)
class And:
    left: "Concept"
    right: "Concept"


@dataclass(frozen=True)
class Or:
    left: "Concept"
    right: "Concept"


@dataclass(frozen=True)
class Exists:
    role: str
    filler: "Concept"


@dataclass(frozen=True)
class Forall:
    role: str
    filler: "Concept"


@dataclass(frozen=True)
class Typ:
    arg: "Concept"

    def __post_init__(self):
        if contains_typicality(self.arg):
            raise NestedTypicalityError("typicality operator nested inside T(...)")


Concept = Union[Atom, Top, Bottom, Not, And, Or, Exists, Forall, Typ]


def subconcepts(c: Concept) -> Iterator[Concept]:
    """Pre-order traversal of ``c``."""
    yield c
    if isinstance(c, (Not, Typ)):
        yield from subconcepts(c.arg)
    elif isinstance(c, (And, Or)):
        yield from subconcepts(c.left)
        yield from subconcepts(c.right)
    elif isinstance(c, (Exists, Forall)):
        yield from subconcepts(c.filler)


def contains_typicality(c: Concept) -> bool:
    return any(isinstance(s, Typ) for s in subconcepts(c))


def contains_roles(c: Concept) -> bool:
    return any(isinstance(s, (Exists, Forall)) for s in subconcepts(c))


def atom_names(c: Concept) -> set[str]:
    return {s.name for s in subconcepts(c) if isinstance(s, Atom)}


def role_names(c: Concept) -> set[str]:
    return {s.role for s in subconcepts(c) if isinstance(s, (Exists, Forall))}


@dataclass(frozen=True)
class StrictInclusion:
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True)
class TypicalityInclusion:
    lhs: Typ
    rhs: Concept
    weight: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.lhs, Typ):
            raise ValueError("typicality inclusion needs T(...) on the left")
        if self.weight is not None:
            if not isinstance(self.lhs.arg, Atom):
                raise ValueError("weighted typicality inclusion needs T(<name>) on the left")
            if not math.isfinite(self.weight):
                raise ValueError("weights must be finite reals")

    @property
    def concept(self) -> str:
        """Name of the distinguished concept of a weighted inclusion."""
        if not isinstance(self.lhs.arg, Atom):
            raise ValueError("left-hand side is not T(<name>)")
        return self.lhs.arg.name


@dataclass(frozen=True)
class FuzzyInclusion:
    lhs: Concept
    rhs: Concept
    threshold: float

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"fuzzy threshold {self.threshold} outside [0, 1]")


@dataclass(frozen=True)
class ConceptAssertion:
    concept: Concept
    individual: str


Axiom = Union[StrictInclusion, TypicalityInclusion, FuzzyInclusion, ConceptAssertion]


@dataclass(frozen=True)
class KnowledgeBaseDoc:
    strict_axioms: tuple = ()
    weighted_blocks: dict = field(default_factory=dict)
    assertions: tuple = ()

    def __post_init__(self):
        for name, inclusions in self.weighted_blocks.items():
            for inc in inclusions:
                if not isinstance(inc, TypicalityInclusion) or inc.weight is None:
                    raise ValueError(f"block {name}: entries must be weighted typicality inclusions")
                if inc.lhs != Typ(Atom(name)):
                    raise ValueError(f"block {name}: inclusion lhs must be T({name})")


# --------------------------------------------------------------------------
# Tokenizer
# --------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<op><=|>=|[()@.:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # name | keyword | number | op | end
    text: str
    column: int


def _tokenize(text: str, line: int, col0: int = 1) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        if kind != "ws":
            word = m.group()
            if kind == "name" and word in KEYWORDS:
                kind = "keyword"
            toks.append(_Tok(kind, word, col0 + pos))
        pos = m.end()
    toks.append(_Tok("end", "", col0 + len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, line: int = 1):
        self.line = line
        self.toks = _tokenize(text, line)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: Optional[_Tok] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, self.line, tok.column)

    def describe(self, tok: _Tok) -> str:
        return "end of input" if tok.kind == "end" else repr(tok.text)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("keyword", "op") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        tok = self.tok
        if not self.accept(text):
            raise self.error(f"expected {text!r}, found {self.describe(tok)}")
        return tok

    def expect_end(self):
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.describe(self.tok)}")

    def name(self, what: str) -> str:
        tok = self.tok
        if tok.kind != "name":
            raise self.error(f"expected {what}, found {self.describe(tok)}")
        self.i += 1
        return tok.text

    def number(self) -> float:
        tok = self.tok
        if tok.kind != "number":
            raise self.error(f"expected a number, found {self.describe(tok)}")
        self.i += 1
        return float(tok.text)

    # grammar --------------------------------------------------------------

    def concept(self) -> Concept:
        left = self.conjunction()
        while self.accept("or"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Concept:
        left = self.unary()
        while self.accept("and"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Concept:
        if self.accept("not"):
            return Not(self.unary())
        for kw, ctor in (("some", Exists), ("all", Forall)):
            if self.accept(kw):
                role = self.name("a role name")
                self.expect(".")
                return ctor(role, self.unary())
        return self.primary()

    def primary(self) -> Concept:
        tok = self.tok
        if tok.kind == "name":
            self.i += 1
            return Atom(tok.text)
        if self.accept("Top"):
            return Top()
        if self.accept("Bot"):
            return Bottom()
        if self.accept("T"):
            self.expect("(")
            inner_tok = self.tok
            inner = self.concept()
            self.expect(")")
            if contains_typicality(inner):
                raise NestedTypicalityError(
                    "typicality operator nested inside T(...)", self.line, inner_tok.column
                )
            return Typ(inner)
        if self.accept("("):
            inner = self.concept()
            self.expect(")")
            return inner
        raise self.error(f"expected a concept, found {self.describe(tok)}")

    def axiom(self) -> Axiom:
        if self.tok.kind == "name" and self.toks[self.i + 1].text == ":":
            individual = self.name("an individual name")
            self.expect(":")
            c = self.concept()
            self.expect_end()
            return ConceptAssertion(c, individual)
        lhs_tok = self.tok
        lhs = self.concept()
        self.expect("<=")
        rhs = self.concept()
        if self.tok.text == "@":
            at = self.tok
            self.i += 1
            weight = self.number()
            self.expect_end()
            if not (isinstance(lhs, Typ) and isinstance(lhs.arg, Atom)):
                raise self.error("weighted inclusion needs T(<name>) on the left", lhs_tok)
            if not math.isfinite(weight):
                raise self.error("weight must be finite", at)
            return TypicalityInclusion(lhs, rhs, weight)
        if self.tok.text == ">=":
            ge = self.tok
            self.i += 1
            alpha = self.number()
            self.expect_end()
            if not 0.0 <= alpha <= 1.0:
                raise self.error(f"fuzzy threshold {alpha} outside [0, 1]", ge)
            return FuzzyInclusion(lhs, rhs, alpha)
        self.expect_end()
        if isinstance(lhs, Typ):
            return TypicalityInclusion(lhs, rhs)
        return StrictInclusion(lhs, rhs)


def parse_concept(text: str) -> Concept:
    """Parse a single concept expression."""
    p = _Parser(text)
    c = p.concept()
    p.expect_end()
    return c


def parse_axiom(text: str, line: int = 1) -> Axiom:
    return _Parser(text, line).axiom()


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if content.strip():
            yield lineno, content


def parse_axioms(text: str) -> list[Axiom]:
    """Parse a query file: one axiom per non-blank line, no section headers."""
    return [_Parser(content, lineno).axiom() for lineno, content in _content_lines(text)]


_HEADER = re.compile(r"\s*(?:(strict)|(assertions)|block\s+([A-Za-z_][A-Za-z0-9_]*))\s*:\s*\Z")


def parse_kb(text: str) -> KnowledgeBaseDoc:
    """Parse a KB document into strict axioms, weighted blocks and assertions."""
    strict: list = []
    blocks: dict[str, list] = {}
    assertions: list = []
    section: Optional[str] = None
    block_name = None
    for lineno, content in _content_lines(text):
        header = _HEADER.match(content)
        if header:
            if header.group(1):
                section = "strict"
            elif header.group(2):
                section = "assertions"
            else:
                block_name = header.group(3)
                if block_name in KEYWORDS:
                    raise ParseError(f"{block_name!r} is a reserved word", lineno, content.index(block_name) + 1)
                if block_name in blocks:
                    raise ParseError(f"duplicate block for concept {block_name}", lineno, 1)
                blocks[block_name] = []
                section = "block"
            continue
        col = len(content) - len(content.lstrip()) + 1
        if section is None:
            raise ParseError("axiom outside of any section", lineno, col)
        ax = _Parser(content, lineno).axiom()
        if section == "strict":
            if isinstance(ax, ConceptAssertion):
                raise ParseError("assertion in the strict section", lineno, col)
            if isinstance(ax, TypicalityInclusion) and ax.weight is not None:
                raise ParseError("weighted inclusion outside a block", lineno, col)
            strict.append(ax)
        elif section == "assertions":
            if not isinstance(ax, ConceptAssertion):
                raise ParseError("only assertions allowed in the assertions section", lineno, col)
            assertions.append(ax)
        else:
            if not isinstance(ax, TypicalityInclusion) or ax.weight is None:
                raise ParseError(f"block {block_name}: expected 'T({block_name}) <= D @ w'", lineno, col)
            if ax.lhs != Typ(Atom(block_name)):
                raise ParseError(f"block {block_name}: inclusion lhs must be T({block_name})", lineno, col)
            blocks[block_name].append(ax)
    return KnowledgeBaseDoc(
        tuple(strict), {k: tuple(v) for k, v in blocks.items()}, tuple(assertions)
    )


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

_OR, _AND, _UNARY = 1, 2, 3


def _prec(c: Concept) -> int:
    if isinstance(c, Or):
        return _OR
    if isinstance(c, And):
        return _AND
    return _UNARY


def _wrap(c: Concept, parens: bool) -> str:
    s = render_concept(c)
    return f"({s})" if parens else s


def render_concept(c: Concept) -> str:
    if isinstance(c, Atom):
        return c.name
    if isinstance(c, Top):
        return "Top"
    if isinstance(c, Bottom):
        return "Bot"
    if isinstance(c, Not):
        return "not " + _wrap(c.arg, _prec(c.arg) < _UNARY)
    if isinstance(c, And):
        return _wrap(c.left, _prec(c.left) < _AND) + " and " + _wrap(c.right, _prec(c.right) <= _AND)
    if isinstance(c, Or):
        return render_concept(c.left) + " or " + _wrap(c.right, _prec(c.right) <= _OR)
    if isinstance(c, Exists):
        return f"some {c.role}." + _wrap(c.filler, _prec(c.filler) < _UNARY)
    if isinstance(c, Forall):
        return f"all {c.role}." + _wrap(c.filler, _prec(c.filler) < _UNARY)
    if isinstance(c, Typ):
        return f"T({render_concept(c.arg)})"
    raise TypeError(f"not a concept: {c!r}")


def format_number(x: float) -> str:
    """Shortest decimal that parses back to exactly ``x``."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def render_axiom(ax: Axiom) -> str:
    if isinstance(ax, StrictInclusion):
        return f"{render_concept(ax.lhs)} <= {render_concept(ax.rhs)}"
    if isinstance(ax, TypicalityInclusion):
        s = f"{render_concept(ax.lhs)} <= {render_concept(ax.rhs)}"
        return s if ax.weight is None else f"{s} @ {format_number(ax.weight)}"
    if isinstance(ax, FuzzyInclusion):
        return f"{render_concept(ax.lhs)} <= {render_concept(ax.rhs)} >= {format_number(ax.threshold)}"
    if isinstance(ax, ConceptAssertion):
        return f"{ax.individual} : {render_concept(ax.concept)}"
    raise TypeError(f"not an axiom: {ax!r}")


def render_kb(doc: KnowledgeBaseDoc) -> str:
    lines = []
    if doc.strict_axioms:
        lines.append("strict:")
        lines += ["  " + render_axiom(ax) for ax in doc.strict_axioms]
    for name, inclusions in doc.weighted_blocks.items():
        lines.append(f"block {name}:")
        lines += ["  " + render_axiom(ax) for ax in inclusions]
    if doc.assertions:
        lines.append("assertions:")
        lines += ["  " + render_axiom(ax) for ax in doc.assertions]
    return "\n".join(lines) + ("\n" if lines else "")


def render(value) -> str:
    """Render a concept, axiom or KB document in the surface syntax."""
    if isinstance(value, KnowledgeBaseDoc):
        return render_kb(value)
    if isinstance(value, (StrictInclusion, TypicalityInclusion, FuzzyInclusion, ConceptAssertion)):
        return render_axiom(value)
    return render_concept(value)
