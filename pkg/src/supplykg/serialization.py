"""Line-oriented graph serialization.

Format, one triple per line, UTF-8, LF line endings, lines sorted
lexicographically (the canonical form is therefore unique per graph):

    :OEM1 a :OEM .
    :Order3 :hasQuantity 100000 .
    :Order3 :hasDeliveryTime "12"^^timestep .
    << :SP3 :needsNode :SupplierNode1.1 >> :getsProduct :Product1.1 .
    :Inv1 :hasCost 25.5 .
    :Node3.2 :hasSCORKPI "Responsiveness: 85" .
    :Order3 :isFulfilled "True"^^boolean .

Term syntax: ``:Name`` is an IRI (``a`` abbreviates rdf:type in predicate
position), bare numbers are integer/decimal literals, ``"..."`` is a string
with backslash escapes, and ``"..."^^tag`` forces a datatype (integer,
decimal, string, boolean, timestep). ``<< s p o >>`` quotes a triple so it
can stand in subject or object position. Parsing accepts flexible whitespace
and both lexical cases for booleans; serialization always emits the canonical
spelling above, so serialize(parse(serialize(g))) is byte-identical to
serialize(g).
"""

from __future__ import annotations

import re

from .graph import Graph
from .terms import (
    BOOLEAN,
    DECIMAL,
    INTEGER,
    STRING,
    TIMESTEP,
    Iri,
    Literal,
    MalformedTermError,
    Quoted,
    Term,
    Triple,
    format_triple,
)


class GraphParseError(ValueError):
    """Syntax or structural error in serialized graph text."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def serialize(graph: Graph) -> str:
    lines = sorted(format_triple(t) for t in graph.triples())
    return "\n".join(lines) + "\n" if lines else ""


def serialize_to(graph: Graph, path: str) -> None:
    from .util import atomic_write_text

    atomic_write_text(path, serialize(graph))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<qopen><<)
  | (?P<qclose>>>)
  | (?P<string>"(?:[^"\\]|\\.)*")(?:\^\^(?P<tag>[a-z]+))?
  | (?P<number>[+-]?(?:\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+))
  | (?P<iri>:[A-Za-z_](?:[A-Za-z0-9_.:-]*[A-Za-z0-9_:-])?|rdf:type)
  | (?P<kw>a)(?![A-Za-z0-9_.:-])
  | (?P<dot>\.)
    """,
    re.VERBOSE,
)

_ESCAPE = re.compile(r"\\(u[0-9a-fA-F]{4}|.)")
_ESCAPE_MAP = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


def _unescape(body: str, line: int) -> str:
    def repl(m: re.Match) -> str:
        e = m.group(1)
        if e.startswith("u"):
            return chr(int(e[1:], 16))
        if e in _ESCAPE_MAP:
            return _ESCAPE_MAP[e]
        raise GraphParseError(f"unknown escape \\{e} in string", line)

    return _ESCAPE.sub(repl, body)


def _tokenize_line(text: str, line: int) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise GraphParseError(f"unexpected character {text[pos]!r}", line)
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "tag":  # tag group fires together with string; lastgroup picks it
            tokens.append(("string", m.group("string")))
            tokens.append(("tag", m.group("tag")))
            continue
        if kind == "string" and m.group("tag"):
            tokens.append(("string", m.group("string")))
            tokens.append(("tag", m.group("tag")))
            continue
        tokens.append((kind, m.group()))
    return tokens


_BOOL_LEXICALS = {"true": True, "false": False}


def _typed_literal(body: str, tag: str, line: int) -> Literal:
    try:
        if tag == INTEGER:
            return Literal(int(body), INTEGER)
        if tag == DECIMAL:
            return Literal(float(body), DECIMAL)
        if tag == STRING:
            return Literal(body, STRING)
        if tag == BOOLEAN:
            if body.lower() in _BOOL_LEXICALS:
                return Literal(_BOOL_LEXICALS[body.lower()], BOOLEAN)
            raise GraphParseError(f"bad boolean lexical {body!r}", line)
        if tag == TIMESTEP:
            return Literal(int(body), TIMESTEP)
    except GraphParseError:
        raise
    except (ValueError, MalformedTermError) as exc:
        raise GraphParseError(f"bad {tag} literal {body!r}: {exc}", line) from None
    raise GraphParseError(f"unknown datatype tag ^^{tag}", line)


class _LineParser:
    def __init__(self, tokens: list[tuple[str, str]], line: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line

    def peek_kind(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        if self.pos >= len(self.tokens):
            raise GraphParseError("unexpected end of line", self.line)
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def term(self, predicate_position: bool = False) -> Term:
        kind, text = self.take()
        if kind == "iri":
            return Iri("rdf:type" if text == "rdf:type" else text[1:])
        if kind == "kw":  # bare "a"
            return Iri("rdf:type")
        if predicate_position:
            raise GraphParseError(f"predicate must be an IRI, got {text!r}", self.line)
        if kind == "qopen":
            s = self.term()
            p = self.term(predicate_position=True)
            o = self.term()
            k, t = self.take()
            if k != "qclose":
                raise GraphParseError(f"expected >> to close quoted triple, got {t!r}", self.line)
            try:
                return Quoted(Triple(s, p, o))
            except MalformedTermError as exc:
                raise GraphParseError(str(exc), self.line) from None
        if kind == "number":
            if re.fullmatch(r"[+-]?\d+", text):
                return Literal(int(text), INTEGER)
            return Literal(float(text), DECIMAL)
        if kind == "string":
            body = _unescape(text[1:-1], self.line)
            if self.peek_kind() == "tag":
                _, tag = self.take()
                return _typed_literal(body, tag, self.line)
            return Literal(body, STRING)
        raise GraphParseError(f"expected a term, got {text!r}", self.line)

    def triple(self) -> Triple:
        s = self.term()
        p = self.term(predicate_position=True)
        o = self.term()
        kind, text = self.take()
        if kind != "dot":
            raise GraphParseError(f"expected '.' after triple, got {text!r}", self.line)
        if self.pos != len(self.tokens):
            raise GraphParseError(f"trailing content after '.': {self.tokens[self.pos][1]!r}", self.line)
        try:
            return Triple(s, p, o)
        except MalformedTermError as exc:
            raise GraphParseError(str(exc), self.line) from None


def parse_graph(text: str) -> Graph:
    """Parse serialized graph text. Blank lines and ``#`` comment lines are
    allowed on input (never produced on output)."""
    g = Graph()
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = _tokenize_line(line, lineno)
        g.insert(_LineParser(tokens, lineno).triple())
    return g


def parse_graph_file(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def parse_term(text: str) -> Term:
    """Parse a single term written in the line syntax, e.g. ``:OEM1``,
    ``42``, ``"7"^^timestep``, or ``<< :a :b :c >>``."""
    tokens = _tokenize_line(text.strip(), 1)
    parser = _LineParser(tokens, 1)
    term = parser.term()
    if parser.pos != len(parser.tokens):
        raise GraphParseError(f"trailing content after term: {parser.tokens[parser.pos][1]!r}", 1)
    return term
