"""Query lexer. Produces a flat token list with line/column positions.

Identifier charset has no hyphen: ``?dt-lt`` is three tokens (?dt, -, lt),
which is what makes filter arithmetic like ``?dt - lt = t`` work unquoted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

KEYWORDS = {
    "SELECT",
    "WHERE",
    "FILTER",
    "INSERT",
    "ORDER",
    "GROUP",
    "BY",
    "ASC",
    "DESC",
    "AS",
    "SUM",
    "AVG",
    "IF",
    "REGEX",
    "STR",
}


@dataclass(frozen=True)
class Token:
    kind: str  # keyword name, or one of: VAR IRI IDENT NUMBER STRING TAG op punctuation EOF
    text: str
    line: int
    col: int


class QueryLexError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_SPEC = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<qopen><<)
  | (?P<qclose>>>)
  | (?P<string>"(?:[^"\\\n]|\\.)*")(?:\^\^(?P<tag>[a-z]+))?
  | (?P<number>\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+)
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<iri>:[A-Za-z_](?:[A-Za-z0-9_.:-]*[A-Za-z0-9_:-])?|rdf:type)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|!=|&&|\|\||[=<>+\-*/(){},.])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _SPEC.match(text, pos)
        if m is None:
            raise QueryLexError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        col = m.start() - line_start + 1
        if kind in ("ws", "comment"):
            pass
        elif kind == "var":
            tokens.append(Token("VAR", value[1:], line, col))
        elif kind == "iri":
            name = "rdf:type" if value == "rdf:type" else value[1:]
            tokens.append(Token("IRI", name, line, col))
        elif kind == "ident":
            upper = value.upper()
            if upper in KEYWORDS:
                tokens.append(Token(upper, value, line, col))
            else:
                tokens.append(Token("IDENT", value, line, col))
        elif kind == "number":
            tokens.append(Token("NUMBER", value, line, col))
        elif kind in ("string", "tag"):
            s = m.group("string")
            tokens.append(Token("STRING", s[1:-1], line, col))
            if m.group("tag"):
                tokens.append(Token("TAG", m.group("tag"), line, m.start("tag") - line_start + 1))
        elif kind == "qopen":
            tokens.append(Token("<<", value, line, col))
        elif kind == "qclose":
            tokens.append(Token(">>", value, line, col))
        else:  # op
            tokens.append(Token(value, value, line, col))
        # track newlines inside whatever we just consumed
        if "\n" in value:
            line += value.count("\n")
            line_start = m.start() + value.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens
