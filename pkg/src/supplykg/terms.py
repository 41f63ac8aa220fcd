"""Term and triple model for the knowledge graph.

Terms come in four kinds: IRIs (named resources), literals (typed values),
variables (query placeholders), and quoted triples (a whole triple used as a
term, so statements can be made about statements). Ground triples may not
contain variables; patterns may. All term types are immutable and hashable,
and every term has a canonical text form (``format_term``) which doubles as
the deterministic sort key used across the package.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

# literal datatypes
INTEGER = "integer"
DECIMAL = "decimal"
STRING = "string"
BOOLEAN = "boolean"
TIMESTEP = "timestep"

_DATATYPES = (INTEGER, DECIMAL, STRING, BOOLEAN, TIMESTEP)

# Stricter than "no whitespace": this charset is what the serializer can
# round-trip unescaped and what the query lexer can re-read. Must not end
# with "." or the statement terminator becomes ambiguous.
_IRI_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.:-]*")
_VAR_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class MalformedTermError(ValueError):
    """Raised when a term or triple is constructed with invalid parts."""


@dataclass(frozen=True, slots=True)
class Iri:
    name: str

    def __post_init__(self) -> None:
        if not _IRI_NAME.fullmatch(self.name) or self.name.endswith("."):
            raise MalformedTermError(f"invalid IRI name: {self.name!r}")


@dataclass(frozen=True, slots=True)
class Literal:
    value: Union[int, float, str, bool]
    datatype: str

    def __post_init__(self) -> None:
        if self.datatype not in _DATATYPES:
            raise MalformedTermError(f"unknown datatype: {self.datatype!r}")
        v = self.value
        ok = {
            INTEGER: lambda: type(v) is int,
            DECIMAL: lambda: type(v) is float and math.isfinite(v),
            STRING: lambda: type(v) is str,
            BOOLEAN: lambda: type(v) is bool,
            TIMESTEP: lambda: type(v) is int and v >= 0,
        }[self.datatype]()
        if not ok:
            raise MalformedTermError(f"bad {self.datatype} literal value: {v!r}")


def integer(value: int) -> Literal:
    return Literal(value, INTEGER)


def decimal(value: float) -> Literal:
    return Literal(float(value), DECIMAL)


def string(value: str) -> Literal:
    return Literal(value, STRING)


def boolean(value: bool) -> Literal:
    return Literal(value, BOOLEAN)


def timestep(value: int) -> Literal:
    """A point on the discrete simulation clock. Distinct from plain integers
    so that durations and instants cannot be silently conflated."""
    return Literal(value, TIMESTEP)


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __post_init__(self) -> None:
        if not _VAR_NAME.fullmatch(self.name):
            raise MalformedTermError(f"invalid variable name: {self.name!r}")


@dataclass(frozen=True, slots=True)
class Quoted:
    """A ground triple used as a term."""

    triple: "Triple"

    def __post_init__(self) -> None:
        if not isinstance(self.triple, Triple):
            raise MalformedTermError("Quoted wraps a ground Triple")


Term = Union[Iri, Literal, Quoted]

_SUBJECT_KINDS = (Iri, Quoted)
_OBJECT_KINDS = (Iri, Literal, Quoted)


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Union[Iri, Quoted]
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.subject, _SUBJECT_KINDS):
            raise MalformedTermError(f"triple subject must be an IRI or quoted triple, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise MalformedTermError(f"triple predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, _OBJECT_KINDS):
            raise MalformedTermError(f"triple object must be a term, got {self.object!r}")


# Pattern positions additionally admit variables and nested patterns
# (a TriplePattern in subject/object position matches quoted triples).
PatternTerm = Union[Iri, Literal, Quoted, Variable, "TriplePattern"]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: Union[Iri, Variable]
    object: PatternTerm

    def __post_init__(self) -> None:
        for pos, kinds in (
            (self.subject, (Iri, Quoted, Variable, TriplePattern)),
            (self.predicate, (Iri, Variable)),
            (self.object, (Iri, Literal, Quoted, Variable, TriplePattern)),
        ):
            if not isinstance(pos, kinds):
                raise MalformedTermError(f"invalid pattern position: {pos!r}")

    def variables(self) -> list[str]:
        """Variable names in first-appearance order (subject, predicate, object,
        recursing into quoted patterns)."""
        seen: list[str] = []

        def walk(t: PatternTerm) -> None:
            if isinstance(t, Variable):
                if t.name not in seen:
                    seen.append(t.name)
            elif isinstance(t, TriplePattern):
                walk(t.subject)
                walk(t.predicate)
                walk(t.object)

        walk(self.subject)
        walk(self.predicate)
        walk(self.object)
        return seen


class Solution:
    """An immutable variable -> term binding produced by pattern matching."""

    __slots__ = ("_bindings",)

    def __init__(self, bindings: dict[str, Term]):
        self._bindings = dict(bindings)

    def __getitem__(self, name: str) -> Term:
        return self._bindings[name]

    def __contains__(self, name: str) -> bool:
        return name in self._bindings

    def __iter__(self):
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)

    def get(self, name: str, default=None):
        return self._bindings.get(name, default)

    def as_dict(self) -> dict[str, Term]:
        return dict(self._bindings)

    def __eq__(self, other) -> bool:
        if isinstance(other, Solution):
            return self._bindings == other._bindings
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"?{k}={format_term(v)}" for k, v in sorted(self._bindings.items()))
        return f"Solution({inner})"


# ---------------------------------------------------------------------------
# canonical text forms


def _escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def format_term(term) -> str:
    """Canonical single-line text form of any term or pattern term."""
    if isinstance(term, Iri):
        return ":" + term.name
    if isinstance(term, Variable):
        return "?" + term.name
    if isinstance(term, Quoted):
        t = term.triple
        return f"<< {format_term(t.subject)} {_format_predicate(t.predicate)} {format_term(t.object)} >>"
    if isinstance(term, TriplePattern):
        return f"<< {format_term(term.subject)} {_format_predicate(term.predicate)} {format_term(term.object)} >>"
    if isinstance(term, Literal):
        dt, v = term.datatype, term.value
        if dt == INTEGER:
            return str(v)
        if dt == DECIMAL:
            return repr(v)
        if dt == STRING:
            return f'"{_escape_string(v)}"'
        if dt == BOOLEAN:
            return f'"{"True" if v else "False"}"^^boolean'
        if dt == TIMESTEP:
            return f'"{v}"^^timestep'
    raise TypeError(f"not a term: {term!r}")


def _format_predicate(p) -> str:
    # rdf:type gets the customary shorthand
    if isinstance(p, Iri) and p.name == "rdf:type":
        return "a"
    return format_term(p)


def format_triple(t: Triple) -> str:
    return f"{format_term(t.subject)} {_format_predicate(t.predicate)} {format_term(t.object)} ."


def format_pattern(p: TriplePattern) -> str:
    return f"{format_term(p.subject)} {_format_predicate(p.predicate)} {format_term(p.object)} ."


# ---------------------------------------------------------------------------
# unification


def unify_term(pattern: PatternTerm, term: Term, bindings: dict[str, Term]) -> bool:
    """Try to unify one pattern position with a ground term, extending
    ``bindings`` in place. Returns False (bindings possibly half-extended;
    callers work on copies) when they cannot match."""
    if isinstance(pattern, Variable):
        bound = bindings.get(pattern.name)
        if bound is None:
            bindings[pattern.name] = term
            return True
        return bound == term
    if isinstance(pattern, TriplePattern):
        if not isinstance(term, Quoted):
            return False
        inner = term.triple
        return (
            unify_term(pattern.subject, inner.subject, bindings)
            and unify_term(pattern.predicate, inner.predicate, bindings)
            and unify_term(pattern.object, inner.object, bindings)
        )
    return pattern == term


def unify(pattern: TriplePattern, triple: Triple, bindings: dict[str, Term] | None = None) -> dict[str, Term] | None:
    """Unify a pattern with a ground triple under optional prior bindings.
    Returns the extended bindings dict, or None on mismatch."""
    work = dict(bindings) if bindings else {}
    if (
        unify_term(pattern.subject, triple.subject, work)
        and unify_term(pattern.predicate, triple.predicate, work)
        and unify_term(pattern.object, triple.object, work)
    ):
        return work
    return None


def substitute(pattern: TriplePattern, bindings: dict[str, Term]) -> TriplePattern:
    """Replace bound variables in a pattern; unbound ones stay."""

    def sub(t: PatternTerm) -> PatternTerm:
        if isinstance(t, Variable):
            return bindings.get(t.name, t)
        if isinstance(t, TriplePattern):
            return TriplePattern(sub(t.subject), sub(t.predicate), sub(t.object))
        return t

    return TriplePattern(sub(pattern.subject), sub(pattern.predicate), sub(pattern.object))


def to_ground(pattern: TriplePattern) -> Triple | None:
    """Convert a variable-free pattern to a ground Triple, else None."""

    def conv(t: PatternTerm):
        if isinstance(t, Variable):
            return None
        if isinstance(t, TriplePattern):
            g = to_ground(t)
            return Quoted(g) if g is not None else None
        return t

    s, p, o = conv(pattern.subject), conv(pattern.predicate), conv(pattern.object)
    if s is None or p is None or o is None:
        return None
    try:
        return Triple(s, p, o)
    except MalformedTermError:
        return None
