"""In-memory triple store with subject/predicate/object indices.

Set semantics: inserting a triple twice is a no-op. Iteration and pattern
matching are deterministic, ordered by each triple's canonical text form, so
two graphs with equal content always behave identically regardless of
insertion history.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .terms import (
    Iri,
    Quoted,
    Solution,
    Term,
    Triple,
    TriplePattern,
    Variable,
    format_triple,
    to_ground,
    unify,
)


class Graph:
    __slots__ = ("_triples", "_by_subject", "_by_predicate", "_by_object", "_sorted")

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._by_subject: dict[Term, set[Triple]] = {}
        self._by_predicate: dict[Iri, set[Triple]] = {}
        self._by_object: dict[Term, set[Triple]] = {}
        self._sorted: list[Triple] | None = None
        for t in triples:
            self.insert(t)

    def insert(self, triple: Triple) -> bool:
        """Add a ground triple. Returns True if it was new."""
        if not isinstance(triple, Triple):
            raise TypeError(f"can only insert ground triples, got {triple!r}")
        if triple in self._triples:
            return False
        self._triples.add(triple)
        self._by_subject.setdefault(triple.subject, set()).add(triple)
        self._by_predicate.setdefault(triple.predicate, set()).add(triple)
        self._by_object.setdefault(triple.object, set()).add(triple)
        self._sorted = None
        return True

    def remove(self, triple: Triple) -> bool:
        """Remove a triple. Returns True if it was present."""
        if triple not in self._triples:
            return False
        self._triples.discard(triple)
        for index, key in (
            (self._by_subject, triple.subject),
            (self._by_predicate, triple.predicate),
            (self._by_object, triple.object),
        ):
            bucket = index[key]
            bucket.discard(triple)
            if not bucket:
                del index[key]
        self._sorted = None
        return True

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples())

    def triples(self) -> list[Triple]:
        """All triples in canonical order."""
        if self._sorted is None:
            self._sorted = sorted(self._triples, key=format_triple)
        return self._sorted

    def copy(self) -> "Graph":
        g = Graph()
        g._triples = set(self._triples)
        g._by_subject = {k: set(v) for k, v in self._by_subject.items()}
        g._by_predicate = {k: set(v) for k, v in self._by_predicate.items()}
        g._by_object = {k: set(v) for k, v in self._by_object.items()}
        return g

    # -- matching -----------------------------------------------------------

    def _candidates(self, pattern: TriplePattern) -> Iterable[Triple]:
        # Narrow by the most selective ground position; a variable-free
        # quoted pattern counts as ground for index purposes.
        buckets = []
        for pos, index in (
            (pattern.subject, self._by_subject),
            (pattern.predicate, self._by_predicate),
            (pattern.object, self._by_object),
        ):
            if isinstance(pos, Variable):
                continue
            if isinstance(pos, TriplePattern):
                ground = to_ground(pos)
                if ground is None:
                    continue
                pos = Quoted(ground)
            bucket = index.get(pos)
            if bucket is None:
                return ()
            buckets.append(bucket)
        if not buckets:
            return self._triples
        return min(buckets, key=len)

    def match(self, pattern: TriplePattern, bindings: dict[str, Term] | None = None) -> list[Solution]:
        """All solutions of a pattern against the graph, in canonical triple
        order. Prior bindings constrain the variables they mention."""
        if not isinstance(pattern, TriplePattern):
            raise TypeError(f"match expects a TriplePattern, got {pattern!r}")
        out = []
        for t in sorted(self._candidates(pattern), key=format_triple):
            got = unify(pattern, t, bindings)
            if got is not None:
                out.append(Solution(got))
        return out

    def subjects(self, predicate: Iri, obj: Term) -> list[Term]:
        """Subjects s such that (s, predicate, obj) holds, canonical order."""
        rows = self.match(TriplePattern(Variable("s"), predicate, obj))
        return [r["s"] for r in rows]

    def objects(self, subject: Term, predicate: Iri) -> list[Term]:
        """Objects o such that (subject, predicate, o) holds, canonical order."""
        rows = self.match(TriplePattern(subject, predicate, Variable("o")))
        return [r["o"] for r in rows]

    def value(self, subject: Term, predicate: Iri) -> Term | None:
        """The unique object for (subject, predicate), or None if absent.
        Raises if the graph holds more than one."""
        objs = self.objects(subject, predicate)
        if not objs:
            return None
        if len(objs) > 1:
            raise ValueError(f"multiple values for subject {subject!r} predicate :{predicate.name}")
        return objs[0]
