import pytest

from supplykg.terms import (
    Iri,
    Literal,
    MalformedTermError,
    Quoted,
    Triple,
    TriplePattern,
    Variable,
    boolean,
    decimal,
    format_term,
    format_triple,
    integer,
    string,
    substitute,
    timestep,
    to_ground,
    unify,
)


def test_term_equality_is_structural():
    assert Iri("Node1.1") == Iri("Node1.1")
    assert Iri("Node1.1") != Iri("Node1.2")
    assert integer(5) == integer(5)
    assert integer(5) != decimal(5.0)  # datatype is part of identity
    assert integer(5) != timestep(5)
    assert boolean(True) != integer(1)
    inner = Triple(Iri("s"), Iri("p"), Iri("o"))
    assert Quoted(inner) == Quoted(Triple(Iri("s"), Iri("p"), Iri("o")))
    assert len({Quoted(inner), Quoted(inner)}) == 1


def test_malformed_terms_rejected():
    with pytest.raises(MalformedTermError):
        Iri("")
    with pytest.raises(MalformedTermError):
        Iri("has space")
    with pytest.raises(MalformedTermError):
        Iri("9starts.with.digit")
    with pytest.raises(MalformedTermError):
        Iri("trailing.dot.")
    with pytest.raises(MalformedTermError):
        Literal(1.5, "integer")
    with pytest.raises(MalformedTermError):
        Literal(float("nan"), "decimal")
    with pytest.raises(MalformedTermError):
        Literal(float("inf"), "decimal")
    with pytest.raises(MalformedTermError):
        Literal(5, "volume")
    with pytest.raises(MalformedTermError):
        timestep(-1)
    with pytest.raises(MalformedTermError):
        Variable("not ok")


def test_triple_position_rules():
    s, p, o = Iri("s"), Iri("p"), Iri("o")
    with pytest.raises(MalformedTermError):
        Triple(integer(1), p, o)  # literal subject
    with pytest.raises(MalformedTermError):
        Triple(s, integer(1), o)  # literal predicate
    with pytest.raises(MalformedTermError):
        Triple(s, Quoted(Triple(s, p, o)), o)  # quoted predicate
    # quoted subject and object are fine
    q = Quoted(Triple(s, p, o))
    Triple(q, p, q)


def test_pattern_allows_variables_anywhere():
    v = Variable("x")
    TriplePattern(v, v, v)
    TriplePattern(TriplePattern(v, Iri("p"), v), Iri("q"), integer(3))
    with pytest.raises(MalformedTermError):
        TriplePattern(Iri("s"), integer(1), Iri("o"))


def test_format_term_canonical_forms():
    cases = {
        Iri("Node1.1"): ":Node1.1",
        integer(42): "42",
        integer(-7): "-7",
        decimal(2.5): "2.5",
        string("ab c"): '"ab c"',
        string('say "hi"\n'): '"say \\"hi\\"\\n"',
        boolean(True): '"True"^^boolean',
        boolean(False): '"False"^^boolean',
        timestep(7): '"7"^^timestep',
        Variable("dt"): "?dt",
        Quoted(Triple(Iri("s"), Iri("p"), Iri("o"))): "<< :s :p :o >>",
    }
    for term, expected in cases.items():
        assert format_term(term) == expected


def test_rdf_type_shorthand():
    t = Triple(Iri("OEM1"), Iri("rdf:type"), Iri("OEM"))
    assert format_triple(t) == ":OEM1 a :OEM ."
    # but rdf:type outside predicate position keeps the prefixed spelling
    assert format_term(Iri("rdf:type")) == ":rdf:type"


def test_unify_binds_and_checks_consistency():
    t = Triple(Iri("s"), Iri("p"), integer(4))
    got = unify(TriplePattern(Variable("a"), Iri("p"), Variable("b")), t)
    assert got == {"a": Iri("s"), "b": integer(4)}
    # repeated variable must bind the same term on both positions
    same = Triple(Iri("s"), Iri("p"), Iri("s"))
    assert unify(TriplePattern(Variable("x"), Iri("p"), Variable("x")), same) == {"x": Iri("s")}
    assert unify(TriplePattern(Variable("x"), Iri("p"), Variable("x")), t) is None
    # prior bindings constrain
    assert unify(TriplePattern(Variable("a"), Iri("p"), Variable("b")), t, {"a": Iri("other")}) is None


def test_unify_quoted_pattern_reaches_inside():
    inner = Triple(Iri("SP1"), Iri("needsNode"), Iri("N1"))
    t = Triple(Quoted(inner), Iri("getsProduct"), Iri("P1"))
    pat = TriplePattern(
        TriplePattern(Variable("sp"), Iri("needsNode"), Variable("n")),
        Iri("getsProduct"),
        Variable("p"),
    )
    assert unify(pat, t) == {"sp": Iri("SP1"), "n": Iri("N1"), "p": Iri("P1")}
    # a plain IRI subject does not match a quoted pattern
    assert unify(pat, Triple(Iri("x"), Iri("getsProduct"), Iri("P1"))) is None


def test_substitute_and_to_ground():
    pat = TriplePattern(Variable("s"), Iri("p"), Variable("o"))
    half = substitute(pat, {"s": Iri("a")})
    assert half == TriplePattern(Iri("a"), Iri("p"), Variable("o"))
    assert to_ground(half) is None
    full = substitute(half, {"o": integer(1)})
    assert to_ground(full) == Triple(Iri("a"), Iri("p"), integer(1))
    # nested pattern becomes a quoted term when ground
    nested = TriplePattern(TriplePattern(Variable("s"), Iri("p"), Iri("o")), Iri("q"), integer(2))
    g = to_ground(substitute(nested, {"s": Iri("a")}))
    assert g == Triple(Quoted(Triple(Iri("a"), Iri("p"), Iri("o"))), Iri("q"), integer(2))
    # substitution cannot build an illegal pattern: literal subjects are rejected
    with pytest.raises(MalformedTermError):
        substitute(pat, {"s": integer(9), "o": integer(1)})


def test_variables_first_appearance_order():
    pat = TriplePattern(
        TriplePattern(Variable("sp"), Iri("p"), Variable("n")),
        Variable("pred"),
        Variable("sp"),
    )
    assert pat.variables() == ["sp", "n", "pred"]
