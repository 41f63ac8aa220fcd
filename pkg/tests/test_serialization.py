import pytest
from hypothesis import given, settings

from strategies import graphs
from supplykg.graph import Graph
from supplykg.serialization import GraphParseError, parse_graph, serialize
from supplykg.terms import (
    Iri,
    Quoted,
    Triple,
    boolean,
    decimal,
    integer,
    string,
    timestep,
)


def test_canonical_output_frozen():
    g = Graph(
        [
            Triple(Iri("OEM1"), Iri("rdf:type"), Iri("OEM")),
            Triple(Iri("Order3"), Iri("hasQuantity"), integer(100000)),
            Triple(Iri("Order3"), Iri("hasDeliveryTime"), timestep(12)),
            Triple(Iri("Order3"), Iri("isFulfilled"), boolean(True)),
            Triple(Iri("Inv1"), Iri("hasCost"), decimal(25.5)),
            Triple(Iri("Node3.2"), Iri("hasSCORKPI"), string("Responsiveness: 85")),
            Triple(
                Quoted(Triple(Iri("SP3"), Iri("needsNode"), Iri("SupplierNode1.1"))),
                Iri("getsProduct"),
                Iri("Product1.1"),
            ),
        ]
    )
    assert serialize(g) == (
        ':Inv1 :hasCost 25.5 .\n'
        ':Node3.2 :hasSCORKPI "Responsiveness: 85" .\n'
        ':OEM1 a :OEM .\n'
        ':Order3 :hasDeliveryTime "12"^^timestep .\n'
        ':Order3 :hasQuantity 100000 .\n'
        ':Order3 :isFulfilled "True"^^boolean .\n'
        '<< :SP3 :needsNode :SupplierNode1.1 >> :getsProduct :Product1.1 .\n'
    )


def test_empty_graph_serializes_to_empty_text():
    assert serialize(Graph()) == ""
    assert len(parse_graph("")) == 0


def test_parse_accepts_flexible_input():
    text = """
    # a comment
    :a   :p\t:b .

    :a :p   42 .
    :a :p "x"^^string .
    :a :p "TRUE"^^boolean .
    :a :p "7"^^timestep .
    :a :p "4.5"^^decimal .
    :a :p "12"^^integer .
    :a rdf:type :Thing .
    """
    g = parse_graph(text)
    assert Triple(Iri("a"), Iri("p"), Iri("b")) in g
    assert Triple(Iri("a"), Iri("p"), integer(42)) in g
    assert Triple(Iri("a"), Iri("p"), string("x")) in g
    assert Triple(Iri("a"), Iri("p"), boolean(True)) in g
    assert Triple(Iri("a"), Iri("p"), timestep(7)) in g
    assert Triple(Iri("a"), Iri("p"), decimal(4.5)) in g
    assert Triple(Iri("a"), Iri("p"), integer(12)) in g
    assert Triple(Iri("a"), Iri("rdf:type"), Iri("Thing")) in g


def test_parse_tight_spacing_and_nested_quotes():
    g = parse_graph("<< << :s :p :o >> :q :r >> :meta :x .")
    t = next(iter(g))
    assert isinstance(t.subject, Quoted)
    assert isinstance(t.subject.triple.subject, Quoted)
    g2 = parse_graph(":s :p :o.")  # dot glued to the object
    assert Triple(Iri("s"), Iri("p"), Iri("o")) in g2


def test_string_escapes_round_trip():
    weird = 'quote " backslash \\ newline \n tab \t bell \x07 end'
    g = Graph([Triple(Iri("s"), Iri("p"), string(weird))])
    text = serialize(g)
    assert "\x07" not in text  # control characters never appear raw
    assert parse_graph(text).triples() == g.triples()


@pytest.mark.parametrize(
    "bad, fragment",
    [
        (":a :p .", "expected"),
        (":a :p", "end of line"),
        (":a :p :b :c .", "expected '.'"),
        (":a :p :b . junk", "unexpected character"),
        (":a 42 :b .", "predicate"),
        ('"lit" :p :b .', "subject"),
        (":a :p << :x :y :z .", "close"),
        (':a :p "x"^^volume .', "datatype"),
        (':a :p "yes"^^boolean .', "boolean"),
        (':a :p "4.5"^^integer .', "integer"),
        (':a :p "bad\\q escape" .', "escape"),
    ],
)
def test_parse_errors_carry_line_numbers(bad, fragment):
    with pytest.raises(GraphParseError) as err:
        parse_graph("# first line is fine\n" + bad)
    assert "line 2" in str(err.value)
    assert fragment in str(err.value)


def test_error_line_number_points_at_offender():
    text = ":a :p :b .\n:a :p :c .\n:broken ???\n"
    with pytest.raises(GraphParseError) as err:
        parse_graph(text)
    assert err.value.line == 3


@settings(max_examples=300, deadline=None)
@given(graphs)
def test_round_trip_identity(g):
    text = serialize(g)
    back = parse_graph(text)
    assert back.triples() == g.triples()
    # double round trip is byte-identical (canonical form is a fixpoint)
    assert serialize(back) == text


@settings(max_examples=100, deadline=None)
@given(graphs)
def test_serialized_lines_are_sorted(g):
    text = serialize(g)
    lines = text.splitlines()
    assert lines == sorted(lines)
    assert len(lines) == len(g)
