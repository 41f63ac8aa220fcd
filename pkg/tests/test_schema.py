"""Typed views over domain graphs: normalization, projection, round trips."""

import pytest

from supplykg import Graph, Iri, Quoted, Triple, integer, string, timestep
from supplykg.generator import automotive
from supplykg.query import evaluate, parse_query
from supplykg.schema import (
    MissingEntityError,
    bom,
    capacity_at,
    capacity_records,
    inventory,
    node,
    node_kind,
    nodes_of_kind,
    normalize,
    order,
    orders,
    orders_due,
    the_oem,
)
from supplykg import vocab as v


def tr(s, p, o):
    return Triple(Iri(s), Iri(p), o if not isinstance(o, str) else Iri(o))


# --- normalization ---

def test_normalize_rewrites_legacy_predicates():
    g = Graph()
    g.insert(tr("A", "hasLeadTime", integer(4)))
    g.insert(tr("Car", "needsComponent", "Wheel"))
    n = normalize(g)
    assert n.value(Iri("A"), v.HAS_DELIVERY_TIME) == integer(4)
    assert n.value(Iri("Car"), v.NEEDS_PRODUCT) == Iri("Wheel")
    from supplykg import serialize

    assert "hasLeadTime" not in serialize(n)


def test_normalize_rewrites_inside_quoted_terms():
    g = Graph()
    inner = Triple(Iri("Car"), Iri("needsComponent"), Iri("Wheel"))
    g.insert(Triple(Quoted(inner), Iri("hasComponentQuantity"), integer(4)))
    n = normalize(g)
    want = Triple(
        Quoted(Triple(Iri("Car"), v.NEEDS_PRODUCT, Iri("Wheel"))),
        v.NEEDS_QUANTITY,
        integer(4),
    )
    assert want in n


def test_normalize_folds_quantity_units():
    g = Graph()
    g.insert(tr("Inv1", "hasQuantity", string("10m")))
    g.insert(tr("Inv2", "hasQuantity", string("100 unit")))
    g.insert(tr("Inv3", "hasQuantity", string("7 units")))
    n = normalize(g)
    assert n.value(Iri("Inv1"), v.HAS_QUANTITY) == integer(10)
    assert n.value(Iri("Inv2"), v.HAS_QUANTITY) == integer(100)
    assert n.value(Iri("Inv3"), v.HAS_QUANTITY) == integer(7)


def test_normalize_leaves_other_strings_alone():
    g = Graph()
    g.insert(tr("N", "hasTransportMode", string("road")))
    g.insert(tr("N", "hasQuantity", string("plenty")))
    n = normalize(g)
    assert n.value(Iri("N"), v.HAS_TRANSPORT_MODE) == string("road")
    assert n.value(Iri("N"), v.HAS_QUANTITY) == string("plenty")


# --- node views ---

def test_node_view_fields_on_generated_graph(automotive_graph):
    oem = node(automotive_graph, Iri("OEM1"))
    assert oem.kind == "OEM"
    assert oem.tier is None
    assert oem.saturation > 0
    assert oem.delivery_time >= 1
    assert oem.priority is None
    assert len(oem.kpis) == 5
    assert all(0 <= value <= 100 for _, value in oem.kpis)

    sup = node(automotive_graph, Iri("SupplierNode2.1"))
    assert sup.kind == "Supplier"
    assert sup.tier == 2
    assert sup.tier_iri() == Iri("SupplierTier2")
    assert sup.group is not None

    cust = node(automotive_graph, Iri("Node3.2"))
    assert cust.kind == "Customer"
    assert cust.tier == 3
    assert cust.priority is not None


def test_node_view_round_trip(automotive_graph):
    """to_triples() is a faithful projection: subset of the graph, and
    parsing it back yields an identical view."""
    for kind in (v.OEM, v.SUPPLIER, v.CUSTOMER):
        for iri in nodes_of_kind(automotive_graph, kind):
            view = node(automotive_graph, iri)
            rebuilt = Graph()
            for t in view.to_triples():
                assert t in automotive_graph
                rebuilt.insert(t)
            assert node(rebuilt, iri) == view


def test_node_kind_and_missing_node(automotive_graph):
    assert node_kind(automotive_graph, Iri("OEM1")) == v.OEM
    with pytest.raises(MissingEntityError):
        node(automotive_graph, Iri("NoSuchNode"))


def test_the_oem_requires_exactly_one(automotive_graph):
    assert the_oem(automotive_graph) == Iri("OEM1")
    automotive_graph.insert(tr("OEM2", "rdf:type", "OEM"))
    with pytest.raises(MissingEntityError):
        the_oem(automotive_graph)
    with pytest.raises(MissingEntityError):
        the_oem(Graph())


# --- order views ---

def test_order_view_round_trip(automotive_graph):
    for view in orders(automotive_graph):
        rebuilt = Graph()
        for t in view.to_triples():
            assert t in automotive_graph
            rebuilt.insert(t)
        # the maker's priority lives on the node, not the order
        assert order(rebuilt, view.iri) == view


def test_order_view_errors():
    g = Graph()
    g.insert(tr("Order1", "rdf:type", "Order"))
    with pytest.raises(MissingEntityError):
        order(g, Iri("Order1"))  # no maker
    g.insert(tr("Cust1", "makes", "Order1"))
    g.insert(tr("Order1", "hasProduct", "Product"))
    g.insert(tr("Order1", "hasQuantity", integer(5)))
    with pytest.raises(MissingEntityError):
        order(g, Iri("Order1"))  # delivery time must be a timestep
    g.insert(tr("Order1", "hasDeliveryTime", timestep(9)))
    assert order(g, Iri("Order1")).fulfilled is None
    with pytest.raises(MissingEntityError):
        order(g, Iri("NotAnOrder"))


def test_order_rejects_double_verdict():
    g = Graph()
    g.insert(tr("Order1", "rdf:type", "Order"))
    g.insert(tr("Cust1", "makes", "Order1"))
    g.insert(tr("Order1", "hasProduct", "Product"))
    g.insert(tr("Order1", "hasQuantity", integer(5)))
    g.insert(tr("Order1", "hasDeliveryTime", timestep(9)))
    from supplykg import boolean

    g.insert(tr("Order1", "isFulfilled", boolean(True)))
    g.insert(tr("Order1", "isFulfilled", boolean(False)))
    with pytest.raises(MissingEntityError):
        order(g, Iri("Order1"))


_DUE_QUERY = parse_query(
    """
    SELECT ?order ?priority WHERE {
      ?customer :makes ?order .
      ?order :hasDeliveryTime ?time .
      ?customer :hasPriority ?priority .
      FILTER (?time - LT = t)
    } ORDER BY DESC ?priority
    """,
    params=("LT", "t"),
)


def test_orders_due_matches_query_engine(automotive_graph):
    """Dual-path oracle: the typed view agrees with the query-language
    formulation of "orders due at t" for every step that has any."""
    oem = node(automotive_graph, the_oem(automotive_graph))
    seen = 0
    for t in range(0, 178):
        table = evaluate(
            _DUE_QUERY,
            automotive_graph,
            {"LT": integer(oem.delivery_time), "t": integer(t)},
        )
        want = sorted((row[0].name for row in table.rows))
        got = orders_due(automotive_graph, t, oem.delivery_time)
        assert sorted(o.id for o in got) == want
        # the view's ordering honors priority descending, like the query
        priorities = [
            node(automotive_graph, Iri(o.maker)).priority for o in got
        ]
        assert priorities == sorted(priorities, reverse=True)
        seen += len(got)
    assert seen == len(orders(automotive_graph))


def test_orders_due_requires_maker_priority():
    g = Graph()
    g.insert(tr("Order1", "rdf:type", "Order"))
    g.insert(tr("Cust1", "makes", "Order1"))
    g.insert(tr("Order1", "hasProduct", "Product"))
    g.insert(tr("Order1", "hasQuantity", integer(5)))
    g.insert(tr("Order1", "hasDeliveryTime", timestep(9)))
    with pytest.raises(MissingEntityError):
        orders_due(g, 6, 3)


def test_orders_due_example():
    g = Graph()
    g.insert(tr("Order1", "rdf:type", "Order"))
    g.insert(tr("Cust1", "makes", "Order1"))
    g.insert(tr("Cust1", "hasPriority", integer(2)))
    g.insert(tr("Order1", "hasProduct", "Product"))
    g.insert(tr("Order1", "hasQuantity", integer(5)))
    g.insert(tr("Order1", "hasDeliveryTime", timestep(10)))
    assert [o.id for o in orders_due(g, 7, 3)] == ["Order1"]
    assert orders_due(g, 6, 3) == []


# --- capacity and inventory records ---

def test_capacity_records_sorted_and_lookup(automotive_graph):
    records = capacity_records(automotive_graph, Iri("OEM1"))
    assert records, "generated graph gives every manufacturer a baseline record"
    assert [(r.timestep, r.id) for r in records] == sorted(
        (r.timestep, r.id) for r in records
    )
    first = records[0]
    assert capacity_at(automotive_graph, Iri("OEM1"), first.timestep) == first
    assert capacity_at(automotive_graph, Iri("OEM1"), 9999) is None


def test_capacity_view_round_trip(automotive_graph):
    for r in capacity_records(automotive_graph, Iri("OEM1")):
        for t in r.to_triples():
            assert t in automotive_graph


def test_inventory_latest_record_wins():
    g = Graph()
    for name, qty, ts in [("InvA", 10, 0), ("InvB", 7, 5)]:
        g.insert(tr(name, "rdf:type", "Inventory"))
        g.insert(tr("OEM1", "hasInventory", name))
        g.insert(tr(name, "hasProduct", "Product"))
        g.insert(tr(name, "hasQuantity", integer(qty)))
        g.insert(tr(name, "hasTimeStamp", timestep(ts)))
    view = inventory(g, Iri("OEM1"), Iri("Product"))
    assert view.id == "InvB"
    assert view.quantity == 7
    assert view.timestep == 5


def test_inventory_missing(automotive_graph):
    with pytest.raises(MissingEntityError):
        inventory(automotive_graph, Iri("OEM1"), Iri("NoSuchProduct"))


# --- bill of materials ---

def test_bom_reads_quoted_quantities(automotive_graph):
    edges = bom(automotive_graph, Iri("Product"))
    assert edges
    assert [e.child for e in edges] == sorted(e.child for e in edges)
    for e in edges:
        assert e.parent == "Product"
        assert e.quantity >= 1
        for t in e.to_triples():
            assert t in automotive_graph


def test_bom_leaf_is_empty(automotive_graph):
    top_tier_products = [
        p for p in nodes_of_kind(automotive_graph, v.PRODUCT) if p.name.startswith("Product3.")
    ]
    assert top_tier_products
    for p in top_tier_products:
        assert bom(automotive_graph, p) == []
