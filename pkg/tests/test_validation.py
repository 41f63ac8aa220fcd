"""Graph shape checking: vocabulary closure, node and record invariants,
tier connectivity, BOM acyclicity."""

import pytest

from supplykg import Graph, Iri, Quoted, Triple, boolean, integer, string, timestep
from supplykg.fulfillment import Simulation
from supplykg.generator import automotive, dairy, generate
from supplykg.validation import validate


def tr(s, p, o):
    return Triple(Iri(s), Iri(p), o if not isinstance(o, str) else Iri(o))


def drop(graph, subject, predicate, obj=None):
    """Remove every (subject, predicate, *) triple, or just one object."""
    targets = [obj] if obj is not None else list(graph.objects(subject, predicate))
    for o in targets:
        assert graph.remove(Triple(subject, predicate, o))


def codes(violations):
    return {v.code for v in violations}


def errors(violations):
    return [v for v in violations if v.severity == "error"]


# --- generated graphs are clean (self-consistency oracle) ---

@pytest.mark.parametrize("preset", [automotive, dairy])
def test_generated_presets_validate_clean(preset):
    config = preset()
    graph = generate(config)
    assert validate(graph) == []
    Simulation(graph).run(config.horizon)
    assert validate(graph) == []


# --- vocabulary closure ---

def test_unknown_predicate_is_error_unless_allowed(automotive_graph):
    automotive_graph.insert(tr("OEM1", "hasColor", string("blue")))
    found = validate(automotive_graph)
    assert "unknown-predicate" in codes(errors(found))
    assert validate(automotive_graph, allow_unknown=True) == []


def test_unknown_predicate_inside_quoted_term(automotive_graph):
    inner = Triple(Iri("OEM1"), Iri("secretlyPrefers"), Iri("Product"))
    automotive_graph.insert(Triple(Quoted(inner), Iri("hasQuantity"), integer(1)))
    assert "unknown-predicate" in codes(errors(validate(automotive_graph)))


def test_unknown_class_is_warning(automotive_graph):
    automotive_graph.insert(tr("X", "rdf:type", "Widget"))
    found = validate(automotive_graph)
    assert "unknown-class" in codes(found)
    assert "unknown-class" not in codes(errors(found))


# --- node invariants ---

def test_bad_saturation(automotive_graph):
    drop(automotive_graph, Iri("OEM1"), Iri("hasSaturation"))
    automotive_graph.insert(tr("OEM1", "hasSaturation", integer(0)))
    assert "bad-saturation" in codes(errors(validate(automotive_graph)))


def test_missing_saturation(automotive_graph):
    drop(automotive_graph, Iri("SupplierNode1.1"), Iri("hasSaturation"))
    assert "missing-saturation" in codes(errors(validate(automotive_graph)))


def test_bad_delivery_time(automotive_graph):
    drop(automotive_graph, Iri("OEM1"), Iri("hasDeliveryTime"))
    automotive_graph.insert(tr("OEM1", "hasDeliveryTime", integer(0)))
    assert "bad-delivery-time" in codes(errors(validate(automotive_graph)))


def test_customer_needs_priority(automotive_graph):
    drop(automotive_graph, Iri("Node3.2"), Iri("hasPriority"))
    assert "missing-priority" in codes(errors(validate(automotive_graph)))


def test_kpi_out_of_range(automotive_graph):
    drop(automotive_graph, Iri("OEM1"), Iri("hasAgility"))
    automotive_graph.insert(tr("OEM1", "hasAgility", integer(101)))
    assert "kpi-out-of-range" in codes(errors(validate(automotive_graph)))


def test_multi_valued_scalar(automotive_graph):
    automotive_graph.insert(tr("OEM1", "hasDeliveryTime", integer(99)))
    assert "multi-valued" in codes(errors(validate(automotive_graph)))


def test_untyped_node(automotive_graph):
    automotive_graph.insert(tr("Ghost", "belongsToTier", "SupplierTier1"))
    automotive_graph.insert(tr("Ghost", "rdf:type", "Node"))
    assert "untyped-node" in codes(errors(validate(automotive_graph)))


# --- record invariants ---

def test_orphan_capacity_record(automotive_graph):
    automotive_graph.insert(tr("CapLoose", "rdf:type", "Capacity"))
    assert "orphan-record" in codes(errors(validate(automotive_graph)))


def test_capacity_exceeds_saturation(automotive_graph):
    drop(automotive_graph, Iri("CapOEM1T0"), Iri("hasQuantity"))
    automotive_graph.insert(tr("CapOEM1T0", "hasQuantity", integer(10**9)))
    assert "capacity-exceeds-saturation" in codes(errors(validate(automotive_graph)))


def test_negative_inventory(automotive_graph):
    drop(automotive_graph, Iri("InvOEM1"), Iri("hasQuantity"))
    automotive_graph.insert(tr("InvOEM1", "hasQuantity", integer(-1)))
    assert "bad-record" in codes(errors(validate(automotive_graph)))


# --- order invariants ---

def test_order_quantity_positive(automotive_graph):
    drop(automotive_graph, Iri("Order1"), Iri("hasQuantity"))
    automotive_graph.insert(tr("Order1", "hasQuantity", integer(0)))
    assert "bad-order" in codes(errors(validate(automotive_graph)))


def test_order_maker_must_be_customer(automotive_graph):
    for maker in automotive_graph.subjects(Iri("makes"), Iri("Order1")):
        drop(automotive_graph, maker, Iri("makes"), Iri("Order1"))
    automotive_graph.insert(tr("SupplierNode1.1", "makes", "Order1"))
    assert "bad-order" in codes(errors(validate(automotive_graph)))


def test_double_verdict_is_bad_order(automotive_graph):
    automotive_graph.insert(tr("Order1", "isFulfilled", boolean(True)))
    automotive_graph.insert(tr("Order1", "isFulfilled", boolean(False)))
    assert "bad-order" in codes(errors(validate(automotive_graph)))


# --- topology ---

def test_two_oems(automotive_graph):
    automotive_graph.insert(tr("OEM2", "rdf:type", "OEM"))
    automotive_graph.insert(tr("OEM2", "rdf:type", "Node"))
    assert "oem-count" in codes(errors(validate(automotive_graph)))


def test_tier1_supplier_needs_oem_link(automotive_graph):
    drop(automotive_graph, Iri("SupplierNode1.1"), Iri("hasOEM"))
    assert "missing-oem-link" in codes(errors(validate(automotive_graph)))


def test_tier1_customer_needs_oem_link(automotive_graph):
    drop(automotive_graph, Iri("OEM1"), Iri("OEMhasNode"), Iri("Node1.1"))
    found = codes(errors(validate(automotive_graph)))
    assert "missing-oem-link" in found


def test_unreachable_upper_tier_node(automotive_graph):
    for s in automotive_graph.subjects(Iri("hasUpStreamNode"), Iri("SupplierNode3.5")):
        drop(automotive_graph, s, Iri("hasUpStreamNode"), Iri("SupplierNode3.5"))
    assert "tier-coverage" in codes(errors(validate(automotive_graph)))


def test_tier_skip_is_warning(automotive_graph):
    automotive_graph.insert(tr("SupplierNode1.1", "hasUpStreamNode", "SupplierNode3.1"))
    found = validate(automotive_graph)
    assert "tier-skip" in codes(found)
    assert "tier-skip" not in codes(errors(found))


# --- BOM ---

def test_bom_cycle_detected():
    g = Graph()
    for name in ("Car", "Wheel"):
        g.insert(tr(name, "rdf:type", "Product"))
    for parent, child in [("Car", "Wheel"), ("Wheel", "Car")]:
        inner = Triple(Iri(parent), Iri("needsProduct"), Iri(child))
        g.insert(inner)
        g.insert(Triple(Quoted(inner), Iri("needsQuantity"), integer(2)))
    assert "bom-cycle" in codes(errors(validate(g)))


def test_violations_are_sorted_and_deduped(automotive_graph):
    automotive_graph.insert(tr("OEM1", "hasColor", string("blue")))
    automotive_graph.insert(tr("OEM1", "hasColor", string("red")))
    automotive_graph.insert(tr("X", "rdf:type", "Widget"))
    found = validate(automotive_graph)
    assert found == sorted(
        found, key=lambda v: (v.severity, v.code, v.subject, v.message)
    )
    assert len(found) == len(set(found))
