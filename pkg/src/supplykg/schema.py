"""Typed views over supply-chain graphs, plus ingest normalization.

The graph store itself is schema-free. This module is where the package's
domain conventions live:

* ``load_graph`` / ``normalize`` rewrite legacy predicate aliases to the
  canonical vocabulary and fold unit-suffixed quantity strings ("10m",
  "100 unit") into plain integers, so downstream code sees one spelling.
* The view dataclasses (``NodeView``, ``OrderView``, ``CapacityView``,
  ``InventoryView``, ``BomEdge``) materialize one entity each. Every view
  has a ``to_triples`` that reproduces exactly the triples the accessor
  consumed, which makes "view round-trips through the graph" testable.

Accessors raise ``MissingEntityError`` when a required entity or property
is absent, never silently default.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import vocab as v
from .graph import Graph
from .serialization import parse_graph_file
from .terms import (
    BOOLEAN,
    INTEGER,
    STRING,
    TIMESTEP,
    Iri,
    Literal,
    Quoted,
    Triple,
    boolean,
    integer,
    timestep,
)


class MissingEntityError(KeyError):
    """An entity or required property was not found in the graph."""

    def __init__(self, message):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return self.message


_UNIT_RE = re.compile(r"^(\d+)\s*(" + "|".join(v.QUANTITY_UNITS) + r")$")

_QUANTITY_PREDICATES = {v.HAS_QUANTITY, v.NEEDS_QUANTITY}


def _fold_units(predicate, obj):
    if predicate in _QUANTITY_PREDICATES and isinstance(obj, Literal) and obj.datatype == STRING:
        m = _UNIT_RE.match(obj.value)
        if m:
            return integer(int(m.group(1)))
    return obj


def _rewrite(term):
    if isinstance(term, Quoted):
        return Quoted(_normalize_triple(term.triple))
    return term


def _normalize_triple(t: Triple) -> Triple:
    pred = v.ALIASES.get(t.predicate, t.predicate)
    return Triple(_rewrite(t.subject), pred, _fold_units(pred, _rewrite(t.object)))


def normalize(graph: Graph) -> Graph:
    """Return a copy with alias predicates and unit-suffixed quantities folded."""
    out = Graph()
    for t in graph.triples():
        out.insert(_normalize_triple(t))
    return out


def load_graph(path) -> Graph:
    """Parse a graph file and normalize it to canonical vocabulary."""
    return normalize(parse_graph_file(path))


def _int_value(graph, subject, predicate, what):
    term = graph.value(subject, predicate)
    if term is None:
        raise MissingEntityError(f"{subject.name} has no {predicate.name} ({what})")
    if not (isinstance(term, Literal) and term.datatype == INTEGER):
        raise MissingEntityError(f"{subject.name} {predicate.name} is not an integer")
    return term.value


def _opt_int(graph, subject, predicate):
    term = graph.value(subject, predicate)
    if isinstance(term, Literal) and term.datatype == INTEGER:
        return term.value
    return None


def node_kind(graph: Graph, iri: Iri):
    """The node's class among Supplier, Customer, OEM, or None."""
    types = set(graph.objects(iri, v.RDF_TYPE))
    for kind in (v.OEM, v.SUPPLIER, v.CUSTOMER):
        if kind in types:
            return kind
    return None


@dataclass(frozen=True, slots=True)
class NodeView:
    id: str
    kind: str
    tier: int | None
    saturation: int
    delivery_time: int
    group: int | None
    priority: int | None
    kpis: tuple[tuple[str, int], ...]
    co2: int | None
    longitude: int | None
    latitude: int | None
    transport_mode: str | None

    @property
    def iri(self) -> Iri:
        return Iri(self.id)

    def tier_iri(self) -> Iri | None:
        if self.tier is None:
            return None
        side = v.SUPPLIER_TIER.name if self.kind == v.SUPPLIER.name else v.CUSTOMER_TIER.name
        return Iri(f"{side}{self.tier}")

    def to_triples(self) -> list[Triple]:
        n = self.iri
        out = [
            Triple(n, v.RDF_TYPE, v.NODE),
            Triple(n, v.RDF_TYPE, Iri(self.kind)),
            Triple(n, v.HAS_SATURATION, integer(self.saturation)),
            Triple(n, v.HAS_DELIVERY_TIME, integer(self.delivery_time)),
        ]
        tier = self.tier_iri()
        if tier is not None:
            out.append(Triple(n, v.BELONGS_TO_TIER, tier))
        if self.group is not None:
            out.append(Triple(n, v.HAS_GROUP, integer(self.group)))
        if self.priority is not None:
            out.append(Triple(n, v.HAS_PRIORITY, integer(self.priority)))
        for name, value in self.kpis:
            out.append(Triple(n, Iri(name), integer(value)))
        if self.co2 is not None:
            out.append(Triple(n, v.HAS_CO2, integer(self.co2)))
        if self.longitude is not None:
            out.append(Triple(n, v.HAS_LONGITUDE, integer(self.longitude)))
        if self.latitude is not None:
            out.append(Triple(n, v.HAS_LATITUDE, integer(self.latitude)))
        if self.transport_mode is not None:
            out.append(Triple(n, v.HAS_TRANSPORT_MODE, Literal(self.transport_mode, STRING)))
        return out


_TIER_RE = re.compile(r"^(?:SupplierTier|CustomerTier)(\d+)$")


def node(graph: Graph, iri: Iri) -> NodeView:
    kind = node_kind(graph, iri)
    if kind is None or v.NODE not in graph.objects(iri, v.RDF_TYPE):
        raise MissingEntityError(f"{iri.name} is not a typed supply-chain node")
    tier = None
    tier_term = graph.value(iri, v.BELONGS_TO_TIER)
    if isinstance(tier_term, Iri):
        m = _TIER_RE.match(tier_term.name)
        if m:
            tier = int(m.group(1))
    kpis = []
    for pred in v.KPI_PREDICATES:
        value = _opt_int(graph, iri, pred)
        if value is not None:
            kpis.append((pred.name, value))
    mode_term = graph.value(iri, v.HAS_TRANSPORT_MODE)
    mode = mode_term.value if isinstance(mode_term, Literal) and mode_term.datatype == STRING else None
    return NodeView(
        id=iri.name,
        kind=kind.name,
        tier=tier,
        saturation=_int_value(graph, iri, v.HAS_SATURATION, "node saturation"),
        delivery_time=_int_value(graph, iri, v.HAS_DELIVERY_TIME, "node delivery time"),
        group=_opt_int(graph, iri, v.HAS_GROUP),
        priority=_opt_int(graph, iri, v.HAS_PRIORITY),
        kpis=tuple(sorted(kpis)),
        co2=_opt_int(graph, iri, v.HAS_CO2),
        longitude=_opt_int(graph, iri, v.HAS_LONGITUDE),
        latitude=_opt_int(graph, iri, v.HAS_LATITUDE),
        transport_mode=mode,
    )


def nodes_of_kind(graph: Graph, kind: Iri) -> list[Iri]:
    return [s for s in graph.subjects(v.RDF_TYPE, kind) if isinstance(s, Iri)]


def the_oem(graph: Graph) -> Iri:
    oems = nodes_of_kind(graph, v.OEM)
    if len(oems) != 1:
        raise MissingEntityError(f"expected exactly one OEM node, found {len(oems)}")
    return oems[0]


@dataclass(frozen=True, slots=True)
class OrderView:
    id: str
    maker: str
    product: str
    quantity: int
    delivery_time: int
    fulfilled: bool | None
    supply_plan: str | None

    @property
    def iri(self) -> Iri:
        return Iri(self.id)

    def to_triples(self) -> list[Triple]:
        o = self.iri
        out = [
            Triple(o, v.RDF_TYPE, v.ORDER),
            Triple(Iri(self.maker), v.MAKES, o),
            Triple(o, v.HAS_PRODUCT, Iri(self.product)),
            Triple(o, v.HAS_QUANTITY, integer(self.quantity)),
            Triple(o, v.HAS_DELIVERY_TIME, timestep(self.delivery_time)),
        ]
        if self.fulfilled is not None:
            out.append(Triple(o, v.IS_FULFILLED, boolean(self.fulfilled)))
        if self.supply_plan is not None:
            out.append(Triple(o, v.HAS_SUPPLY_PLAN, Iri(self.supply_plan)))
        return out


def order(graph: Graph, iri: Iri) -> OrderView:
    if v.ORDER not in graph.objects(iri, v.RDF_TYPE):
        raise MissingEntityError(f"{iri.name} is not an order")
    makers = graph.subjects(v.MAKES, iri)
    if len(makers) != 1:
        raise MissingEntityError(f"{iri.name} must have exactly one maker, found {len(makers)}")
    product = graph.value(iri, v.HAS_PRODUCT)
    if not isinstance(product, Iri):
        raise MissingEntityError(f"{iri.name} has no product")
    due = graph.value(iri, v.HAS_DELIVERY_TIME)
    if not (isinstance(due, Literal) and due.datatype == TIMESTEP):
        raise MissingEntityError(f"{iri.name} has no timestep delivery time")
    verdicts = graph.objects(iri, v.IS_FULFILLED)
    if len(verdicts) > 1:
        raise MissingEntityError(f"{iri.name} carries more than one fulfillment verdict")
    fulfilled = None
    if verdicts and isinstance(verdicts[0], Literal) and verdicts[0].datatype == BOOLEAN:
        fulfilled = verdicts[0].value
    plan = graph.value(iri, v.HAS_SUPPLY_PLAN)
    return OrderView(
        id=iri.name,
        maker=makers[0].name,
        product=product.name,
        quantity=_int_value(graph, iri, v.HAS_QUANTITY, "order quantity"),
        delivery_time=due.value,
        fulfilled=fulfilled,
        supply_plan=plan.name if isinstance(plan, Iri) else None,
    )


def orders(graph: Graph) -> list[OrderView]:
    """All orders, in canonical order-name order."""
    found = sorted(nodes_of_kind(graph, v.ORDER), key=lambda i: i.name)
    return [order(graph, o) for o in found]


def orders_due(graph: Graph, t: int, oem_delivery_time: int) -> list[OrderView]:
    """Orders whose production must start at step ``t``.

    An order is due when its delivery timestep minus the focal node's own
    delivery time equals ``t``. Ties are broken by the making customer's
    priority (higher first), then order name.
    """
    due = [o for o in orders(graph) if o.delivery_time - oem_delivery_time == t]

    def key(o: OrderView):
        priority = _opt_int(graph, Iri(o.maker), v.HAS_PRIORITY)
        if priority is None:
            raise MissingEntityError(f"{o.maker} has no priority")
        return (-priority, o.id)

    return sorted(due, key=key)


@dataclass(frozen=True, slots=True)
class CapacityView:
    id: str
    node: str
    product: str
    quantity: int
    timestep: int
    cost: int

    @property
    def iri(self) -> Iri:
        return Iri(self.id)

    def to_triples(self) -> list[Triple]:
        c = self.iri
        return [
            Triple(c, v.RDF_TYPE, v.CAPACITY),
            Triple(Iri(self.node), v.HAS_CAPACITY, c),
            Triple(c, v.HAS_PRODUCT, Iri(self.product)),
            Triple(c, v.HAS_QUANTITY, integer(self.quantity)),
            Triple(c, v.HAS_TIME_STAMP, timestep(self.timestep)),
            Triple(c, v.HAS_COST, integer(self.cost)),
        ]


def _capacity_view(graph: Graph, node_iri: Iri, record: Iri) -> CapacityView:
    product = graph.value(record, v.HAS_PRODUCT)
    ts = graph.value(record, v.HAS_TIME_STAMP)
    if not isinstance(product, Iri):
        raise MissingEntityError(f"{record.name} has no product")
    if not (isinstance(ts, Literal) and ts.datatype == TIMESTEP):
        raise MissingEntityError(f"{record.name} has no timestep")
    return CapacityView(
        id=record.name,
        node=node_iri.name,
        product=product.name,
        quantity=_int_value(graph, record, v.HAS_QUANTITY, "committed capacity"),
        timestep=ts.value,
        cost=_int_value(graph, record, v.HAS_COST, "capacity cost"),
    )


def capacity_records(graph: Graph, node_iri: Iri) -> list[CapacityView]:
    records = []
    for rec in graph.objects(node_iri, v.HAS_CAPACITY):
        if isinstance(rec, Iri):
            records.append(_capacity_view(graph, node_iri, rec))
    return sorted(records, key=lambda r: (r.timestep, r.id))


def capacity_at(graph: Graph, node_iri: Iri, t: int) -> CapacityView | None:
    hits = [r for r in capacity_records(graph, node_iri) if r.timestep == t]
    if not hits:
        return None
    if len(hits) > 1:
        raise MissingEntityError(f"{node_iri.name} has {len(hits)} capacity records at step {t}")
    return hits[0]


@dataclass(frozen=True, slots=True)
class InventoryView:
    id: str
    node: str
    product: str
    quantity: int
    timestep: int

    @property
    def iri(self) -> Iri:
        return Iri(self.id)

    def to_triples(self) -> list[Triple]:
        i = self.iri
        return [
            Triple(i, v.RDF_TYPE, v.INVENTORY),
            Triple(Iri(self.node), v.HAS_INVENTORY, i),
            Triple(i, v.HAS_PRODUCT, Iri(self.product)),
            Triple(i, v.HAS_QUANTITY, integer(self.quantity)),
            Triple(i, v.HAS_TIME_STAMP, timestep(self.timestep)),
        ]


def inventory(graph: Graph, node_iri: Iri, product: Iri) -> InventoryView:
    """The node's inventory record for a product (latest timestep wins)."""
    hits = []
    for rec in graph.objects(node_iri, v.HAS_INVENTORY):
        if not isinstance(rec, Iri):
            continue
        if graph.value(rec, v.HAS_PRODUCT) != product:
            continue
        ts = graph.value(rec, v.HAS_TIME_STAMP)
        if not (isinstance(ts, Literal) and ts.datatype == TIMESTEP):
            raise MissingEntityError(f"{rec.name} has no timestep")
        hits.append(
            InventoryView(
                id=rec.name,
                node=node_iri.name,
                product=product.name,
                quantity=_int_value(graph, rec, v.HAS_QUANTITY, "inventory quantity"),
                timestep=ts.value,
            )
        )
    if not hits:
        raise MissingEntityError(f"{node_iri.name} has no inventory record for {product.name}")
    hits.sort(key=lambda r: (r.timestep, r.id))
    return hits[-1]


@dataclass(frozen=True, slots=True)
class BomEdge:
    parent: str
    child: str
    quantity: int

    def to_triples(self) -> list[Triple]:
        inner = Triple(Iri(self.parent), v.NEEDS_PRODUCT, Iri(self.child))
        return [inner, Triple(Quoted(inner), v.NEEDS_QUANTITY, integer(self.quantity))]


def bom(graph: Graph, parent: Iri) -> list[BomEdge]:
    """Direct components of a product, sorted by component name."""
    edges = []
    for child in graph.objects(parent, v.NEEDS_PRODUCT):
        if not isinstance(child, Iri):
            continue
        qty = graph.value(Quoted(Triple(parent, v.NEEDS_PRODUCT, child)), v.NEEDS_QUANTITY)
        if not (isinstance(qty, Literal) and qty.datatype == INTEGER):
            raise MissingEntityError(
                f"edge {parent.name} needsProduct {child.name} has no integer quantity"
            )
        edges.append(BomEdge(parent=parent.name, child=child.name, quantity=qty.value))
    return sorted(edges, key=lambda e: e.child)
