"""Discrete-time demand fulfillment with backward scheduling.

The engine walks timesteps 0..horizon-1. An order becomes due at
t = DT(order) - LT(focal node): the latest step at which production can
start and still deliver on time. Due orders are served strictly by
customer priority (ties by order name):

1. If the focal node's stock covers the full quantity, the order is
   fulfilled from inventory and stock is drained by that quantity.
2. Otherwise the remainder (quantity minus stock) must be produced at
   step t. That requires the focal node's committed load at t plus the
   remainder to stay within its saturation, and for every direct
   component of the product a supplier whose committed load at
   t0 = t - LT(supplier) leaves room for the required amount. Among
   feasible suppliers the one with the most free capacity wins, ties by
   name. Selection is all-or-nothing: if any component cannot be placed,
   nothing is committed and the order is marked unfulfilled.

Commitments, inventory drains, supply-plan lines, and the isFulfilled
verdict are written back into the graph as they happen, so a serialized
final graph carries the complete outcome. Supply-plan lines are inserted
through the query engine's INSERT template rather than raw writes.

The simulation mutates the graph it is given. Committed capacity is
tracked per (node, timestep); a missing record means zero load. Nodes
without a cost property price their allocations at 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import schema
from . import vocab as v
from .graph import Graph
from .query import evaluate_update, parse_query
from .terms import INTEGER, Iri, Literal, TIMESTEP, Triple, boolean, integer, timestep


@dataclass(frozen=True, slots=True)
class Allocation:
    node: str
    product: str
    timestep: int
    quantity: int
    unit_price: int


@dataclass(frozen=True, slots=True)
class StepReport:
    t: int
    considered: int
    from_stock: int
    produced: int
    unfulfilled: int
    triples_inserted: int


def explode_bom(graph: Graph, product: Iri, quantity: int) -> list[tuple[Iri, int]]:
    """Direct components of ``product`` scaled to ``quantity`` units."""
    return [(Iri(edge.child), edge.quantity * quantity) for edge in schema.bom(graph, product)]


_PLAN_TEMPLATE = parse_query(
    """
    INSERT {
      << ?plan :needsNode nd >> :getsProduct pr .
      << ?plan :needsNode nd >> :hasTimeStamp ts .
      << ?plan :needsNode nd >> :hasQuantity qty .
      << ?plan :needsNode nd >> :hasUnitPrice price .
    }
    WHERE { ord :hasSupplyPlan ?plan . }
    """,
    params=("nd", "pr", "ts", "qty", "price", "ord"),
)


def _int_of(term, default=0):
    if isinstance(term, Literal) and term.datatype == INTEGER:
        return term.value
    return default


class Simulation:
    """Mutable simulation state bound to one graph.

    ``replenish``, when given, is called as ``replenish(sim, t)`` at the
    start of every step; the default is no replenishment.
    """

    def __init__(self, graph: Graph, replenish=None):
        self.graph = graph
        self._replenish = replenish
        self._inserted = 0

        self.oem = schema.the_oem(graph)
        oem_view = schema.node(graph, self.oem)
        self.oem_lead = oem_view.delivery_time
        self.oem_sat = oem_view.saturation

        self._sat: dict[str, int] = {self.oem.name: self.oem_sat}
        self._lead: dict[str, int] = {self.oem.name: self.oem_lead}
        self._cost: dict[str, int] = {self.oem.name: _int_of(graph.value(self.oem, v.HAS_COST))}
        self._product_of: dict[str, str] = {}
        self._makers: dict[str, list[str]] = {}

        suppliers = sorted(graph.subjects(v.HAS_OEM, self.oem), key=lambda s: s.name)
        for s in suppliers:
            view = schema.node(graph, s)
            self._sat[s.name] = view.saturation
            self._lead[s.name] = view.delivery_time
            self._cost[s.name] = _int_of(graph.value(s, v.HAS_COST))
            for made in graph.objects(s, v.MANUFACTURES):
                if isinstance(made, Iri):
                    self._makers.setdefault(made.name, []).append(s.name)
                    self._product_of.setdefault(s.name, made.name)
        made = graph.value(self.oem, v.MANUFACTURES)
        if isinstance(made, Iri):
            self._product_of[self.oem.name] = made.name

        self._committed: dict[tuple[str, int], int] = {}
        self._cap_iri: dict[tuple[str, int], Iri] = {}
        for name in self._sat:
            for record in schema.capacity_records(graph, Iri(name)):
                self._committed[(name, record.timestep)] = record.quantity
                self._cap_iri[(name, record.timestep)] = record.iri

        self._inventory: dict[tuple[str, str], int] = {}
        self._inv_iri: dict[tuple[str, str], Iri] = {}
        for name in self._sat:
            node_iri = Iri(name)
            seen: dict[str, tuple[int, str]] = {}
            for rec in graph.objects(node_iri, v.HAS_INVENTORY):
                if not isinstance(rec, Iri):
                    continue
                product = graph.value(rec, v.HAS_PRODUCT)
                ts = graph.value(rec, v.HAS_TIME_STAMP)
                if not isinstance(product, Iri):
                    continue
                at = ts.value if isinstance(ts, Literal) and ts.datatype == TIMESTEP else 0
                key = (at, rec.name)
                if product.name not in seen or key > seen[product.name]:
                    seen[product.name] = key
                    self._inventory[(name, product.name)] = _int_of(graph.value(rec, v.HAS_QUANTITY))
                    self._inv_iri[(name, product.name)] = rec

        self._resolved: set[str] = set()
        self._due: dict[int, list[schema.OrderView]] = {}
        priorities: dict[str, int] = {}
        for order in schema.orders(graph):
            if order.fulfilled is not None:
                self._resolved.add(order.id)
                continue
            if order.maker not in priorities:
                prio = graph.value(Iri(order.maker), v.HAS_PRIORITY)
                if not (isinstance(prio, Literal) and prio.datatype == INTEGER):
                    raise schema.MissingEntityError(f"{order.maker} has no priority")
                priorities[order.maker] = prio.value
            self._due.setdefault(order.delivery_time - self.oem_lead, []).append(order)
        for due in self._due.values():
            due.sort(key=lambda o: (-priorities[o.maker], o.id))

    # -- bookkeeping that keeps graph and ledgers in lockstep --

    def _count_insert(self, triple: Triple) -> None:
        if self.graph.insert(triple):
            self._inserted += 1

    def _replace_value(self, subject: Iri, predicate: Iri, term) -> None:
        old = self.graph.value(subject, predicate)
        if old is not None:
            self.graph.remove(Triple(subject, predicate, old))
        self._count_insert(Triple(subject, predicate, term))

    def committed(self, node: str, t: int) -> int:
        return self._committed.get((node, t), 0)

    def inventory_level(self, node: str, product: str) -> int:
        return self._inventory.get((node, product), 0)

    def _commit(self, node: str, t: int, quantity: int) -> None:
        key = (node, t)
        total = self._committed.get(key, 0) + quantity
        self._committed[key] = total
        record = self._cap_iri.get(key)
        if record is None:
            record = Iri(f"Cap{node}T{t}")
            self._cap_iri[key] = record
            node_iri = Iri(node)
            self._count_insert(Triple(record, v.RDF_TYPE, v.CAPACITY))
            self._count_insert(Triple(node_iri, v.HAS_CAPACITY, record))
            if node in self._product_of:
                self._count_insert(Triple(record, v.HAS_PRODUCT, Iri(self._product_of[node])))
            self._count_insert(Triple(record, v.HAS_QUANTITY, integer(total)))
            self._count_insert(Triple(record, v.HAS_TIME_STAMP, timestep(t)))
            self._count_insert(Triple(record, v.HAS_COST, integer(self._cost.get(node, 0))))
        else:
            self._replace_value(record, v.HAS_QUANTITY, integer(total))

    def _drain(self, node: str, product: str, new_level: int, t: int) -> None:
        key = (node, product)
        self._inventory[key] = new_level
        record = self._inv_iri[key]
        self._replace_value(record, v.HAS_QUANTITY, integer(new_level))
        self._replace_value(record, v.HAS_TIME_STAMP, timestep(t))

    def _write_plan_line(self, order_id: str, allocation: Allocation) -> None:
        self._inserted += evaluate_update(
            _PLAN_TEMPLATE,
            self.graph,
            params={
                "nd": Iri(allocation.node),
                "pr": Iri(allocation.product),
                "ts": timestep(allocation.timestep),
                "qty": integer(allocation.quantity),
                "price": integer(allocation.unit_price),
                "ord": Iri(order_id),
            },
        )

    def _verdict(self, order_id: str, fulfilled: bool) -> None:
        self._count_insert(Triple(Iri(order_id), v.IS_FULFILLED, boolean(fulfilled)))
        self._resolved.add(order_id)

    # -- the algorithm --

    def due_orders(self, t: int) -> list[schema.OrderView]:
        return [o for o in self._due.get(t, ()) if o.id not in self._resolved]

    def fulfill_from_inventory(self, order: schema.OrderView, t: int) -> int:
        """Try to serve the order from stock.

        Returns 0 when the order was fulfilled (stock drained, plan and
        verdict written); otherwise returns the remaining quantity to
        produce, with no state change.
        """
        have = self.inventory_level(self.oem.name, order.product)
        if have < order.quantity:
            return order.quantity - have
        self._drain(self.oem.name, order.product, have - order.quantity, t)
        self._write_plan_line(
            order.id,
            Allocation(self.oem.name, order.product, t, order.quantity, self._cost.get(self.oem.name, 0)),
        )
        self._verdict(order.id, True)
        return 0

    def select_suppliers(self, components, t: int) -> list[Allocation] | None:
        """Pick one supplier per component, or None if any cannot be placed.

        A supplier is feasible for a component when it manufactures it,
        supplies the focal node, and its saturation leaves room for the
        required amount at t0 = t - LT(supplier), counting amounts already
        tentatively placed on it for earlier components in this call.
        """
        pending: dict[tuple[str, int], int] = {}
        allocations = []
        for component, required in components:
            best = None
            for s in self._makers.get(component.name, ()):
                t0 = t - self._lead[s]
                if t0 < 0:
                    continue
                used = self.committed(s, t0) + pending.get((s, t0), 0)
                free = self._sat[s] - used
                if free >= required and (best is None or free > best[0]):
                    best = (free, s, t0)
            if best is None:
                return None
            _, s, t0 = best
            pending[(s, t0)] = pending.get((s, t0), 0) + required
            allocations.append(Allocation(s, component.name, t0, required, self._cost.get(s, 0)))
        return allocations

    def _try_production(self, order: schema.OrderView, t: int, remaining: int) -> bool:
        if self.committed(self.oem.name, t) + remaining > self.oem_sat:
            return False
        components = explode_bom(self.graph, Iri(order.product), remaining)
        allocations = self.select_suppliers(components, t)
        if allocations is None:
            return False
        stock = self.inventory_level(self.oem.name, order.product)
        if stock > 0:
            self._drain(self.oem.name, order.product, 0, t)
        self._commit(self.oem.name, t, remaining)
        for allocation in allocations:
            self._commit(allocation.node, allocation.timestep, allocation.quantity)
        self._write_plan_line(
            order.id,
            Allocation(self.oem.name, order.product, t, remaining, self._cost.get(self.oem.name, 0)),
        )
        for allocation in allocations:
            self._write_plan_line(order.id, allocation)
        self._verdict(order.id, True)
        return True

    def step(self, t: int) -> StepReport:
        self._inserted = 0
        if self._replenish is not None:
            self._replenish(self, t)
        due = self.due_orders(t)
        from_stock = produced = unfulfilled = 0
        for order in due:
            remaining = self.fulfill_from_inventory(order, t)
            if remaining == 0:
                from_stock += 1
            elif self._try_production(order, t, remaining):
                produced += 1
            else:
                self._verdict(order.id, False)
                unfulfilled += 1
        return StepReport(t, len(due), from_stock, produced, unfulfilled, self._inserted)

    def run(self, horizon: int) -> list[StepReport]:
        if horizon < 1:
            raise ValueError("horizon must be >= 1")
        return [self.step(t) for t in range(horizon)]
