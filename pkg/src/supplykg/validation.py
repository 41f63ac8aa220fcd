"""Structural validation for supply-chain graphs.

``validate`` walks a graph and returns a list of violations instead of
raising, so callers can render all findings at once. Severity is either
"error" (the graph will misbehave in the simulator or analytics) or
"warning" (unusual but workable, e.g. links that skip a tier).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import schema
from . import vocab as v
from .graph import Graph
from .terms import INTEGER, Iri, Literal, Quoted


@dataclass(frozen=True, slots=True)
class Violation:
    code: str
    severity: str
    subject: str
    message: str


class _Report:
    def __init__(self):
        self.items: list[Violation] = []

    def error(self, code, subject, message):
        self.items.append(Violation(code, "error", subject, message))

    def warning(self, code, subject, message):
        self.items.append(Violation(code, "warning", subject, message))


def _single(graph, subject, predicate, report):
    try:
        return graph.value(subject, predicate)
    except ValueError:
        report.error(
            "multi-valued",
            subject.name,
            f"{predicate.name} must have a single value",
        )
        return None


def _check_vocabulary(graph, report, allow_unknown):
    def walk(triple):
        if triple.predicate not in v.KNOWN_PREDICATES:
            report.error(
                "unknown-predicate",
                triple.predicate.name,
                f"predicate {triple.predicate.name} is not in the vocabulary",
            )
        if (
            triple.predicate == v.RDF_TYPE
            and isinstance(triple.object, Iri)
            and triple.object not in v.KNOWN_CLASSES
        ):
            report.warning(
                "unknown-class",
                triple.object.name,
                f"class {triple.object.name} is not in the vocabulary",
            )
        for part in (triple.subject, triple.object):
            if isinstance(part, Quoted):
                walk(part.triple)

    if allow_unknown:
        return
    for t in graph.triples():
        walk(t)


_INT_PROPS = (
    (v.HAS_GROUP, 1, None),
    (v.HAS_PRIORITY, 1, None),
    (v.HAS_CO2, None, None),
    (v.HAS_LONGITUDE, None, None),
    (v.HAS_LATITUDE, None, None),
)


def _check_node(graph, iri, report):
    kind = schema.node_kind(graph, iri)
    if kind is None:
        report.error("untyped-node", iri.name, "node has no Supplier/Customer/OEM class")
        return

    sat = _single(graph, iri, v.HAS_SATURATION, report)
    if sat is None:
        report.error("missing-saturation", iri.name, "node has no hasSaturation")
    elif not (isinstance(sat, Literal) and sat.datatype == INTEGER and sat.value > 0):
        report.error("bad-saturation", iri.name, "hasSaturation must be a positive integer")

    dt = _single(graph, iri, v.HAS_DELIVERY_TIME, report)
    if dt is None:
        report.error("missing-delivery-time", iri.name, "node has no hasDeliveryTime")
    elif not (isinstance(dt, Literal) and dt.datatype == INTEGER and dt.value >= 1):
        report.error("bad-delivery-time", iri.name, "hasDeliveryTime must be an integer >= 1")

    if kind == v.CUSTOMER:
        prio = _single(graph, iri, v.HAS_PRIORITY, report)
        if prio is None:
            report.error("missing-priority", iri.name, "customer has no hasPriority")

    for pred in v.KPI_PREDICATES:
        value = _single(graph, iri, pred, report)
        if value is None:
            continue
        if not (isinstance(value, Literal) and value.datatype == INTEGER):
            report.error("bad-literal-type", iri.name, f"{pred.name} must be an integer")
        elif not 0 <= value.value <= 100:
            report.error(
                "kpi-out-of-range",
                iri.name,
                f"{pred.name} is {value.value}, outside 0..100",
            )

    for pred, lo, hi in _INT_PROPS:
        value = _single(graph, iri, pred, report)
        if value is None:
            continue
        if not (isinstance(value, Literal) and value.datatype == INTEGER):
            report.error("bad-literal-type", iri.name, f"{pred.name} must be an integer")
        elif (lo is not None and value.value < lo) or (hi is not None and value.value > hi):
            report.error("bad-literal-type", iri.name, f"{pred.name} out of range")


def _check_records(graph, report):
    owners = {}
    for t in graph.triples():
        if t.predicate == v.HAS_CAPACITY and isinstance(t.object, Iri):
            owners.setdefault(t.object, []).append((t.subject, "capacity"))
        if t.predicate == v.HAS_INVENTORY and isinstance(t.object, Iri):
            owners.setdefault(t.object, []).append((t.subject, "inventory"))

    for rec in schema.nodes_of_kind(graph, v.CAPACITY):
        if rec not in owners:
            report.error("orphan-record", rec.name, "capacity record has no owning node")
            continue
        owner = owners[rec][0][0]
        try:
            view = schema._capacity_view(graph, owner, rec)
        except schema.MissingEntityError as exc:
            report.error("bad-record", rec.name, str(exc))
            continue
        if view.quantity < 0:
            report.error("bad-record", rec.name, "committed capacity is negative")
        if view.cost < 0:
            report.error("bad-record", rec.name, "capacity cost is negative")
        sat = graph.value(owner, v.HAS_SATURATION)
        if isinstance(sat, Literal) and sat.datatype == INTEGER and view.quantity > sat.value:
            report.error(
                "capacity-exceeds-saturation",
                rec.name,
                f"committed {view.quantity} exceeds saturation {sat.value} of {owner.name}",
            )

    for rec in schema.nodes_of_kind(graph, v.INVENTORY):
        if rec not in owners:
            report.error("orphan-record", rec.name, "inventory record has no owning node")
            continue
        qty = graph.value(rec, v.HAS_QUANTITY)
        if not (isinstance(qty, Literal) and qty.datatype == INTEGER and qty.value >= 0):
            report.error("bad-record", rec.name, "inventory quantity must be an integer >= 0")


def _check_orders(graph, report):
    for iri in schema.nodes_of_kind(graph, v.ORDER):
        try:
            view = schema.order(graph, iri)
        except schema.MissingEntityError as exc:
            report.error("bad-order", iri.name, str(exc))
            continue
        if view.quantity <= 0:
            report.error("bad-order", iri.name, "order quantity must be positive")
        maker = Iri(view.maker)
        if schema.node_kind(graph, maker) != v.CUSTOMER:
            report.error("bad-order", iri.name, f"maker {view.maker} is not a customer")


def _tier_index(graph, iri):
    term = graph.value(iri, v.BELONGS_TO_TIER)
    if isinstance(term, Iri):
        m = schema._TIER_RE.match(term.name)
        if m:
            return int(m.group(1))
    return None


def _group_by_tier(graph, kind):
    tiers = {}
    for iri in schema.nodes_of_kind(graph, kind):
        idx = _tier_index(graph, iri)
        if idx is not None:
            tiers.setdefault(idx, set()).add(iri)
    return tiers


def _check_topology(graph, report):
    try:
        oem = schema.the_oem(graph)
    except schema.MissingEntityError as exc:
        report.error("oem-count", "", str(exc))
        return

    sup = _group_by_tier(graph, v.SUPPLIER)
    cust = _group_by_tier(graph, v.CUSTOMER)

    for s in sup.get(1, ()):
        if oem not in graph.objects(s, v.HAS_OEM):
            report.error("missing-oem-link", s.name, "tier-1 supplier has no hasOEM link")
    for c in cust.get(1, ()):
        if c not in graph.objects(oem, v.OEM_HAS_NODE):
            report.error("missing-oem-link", c.name, "tier-1 customer has no OEMhasNode link")

    def coverage(tiers, pred, label):
        if not tiers:
            return
        top = max(tiers)
        covered = set()
        for t in sorted(tiers):
            for a in tiers[t]:
                links = [b for b in graph.objects(a, pred) if isinstance(b, Iri)]
                for b in links:
                    b_tier = _tier_index(graph, b)
                    if b_tier is not None and b_tier != t + 1:
                        report.warning(
                            "tier-skip",
                            a.name,
                            f"{pred.name} link to {b.name} skips from tier {t} to {b_tier}",
                        )
                    covered.add(b)
        for t in sorted(tiers):
            if t < top:
                for a in tiers[t]:
                    if not any(_tier_index(graph, b) == t + 1 for b in graph.objects(a, pred) if isinstance(b, Iri)):
                        report.error(
                            "tier-coverage",
                            a.name,
                            f"tier-{t} {label} has no {pred.name} link into tier {t + 1}",
                        )
            if t > 1:
                for a in tiers[t]:
                    if a not in covered:
                        report.error(
                            "tier-coverage",
                            a.name,
                            f"tier-{t} {label} is not reachable from tier {t - 1}",
                        )

    coverage(sup, v.HAS_UPSTREAM_NODE, "supplier")
    coverage(cust, v.HAS_DOWNSTREAM_NODE, "customer")


def _check_bom(graph, report):
    edges = {}
    for t in graph.triples():
        if t.predicate == v.NEEDS_PRODUCT and isinstance(t.subject, Iri) and isinstance(t.object, Iri):
            edges.setdefault(t.subject, []).append(t.object)

    state = {}

    def visit(node, stack):
        state[node] = 1
        stack.append(node)
        for child in edges.get(node, ()):
            if state.get(child) == 1:
                cycle = stack[stack.index(child):] + [child]
                report.error(
                    "bom-cycle",
                    node.name,
                    "bill of materials contains a cycle: " + " -> ".join(n.name for n in cycle),
                )
            elif state.get(child) is None:
                visit(child, stack)
        stack.pop()
        state[node] = 2

    for root in sorted(edges, key=lambda i: i.name):
        if state.get(root) is None:
            visit(root, [])


_SEVERITY_RANK = {"error": 0, "warning": 1}


def validate(graph: Graph, allow_unknown: bool = False) -> list[Violation]:
    """Check a supply-chain graph and return all violations found."""
    report = _Report()
    _check_vocabulary(graph, report, allow_unknown)
    _check_topology(graph, report)
    for iri in sorted(schema.nodes_of_kind(graph, v.NODE), key=lambda i: i.name):
        _check_node(graph, iri, report)
    _check_records(graph, report)
    _check_orders(graph, report)
    _check_bom(graph, report)
    unique = sorted(
        set(report.items),
        key=lambda x: (_SEVERITY_RANK[x.severity], x.code, x.subject, x.message),
    )
    return unique
