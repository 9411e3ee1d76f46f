"""Directed transmission network: who infected whom, and who travelled where.

Infection edges join two people. A journey is an event on a single person
(origin to destination), never an edge between two people, so both ends of
a travel arrow in a drawing are the same case.
"""
from __future__ import annotations

import datetime as dt
import enum
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import networkx as nx

from ._util import iso, parse_optional_date, read_jsonl
from .errors import (CycleDetected, DegenerateTravel, SelfLoop, TemporalViolation,
                     UnknownNode)
from .registry import CaseObservation, Outcome, Registry, Role


class Context(str, enum.Enum):
    FAMILY = "family"
    FUNERAL = "funeral"
    HOSPITAL = "hospital"
    TRADITIONAL_HEALER = "traditional_healer"
    TRAVEL_CONTACT = "travel_contact"
    UNKNOWN = "unknown"


class TravelReason(str, enum.Enum):
    UNKNOWN = "unknown"
    TREATMENT_SEEKING = "treatment_seeking"
    FAMILY_VISIT = "family_visit"
    ORPHAN_ADOPTION = "orphan_adoption"
    OTHER = "other"


@dataclass(frozen=True)
class Location:
    country: str
    city: str | None = None

    def __str__(self):
        return f"{self.country}/{self.city}" if self.city else self.country

    def to_dict(self):
        return {"country": self.country, "city": self.city}

    @classmethod
    def from_value(cls, v) -> "Location":
        if isinstance(v, Location):
            return v
        if isinstance(v, str):
            country, _, city = v.partition("/")
            return cls(country, city or None)
        return cls(v["country"], v.get("city"))


@dataclass
class Node:
    case_id: str
    location: Location
    label: str | None = None
    role: Role = Role.UNKNOWN
    outcome: Outcome = Outcome.UNKNOWN
    infection_date: dt.date | None = None

    def to_dict(self):
        return {
            "case_id": self.case_id,
            "location": self.location.to_dict(),
            "label": self.label,
            "role": Role(self.role).value,
            "outcome": Outcome(self.outcome).value,
            "infection_date": iso(self.infection_date),
        }


@dataclass(frozen=True)
class InfectionEdge:
    infector: str
    infectee: str
    context: Context = Context.UNKNOWN
    date: dt.date | None = None
    evidence: str = ""

    def __post_init__(self):
        object.__setattr__(self, "context", Context(self.context))
        object.__setattr__(self, "date", parse_optional_date(self.date))

    def to_dict(self):
        return {"infector": self.infector, "infectee": self.infectee,
                "context": self.context.value, "date": iso(self.date),
                "evidence": self.evidence}


@dataclass(frozen=True)
class TravelEvent:
    person: str
    origin: Location
    destination: Location
    date: dt.date | None = None
    reason: TravelReason = TravelReason.UNKNOWN
    quarantined_on_arrival: bool = False

    def __post_init__(self):
        object.__setattr__(self, "origin", Location.from_value(self.origin))
        object.__setattr__(self, "destination", Location.from_value(self.destination))
        object.__setattr__(self, "reason", TravelReason(self.reason))
        object.__setattr__(self, "date", parse_optional_date(self.date))

    @property
    def crosses_border(self) -> bool:
        return self.origin.country != self.destination.country

    def to_dict(self):
        return {"person": self.person, "origin": self.origin.to_dict(),
                "destination": self.destination.to_dict(), "date": iso(self.date),
                "reason": self.reason.value,
                "quarantined_on_arrival": self.quarantined_on_arrival}


class TransmissionGraph:
    """Infection edges plus per-person travel events.

    Several infectors per case are allowed; :func:`transmission_chain`
    picks one when a single path is needed.
    """

    def __init__(self):
        self.nodes: dict[str, Node] = {}
        self.infection_edges: list[InfectionEdge] = []
        self.travel_events: list[TravelEvent] = []
        self._in: dict[str, list[InfectionEdge]] = {}
        self._out: dict[str, list[InfectionEdge]] = {}

    def __len__(self):
        return len(self.nodes)

    def add_node(self, case_id: str, location, **attrs) -> "TransmissionGraph":
        self.nodes[case_id] = Node(case_id, Location.from_value(location), **attrs)
        self._in.setdefault(case_id, [])
        self._out.setdefault(case_id, [])
        return self

    def _require(self, case_id):
        if case_id not in self.nodes:
            raise UnknownNode(case_id)

    def incoming(self, case_id) -> list[InfectionEdge]:
        self._require(case_id)
        return list(self._in[case_id])

    def outgoing(self, case_id) -> list[InfectionEdge]:
        self._require(case_id)
        return list(self._out[case_id])

    def in_degree(self, case_id) -> int:
        return len(self.incoming(case_id))

    def out_degree(self, case_id) -> int:
        return len(self.outgoing(case_id))

    def infection_date(self, case_id) -> dt.date | None:
        """Explicit infection date, else the earliest dated incoming edge."""
        node = self.nodes[case_id]
        if node.infection_date is not None:
            return node.infection_date
        dates = [e.date for e in self._in[case_id] if e.date is not None]
        return min(dates) if dates else None

    def add_infection(self, edge: InfectionEdge) -> "TransmissionGraph":
        self._require(edge.infector)
        self._require(edge.infectee)
        if edge.infector == edge.infectee:
            raise SelfLoop(f"{edge.infector} cannot infect itself")
        if edge.date is not None:
            src = self.infection_date(edge.infector)
            if src is not None and edge.date < src:
                raise TemporalViolation(
                    f"{edge.infector}->{edge.infectee} dated {edge.date} precedes "
                    f"{edge.infector}'s infection on {src}")
            dst = self.infection_date(edge.infectee)
            new_dst = dst if self.nodes[edge.infectee].infection_date else (
                edge.date if dst is None else min(dst, edge.date))
            for onward in self._out[edge.infectee]:
                if onward.date is not None and onward.date < new_dst:
                    raise TemporalViolation(
                        f"{edge.infectee}->{onward.infectee} dated {onward.date} would "
                        f"precede {edge.infectee}'s infection on {new_dst}")
        self.infection_edges.append(edge)
        self._in[edge.infectee].append(edge)
        self._out[edge.infector].append(edge)
        return self

    def add_travel(self, ev: TravelEvent) -> "TransmissionGraph":
        self._require(ev.person)
        if ev.origin == ev.destination:
            raise DegenerateTravel(f"{ev.person}: origin and destination are both {ev.origin}")
        self.travel_events.append(ev)
        self.nodes[ev.person].location = ev.destination
        return self

    # -- serialisation -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "nodes": [self.nodes[k].to_dict() for k in sorted(self.nodes)],
            "infection_edges": [e.to_dict() for e in self.infection_edges],
            "travel_events": [t.to_dict() for t in self.travel_events],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "TransmissionGraph":
        g = cls()
        for n in d.get("nodes", ()):
            g.add_node(n["case_id"], Location.from_value(n["location"]),
                       label=n.get("label"), role=Role(n.get("role", "unknown")),
                       outcome=Outcome(n.get("outcome", "unknown")),
                       infection_date=parse_optional_date(n.get("infection_date")))
        for e in d.get("infection_edges", ()):
            g.add_infection(InfectionEdge(**e))
        for t in d.get("travel_events", ()):
            g.add_travel(TravelEvent(**t))
        return g


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------

def index_cases(g: TransmissionGraph) -> set[str]:
    return {cid for cid in g.nodes if not g._in[cid]}


def _infection_digraph(g: TransmissionGraph) -> nx.DiGraph:
    dg = nx.DiGraph()
    dg.add_nodes_from(g.nodes)
    dg.add_edges_from((e.infector, e.infectee) for e in g.infection_edges)
    return dg


def clusters(g: TransmissionGraph) -> list[set[str]]:
    """Weakly connected components over infection edges, ordered by smallest id."""
    comps = [set(c) for c in nx.weakly_connected_components(_infection_digraph(g))]
    return sorted(comps, key=min)


def _edge_order(e: InfectionEdge):
    return (e.date is None, e.date or dt.date.max, e.infector)


def transmission_chain(g: TransmissionGraph, case_id: str) -> list[str]:
    """Path from an index case down to ``case_id``.

    With several infectors the earliest-dated edge is followed (undated
    edges last, then by infector id).
    """
    g._require(case_id)
    path, seen = [case_id], {case_id}
    cur = case_id
    while g._in[cur]:
        edge = min(g._in[cur], key=_edge_order)
        if edge.infector in seen:
            raise CycleDetected(f"ancestry of {case_id} loops back to {edge.infector}")
        path.append(edge.infector)
        seen.add(edge.infector)
        cur = edge.infector
    path.reverse()
    return path


@dataclass(frozen=True)
class CrossBorderEntry:
    person: str
    origin_country: str
    destination_country: str
    downstream_size: int

    def to_dict(self):
        return {"person": self.person, "origin_country": self.origin_country,
                "destination_country": self.destination_country,
                "downstream_size": self.downstream_size}


def downstream(g: TransmissionGraph, case_id: str, since: dt.date | None = None) -> set[str]:
    """Cases reachable from ``case_id`` along edges not dated before ``since``."""
    seen = {case_id}
    queue = deque([case_id])
    while queue:
        cur = queue.popleft()
        for e in g._out[cur]:
            if since is not None and e.date is not None and e.date < since:
                continue
            if e.infectee not in seen:
                seen.add(e.infectee)
                queue.append(e.infectee)
    return seen


def cross_border_chains(g: TransmissionGraph) -> list[CrossBorderEntry]:
    return [
        CrossBorderEntry(t.person, t.origin.country, t.destination.country,
                         len(downstream(g, t.person, t.date)))
        for t in g.travel_events if t.crosses_border
    ]


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def _q(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: TransmissionGraph) -> str:
    lines = ["digraph G {"]
    for cid in sorted(g.nodes):
        n = g.nodes[cid]
        attrs = [f"label={_q(n.label or cid)}", "shape=circle"]
        if Outcome(n.outcome) is Outcome.DEAD:
            attrs += ["style=filled", "fillcolor=gray40", "fontcolor=white"]
        if Role(n.role) is Role.HEALTHCARE_WORKER:
            attrs.append("peripheries=2")
        lines.append(f"  {_q(cid)} [{', '.join(attrs)}];")
    for e in g.infection_edges:
        lines.append(f"  {_q(e.infector)} -> {_q(e.infectee)} "
                     f"[style=solid, label={_q(e.context.value)}];")
    for t in g.travel_events:
        label = f"{t.reason.value}: {t.origin} to {t.destination}"
        lines.append(f"  {_q(t.person)} -> {_q(t.person)} [style=dashed, label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _clean(attrs: dict) -> dict:
    return {k: v for k, v in attrs.items() if v is not None}


def to_graphml(g: TransmissionGraph) -> str:
    mg = nx.MultiDiGraph()
    for cid in sorted(g.nodes):
        n = g.nodes[cid]
        mg.add_node(cid, **_clean({
            "label": n.label or cid, "country": n.location.country, "city": n.location.city,
            "role": Role(n.role).value, "outcome": Outcome(n.outcome).value,
        }))
    for e in g.infection_edges:
        mg.add_edge(e.infector, e.infectee, **_clean({
            "kind": "infection", "context": e.context.value, "date": iso(e.date),
            "evidence": e.evidence or None,
        }))
    for t in g.travel_events:
        mg.add_edge(t.person, t.person, **_clean({
            "kind": "travel", "reason": t.reason.value, "origin": str(t.origin),
            "destination": str(t.destination), "date": iso(t.date),
            "quarantined_on_arrival": t.quarantined_on_arrival,
        }))
    return "\n".join(nx.generate_graphml(mg)) + "\n"


def to_json(g: TransmissionGraph) -> str:
    return json.dumps(g.to_dict(), indent=2, ensure_ascii=False) + "\n"


def from_json(text: str) -> TransmissionGraph:
    return TransmissionGraph.from_dict(json.loads(text))


_EXPORTERS = {"dot": to_dot, "graphml": to_graphml, "json": to_json}


def export_graph(g: TransmissionGraph, format: str = "dot") -> str:
    try:
        return _EXPORTERS[format](g)
    except KeyError:
        raise ValueError(f"unknown graph format {format!r}") from None


# ---------------------------------------------------------------------------
# Case-network files
# ---------------------------------------------------------------------------

@dataclass
class CaseNetwork:
    registry: Registry
    graph: TransmissionGraph
    ids: dict = field(default_factory=dict)  # file key -> case id

    def case(self, key: str) -> str:
        return self.ids[key]


def build_case_network(rows: Iterable[Mapping]) -> CaseNetwork:
    """Build a registry and graph from case-network records.

    Each record has ``kind`` ``node``, ``infection`` or ``travel``. Node
    records carry a file-local ``key`` plus observation fields, an optional
    ``city`` and an optional starting ``location`` ("Country/City") for
    people first seen outside the country that reports them. Edges and
    travel refer to keys.
    """
    rows = list(rows)
    reg = Registry()
    ids: dict[str, str] = {}
    starts: dict[str, Location | None] = {}
    for r in rows:
        if r.get("kind") == "node":
            cid = reg.upsert_case(CaseObservation.from_dict(r))
            ids[r["key"]] = cid
            loc = r.get("location")
            starts.setdefault(cid, Location.from_value(loc) if loc else None)
            if starts[cid] is None and r.get("city"):
                starts[cid] = Location(r["country"], r["city"])
    g = TransmissionGraph()
    seen = set()
    for r in rows:
        if r.get("kind") != "node" or ids[r["key"]] in seen:
            continue
        cid = ids[r["key"]]
        seen.add(cid)
        rec = reg[cid]
        g.add_node(cid, starts[cid] or Location(rec.country), label=r["key"], role=rec.role,
                   outcome=rec.outcome,
                   infection_date=parse_optional_date(r.get("infection_date")))

    def resolve(key):
        try:
            return ids[key]
        except KeyError:
            raise UnknownNode(key) from None

    for r in rows:
        kind = r.get("kind")
        if kind == "infection":
            g.add_infection(InfectionEdge(resolve(r["infector"]), resolve(r["infectee"]),
                                          r.get("context", "unknown"), r.get("date"),
                                          r.get("evidence", "")))
        elif kind == "travel":
            g.add_travel(TravelEvent(resolve(r["person"]), r["origin"], r["destination"],
                                     r.get("date"), r.get("reason", "unknown"),
                                     bool(r.get("quarantined_on_arrival", False))))
        elif kind != "node":
            raise ValueError(f"unknown record kind {kind!r}")
    return CaseNetwork(reg, g, ids)


def load_case_network(path) -> CaseNetwork:
    return build_case_network(read_jsonl(path))


def load_graph(path) -> TransmissionGraph:
    """Load a graph from either a ``.json`` graph file or a case-network JSONL file."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        whole = json.loads(text)
    except json.JSONDecodeError:
        whole = None
    if isinstance(whole, dict) and "nodes" in whole:
        return TransmissionGraph.from_dict(whole)
    return build_case_network(json.loads(line) for line in text.splitlines()
                              if line.strip()).graph
