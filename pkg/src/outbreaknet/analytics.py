"""Epidemiological summaries: fatality rates, super-spreaders, epi-weeks and
response timelines."""
from __future__ import annotations

import csv
import datetime as dt
import enum
import io
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable

from ._util import parse_date
from .errors import BeforeAnchor, MissingEventKind, ZeroCases
from .network import TransmissionGraph, clusters, cross_border_chains, index_cases
from .registry import Outcome, Registry, Role


# ---------------------------------------------------------------------------
# Case fatality
# ---------------------------------------------------------------------------

def round_half_up(q: Fraction, decimals: int) -> Decimal:
    """Round a non-negative rational to ``decimals`` places, halves away from zero."""
    scale = 10 ** decimals
    n = (2 * q.numerator * scale + q.denominator) // (2 * q.denominator)
    return Decimal(n).scaleb(-decimals)


@dataclass(frozen=True)
class FatalityRate:
    deaths: int
    cases: int

    @property
    def exact(self) -> Fraction:
        return Fraction(self.deaths, self.cases)

    def rounded(self, decimals: int = 4) -> Decimal:
        return round_half_up(self.exact, decimals)

    def percent(self, decimals: int = 0) -> Decimal:
        return round_half_up(self.exact * 100, decimals)

    def __float__(self):
        return self.deaths / self.cases

    def __str__(self):
        return str(self.rounded(4))


def case_fatality_rate(deaths: int, cases: int) -> FatalityRate:
    """Deaths over cases, kept exact; use ``.rounded(n)`` for presentation."""
    if cases == 0:
        raise ZeroCases("case fatality rate is undefined for zero cases")
    if deaths < 0 or cases < 0 or deaths > cases:
        raise ValueError(f"need 0 <= deaths <= cases, got deaths={deaths}, cases={cases}")
    return FatalityRate(int(deaths), int(cases))


@dataclass(frozen=True)
class HcwStats:
    cases: int
    deaths: int
    cfr: FatalityRate | None  # None when there are no health-care worker cases

    def to_dict(self):
        return {"cases": self.cases, "deaths": self.deaths,
                "cfr": None if self.cfr is None else str(self.cfr.rounded(4))}


def hcw_stats(registry: Registry, graph: TransmissionGraph | None = None) -> HcwStats:
    """Health-care worker case and death counts.

    When ``graph`` is given, only records that are nodes of the graph count.
    """
    cases = deaths = 0
    for rec in registry:
        if graph is not None and rec.case_id not in graph.nodes:
            continue
        if rec.role is Role.HEALTHCARE_WORKER:
            cases += 1
            deaths += rec.outcome is Outcome.DEAD
    try:
        cfr = case_fatality_rate(deaths, cases)
    except ZeroCases:
        cfr = None
    return HcwStats(cases, deaths, cfr)


def super_spreaders(graph: TransmissionGraph, k: int) -> list[tuple[str, int]]:
    """Nodes with infection out-degree >= k, highest first, ties by id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = ((cid, len(graph._out[cid])) for cid in graph.nodes)
    return sorted((p for p in ranked if p[1] >= k), key=lambda p: (-p[1], p[0]))


# ---------------------------------------------------------------------------
# Epi-weeks and timelines
# ---------------------------------------------------------------------------

def epi_week(date: dt.date, anchor_date: dt.date) -> int:
    """Week number counted from the anchor; days 0-6 are week 1."""
    date, anchor_date = parse_date(date), parse_date(anchor_date)
    if date < anchor_date:
        raise BeforeAnchor(f"{date} is before the anchor {anchor_date}")
    return (date - anchor_date).days // 7 + 1


class EventKind(str, enum.Enum):
    OUTBREAK_REPORT = "outbreak_report"
    BORDER_CROSSING = "border_crossing"
    WHO_ACTION = "who_action"
    NATIONAL_ACTION = "national_action"
    NGO_ACTION = "ngo_action"
    MEDIA_MILESTONE = "media_milestone"


@dataclass(frozen=True)
class EpiEvent:
    date: dt.date
    kind: EventKind
    description: str = ""
    country: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "date", parse_date(self.date))
        object.__setattr__(self, "kind", EventKind(self.kind))


@dataclass(frozen=True)
class TimelineEntry:
    event: EpiEvent
    week: int


@dataclass(frozen=True)
class EpiTimeline:
    anchor_date: dt.date
    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def events(self) -> list[EpiEvent]:
        return [e.event for e in self.entries]

    def earliest(self, kind) -> TimelineEntry:
        kind = EventKind(kind)
        for entry in self.entries:
            if entry.event.kind is kind:
                return entry
        raise MissingEventKind(f"timeline has no {kind.value} event")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TIMELINE_COLUMNS)
        for e in self.entries:
            ev = e.event
            w.writerow([ev.date.isoformat(), e.week, ev.kind.value, ev.country or "",
                        ev.description])
        return buf.getvalue()


TIMELINE_COLUMNS = ("date", "week", "kind", "country", "description")


def build_timeline(events: Iterable[EpiEvent], anchor: dt.date) -> EpiTimeline:
    anchor = parse_date(anchor)
    events = list(events)
    for ev in events:
        if ev.date < anchor:
            raise BeforeAnchor(f"event {ev.description or ev.kind.value!r} on {ev.date} "
                               f"is before the anchor {anchor}")
    ordered = sorted(events, key=lambda ev: ev.date)  # stable
    return EpiTimeline(anchor, tuple(TimelineEntry(ev, epi_week(ev.date, anchor))
                                     for ev in ordered))


@dataclass(frozen=True)
class Lag:
    days: int
    weeks: int


def response_lag(timeline: EpiTimeline, trigger_kind, response_kind) -> Lag:
    """Gap between the first trigger event and the first response event."""
    trigger = timeline.earliest(trigger_kind)
    response = timeline.earliest(response_kind)
    return Lag((response.event.date - trigger.event.date).days, response.week - trigger.week)


def read_events(source) -> list[EpiEvent]:
    """Read events from timeline CSV; a ``week`` column, if present, is ignored."""
    if isinstance(source, io.TextIOBase):
        return _read_events(source)
    with open(source, encoding="utf-8", newline="") as fh:
        return _read_events(fh)


def _read_events(fh) -> list[EpiEvent]:
    reader = csv.DictReader(fh)
    missing = {"date", "kind"} - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"event file lacks columns {sorted(missing)}")
    return [EpiEvent(row["date"], row["kind"], row.get("description") or "",
                     row.get("country") or None)
            for row in reader]


def summarize_network(registry: Registry, graph: TransmissionGraph,
                      spreader_k: int = 5) -> dict:
    """One-shot summary used by the CLI ``analyze network`` command."""
    counts = registry.status_counts()
    return {
        "nodes": len(graph.nodes),
        "infection_edges": len(graph.infection_edges),
        "travel_events": len(graph.travel_events),
        "clusters": [len(c) for c in clusters(graph)],
        "index_cases": sorted(index_cases(graph)),
        "deaths": counts.outcome[Outcome.DEAD.value],
        "hcw": hcw_stats(registry, graph).to_dict(),
        "super_spreaders": [list(p) for p in super_spreaders(graph, spreader_k)],
        "cross_border": [e.to_dict() for e in cross_border_chains(graph)],
    }

