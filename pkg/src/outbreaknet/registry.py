"""Person-level case registry built from report observations.

Observations about the same person arrive from many outlets. They are matched
to an existing record by name, village or hospital, merged field by field
with source precedence, and kept in full as the record's history.
"""
from __future__ import annotations

import datetime as dt
import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from ._util import atomic_write_text, dumps_line, parse_date
from .errors import AmbiguousMatch, SchemaError, UnknownCase

# Twice the longest incubation period (21 days).
MATCH_WINDOW_DAYS = 42


class Status(str, enum.Enum):
    SUSPECTED = "suspected"
    PROBABLE = "probable"
    CONFIRMED = "confirmed"

    @property
    def rank(self) -> int:
        return _STATUS_RANK[self]


_STATUS_RANK = {Status.SUSPECTED: 0, Status.PROBABLE: 1, Status.CONFIRMED: 2}


class Outcome(str, enum.Enum):
    ALIVE = "alive"
    RECOVERED = "recovered"
    DEAD = "dead"
    EVACUATED = "evacuated"
    UNKNOWN = "unknown"


class Role(str, enum.Enum):
    HEALTHCARE_WORKER = "healthcare_worker"
    TRADITIONAL_HEALER = "traditional_healer"
    COMMUNITY = "community"
    TRAVELER = "traveler"
    UNKNOWN = "unknown"


class SourceTier(str, enum.Enum):
    OFFICIAL = "official"
    MAJOR_NEWS = "major_news"
    OTHER = "other"

    @property
    def rank(self) -> int:
        return _TIER_RANK[self]


_TIER_RANK = {SourceTier.OTHER: 0, SourceTier.MAJOR_NEWS: 1, SourceTier.OFFICIAL: 2}


@dataclass(frozen=True)
class CaseObservation:
    country: str
    status: Status
    report_date: dt.date
    person_name: str | None = None
    village: str | None = None
    hospital: str | None = None
    outcome: Outcome = Outcome.UNKNOWN
    role: Role = Role.UNKNOWN
    source_tier: SourceTier = SourceTier.OTHER
    source_ref: str = ""

    def __post_init__(self):
        for name in ("person_name", "village", "hospital"):
            v = getattr(self, name)
            object.__setattr__(self, name, v.strip() or None if isinstance(v, str) else v)
        if not (self.person_name or self.village or self.hospital):
            raise ValueError("observation needs a person_name, village or hospital")
        object.__setattr__(self, "status", Status(self.status))
        object.__setattr__(self, "outcome", Outcome(self.outcome))
        object.__setattr__(self, "role", Role(self.role))
        object.__setattr__(self, "source_tier", SourceTier(self.source_tier))
        object.__setattr__(self, "report_date", parse_date(self.report_date))

    def to_dict(self) -> dict:
        return {
            "person_name": self.person_name,
            "village": self.village,
            "hospital": self.hospital,
            "country": self.country,
            "status": self.status.value,
            "outcome": self.outcome.value,
            "role": self.role.value,
            "report_date": self.report_date.isoformat(),
            "source_tier": self.source_tier.value,
            "source_ref": self.source_ref,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CaseObservation":
        keys = ("person_name", "village", "hospital", "country", "status", "outcome",
                "role", "report_date", "source_tier", "source_ref")
        missing = [k for k in ("country", "status", "report_date") if k not in d]
        if missing:
            raise SchemaError(f"observation lacks required fields {missing}")
        return cls(**{k: d[k] for k in keys if k in d})


# ---------------------------------------------------------------------------
# Field merging
# ---------------------------------------------------------------------------

MERGED_FIELDS = ("person_name", "village", "hospital", "country", "outcome", "role")
_ABSENT = {None, "", Outcome.UNKNOWN, Role.UNKNOWN}


@dataclass(frozen=True)
class FieldConflict:
    field: str
    kept: str
    discarded: str
    kept_ref: str
    discarded_ref: str

    def to_dict(self) -> dict:
        return {"field": self.field, "kept": self.kept, "discarded": self.discarded,
                "kept_ref": self.kept_ref, "discarded_ref": self.discarded_ref}


@dataclass(frozen=True)
class _Sourced:
    value: object
    tier: int
    date: dt.date
    ref: str

    @classmethod
    def of(cls, obs: CaseObservation, name: str) -> "_Sourced":
        return cls(getattr(obs, name), obs.source_tier.rank, obs.report_date, obs.source_ref)


def _plain(v):
    return v.value if isinstance(v, enum.Enum) else v


def _resolve(name: str, cur: _Sourced | None, new: _Sourced):
    """Pick between the current and the incoming value of one field.

    Returns ``(winner, conflict_or_None)``.
    """
    if new.value in _ABSENT:
        return cur, None
    if cur is None or cur.value in _ABSENT:
        return new, None
    if name == "outcome" and (cur.value is Outcome.DEAD) != (new.value is Outcome.DEAD):
        # death is terminal whatever the source says afterwards
        winner, loser = (cur, new) if cur.value is Outcome.DEAD else (new, cur)
    elif (new.tier, new.date) > (cur.tier, cur.date):
        winner, loser = new, cur
    else:
        winner, loser = cur, new
    conflict = None
    if winner.value != loser.value:
        conflict = FieldConflict(name, _plain(winner.value), _plain(loser.value),
                                 winner.ref, loser.ref)
    return winner, conflict


@dataclass
class MergeResult:
    fields: dict
    status: Status
    conflicts: list


def merge_fields(a: CaseObservation, b: CaseObservation) -> MergeResult:
    """Resolve two observations of the same person into canonical values.

    Precedence is official > major_news > other, with the later report
    winning a tie. Status is the highest observed. Every overridden,
    differing value is reported as a conflict.
    """
    fields, conflicts = {}, []
    for name in MERGED_FIELDS:
        first = _Sourced.of(a, name)
        winner, conflict = _resolve(name, None if first.value in _ABSENT else first,
                                    _Sourced.of(b, name))
        fields[name] = winner.value if winner is not None else getattr(a, name)
        if conflict:
            conflicts.append(conflict)
    status = max(a.status, b.status, key=lambda s: s.rank)
    return MergeResult(fields, status, conflicts)


# ---------------------------------------------------------------------------
# Records and the registry
# ---------------------------------------------------------------------------

@dataclass
class CaseRecord:
    case_id: str
    observation_history: list = field(default_factory=list)
    conflicts: list = field(default_factory=list)
    _fields: dict = field(default_factory=dict, repr=False, compare=False)
    _status: Status = field(default=Status.SUSPECTED, repr=False, compare=False)

    def absorb(self, obs: CaseObservation, record_conflicts: bool = True) -> None:
        if not self.observation_history:
            self._status = obs.status
        elif obs.status.rank > self._status.rank:
            self._status = obs.status
        self.observation_history.append(obs)
        for name in MERGED_FIELDS:
            winner, conflict = _resolve(name, self._fields.get(name), _Sourced.of(obs, name))
            if winner is not None:
                self._fields[name] = winner
            if conflict and record_conflicts:
                self.conflicts.append(conflict)

    def _value(self, name, default=None):
        s = self._fields.get(name)
        return default if s is None else s.value

    @property
    def status(self) -> Status:
        return self._status

    @property
    def person_name(self):
        return self._value("person_name")

    @property
    def village(self):
        return self._value("village")

    @property
    def hospital(self):
        return self._value("hospital")

    @property
    def country(self):
        return self._value("country")

    @property
    def outcome(self) -> Outcome:
        return self._value("outcome", Outcome.UNKNOWN)

    @property
    def role(self) -> Role:
        return self._value("role", Role.UNKNOWN)

    def canonical(self) -> dict:
        return {
            "person_name": self.person_name,
            "village": self.village,
            "hospital": self.hospital,
            "country": self.country,
            "status": self.status.value,
            "outcome": self.outcome.value,
            "role": self.role.value,
        }

    @property
    def report_dates(self) -> list:
        return [o.report_date for o in self.observation_history]

    def to_dict(self) -> dict:
        d = {"case_id": self.case_id}
        d.update(self.canonical())
        d["observation_history"] = [o.to_dict() for o in self.observation_history]
        d["conflicts"] = [c.to_dict() for c in self.conflicts]
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "CaseRecord":
        rec = cls(d["case_id"])
        for o in d["observation_history"]:
            rec.absorb(CaseObservation.from_dict(o), record_conflicts=False)
        rec.conflicts = [FieldConflict(**c) for c in d.get("conflicts", ())]
        return rec

    def __eq__(self, other):
        if not isinstance(other, CaseRecord):
            return NotImplemented
        return (self.case_id == other.case_id
                and self.observation_history == other.observation_history
                and self.conflicts == other.conflicts
                and self.canonical() == other.canonical())


def _within(day: dt.date, dates: Iterable[dt.date], window: int) -> bool:
    return any(abs((day - d).days) <= window for d in dates)


def _same(a, b) -> bool:
    return a is not None and b is not None and a.casefold() == b.casefold()


class Registry:
    """Mutable collection of :class:`CaseRecord` keyed by case id.

    Single writer: mutation is not synchronised, queries do not mutate.
    """

    def __init__(self, records: Iterable[CaseRecord] = ()):
        self._records: dict[str, CaseRecord] = {}
        self._order: dict[str, int] = {}
        # every name/village/hospital ever observed -> case ids; a superset
        # of the records that can match, narrowed by _match_rank
        self._index: dict[tuple, set] = {}
        self._next = 1
        for rec in records:
            self._add(rec)

    def _add(self, rec: CaseRecord) -> None:
        self._records[rec.case_id] = rec
        self._order.setdefault(rec.case_id, len(self._order))
        for o in rec.observation_history:
            self._index_obs(rec.case_id, o)
        if rec.case_id.startswith("C") and rec.case_id[1:].isdigit():
            self._next = max(self._next, int(rec.case_id[1:]) + 1)

    @staticmethod
    def _keys(obs: CaseObservation):
        if obs.person_name:
            yield ("n", obs.person_name)
        if obs.village:
            yield ("v", obs.village.casefold())
        if obs.hospital:
            yield ("h", obs.hospital.casefold())

    def _index_obs(self, case_id: str, obs: CaseObservation) -> None:
        for key in self._keys(obs):
            self._index.setdefault(key, set()).add(case_id)

    def _new_id(self) -> str:
        cid = f"C{self._next:06d}"
        self._next += 1
        return cid

    def __len__(self):
        return len(self._records)

    def __iter__(self) -> Iterator[CaseRecord]:
        return iter(self._records.values())

    def __contains__(self, case_id) -> bool:
        return case_id in self._records

    def __getitem__(self, case_id) -> CaseRecord:
        try:
            return self._records[case_id]
        except KeyError:
            raise UnknownCase(case_id) from None

    def __eq__(self, other):
        if not isinstance(other, Registry):
            return NotImplemented
        return list(self._records.items()) == list(other._records.items())

    # -- matching ----------------------------------------------------------

    @staticmethod
    def _match_rank(rec: CaseRecord, obs: CaseObservation):
        if obs.person_name and rec.person_name:
            return 0 if obs.person_name == rec.person_name else None
        near = _within(obs.report_date, rec.report_dates, MATCH_WINDOW_DAYS)
        if near and _same(obs.village, rec.village):
            return 1
        if near and _same(obs.hospital, rec.hospital):
            return 2
        return None

    def find_match(self, obs: CaseObservation) -> str | None:
        best, hits = None, []
        candidates = set()
        for key in self._keys(obs):
            candidates |= self._index.get(key, set())
        for cid in sorted(candidates, key=self._order.__getitem__):
            rec = self._records[cid]
            rank = self._match_rank(rec, obs)
            if rank is None:
                continue
            if best is None or rank < best:
                best, hits = rank, [rec.case_id]
            elif rank == best:
                hits.append(rec.case_id)
        if len(hits) > 1:
            raise AmbiguousMatch(hits)
        return hits[0] if hits else None

    def upsert_case(self, obs: CaseObservation) -> str:
        """Merge ``obs`` into its matching record, or open a new one."""
        cid = self.find_match(obs)
        if cid is None:
            rec = CaseRecord(self._new_id())
            self._add(rec)
        else:
            rec = self._records[cid]
        rec.absorb(obs)
        self._index_obs(rec.case_id, obs)
        return rec.case_id

    # -- queries -----------------------------------------------------------

    @staticmethod
    def _named_link(a: CaseRecord, b: CaseRecord) -> bool:
        def mentions(rec, name):
            if not name:
                return False
            needle = name.casefold()
            return any(needle in o.source_ref.casefold() for o in rec.observation_history)
        return mentions(b, a.person_name) or mentions(a, b.person_name)

    def backtrack(self, case_id: str) -> list[str]:
        """Records linked to ``case_id`` by name mention, village or hospital.

        Each link type is symmetric, so the relation is too. Sorted by case id.
        """
        query = self[case_id]
        related = []
        for rec in self._records.values():
            if rec.case_id == case_id:
                continue
            if (self._named_link(query, rec)
                    or _same(query.village, rec.village)
                    or _same(query.hospital, rec.hospital)):
                related.append(rec.case_id)
        return sorted(related)

    def status_counts(self) -> "StatusCounts":
        status = {s.value: 0 for s in Status}
        outcome = {o.value: 0 for o in Outcome}
        for rec in self._records.values():
            status[rec.status.value] += 1
            outcome[rec.outcome.value] += 1
        return StatusCounts(status, outcome)

    # -- persistence -------------------------------------------------------

    def to_jsonl(self) -> str:
        return "".join(dumps_line(r.to_dict()) + "\n" for r in self._records.values())

    def save(self, path) -> None:
        atomic_write_text(path, self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> "Registry":
        return cls(CaseRecord.from_dict(json.loads(line))
                   for line in text.splitlines() if line.strip())

    @classmethod
    def load(cls, path) -> "Registry":
        with open(path, encoding="utf-8") as fh:
            return cls.from_jsonl(fh.read())


@dataclass(frozen=True)
class StatusCounts:
    status: dict
    outcome: dict

    @property
    def total(self) -> int:
        return sum(self.status.values())

    def to_dict(self) -> dict:
        return {"status": dict(self.status), "outcome": dict(self.outcome), "total": self.total}


def upsert_case(registry: Registry, obs: CaseObservation) -> str:
    return registry.upsert_case(obs)


def backtrack(registry: Registry, case_id: str) -> list[str]:
    return registry.backtrack(case_id)


def status_counts(registry: Registry) -> StatusCounts:
    return registry.status_counts()
