"""Inputs and outputs of the spread simulator, plus their JSON forms."""
from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

from ..errors import InvalidParams


@dataclass(frozen=True)
class SimParams:
    """Day-granular disease parameters.

    Incubation spans 2-21 days and death follows symptom onset by 6-16
    days. The infectious period defaults to 10 days and transmission starts
    at symptom onset.
    """

    per_contact_transmission_prob: float
    incubation_days: tuple = (2, 21)
    symptom_to_death_days: tuple = (6, 16)
    cfr: float = 0.5
    infectious_period_days: int = 10
    max_days: int = 365

    def __post_init__(self):
        object.__setattr__(self, "incubation_days", tuple(self.incubation_days))
        object.__setattr__(self, "symptom_to_death_days", tuple(self.symptom_to_death_days))
        self.validate()

    def validate(self):
        for name in ("per_contact_transmission_prob", "cfr"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidParams(f"{name} must lie in [0, 1], got {v}")
        for name in ("incubation_days", "symptom_to_death_days"):
            rng = getattr(self, name)
            if len(rng) != 2 or not all(isinstance(x, int) for x in rng):
                raise InvalidParams(f"{name} must be an integer pair [low, high]")
            lo, hi = rng
            if lo < 0 or lo > hi:
                raise InvalidParams(f"{name} needs 0 <= low <= high, got {list(rng)}")
        if self.infectious_period_days < 1:
            raise InvalidParams("infectious_period_days must be >= 1")
        if self.max_days < 1:
            raise InvalidParams("max_days must be >= 1")

    def to_dict(self):
        d = asdict(self)
        d["incubation_days"] = list(self.incubation_days)
        d["symptom_to_death_days"] = list(self.symptom_to_death_days)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "SimParams":
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidParams(str(exc)) from None


@dataclass(frozen=True)
class ScheduledTravel:
    """A planned journey on simulation day ``day``."""

    person: str
    origin: str
    destination: str
    day: int
    quarantined_on_arrival: bool = False
    reason: str = "unknown"


@dataclass
class ContactStructure:
    """People (with home country), undirected contacts and planned travel.

    A contact can only transmit on days when both people are in the same
    country.
    """

    persons: dict  # id -> country
    contact_edges: list = field(default_factory=list)  # (a, b, context)
    travel_schedule: list = field(default_factory=list)

    def __post_init__(self):
        self.contact_edges = [tuple(e) if len(e) == 3 else (e[0], e[1], "unknown")
                              for e in self.contact_edges]
        for a, b, _ in self.contact_edges:
            for p in (a, b):
                if p not in self.persons:
                    raise InvalidParams(f"contact edge references unknown person {p!r}")
            if a == b:
                raise InvalidParams(f"contact edge {a!r}-{b!r} is a self-loop")
        for t in self.travel_schedule:
            if t.person not in self.persons:
                raise InvalidParams(f"travel references unknown person {t.person!r}")
            if t.day < 0:
                raise InvalidParams("travel day must be >= 0")

    @classmethod
    def from_dict(cls, d: Mapping) -> "ContactStructure":
        persons = {p["id"]: p.get("country", "") for p in d.get("persons", ())}
        edges = [(e["a"], e["b"], e.get("context", "unknown")) for e in d.get("contact_edges", ())]
        travel = [ScheduledTravel(**t) for t in d.get("travel_schedule", ())]
        return cls(persons, edges, travel)

    def to_dict(self):
        return {
            "persons": [{"id": k, "country": v} for k, v in self.persons.items()],
            "contact_edges": [{"a": a, "b": b, "context": c} for a, b, c in self.contact_edges],
            "travel_schedule": [asdict(t) for t in self.travel_schedule],
        }

    # convenience builders used by tests, examples and the benchmark

    @classmethod
    def star(cls, leaves: int, country: str = "X") -> "ContactStructure":
        persons = {"hub": country}
        persons.update({f"leaf{i:03d}": country for i in range(leaves)})
        return cls(persons, [("hub", f"leaf{i:03d}", "family") for i in range(leaves)])

    @classmethod
    def complete(cls, n: int, country: str = "X") -> "ContactStructure":
        ids = [f"p{i:03d}" for i in range(n)]
        return cls({i: country for i in ids},
                   [(a, b, "family") for k, a in enumerate(ids) for b in ids[k + 1:]])


class InterventionKind(str, enum.Enum):
    QUARANTINE_PERSON = "quarantine_person"
    CLOSE_BORDER = "close_border"


@dataclass(frozen=True)
class Intervention:
    kind: InterventionKind
    target: object  # person id, or a (country, country) pair for close_border
    effective_day: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", InterventionKind(self.kind))
        if self.kind is InterventionKind.CLOSE_BORDER:
            if isinstance(self.target, str) or len(self.target) != 2:
                raise InvalidParams("close_border target must be a pair of countries")
            object.__setattr__(self, "target", tuple(self.target))
        if self.effective_day < 0:
            raise InvalidParams("effective_day must be >= 0")

    def to_dict(self):
        target = list(self.target) if isinstance(self.target, tuple) else self.target
        return {"kind": self.kind.value, "target": target, "effective_day": self.effective_day}

    @classmethod
    def quarantine(cls, person: str, day: int = 0) -> "Intervention":
        return cls(InterventionKind.QUARANTINE_PERSON, person, day)

    @classmethod
    def close_border(cls, a: str, b: str, day: int = 0) -> "Intervention":
        return cls(InterventionKind.CLOSE_BORDER, (a, b), day)


class Disposition(str, enum.Enum):
    NEVER_INFECTED = "never_infected"
    RECOVERED = "recovered"
    DEAD = "dead"
    QUARANTINED = "quarantined"
    ACTIVE = "active"  # still incubating or infectious when the horizon is reached


@dataclass
class OutbreakResult:
    seed_person: str
    dispositions: dict
    infection_tree: list  # (infector, infectee, day)
    total_infected: int
    total_dead: int
    duration_days: int
    incubation_draws: dict = field(default_factory=dict)
    death_delay_draws: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "seed_person": self.seed_person,
            "total_infected": self.total_infected,
            "total_dead": self.total_dead,
            "duration_days": self.duration_days,
            "dispositions": {k: Disposition(v).value for k, v in self.dispositions.items()},
            "infection_tree": [list(e) for e in self.infection_tree],
            "incubation_draws": dict(self.incubation_draws),
            "death_delay_draws": dict(self.death_delay_draws),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True) + "\n"

    def out_degree(self, person: str) -> int:
        return sum(1 for src, _, _ in self.infection_tree if src == person)


@dataclass
class SimConfig:
    contacts: ContactStructure
    params: SimParams
    seed_person: str | None = None
    interventions: Sequence[Intervention] = ()

    @classmethod
    def from_dict(cls, d: Mapping) -> "SimConfig":
        return cls(
            ContactStructure.from_dict(d),
            SimParams.from_dict(d.get("params", {})),
            d.get("seed_person"),
            [Intervention(**i) for i in d.get("interventions", ())],
        )

    @classmethod
    def load(cls, path) -> "SimConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        d = self.contacts.to_dict()
        d["params"] = self.params.to_dict()
        d["seed_person"] = self.seed_person
        d["interventions"] = [i.to_dict() for i in self.interventions]
        return d
