"""Bundled reference data and small synthetic generators.

The files live in ``outbreaknet/data``; ``path(name)`` gives a filesystem
path to one of them.
"""
from __future__ import annotations

import datetime as dt
import random
from importlib import resources

from .analytics import read_events
from .ingest import read_table
from .network import load_case_network
from .registry import CaseObservation, Outcome, Registry, Role, SourceTier, Status

NETWORKS = ("nigeria", "us", "west_africa")
SIM_CONFIGS = ("star", "saturated", "border")


def path(name: str):
    ref = resources.files(__package__) / "data" / name
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return ref


def media_counts():
    return read_table(path("media_counts.csv"), "media_counts")


def case_sources():
    return read_table(path("case_sources.csv"), "case_sources")


def promed_reports():
    return read_table(path("promed_reports.csv"), "reports")


def headline_corpus() -> list[str]:
    return path("promed_corpus.txt").read_text(encoding="utf-8").splitlines()


def malformed_headlines() -> list[str]:
    return path("promed_malformed.txt").read_text(encoding="utf-8").splitlines()


def case_network(name: str):
    if name not in NETWORKS:
        raise ValueError(f"unknown network {name!r}; choose from {NETWORKS}")
    return load_case_network(path(f"{name}.jsonl"))


def milestones():
    return read_events(path("milestones.csv"))


def sim_config(name: str):
    from .sim import SimConfig
    if name not in SIM_CONFIGS:
        raise ValueError(f"unknown simulator config {name!r}; choose from {SIM_CONFIGS}")
    return SimConfig.load(path(f"sim_{name}.json"))


# ---------------------------------------------------------------------------
# synthetic registries
# ---------------------------------------------------------------------------

def cohort_registry(cases: int, deaths: int, role: Role = Role.COMMUNITY,
                    country: str = "Guinea", start=dt.date(2014, 3, 19)) -> Registry:
    """``cases`` distinct named records of which the first ``deaths`` died."""
    if not 0 <= deaths <= cases:
        raise ValueError("need 0 <= deaths <= cases")
    reg = Registry()
    for i in range(cases):
        reg.upsert_case(CaseObservation(
            country=country, status=Status.CONFIRMED,
            report_date=start + dt.timedelta(days=i % 200),
            person_name=f"{role.value} {i:05d}",
            outcome=Outcome.DEAD if i < deaths else Outcome.RECOVERED,
            role=role, source_tier=SourceTier.OFFICIAL, source_ref="synthetic line list"))
    return reg


def sitrep_registry() -> Registry:
    """Cumulative total behind the widely quoted CFR: 8,997 cases, 4,493 deaths."""
    return cohort_registry(8997, 4493)


def hcw_registry() -> Registry:
    """Health-care worker cohort: 427 cases, 236 deaths."""
    return cohort_registry(427, 236, role=Role.HEALTHCARE_WORKER)


_COUNTRIES = ("Guinea", "Liberia", "Sierra Leone", "Nigeria", "Senegal", "Mali")


def random_registry(n: int = 1000, seed: int = 0) -> Registry:
    """``n`` records with varied fields, some merged from several observations."""
    rnd = random.Random(seed)
    reg = Registry()
    start = dt.date(2014, 3, 1)
    opt = lambda v: v if rnd.random() < 0.7 else None
    while len(reg) < n:
        i = len(reg)
        obs = CaseObservation(
            country=rnd.choice(_COUNTRIES),
            status=rnd.choice(list(Status)),
            report_date=start + dt.timedelta(days=rnd.randrange(240)),
            person_name=f"person {i:05d}",
            village=opt(f"village {rnd.randrange(400)}"),
            hospital=opt(f"hospital {rnd.randrange(50)}"),
            outcome=rnd.choice(list(Outcome)),
            role=rnd.choice(list(Role)),
            source_tier=rnd.choice(list(SourceTier)),
            source_ref=f"report {rnd.randrange(10**6)}, \"quoted\" é",
        )
        cid = reg.upsert_case(obs)
        if rnd.random() < 0.2:  # a later follow-up for the same person
            reg.upsert_case(CaseObservation(
                country=obs.country, status=rnd.choice(list(Status)),
                report_date=obs.report_date + dt.timedelta(days=rnd.randrange(1, 30)),
                person_name=obs.person_name, outcome=rnd.choice(list(Outcome)),
                village=opt(f"village {rnd.randrange(400)}"),
                source_tier=rnd.choice(list(SourceTier)), source_ref=f"follow-up of {cid}"))
    return reg
