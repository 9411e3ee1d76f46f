"""Simulation entry points: single seeded runs and reproducible ensembles."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import InvalidParams, UnknownSeedPerson
from . import _kernels
from ._kernels import EXPOSED, INFECTIOUS, KERNELS, NEVER
from .model import (ContactStructure, Disposition, Intervention, InterventionKind,
                    OutbreakResult, SimParams)


@dataclass
class _Prepared:
    ids: list
    seed: int
    arrays: tuple  # indptr, indices, home, q_day0, tr_person, tr_dest, tr_day, tr_qflag


def _prepare(contacts: ContactStructure, params: SimParams, seed_person,
             interventions: Sequence[Intervention]) -> _Prepared:
    params.validate()
    if seed_person not in contacts.persons:
        raise UnknownSeedPerson(seed_person)
    ids = sorted(contacts.persons)
    index = {p: i for i, p in enumerate(ids)}
    n = len(ids)

    countries = sorted(set(contacts.persons.values())
                       | {t.destination for t in contacts.travel_schedule}
                       | {t.origin for t in contacts.travel_schedule})
    code = {c: i for i, c in enumerate(countries)}
    home = np.array([code[contacts.persons[p]] for p in ids], np.int64)

    nbrs = [set() for _ in range(n)]
    for a, b, _ in contacts.contact_edges:
        nbrs[index[a]].add(index[b])
        nbrs[index[b]].add(index[a])
    indptr = np.zeros(n + 1, np.int64)
    indptr[1:] = np.cumsum([len(s) for s in nbrs])
    indices = np.array([j for s in nbrs for j in sorted(s)], np.int64)

    q_day = np.full(n, NEVER, np.int64)
    closures = []
    for iv in interventions:
        if iv.effective_day > params.max_days:
            raise InvalidParams(f"intervention day {iv.effective_day} is past the horizon")
        if iv.kind is InterventionKind.QUARANTINE_PERSON:
            if iv.target not in index:
                raise InvalidParams(f"cannot quarantine unknown person {iv.target!r}")
            i = index[iv.target]
            q_day[i] = min(q_day[i], iv.effective_day)
        else:
            closures.append((frozenset(iv.target), iv.effective_day))

    def cancelled(t):
        pair = frozenset((t.origin, t.destination))
        return any(pair == c and day <= t.day for c, day in closures)

    travel = sorted((t for t in contacts.travel_schedule
                     if not cancelled(t) and t.day < params.max_days),
                    key=lambda t: t.day)
    arrays = (
        indptr, indices, home, q_day,
        np.array([index[t.person] for t in travel], np.int64),
        np.array([code[t.destination] for t in travel], np.int64),
        np.array([t.day for t in travel], np.int64),
        np.array([int(t.quarantined_on_arrival) for t in travel], np.int64),
    )
    return _Prepared(ids, index[seed_person], arrays)


def _resolve_backend(backend):
    backend = backend or _kernels.default_backend()
    if backend not in KERNELS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not _kernels.HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return backend


def _run(prep: _Prepared, params: SimParams, rng_seed: int, backend: str) -> OutbreakResult:
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    lo, hi = params.incubation_days
    dlo, dhi = params.symptom_to_death_days
    (state, exposure, infector, incubation, onset, death_day, delay, q_day,
     duration) = KERNELS[backend](
        rng, *prep.arrays, prep.seed, float(params.per_contact_transmission_prob),
        lo, hi, dlo, dhi, float(params.cfr), params.infectious_period_days, params.max_days)
    duration = int(duration)
    period = params.infectious_period_days
    ids = prep.ids

    dispositions = {}
    for i, pid in enumerate(ids):
        if exposure[i] < 0:
            d = Disposition.NEVER_INFECTED
        elif death_day[i] >= 0:
            d = Disposition.DEAD
        else:
            end = onset[i] + period if onset[i] >= 0 else duration
            if q_day[i] <= min(end, duration):
                d = Disposition.QUARANTINED
            elif state[i] == EXPOSED or (state[i] == INFECTIOUS and end > duration):
                d = Disposition.ACTIVE
            else:
                d = Disposition.RECOVERED
        dispositions[pid] = d.value

    infected = np.flatnonzero(exposure >= 0)
    tree = sorted(((ids[infector[j]], ids[j], int(exposure[j]))
                   for j in infected if infector[j] >= 0),
                  key=lambda e: (e[2], e[1]))
    return OutbreakResult(
        seed_person=ids[prep.seed],
        dispositions=dispositions,
        infection_tree=tree,
        total_infected=int(infected.size),
        total_dead=int(np.count_nonzero(death_day >= 0)),
        duration_days=duration,
        incubation_draws={ids[i]: int(incubation[i]) for i in np.flatnonzero(incubation >= 0)},
        death_delay_draws={ids[i]: int(delay[i]) for i in np.flatnonzero(delay >= 0)},
    )


def simulate(contacts: ContactStructure, params: SimParams, seed_person: str,
             interventions: Sequence[Intervention] = (), rng_seed: int = 0,
             backend: str | None = None) -> OutbreakResult:
    """Run one outbreak from ``seed_person``.

    Deterministic for a given ``rng_seed`` (numpy PCG64), whichever backend
    runs it. See :mod:`outbreaknet.sim._kernels` for the day loop and the
    order in which random numbers are drawn.
    """
    prep = _prepare(contacts, params, seed_person, interventions)
    return _run(prep, params, rng_seed, _resolve_backend(backend))


def derive_seed(master_seed: int, run: int) -> int:
    """Per-run seed, a pure function of (master seed, run index)."""
    ss = np.random.SeedSequence([int(master_seed), int(run)])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class Distribution:
    mean: float
    variance: float
    sem: float
    median: float
    q05: float
    q25: float
    q75: float
    q95: float
    min: int
    max: int

    @classmethod
    def of(cls, values: Sequence[int]) -> "Distribution":
        vals = [int(v) for v in values]
        n = len(vals)
        total = sum(vals)
        mean = Fraction(total, n)
        var = Fraction(sum(v * v for v in vals), n) - mean * mean
        arr = np.asarray(vals, dtype=np.float64)
        q = np.quantile(arr, [0.05, 0.25, 0.5, 0.75, 0.95])
        return cls(float(mean), float(var), float(np.sqrt(float(var) / n)), float(q[2]),
                   float(q[0]), float(q[1]), float(q[3]), float(q[4]), min(vals), max(vals))

    def to_dict(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class EnsembleSummary:
    n_runs: int
    master_seed: int
    total_infected: Distribution
    total_dead: Distribution
    dead_fraction: float | None
    incubation_range: tuple | None
    death_delay_range: tuple | None
    runs: tuple = ()  # (total_infected, total_dead) per run, when kept

    def to_dict(self):
        return {
            "n_runs": self.n_runs,
            "master_seed": self.master_seed,
            "total_infected": self.total_infected.to_dict(),
            "total_dead": self.total_dead.to_dict(),
            "dead_fraction": self.dead_fraction,
            "incubation_range": None if self.incubation_range is None else list(self.incubation_range),
            "death_delay_range": None if self.death_delay_range is None else list(self.death_delay_range),
        }


def ensemble(contacts: ContactStructure, params: SimParams, seed_person: str,
             interventions: Sequence[Intervention] = (), n_runs: int = 1000,
             master_seed: int = 0, backend: str | None = None, workers: int = 1,
             keep_runs: bool = False) -> EnsembleSummary:
    """Run ``n_runs`` independent outbreaks and summarise their sizes.

    Run ``i`` uses ``derive_seed(master_seed, i)``, so results do not depend
    on ``workers``.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    prep = _prepare(contacts, params, seed_person, interventions)
    backend = _resolve_backend(backend)

    def one(i):
        return _run(prep, params, derive_seed(master_seed, i), backend)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(n_runs)))
    else:
        results = [one(i) for i in range(n_runs)]

    infected = [r.total_infected for r in results]
    dead = [r.total_dead for r in results]
    inc = [v for r in results for v in r.incubation_draws.values()]
    dd = [v for r in results for v in r.death_delay_draws.values()]
    total_inf = sum(infected)
    return EnsembleSummary(
        n_runs=n_runs,
        master_seed=master_seed,
        total_infected=Distribution.of(infected),
        total_dead=Distribution.of(dead),
        dead_fraction=float(Fraction(sum(dead), total_inf)) if total_inf else None,
        incubation_range=(min(inc), max(inc)) if inc else None,
        death_delay_range=(min(dd), max(dd)) if dd else None,
        runs=tuple(zip(infected, dead)) if keep_runs else (),
    )
