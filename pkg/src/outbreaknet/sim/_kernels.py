"""Day-loop kernels for the spread simulator.

Two interchangeable implementations of one model:

* ``run_numba``: a scalar loop compiled with ``numba.njit``;
* ``run_numpy``: the same day loop with each phase vectorised in numpy.

Both consume uniforms from the supplied ``numpy.random.Generator`` one
double at a time, in this order for each day ``t``:

1. incubation for everyone exposed on the previous day (or the seed on day
   0), ascending person index: ``lo + floor(u * (hi - lo + 1))``;
2. one Bernoulli per (infectious person, neighbour) pair, infectious people
   ascending and neighbours ascending, for every neighbour that was
   susceptible at the start of the phase; the first success in that order
   is recorded as the infector;
3. one Bernoulli (``u < cfr``) per person whose symptoms began on day ``t``,
   ascending; then one death-delay draw per person who will die, ascending.

Since only doubles are drawn, the two kernels produce identical results for
the same generator state. ``OUTBREAKNET_DISABLE_NUMBA=1`` forces the numpy
kernel.
"""
from __future__ import annotations

import os

import numpy as np

NEVER = np.iinfo(np.int64).max // 4

# person states
SUSCEPTIBLE, EXPOSED, INFECTIOUS, REMOVED = 0, 1, 2, 3

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def numba_disabled() -> bool:
    return os.environ.get("OUTBREAKNET_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}


def default_backend() -> str:
    return "numba" if HAVE_NUMBA and not numba_disabled() else "numpy"


@njit(cache=True)
def _uniform_int(u, lo, hi):
    span = hi - lo + 1
    k = int(u * span)
    if k >= span:
        k = span - 1
    return lo + k


@njit(cache=True, nogil=True)
def run_numba(rng, indptr, indices, home, q_day0, tr_person, tr_dest, tr_day, tr_qflag,
              seed, p, inc_lo, inc_hi, d_lo, d_hi, cfr, period, max_days):
    n = home.shape[0]
    state = np.zeros(n, np.int64)
    exposure = np.full(n, -1, np.int64)
    infector = np.full(n, -1, np.int64)
    incubation = np.full(n, -1, np.int64)
    onset = np.full(n, -1, np.int64)
    death_day = np.full(n, -1, np.int64)
    delay = np.full(n, -1, np.int64)
    country = home.copy()
    q_day = q_day0.copy()

    pending = np.empty(n, np.int64)
    n_pending = 1
    pending[0] = seed
    fresh = np.empty(n, np.int64)
    new_onset = np.empty(n, np.int64)
    dying = np.empty(n, np.int64)

    state[seed] = EXPOSED
    exposure[seed] = 0
    n_active = 1
    tp = 0
    duration = max_days

    for t in range(max_days):
        # travel departing today; the dead stay put
        while tp < tr_day.shape[0] and tr_day[tp] <= t:
            if tr_day[tp] == t:
                who = tr_person[tp]
                if not (death_day[who] >= 0 and death_day[who] <= t):
                    country[who] = tr_dest[tp]
                    if tr_qflag[tp] != 0 and q_day[who] > t:
                        q_day[who] = t
            tp += 1

        # infectiousness ends at death or after the infectious period
        for i in range(n):
            if state[i] == INFECTIOUS:
                if (death_day[i] >= 0 and death_day[i] <= t) or t >= onset[i] + period:
                    state[i] = REMOVED
                    n_active -= 1

        if n_active == 0:
            duration = t
            break

        # 1. incubation draws
        for k in range(n_pending):
            i = pending[k]
            inc = _uniform_int(rng.random(), inc_lo, inc_hi)
            incubation[i] = inc
            onset[i] = exposure[i] + (inc if inc >= 1 else 1)
        n_pending = 0

        # symptom onset
        n_onset = 0
        for i in range(n):
            if state[i] == EXPOSED and onset[i] == t:
                state[i] = INFECTIOUS
                new_onset[n_onset] = i
                n_onset += 1

        # 2. transmission
        n_fresh = 0
        for i in range(n):
            if state[i] != INFECTIOUS or q_day[i] <= t:
                continue
            for e in range(indptr[i], indptr[i + 1]):
                j = indices[e]
                if state[j] != SUSCEPTIBLE or q_day[j] <= t or country[j] != country[i]:
                    continue
                if rng.random() < p and infector[j] < 0:
                    infector[j] = i
                    exposure[j] = t
                    fresh[n_fresh] = j
                    n_fresh += 1
        # ascending order for tomorrow's incubation draws
        fresh_sorted = np.sort(fresh[:n_fresh])
        for k in range(n_fresh):
            j = fresh_sorted[k]
            state[j] = EXPOSED
            pending[k] = j
        n_pending = n_fresh
        n_active += n_fresh

        # 3. death draws for today's onsets
        n_dying = 0
        for k in range(n_onset):
            if rng.random() < cfr:
                dying[n_dying] = new_onset[k]
                n_dying += 1
        for k in range(n_dying):
            i = dying[k]
            dd = _uniform_int(rng.random(), d_lo, d_hi)
            delay[i] = dd
            death_day[i] = t + dd

    return (state, exposure, infector, incubation, onset, death_day, delay, q_day, duration)


def run_numpy(rng, indptr, indices, home, q_day0, tr_person, tr_dest, tr_day, tr_qflag,
              seed, p, inc_lo, inc_hi, d_lo, d_hi, cfr, period, max_days):
    n = home.shape[0]
    state = np.zeros(n, np.int64)
    exposure = np.full(n, -1, np.int64)
    infector = np.full(n, -1, np.int64)
    incubation = np.full(n, -1, np.int64)
    onset = np.full(n, -1, np.int64)
    death_day = np.full(n, -1, np.int64)
    delay = np.full(n, -1, np.int64)
    country = home.copy()
    q_day = q_day0.copy()
    degree = np.diff(indptr)

    state[seed] = EXPOSED
    exposure[seed] = 0
    pending = np.array([seed], np.int64)
    duration = max_days

    def draw_ints(k, lo, hi):
        span = hi - lo + 1
        return lo + np.minimum((rng.random(k) * span).astype(np.int64), span - 1)

    for t in range(max_days):
        today = np.flatnonzero(tr_day == t)
        for k in today:
            who = tr_person[k]
            if not (0 <= death_day[who] <= t):
                country[who] = tr_dest[k]
                if tr_qflag[k] and q_day[who] > t:
                    q_day[who] = t

        infectious = state == INFECTIOUS
        ending = infectious & (((death_day >= 0) & (death_day <= t)) | (t >= onset + period))
        state[ending] = REMOVED

        if not np.any((state == EXPOSED) | (state == INFECTIOUS)):
            duration = t
            break

        # 1. incubation draws
        if pending.size:
            inc = draw_ints(pending.size, inc_lo, inc_hi)
            incubation[pending] = inc
            onset[pending] = exposure[pending] + np.maximum(inc, 1)
            pending = pending[:0]

        new_onset = np.flatnonzero((state == EXPOSED) & (onset == t))
        state[new_onset] = INFECTIOUS

        # 2. transmission
        src_nodes = np.flatnonzero((state == INFECTIOUS) & (q_day > t))
        if src_nodes.size:
            counts = degree[src_nodes]
            src = np.repeat(src_nodes, counts)
            starts = np.repeat(indptr[src_nodes], counts)
            offsets = np.arange(src.size) - np.repeat(np.cumsum(counts) - counts, counts)
            dst = indices[starts + offsets]
            ok = (state[dst] == SUSCEPTIBLE) & (q_day[dst] > t) & (country[dst] == country[src])
            src, dst = src[ok], dst[ok]
            hit = rng.random(dst.size) < p
            hit_dst, first = np.unique(dst[hit], return_index=True)
            infector[hit_dst] = src[hit][first]
            exposure[hit_dst] = t
            state[hit_dst] = EXPOSED
            pending = hit_dst

        # 3. death draws
        if new_onset.size:
            dies = new_onset[rng.random(new_onset.size) < cfr]
            if dies.size:
                dd = draw_ints(dies.size, d_lo, d_hi)
                delay[dies] = dd
                death_day[dies] = t + dd

    return (state, exposure, infector, incubation, onset, death_day, delay, q_day, duration)


KERNELS = {"numba": run_numba, "numpy": run_numpy}
