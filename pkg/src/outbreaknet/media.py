"""Media-attention time series and their correlation."""
from __future__ import annotations

import csv
import datetime as dt
import enum
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from ._util import parse_date
from .errors import (DegenerateVariance, EmptyIntersection, MisalignedSeries, NotFound)
from .ingest import QueryWindow, RawReport, dedupe_reports


class Granularity(str, enum.Enum):
    WEEKLY = "weekly"
    MONTHLY = "monthly"


@dataclass(frozen=True)
class MediaQueryRecord:
    database: str
    outlet: str
    keyword: str
    window: QueryWindow
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be non-negative")

    def to_dict(self):
        return {"database": self.database, "outlet": self.outlet, "keyword": self.keyword,
                "start_date": self.window.start_date.isoformat(),
                "end_date": self.window.end_date.isoformat(), "count": self.count}


@dataclass(frozen=True)
class TimeSeries:
    label: str
    granularity: Granularity
    points: tuple  # ((period_start, value), ...)

    def __post_init__(self):
        object.__setattr__(self, "granularity", Granularity(self.granularity))
        pts = tuple((parse_date(p), float(v)) for p, v in self.points)
        periods = [p for p, _ in pts]
        if any(a >= b for a, b in zip(periods, periods[1:])):
            raise ValueError("series periods must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def periods(self) -> list[dt.date]:
        return [p for p, _ in self.points]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.points]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("period_start", "value"))
        for p, v in self.points:
            w.writerow((p.isoformat(), int(v) if v.is_integer() else repr(v)))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, label: str = "", granularity="monthly") -> "TimeSeries":
        rows = list(csv.reader(io.StringIO(text)))
        if rows and rows[0] and rows[0][0] == "period_start":
            rows = rows[1:]
        return cls(label, granularity, tuple((r[0], float(r[1])) for r in rows if r))


def _month_start(d: dt.date) -> dt.date:
    return d.replace(day=1)


def _next_month(d: dt.date) -> dt.date:
    return dt.date(d.year + d.month // 12, d.month % 12 + 1, 1)


def period_starts(window: QueryWindow, granularity) -> list[dt.date]:
    """Period labels covering ``window``; the first month is clipped to the window start."""
    granularity = Granularity(granularity)
    if granularity is Granularity.WEEKLY:
        n = math.ceil(window.days / 7)
        return [window.start_date + dt.timedelta(days=7 * i) for i in range(n)]
    starts = [window.start_date]
    m = _next_month(window.start_date)
    while m <= window.end_date:
        starts.append(m)
        m = _next_month(m)
    return starts


def _period_index(day: dt.date, window: QueryWindow, granularity: Granularity) -> int:
    if granularity is Granularity.WEEKLY:
        return (day - window.start_date).days // 7
    s = window.start_date
    return (day.year - s.year) * 12 + day.month - s.month


def bucket_counts(reports: Iterable[RawReport], granularity, window: QueryWindow,
                  label: str = "") -> TimeSeries:
    """Count de-duplicated in-window reports per week or calendar month.

    Weeks are 7-day spans from the window start. De-duplication runs over
    the in-window reports only.
    """
    granularity = Granularity(granularity)
    starts = period_starts(window, granularity)
    counts = [0] * len(starts)
    for r in dedupe_reports([r for r in reports if r.posted_date in window]):
        counts[_period_index(r.posted_date, window, granularity)] += 1
    return TimeSeries(label or window.keyword, granularity, tuple(zip(starts, counts)))


# ---------------------------------------------------------------------------
# Precomputed query logs
# ---------------------------------------------------------------------------

def _outlet_matches(query: str, outlet: str) -> bool:
    q = query.strip().casefold()
    o = outlet.strip().casefold()
    return q == o or q == o.split("-", 1)[0].strip()


def _as_window(period) -> QueryWindow:
    if isinstance(period, QueryWindow):
        return period
    start, end = period
    return QueryWindow(parse_date(start), parse_date(end))


def lookup_count(records: Sequence[MediaQueryRecord], outlet: str, period) -> int:
    """Count stored for an exact (outlet, window) pair.

    ``outlet`` matches the stored name or its prefix before the first ``-``
    ("CNN" finds "CNN-All Sources").
    """
    w = _as_window(period)
    for rec in records:
        if (_outlet_matches(outlet, rec.outlet)
                and rec.window.start_date == w.start_date
                and rec.window.end_date == w.end_date):
            return rec.count
    raise NotFound(f"no count for {outlet} over {w.start_date}..{w.end_date}")


def _contains(outer: QueryWindow, inner: QueryWindow) -> bool:
    return (outer.start_date <= inner.start_date and inner.end_date <= outer.end_date
            and (outer.start_date, outer.end_date) != (inner.start_date, inner.end_date))


def _split_rows(records, outlet):
    rows = [r for r in records if _outlet_matches(outlet, r.outlet)]
    if not rows:
        raise NotFound(f"no records for outlet {outlet!r}")
    totals = [r for r in rows if any(_contains(r.window, o.window) for o in rows)]
    parts = sorted((r for r in rows if r not in totals), key=lambda r: r.window.start_date)
    return totals, parts


def series_from_records(records: Sequence[MediaQueryRecord], outlet: str) -> TimeSeries:
    """Monthly series from the per-period rows of a query log (total rows dropped)."""
    _, parts = _split_rows(records, outlet)
    return TimeSeries(outlet, Granularity.MONTHLY,
                      tuple((r.window.start_date, r.count) for r in parts))


@dataclass(frozen=True)
class TableTotals:
    outlet: str
    period_sum: int
    stated_total: int | None

    @property
    def discrepancy(self) -> int | None:
        if self.stated_total is None:
            return None
        return self.period_sum - self.stated_total


def table_totals(records: Sequence[MediaQueryRecord], outlet: str) -> TableTotals:
    """Sum of per-period counts next to the separately queried full-window count.

    The two are reported side by side; de-duplication over a long window can
    legitimately give a smaller number than the sum of its parts.
    """
    totals, parts = _split_rows(records, outlet)
    stated = max(totals, key=lambda r: r.window.days).count if totals else None
    return TableTotals(outlet, sum(r.count for r in parts), stated)


# ---------------------------------------------------------------------------
# Correlation
# ---------------------------------------------------------------------------

def align(a: TimeSeries, b: TimeSeries) -> tuple[TimeSeries, TimeSeries]:
    """Restrict both series to their common periods."""
    if a.granularity is not b.granularity:
        raise MisalignedSeries(f"cannot align {a.granularity.value} with {b.granularity.value}")
    common = set(a.periods) & set(b.periods)
    if not common:
        raise EmptyIntersection(f"{a.label!r} and {b.label!r} share no periods")
    pick = lambda s: TimeSeries(s.label, s.granularity,
                                tuple(p for p in s.points if p[0] in common))
    return pick(a), pick(b)


def pearson(a: TimeSeries, b: TimeSeries) -> float:
    """Pearson product-moment correlation of two aligned series."""
    if a.periods != b.periods:
        raise MisalignedSeries("series must cover identical periods; call align() first")
    n = len(a)
    if n < 2:
        raise MisalignedSeries("need at least two periods")
    xs, ys = a.values, b.values
    mx, my = math.fsum(xs) / n, math.fsum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise DegenerateVariance("a series with zero variance has no correlation")
    r = math.fsum(p * q for p, q in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))
