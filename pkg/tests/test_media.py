import datetime as dt
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from outbreaknet.errors import DegenerateVariance, EmptyIntersection, MisalignedSeries, NotFound
from outbreaknet.ingest import QueryWindow, RawReport, SourceMedium
from outbreaknet.media import (Granularity, TimeSeries, align, bucket_counts, lookup_count,
                               pearson, period_starts, series_from_records, table_totals)

D = dt.date


def series(values, start=D(2014, 1, 6), step=7, label="s"):
    return TimeSeries(label, "weekly",
                      tuple((start + dt.timedelta(days=step * i), v) for i, v in enumerate(values)))


def rep(day, headline="h"):
    return RawReport(SourceMedium.NEWS_DB, "CNN", headline, day)


def test_bucket_empty():
    w = QueryWindow(D(2014, 4, 16), D(2014, 6, 30))
    s = bucket_counts([], "monthly", w)
    assert s.values == [0, 0, 0]
    assert s.periods == [D(2014, 4, 16), D(2014, 5, 1), D(2014, 6, 1)]


def test_bucket_two_months():
    days = [D(2014, 8, d) for d in (1, 9, 20, 31)] + [D(2014, 9, 2), D(2014, 9, 30)]
    reports = [rep(d, f"story {i}") for i, d in enumerate(days)]
    s = bucket_counts(reports, "monthly", QueryWindow(D(2014, 8, 1), D(2014, 9, 30)))
    assert s.values == [4, 2]


def test_bucket_weekly_and_dedupe():
    w = QueryWindow(D(2014, 3, 19), D(2014, 4, 1))
    reports = [rep(D(2014, 3, 19), "a"), rep(D(2014, 3, 25), "A."), rep(D(2014, 3, 26), "b"),
               rep(D(2014, 5, 1), "c")]
    s = bucket_counts(reports, Granularity.WEEKLY, w)
    assert s.periods == [D(2014, 3, 19), D(2014, 3, 26)]
    assert s.values == [1, 1]


def test_period_starts_weekly_partial():
    assert len(period_starts(QueryWindow(D(2014, 1, 1), D(2014, 1, 15)), "weekly")) == 3


@pytest.mark.parametrize("outlet,start,end,count", [
    ("CNN", "2014-08-01", "2014-08-31", 412),
    ("BBC", "2014-08-01", "2014-08-31", 246),
    ("BBC", "2014-05-01", "2014-05-31", 1),
    ("CNN", "2014-04-16", "2014-10-15", 1593),
    ("BBC-All Sources", "2014-04-16", "2014-10-15", 650),
])
def test_lookup(table1, outlet, start, end, count):
    assert lookup_count(table1, outlet, (start, end)) == count


def test_lookup_missing(table1):
    with pytest.raises(NotFound):
        lookup_count(table1, "CNN", ("2014-01-01", "2014-01-31"))


def test_table_totals_not_reconciled(table1):
    cnn, bbc = table_totals(table1, "CNN"), table_totals(table1, "BBC")
    assert (cnn.period_sum, cnn.stated_total, cnn.discrepancy) == (1604, 1593, 11)
    assert (bbc.period_sum, bbc.stated_total, bbc.discrepancy) == (651, 650, 1)
    # the stored total is returned untouched
    assert lookup_count(table1, "CNN", ("2014-04-16", "2014-10-15")) == 1593


def test_series_from_table(table1):
    s = series_from_records(table1, "CNN")
    assert s.values == [11, 3, 4, 123, 412, 316, 735]
    assert s.periods[0] == D(2014, 4, 16)


def test_table_series_correlation(table1):
    cnn, bbc = align(series_from_records(table1, "CNN"), series_from_records(table1, "BBC"))
    assert pearson(cnn, bbc) == pytest.approx(np.corrcoef(cnn.values, bbc.values)[0, 1], abs=1e-12)


def test_pearson_identities():
    a = series([1, 5, 2, 8])
    assert pearson(a, a) == 1.0
    assert pearson(a, series([-1, -5, -2, -8])) == -1.0


def test_pearson_reference_value():
    got = pearson(series([1, 2, 3, 4]), series([2, 4, 5, 9]))
    # sum dx*dy = 11, sum dx^2 = 5, sum dy^2 = 26
    assert got == pytest.approx(11 / math.sqrt(130), abs=1e-9)
    assert got == pytest.approx(0.9647638212, abs=1e-9)


def test_pearson_errors():
    with pytest.raises(DegenerateVariance):
        pearson(series([3, 3, 3]), series([1, 2, 3]))
    with pytest.raises(MisalignedSeries):
        pearson(series([1, 2, 3]), series([1, 2]))


def test_align():
    a, b = series([1, 2, 3]), series([4, 5, 6])
    assert align(a, b) == (a, b)
    five = series([1, 2, 3, 4, 5])
    four = series([9, 8, 7, 6], start=D(2014, 1, 20))
    x, y = align(five, four)
    assert len(x) == len(y) == 3
    with pytest.raises(EmptyIntersection):
        align(series([1, 2]), series([1, 2], start=D(2015, 1, 5)))
    monthly = TimeSeries("m", "monthly", ((D(2014, 1, 1), 1),))
    with pytest.raises(MisalignedSeries):
        align(a, monthly)


def test_series_csv_roundtrip():
    s = series([1, 2.5, 0])
    assert TimeSeries.from_csv(s.to_csv(), "s", "weekly") == s


@given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6)), min_size=3, max_size=30))
def test_pearson_matches_numpy(pairs):
    xs, ys = [p[0] for p in pairs], [p[1] for p in pairs]
    if np.ptp(xs) < 1e-3 or np.ptp(ys) < 1e-3:
        return
    r = pearson(series(xs), series(ys))
    assert -1.0 <= r <= 1.0
    assert r == pytest.approx(np.corrcoef(xs, ys)[0, 1], abs=1e-7)
