import datetime as dt
import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from outbreaknet import fixtures
from outbreaknet.errors import DateParseError, MalformedHeadline, SchemaError
from outbreaknet.ingest import (QueryWindow, RawReport, SourceMedium, dedupe_reports,
                                drop_summaries, filter_reports, ingest_report_table,
                                normalize_headline, parse_headline_lines,
                                parse_promed_headline, read_table, write_reports_table)

D = dt.date


def report(headline, day=D(2014, 8, 1), outlet="CNN", **kw):
    return RawReport(SourceMedium.NEWS_DB, outlet, headline, day, **kw)


# -- headlines -----------------------------------------------------------------

def test_headline_with_sequence():
    h = parse_promed_headline("UNDIAGNOSED VIRAL HEMORRHAGIC FEVER - GUINEA (02): EBOLA CONFIRMED")
    assert h.disease == "UNDIAGNOSED VIRAL HEMORRHAGIC FEVER"
    assert h.region == "GUINEA"
    assert h.sequence == 2
    assert h.detail == "EBOLA CONFIRMED"
    assert h.qualifiers == {"CONFIRMED"}


def test_headline_rfi_without_sequence():
    h = parse_promed_headline(
        "UNDIAGNOSED VIRAL HEMORRHAGIC FEVER - GUINEA: (NZEREKORE) REQUEST FOR INFORMATION")
    assert h.region == "GUINEA"
    assert h.sequence is None
    assert h.detail == "(NZEREKORE) REQUEST FOR INFORMATION"
    assert h.qualifiers == {"RFI"}


def test_minimal_headline():
    h = parse_promed_headline("X - Y: Z")
    assert (h.disease, h.region, h.sequence, h.detail, h.qualifiers) == ("X", "Y", None, "Z", set())


def test_qualifiers_are_whole_words():
    h = parse_promed_headline("EBOLA - LIBERIA: UNCONFIRMED RUMOURS, RFI")
    assert h.qualifiers == {"RFI"}


def test_disease_is_uppercased():
    assert parse_promed_headline("ebola - mali: x").disease == "EBOLA"


@pytest.mark.parametrize("line", [
    "EBOLA GUINEA: no separator",
    "EBOLA - GUINEA no colon",
    " - GUINEA: no disease",
    "EBOLA - (3): no region",
    "EBOLA - GUINEA (0): zero",
    "EBOLA - GUINEA (-2): negative",
    "",
    "   ",
])
def test_malformed_headlines(line):
    with pytest.raises(MalformedHeadline):
        parse_promed_headline(line)


def test_line_numbers_in_errors():
    lines = ["X - Y: Z", "", "broken", "A - B (3): C"]
    with pytest.raises(MalformedHeadline, match="line 3") as info:
        parse_headline_lines(lines)
    assert info.value.line_number == 3
    parsed, errors = parse_headline_lines(lines, collect_errors=True)
    assert [n for n, _ in parsed] == [1, 4]
    assert [e.line_number for e in errors] == [3]


_token = st.text(alphabet="ABCDEFGHIJKLMNOPQRSTUVWXYZ ", min_size=1, max_size=20).map(str.strip) \
    .filter(bool)


@given(_token, _token, st.none() | st.integers(1, 999),
       st.text(alphabet="ABCDEFGHIJ ,()", max_size=30).map(str.strip))
def test_render_roundtrip(disease, region, seq, detail):
    h = parse_promed_headline(f"{disease} - {region}{'' if seq is None else f' ({seq})'}: {detail}")
    assert parse_promed_headline(h.render()) == h


# -- tables --------------------------------------------------------------------

def test_case_sources_first_row():
    rows = fixtures.case_sources()
    first = rows[0]
    assert first.outlet == "Daily Observer (Liberia)"
    assert first.posted_date == D(2014, 4, 5)
    assert first.headline == "Ebola claims another victim"
    assert first.body_fields["diagram"] == "West Africa"


def test_case_sources_fill_down_and_official_outlets():
    rows = fixtures.case_sources()
    assert len(rows) == 14
    assert [r.body_fields["diagram"] for r in rows].count("Nigeria") == 7
    assert {r.outlet for r in rows if r.source_medium is SourceMedium.OFFICIAL} == {"WHO", "CDC"}


def test_empty_rows():
    assert ingest_report_table([], "reports") == []


def test_malformed_date_names_row():
    rows = [
        ["promed", "ProMED-mail", "A - B: c", "2014-03-19", "", "ebola", "", ""],
        ["promed", "ProMED-mail", "A - B (2): c", "31/02/2014", "", "ebola", "", ""],
        ["promed", "ProMED-mail", "A - B (3): c", "2014-03-21", "", "ebola", "", ""],
    ]
    with pytest.raises(DateParseError, match="row 2") as info:
        ingest_report_table(rows, "reports")
    assert info.value.row == 2


def test_schema_errors():
    with pytest.raises(SchemaError):
        ingest_report_table([["a", "b"]], "reports")
    with pytest.raises(SchemaError):
        ingest_report_table([], "nonsense")
    with pytest.raises(SchemaError, match="header"):
        read_table(io.StringIO("outlet,headline\n"), "reports")


def test_reports_table_roundtrip():
    reports = fixtures.promed_reports()
    again = read_table(io.StringIO(write_reports_table(reports)), "reports")
    assert again == reports


# -- filtering -----------------------------------------------------------------

def five_reports():
    return [
        report("Ebola outbreak in Guinea", D(2014, 3, 20)),
        report("Fever cluster, cause unknown", D(2014, 3, 21)),
        report("EBOLA reaches Liberia", D(2014, 3, 28)),
        report("Cholera update", D(2014, 4, 2)),
        report("Guinea: ebola toll rises", D(2014, 4, 9)),
    ]


def test_filter_by_headline_keyword():
    reports = five_reports()
    window = QueryWindow(D(2014, 1, 1), D(2014, 12, 31), "ebola")
    expected = [r for r in reports if "ebola" in r.headline.lower()]
    got = filter_reports(reports, window, {"headline"})
    assert got == expected and len(got) == 3


def test_window_boundary_is_inclusive():
    reports = five_reports()
    day = reports[2].posted_date
    assert filter_reports(reports, QueryWindow(day, day)) == [reports[2]]


def test_filter_rejects_unknown_field():
    with pytest.raises(ValueError):
        filter_reports([], QueryWindow(D(2014, 1, 1), D(2014, 1, 2)), ["body"])


def test_window_parse():
    w = QueryWindow.parse("2014-03-19:2014-10-15", "ebola")
    assert (w.start_date, w.end_date, w.keyword, w.days) == (D(2014, 3, 19), D(2014, 10, 15),
                                                            "ebola", 211)
    with pytest.raises(ValueError):
        QueryWindow.parse("2014-03-19")
    with pytest.raises(ValueError):
        QueryWindow(D(2014, 5, 1), D(2014, 4, 1))


def test_promed_fixture_relevant_count():
    reports = fixtures.promed_reports()
    assert len(reports) == 272
    window = QueryWindow(D(2014, 3, 19), D(2014, 10, 15), "ebola")
    hits = filter_reports(reports, window, {"post", "subject"})
    assert len(hits) == 272
    assert len(drop_summaries(hits)) == 240


# -- de-duplication ------------------------------------------------------------

def test_normalised_duplicates_collapse_to_earliest():
    late = report("Ebola spreads", D(2014, 8, 3))
    early = report("ebola   spreads.", D(2014, 8, 1))
    assert dedupe_reports([late, early]) == [early]
    assert normalize_headline("  Ebola,  spreads!! ") == "ebola spreads"


def test_outlet_is_part_of_key():
    a = report("Ebola spreads", outlet="CNN")
    b = report("Ebola spreads", outlet="BBC")
    assert dedupe_reports([a, b]) == [a, b]


def test_three_duplicate_pairs():
    base = [report(f"Story {i}", D(2014, 8, 1 + i)) for i in range(7)]
    dups = [report(f"story {i}!", D(2014, 8, 20)) for i in (0, 3, 5)]
    reports = base[:4] + dups + base[4:]
    # brute-force oracle: keep a report unless an equal key appears earlier in time
    keys = [(r.outlet, " ".join("".join(c for c in r.headline.lower() if c.isalnum() or c.isspace()).split()))
            for r in reports]
    expected = [r for i, r in enumerate(reports)
                if not any(keys[j] == keys[i] and (reports[j].posted_date, j) < (r.posted_date, i)
                           for j in range(len(reports)))]
    got = dedupe_reports(reports)
    assert got == expected and len(got) == 7


@given(st.lists(st.tuples(st.sampled_from(["Ebola", "ebola.", "EBOLA  ", "Mali"]),
                          st.integers(1, 28), st.sampled_from(["CNN", "BBC"])), max_size=12))
def test_dedupe_idempotent_and_key_unique(drawn):
    reports = [report(h, D(2014, 8, d), o) for h, d, o in drawn]
    once = dedupe_reports(reports)
    assert dedupe_reports(once) == once
    keys = [(r.outlet, normalize_headline(r.headline)) for r in once]
    assert len(keys) == len(set(keys))
