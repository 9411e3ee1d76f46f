"""Parsing and normalisation of surveillance inputs.

Handles three kinds of input:

* ProMED-style headlines (``DISEASE - REGION (SEQ): DETAIL``),
* delimited exports of media databases and case-source tables,
* collections of generic reports, which can be windowed, keyword-filtered
  and de-duplicated.
"""
from __future__ import annotations

import csv
import datetime as dt
import enum
import io
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ._util import parse_date
from .errors import DateParseError, MalformedHeadline, SchemaError


class SourceMedium(str, enum.Enum):
    PROMED = "promed"
    NEWS_DB = "news_db"
    OFFICIAL = "official"
    OTHER = "other"


QUALIFIERS = ("RFI", "SUSPECTED", "CONFIRMED", "PROBABLE")

_QUALIFIER_PATTERNS = (
    ("RFI", re.compile(r"\bRFI\b|\bREQUEST\s+FOR\s+INFORMATION\b", re.I)),
    ("SUSPECTED", re.compile(r"\bSUSPECTED\b", re.I)),
    ("CONFIRMED", re.compile(r"\bCONFIRMED\b", re.I)),
    ("PROBABLE", re.compile(r"\bPROBABLE\b", re.I)),
)
_TRAILING_SEQ = re.compile(r"^(?P<region>.*?)\s*\(\s*(?P<seq>[+-]?\d+)\s*\)$")

# Outlets treated as official when ingesting case-source tables.
OFFICIAL_OUTLETS = frozenset({"WHO", "CDC"})


@dataclass(frozen=True)
class QueryWindow:
    start_date: dt.date
    end_date: dt.date
    keyword: str = ""

    def __post_init__(self):
        object.__setattr__(self, "start_date", parse_date(self.start_date))
        object.__setattr__(self, "end_date", parse_date(self.end_date))
        if self.start_date > self.end_date:
            raise ValueError(
                f"window start {self.start_date} is after end {self.end_date}"
            )

    def __contains__(self, day: dt.date) -> bool:
        return self.start_date <= day <= self.end_date

    @property
    def days(self) -> int:
        return (self.end_date - self.start_date).days + 1

    @classmethod
    def parse(cls, text: str, keyword: str = "") -> "QueryWindow":
        """Build a window from ``START:END`` (ISO dates)."""
        start, sep, end = text.partition(":")
        if not sep:
            raise ValueError(f"window must look like START:END, got {text!r}")
        return cls(parse_date(start), parse_date(end), keyword)


@dataclass(frozen=True)
class ParsedHeadline:
    disease: str
    region: str
    sequence: int | None
    detail: str
    qualifiers: frozenset = frozenset()

    def render(self) -> str:
        seq = f" ({self.sequence})" if self.sequence is not None else ""
        return f"{self.disease} - {self.region}{seq}: {self.detail}"

    def to_dict(self) -> dict:
        return {"disease": self.disease, "region": self.region, "sequence": self.sequence,
                "detail": self.detail, "qualifiers": sorted(self.qualifiers)}


@dataclass(frozen=True)
class RawReport:
    source_medium: SourceMedium
    outlet: str
    headline: str
    posted_date: dt.date
    url: str | None = None
    keywords: frozenset = frozenset()
    body_fields: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "source_medium", SourceMedium(self.source_medium))
        if not isinstance(self.posted_date, dt.date):
            object.__setattr__(self, "posted_date", parse_date(self.posted_date))
        if not self.headline or not self.headline.strip():
            raise ValueError("report headline must be non-empty")
        object.__setattr__(self, "keywords", frozenset(self.keywords))
        object.__setattr__(self, "body_fields", dict(self.body_fields))

    def field_text(self, name: str) -> str:
        if name == "headline":
            return self.headline
        return self.body_fields.get(name, "") or ""

    def to_dict(self) -> dict:
        return {
            "source_medium": self.source_medium.value,
            "outlet": self.outlet,
            "headline": self.headline,
            "posted_date": self.posted_date.isoformat(),
            "url": self.url,
            "keywords": sorted(self.keywords),
            "body_fields": dict(sorted(self.body_fields.items())),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RawReport":
        return cls(
            source_medium=d["source_medium"],
            outlet=d["outlet"],
            headline=d["headline"],
            posted_date=parse_date(d["posted_date"]),
            url=d.get("url"),
            keywords=frozenset(d.get("keywords", ())),
            body_fields=d.get("body_fields", {}),
        )


# ---------------------------------------------------------------------------
# ProMED headlines
# ---------------------------------------------------------------------------

def _qualifiers(detail: str) -> frozenset:
    return frozenset(name for name, pat in _QUALIFIER_PATTERNS if pat.search(detail))


def parse_promed_headline(line: str) -> ParsedHeadline:
    """Parse ``DISEASE - REGION [(SEQ)]: DETAIL``.

    >>> parse_promed_headline("X - Y: Z")
    ParsedHeadline(disease='X', region='Y', sequence=None, detail='Z', qualifiers=frozenset())
    """
    if line is None or not line.strip():
        raise MalformedHeadline("empty headline", line=line)
    text = line.strip()
    disease, sep, rest = text.partition(" - ")
    if not sep:
        raise MalformedHeadline("missing ' - ' separator", line=line)
    head, sep, detail = rest.partition(":")
    if not sep:
        raise MalformedHeadline("missing ':' separator", line=line)

    head = head.strip()
    sequence = None
    m = _TRAILING_SEQ.match(head)
    if m:
        sequence = int(m["seq"])
        if sequence < 1:
            raise MalformedHeadline(f"sequence must be >= 1, got {sequence}", line=line)
        head = m["region"].strip()

    disease = disease.strip().upper()
    if not disease:
        raise MalformedHeadline("empty disease", line=line)
    if not head:
        raise MalformedHeadline("empty region", line=line)
    detail = detail.strip()
    return ParsedHeadline(disease, head, sequence, detail, _qualifiers(detail))


def parse_headline_lines(lines: Iterable[str], collect_errors: bool = False):
    """Parse one headline per line, skipping blank lines.

    Returns a list of ``(line_number, ParsedHeadline)``. With
    ``collect_errors`` the return value is ``(parsed, errors)`` where
    ``errors`` holds the :class:`MalformedHeadline` for each bad line;
    otherwise the first bad line raises.
    """
    parsed, errors = [], []
    for number, raw in enumerate(lines, start=1):
        raw = raw.rstrip("\r\n")
        if not raw.strip():
            continue
        try:
            parsed.append((number, parse_promed_headline(raw)))
        except MalformedHeadline as exc:
            err = MalformedHeadline(str(exc), line_number=number, line=raw)
            if not collect_errors:
                raise err from None
            errors.append(err)
    return (parsed, errors) if collect_errors else parsed


# ---------------------------------------------------------------------------
# Delimited tables
# ---------------------------------------------------------------------------

SCHEMAS: dict[str, tuple[str, ...]] = {
    # Media-database query log, one row per (outlet, window).
    "media_counts": ("Database", "Media", "Key Word", "Time Period",
                     "Non Duplicate Search Result"),
    # Case-source listing; blank Diagram cells continue the previous group.
    "case_sources": ("Diagram", "Date Posted", "Case(s)", "Medium", "Title", "Link"),
    "reports": ("source_medium", "outlet", "headline", "posted_date", "url",
                "keywords", "post", "subject"),
}


def _date_cell(text, row):
    try:
        return parse_date(text)
    except ValueError as exc:
        raise DateParseError(str(exc), row=row) from None


def _period(text, row):
    start, sep, end = text.partition(" - ")
    if not sep:
        raise DateParseError(f"period {text!r} is not 'START - END'", row=row)
    return _date_cell(start, row), _date_cell(end, row)


def ingest_report_table(rows: Iterable[Sequence[str]], schema: str) -> list:
    """Convert data rows (no header) into records.

    ``reports`` and ``case_sources`` rows become :class:`RawReport`;
    ``media_counts`` rows become :class:`~outbreaknet.media.MediaQueryRecord`.
    Row numbers in errors are 1-based over the data rows.
    """
    if schema not in SCHEMAS:
        raise SchemaError(f"unknown schema {schema!r}; expected one of {sorted(SCHEMAS)}")
    width = len(SCHEMAS[schema])
    out = []
    diagram = ""
    for i, row in enumerate(rows, start=1):
        row = [c.strip() for c in row]
        if len(row) != width:
            raise SchemaError(f"row {i}: expected {width} columns for {schema}, got {len(row)}")
        if schema == "media_counts":
            from .media import MediaQueryRecord

            database, outlet, keyword, period, count = row
            start, end = _period(period, i)
            try:
                n = int(count.replace(",", ""))
            except ValueError:
                raise SchemaError(f"row {i}: count {count!r} is not an integer") from None
            out.append(MediaQueryRecord(database, outlet, keyword,
                                        QueryWindow(start, end, keyword), n))
        elif schema == "case_sources":
            diag, posted, cases, medium, title, link = row
            diagram = diag or diagram
            out.append(RawReport(
                source_medium=(SourceMedium.OFFICIAL if medium in OFFICIAL_OUTLETS
                               else SourceMedium.NEWS_DB),
                outlet=medium,
                headline=title,
                posted_date=_date_cell(posted, i),
                url=link or None,
                body_fields={"diagram": diagram, "cases": cases},
            ))
        else:
            medium, outlet, headline, posted, url, keywords, post, subject = row
            try:
                medium = SourceMedium(medium)
            except ValueError:
                raise SchemaError(f"row {i}: unknown source_medium {medium!r}") from None
            out.append(RawReport(
                source_medium=medium,
                outlet=outlet,
                headline=headline,
                posted_date=_date_cell(posted, i),
                url=url or None,
                keywords=frozenset(k.strip() for k in keywords.split(";") if k.strip()),
                body_fields={"post": post, "subject": subject},
            ))
    return out


def read_table(source, schema: str) -> list:
    """Read a UTF-8 CSV file (or text) with a header row and ingest it.

    ``source`` is a path or an open text stream.
    """
    if isinstance(source, io.TextIOBase):
        return _read_table_stream(source, schema)
    with open(source, encoding="utf-8", newline="") as fh:
        return _read_table_stream(fh, schema)


def _read_table_stream(fh, schema):
    if schema not in SCHEMAS:
        raise SchemaError(f"unknown schema {schema!r}")
    reader = csv.reader(fh)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise SchemaError("missing header row") from None
    expected = list(SCHEMAS[schema])
    unknown = [h for h in header if h not in expected]
    if unknown:
        raise SchemaError(f"unknown columns for {schema}: {unknown}")
    if header != expected:
        raise SchemaError(f"header for {schema} must be {expected}, got {header}")
    return ingest_report_table((r for r in reader if any(c.strip() for c in r)), schema)


def write_reports_table(reports: Iterable[RawReport]) -> str:
    """Render reports back into the ``reports`` CSV layout."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCHEMAS["reports"])
    for r in reports:
        w.writerow([r.source_medium.value, r.outlet, r.headline, r.posted_date.isoformat(),
                    r.url or "", ";".join(sorted(r.keywords)),
                    r.body_fields.get("post", ""), r.body_fields.get("subject", "")])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Filtering and de-duplication
# ---------------------------------------------------------------------------

SEARCH_FIELDS = frozenset({"post", "subject", "headline"})


def filter_reports(reports: Iterable[RawReport], window: QueryWindow,
                   fields: Iterable[str] = ("headline",)) -> list[RawReport]:
    """Keep in-window reports whose selected fields contain the window keyword.

    Matching is a case-insensitive substring test; input order is kept.
    An empty keyword matches everything.
    """
    fields = tuple(fields)
    if not fields:
        raise ValueError("at least one search field is required")
    bad = set(fields) - SEARCH_FIELDS
    if bad:
        raise ValueError(f"unknown search fields {sorted(bad)}")
    needle = window.keyword.casefold()
    return [
        r for r in reports
        if r.posted_date in window
        and any(needle in r.field_text(f).casefold() for f in fields)
    ]


def drop_summaries(reports: Iterable[RawReport], tag: str = "summary") -> list[RawReport]:
    """Remove reports tagged as digests that only repeat earlier posts."""
    tag = tag.casefold()
    return [r for r in reports if tag not in {k.casefold() for k in r.keywords}]


_PUNCT = re.compile(r"[^\w\s]")
_SPACE = re.compile(r"\s+")


def normalize_headline(text: str) -> str:
    return _SPACE.sub(" ", _PUNCT.sub("", text.casefold())).strip()


def dedupe_key(report: RawReport) -> tuple[str, str]:
    return report.outlet, normalize_headline(report.headline)


def dedupe_reports(reports: Sequence[RawReport]) -> list[RawReport]:
    """Drop duplicate reports within the given sequence.

    Two reports are duplicates when outlet and normalised headline agree.
    The earliest-posted copy survives (first in input order on ties) and
    survivors keep their input order.
    """
    reports = list(reports)
    keep: dict[tuple, int] = {}
    for i, r in enumerate(reports):
        key = dedupe_key(r)
        j = keep.get(key)
        if j is None or r.posted_date < reports[j].posted_date:
            keep[key] = i
    survivors = sorted(keep.values())
    return [reports[i] for i in survivors]
