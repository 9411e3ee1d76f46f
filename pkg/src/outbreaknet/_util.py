"""Small shared helpers: date parsing, JSON-lines, atomic file output."""
from __future__ import annotations

import datetime as dt
import json
import os
import re
import tempfile
from pathlib import Path
from typing import Iterable, Iterator

_DMY = re.compile(r"^\s*(\d{1,2})/(\d{1,2})/(\d{4})\s*$")
_TEXT_FORMATS = ("%d %b %Y", "%d %B %Y")


def parse_date(text) -> dt.date:
    """Parse ``D/M/YYYY``, ``YYYY-MM-DD`` or ``16 Apr 2014`` style dates.

    Raises ``ValueError`` for anything else.
    """
    if isinstance(text, dt.datetime):
        return text.date()
    if isinstance(text, dt.date):
        return text
    if not isinstance(text, str):
        raise ValueError(f"not a date: {text!r}")
    s = text.strip()
    m = _DMY.match(s)
    if m:
        day, month, year = (int(g) for g in m.groups())
        return dt.date(year, month, day)
    try:
        return dt.date.fromisoformat(s)
    except ValueError:
        pass
    for fmt in _TEXT_FORMATS:
        try:
            return dt.datetime.strptime(s, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unrecognised date {text!r}")


def parse_optional_date(text):
    if text is None or (isinstance(text, str) and not text.strip()):
        return None
    return parse_date(text)


def iso(d):
    return None if d is None else d.isoformat()


def read_jsonl(path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


def dumps_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def atomic_write_text(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file in the same directory and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_jsonl(path, records: Iterable[dict]) -> None:
    atomic_write_text(path, "".join(dumps_line(r) + "\n" for r in records))
