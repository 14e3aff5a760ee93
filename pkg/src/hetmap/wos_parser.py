"""
Reader for ISI / Web of Science tagged plain-text exports.

Format:
  - Two-character tag in columns 1-2, a space, value from column 4.
  - Continuation lines start with whitespace (blank tag column) and
    belong to the most recent tag.
  - AU is multi-valued: the first author follows the tag, every further
    author sits on its own continuation line.
  - Records open with PT and close with ER; the file ends with EF.

Only FN, VR, PT, AU, TI, SO, PY, ER and EF are interpreted.  Any other tag
(AB, CR, DE, ...) is skipped together with its continuation lines.
"""
from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import EmptyInput, MalformedFile

YEAR_MIN = 1800
YEAR_MAX = 2200

_PUNCT = str.maketrans("", "", string.punctuation)
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class Record:
    id: int
    authors: tuple[str, ...]
    title: str
    journal: str
    year: Optional[int] = None


@dataclass
class RecordSet:
    records: list[Record] = field(default_factory=list)
    warnings: list[tuple[int, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i: int) -> Record:
        return self.records[i]


@dataclass(frozen=True)
class RecordSetStats:
    n_records: int
    year_range: Optional[tuple[int, int]]
    n_journals: int
    n_authors: int

    def summary(self) -> str:
        years = "no dated records" if self.year_range is None else "%d-%d" % self.year_range
        return "%d records, %d journals, %d authors, %s" % (
            self.n_records, self.n_journals, self.n_authors, years)


def normalize_author(name: str) -> str:
    """``"Callon, M"`` and ``"CALLON M."`` both become ``"callon m"``."""
    # a comma separates surname from initials even without a following space
    name = name.replace(",", " ").translate(_PUNCT)
    return _WS_RE.sub(" ", name).strip().lower()


def normalize_journal(name: str) -> str:
    return _WS_RE.sub(" ", name).strip().lower()


def _parse_year(value: str) -> Optional[int]:
    value = value.strip()
    if not value.isdigit():
        return None
    year = int(value)
    if YEAR_MIN <= year <= YEAR_MAX:
        return year
    return None


class _Block:
    """Fields collected for one PT...ER block."""

    def __init__(self, line_no: int):
        self.line_no = line_no
        self.fields: dict[str, list[str]] = {}

    def add(self, tag: str, value: str) -> None:
        self.fields.setdefault(tag, []).append(value)


_RECOGNIZED = {"FN", "VR", "PT", "AU", "TI", "SO", "PY", "ER", "EF"}
_RECORD_FIELDS = {"AU", "TI", "SO", "PY"}


def parse_records(text: str) -> RecordSet:
    """Parse a tagged export into a :class:`RecordSet`.

    Raises EmptyInput when no PT tag occurs and MalformedFile when a record
    is opened but never closed by ER.
    """
    if text.startswith("﻿"):
        text = text[1:]

    blocks: list[_Block] = []
    current: Optional[_Block] = None
    tag: Optional[str] = None  # tag receiving continuation lines
    saw_pt = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line:
            continue
        if line[0] in " \t":
            if current is not None and tag in _RECORD_FIELDS:
                current.add(tag, line.strip())
            continue

        head = line[:2]
        value = line[3:].strip() if len(line) > 3 else ""
        if head not in _RECOGNIZED:
            tag = None
            continue
        tag = head
        if head == "PT":
            if current is not None:
                raise MalformedFile(
                    "line %d: record opened at line %d has no ER terminator"
                    % (line_no, current.line_no))
            saw_pt = True
            current = _Block(line_no)
        elif head == "ER":
            if current is not None:
                blocks.append(current)
            current = None
            tag = None
        elif head in _RECORD_FIELDS:
            if current is not None:
                current.add(head, value)
        else:
            # FN, VR, EF: file-level headers
            tag = None

    if current is not None:
        raise MalformedFile(
            "record opened at line %d has no ER terminator" % current.line_no)
    if not saw_pt:
        raise EmptyInput("no PT tag found; not a tagged record export")

    rs = RecordSet()
    for block in blocks:
        rs.records.append(_build_record(len(rs.records), block, rs.warnings))
    return rs


def _build_record(rid: int, block: _Block, warnings: list[tuple[int, str]]) -> Record:
    f = block.fields
    authors: list[str] = []
    for name in f.get("AU", []):
        norm = normalize_author(name)
        if norm and norm not in authors:
            authors.append(norm)
    if not authors:
        warnings.append((block.line_no, "record %d: no AU field" % rid))

    title = " ".join(v for v in f.get("TI", []) if v)
    if not title:
        warnings.append((block.line_no, "record %d: no TI field" % rid))

    journal = normalize_journal(" ".join(f.get("SO", [])))
    if not journal:
        warnings.append((block.line_no, "record %d: no SO field" % rid))

    year = None
    if "PY" in f:
        raw = " ".join(f["PY"])
        year = _parse_year(raw)
        if year is None:
            warnings.append((block.line_no, "record %d: unparsable PY %r" % (rid, raw)))

    return Record(id=rid, authors=tuple(authors), title=title, journal=journal, year=year)


def read_records(path) -> RecordSet:
    with open(path, encoding="utf-8") as fh:
        return parse_records(fh.read())


def render_records(records: Iterable[Record], width: int = 70) -> str:
    """Write records back out in canonical tagged form.

    Titles longer than ``width`` are wrapped onto continuation lines.
    """
    out = ["FN Thomson Reuters Web of Science", "VR 1.0"]
    for rec in records:
        out.append("PT J")
        for i, name in enumerate(rec.authors):
            out.append(("AU " if i == 0 else "   ") + name)
        if rec.title:
            for i, chunk in enumerate(_wrap(rec.title, width)):
                out.append(("TI " if i == 0 else "   ") + chunk)
        if rec.journal:
            out.append("SO " + rec.journal)
        if rec.year is not None:
            out.append("PY %d" % rec.year)
        out.append("ER")
        out.append("")
    out.append("EF")
    return "\n".join(out) + "\n"


def _wrap(text: str, width: int) -> list[str]:
    lines: list[str] = []
    cur = ""
    for word in text.split(" "):
        if cur and len(cur) + 1 + len(word) > width:
            lines.append(cur)
            cur = word
        else:
            cur = word if not cur else cur + " " + word
    lines.append(cur)
    return lines


def recordset_stats(rs: RecordSet) -> RecordSetStats:
    years = [r.year for r in rs.records if r.year is not None]
    journals = {r.journal for r in rs.records if r.journal}
    authors = {a for r in rs.records for a in r.authors}
    return RecordSetStats(
        n_records=len(rs.records),
        year_range=(min(years), max(years)) if years else None,
        n_journals=len(journals),
        n_authors=len(authors),
    )
