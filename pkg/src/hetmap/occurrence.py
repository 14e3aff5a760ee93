"""Binary document x attribute incidence and year-window slicing."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .attributes import AttributeCatalog, AttributeClass, tokenize_title
from .errors import BadRange, ShapeError
from .wos_parser import Record, RecordSet


@dataclass(frozen=True)
class OccurrenceMatrix:
    rows: tuple[int, ...]
    cols: tuple  # of Attribute
    cells: np.ndarray  # uint8, len(rows) x len(cols)
    col_freq: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    def classes(self) -> list[AttributeClass]:
        return [a.cls for a in self.cols]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _records(rs) -> list[Record]:
    return rs.records if isinstance(rs, RecordSet) else list(rs)


def build_matrix(rs: RecordSet | Iterable[Record], cat: AttributeCatalog) -> OccurrenceMatrix:
    """cell(d, a) = 1 iff record d carries attribute a."""
    if len(cat) == 0:
        raise ShapeError("cannot build an occurrence matrix from an empty catalog")
    records = _records(rs)
    cells = np.zeros((len(records), len(cat)), dtype=np.uint8)
    for r, rec in enumerate(records):
        # catalog words are never stopwords, so membership needs no stopword list
        labels = {
            AttributeClass.AUTHOR: rec.authors,
            AttributeClass.WORD: tokenize_title(rec.title),
            AttributeClass.JOURNAL: (rec.journal,) if rec.journal else (),
        }
        for cls, values in labels.items():
            for label in values:
                j = cat.index(cls, label)
                if j is not None:
                    cells[r, j] = 1
    col_freq = cells.sum(axis=0, dtype=np.int64)
    return OccurrenceMatrix(
        rows=tuple(rec.id for rec in records),
        cols=tuple(cat.attributes),
        cells=_frozen(cells),
        col_freq=_frozen(col_freq),
    )


def submatrix(m: OccurrenceMatrix, classes: Iterable[AttributeClass]) -> OccurrenceMatrix:
    """Restrict columns to the given attribute classes (single-class maps)."""
    wanted = set(classes)
    if not wanted:
        raise ShapeError("at least one attribute class is required")
    keep = [j for j, a in enumerate(m.cols) if a.cls in wanted]
    if not keep:
        raise ShapeError("restriction to %s leaves no columns"
                         % sorted(c.value for c in wanted))
    cells = np.ascontiguousarray(m.cells[:, keep])
    return OccurrenceMatrix(
        rows=m.rows,
        cols=tuple(m.cols[j] for j in keep),
        cells=_frozen(cells),
        col_freq=_frozen(cells.sum(axis=0, dtype=np.int64)),
    )


def matrix_to_csv(m: OccurrenceMatrix) -> str:
    """Header of ``class:label`` column names, one row per document id."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["doc"] + [a.key for a in m.cols])
    for rid, row in zip(m.rows, m.cells):
        w.writerow([rid] + [int(v) for v in row])
    return buf.getvalue()


@dataclass(frozen=True)
class PeriodSlice:
    start_year: int  # inclusive
    end_year: int  # exclusive
    record_ids: tuple[int, ...]

    @property
    def label(self) -> str:
        return "%d-%d" % (self.start_year, self.end_year - 1)

    def contains(self, year: int) -> bool:
        return self.start_year <= year < self.end_year


@dataclass
class Periods(Sequence):
    """Result of :func:`slice_by_period`; indexes like a list of slices."""

    slices: list[PeriodSlice]
    undated: list[int] = field(default_factory=list)
    out_of_range: list[int] = field(default_factory=list)

    def __getitem__(self, i):
        return self.slices[i]

    def __len__(self) -> int:
        return len(self.slices)

    def report(self) -> str:
        parts = ["%d slices" % len(self.slices)]
        if self.undated:
            parts.append("%d undated records excluded (ids %s)"
                         % (len(self.undated), ", ".join(map(str, self.undated))))
        if self.out_of_range:
            parts.append("%d records outside the period range" % len(self.out_of_range))
        return "; ".join(parts)


def slice_by_period(rs: RecordSet | Iterable[Record], start: int, width: int, end: int) -> Periods:
    """Half-open windows [start, start+width), ... covering [start, end).

    The last window is shortened when the range is not a multiple of width.
    """
    if end <= start:
        raise BadRange("period end %d must be after start %d" % (end, start))
    if width < 1:
        raise BadRange("period width must be >= 1, got %d" % width)
    bounds = [(s, min(s + width, end)) for s in range(start, end, width)]
    members: list[list[int]] = [[] for _ in bounds]
    undated, outside = [], []
    for rec in _records(rs):
        if rec.year is None:
            undated.append(rec.id)
        elif start <= rec.year < end:
            members[(rec.year - start) // width].append(rec.id)
        else:
            outside.append(rec.id)
    slices = [PeriodSlice(s, e, tuple(ids)) for (s, e), ids in zip(bounds, members)]
    return Periods(slices, undated, outside)
