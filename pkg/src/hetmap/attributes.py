"""Typed variables (authors, title words, journals) and the filtered catalog."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from itertools import groupby
from typing import Iterable, Mapping, Optional

from .wos_parser import Record, RecordSet, normalize_author

MIN_TOKEN_LEN = 3


class AttributeClass(enum.Enum):
    AUTHOR = "author"
    WORD = "word"
    JOURNAL = "journal"

    @property
    def order(self) -> int:
        return _CLASS_ORDER[self]

    @classmethod
    def parse(cls, name: str) -> "AttributeClass":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError("unknown attribute class %r (expected author, word or journal)" % name) from None


_CLASS_ORDER = {AttributeClass.AUTHOR: 0, AttributeClass.WORD: 1, AttributeClass.JOURNAL: 2}
ALL_CLASSES = (AttributeClass.AUTHOR, AttributeClass.WORD, AttributeClass.JOURNAL)

Thresholds = Mapping[AttributeClass, int]


@dataclass(frozen=True)
class Attribute:
    cls: AttributeClass
    label: str
    freq: int
    first_year: Optional[int] = None

    @property
    def key(self) -> str:
        """Identifier stable across catalogs, e.g. ``"word:network"``."""
        return "%s:%s" % (self.cls.value, self.label)


@dataclass(frozen=True)
class AttributeCatalog:
    attributes: tuple[Attribute, ...]
    thresholds: dict[AttributeClass, int]
    excluded_author: Optional[str] = None
    _index: dict[tuple[AttributeClass, str], int] = field(
        init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        for i, a in enumerate(self.attributes):
            self._index[(a.cls, a.label)] = i

    def __len__(self) -> int:
        return len(self.attributes)

    def __iter__(self):
        return iter(self.attributes)

    def __getitem__(self, i: int) -> Attribute:
        return self.attributes[i]

    def index(self, cls: AttributeClass, label: str) -> Optional[int]:
        return self._index.get((cls, label))

    def of_class(self, cls: AttributeClass) -> list[Attribute]:
        return [a for a in self.attributes if a.cls is cls]

    def counts(self) -> dict[AttributeClass, int]:
        return {c: len(self.of_class(c)) for c in ALL_CLASSES}


def static_thresholds() -> dict[AttributeClass, int]:
    """Minima for the static maps: every co-author and journal, words seen in 3+ titles."""
    return {AttributeClass.AUTHOR: 1, AttributeClass.WORD: 3, AttributeClass.JOURNAL: 1}


def animation_thresholds() -> dict[AttributeClass, int]:
    """Minima for per-period animation frames: anything occurring more than once."""
    return {AttributeClass.AUTHOR: 2, AttributeClass.WORD: 2, AttributeClass.JOURNAL: 2}


def load_stopwords(path=None) -> frozenset[str]:
    """Read a stopword file (one lowercase word per line, ``#`` comments).

    Without a path the bundled default list is returned.
    """
    if path is None:
        text = resources.files("hetmap").joinpath("stopwords.txt").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = (ln.strip().lower() for ln in text.splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))


def tokenize_title(title: str, stopwords: Iterable[str] = ()) -> list[str]:
    """Split a title into distinct lowercase word tokens, in order of first appearance.

    Any non-alphabetic character is a separator, so hyphenated compounds
    split.  Tokens shorter than three letters and stopwords are dropped.

    >>> tokenize_title("Sucking and Swallowing by Newborn-Infants", {"and"})
    ['sucking', 'swallowing', 'newborn', 'infants']
    """
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    tokens: list[str] = []
    seen = set()
    for is_alpha, run in groupby(title, key=str.isalpha):
        if not is_alpha:
            continue
        tok = "".join(run).lower()
        if len(tok) < MIN_TOKEN_LEN or tok in stop or tok in seen:
            continue
        seen.add(tok)
        tokens.append(tok)
    return tokens


def record_attributes(rec: Record, stopwords: Iterable[str] = ()) -> dict[AttributeClass, list[str]]:
    """Attribute labels carried by one record, per class."""
    return {
        AttributeClass.AUTHOR: list(rec.authors),
        AttributeClass.WORD: tokenize_title(rec.title, stopwords),
        AttributeClass.JOURNAL: [rec.journal] if rec.journal else [],
    }


def build_catalog(
    rs: RecordSet | Iterable[Record],
    thresholds: Optional[Thresholds] = None,
    excluded_author: Optional[str] = None,
    stopwords: Iterable[str] = (),
) -> AttributeCatalog:
    """Count document frequencies and keep attributes meeting their class minimum.

    ``excluded_author`` (normalized like any AU value) is removed before
    thresholding; use it for the focal author of a single-author corpus.
    """
    th = dict(static_thresholds() if thresholds is None else thresholds)
    for cls in ALL_CLASSES:
        th.setdefault(cls, 1)
        if th[cls] < 1:
            raise ValueError("threshold for %s must be >= 1, got %r" % (cls.value, th[cls]))
    excluded = normalize_author(excluded_author) if excluded_author else None
    stop = frozenset(stopwords)

    freq: dict[tuple[AttributeClass, str], int] = {}
    first: dict[tuple[AttributeClass, str], int] = {}
    records = rs.records if isinstance(rs, RecordSet) else list(rs)
    for rec in records:
        for cls, labels in record_attributes(rec, stop).items():
            for label in labels:
                if cls is AttributeClass.AUTHOR and label == excluded:
                    continue
                key = (cls, label)
                freq[key] = freq.get(key, 0) + 1
                if rec.year is not None and (key not in first or rec.year < first[key]):
                    first[key] = rec.year

    kept = [
        Attribute(cls, label, n, first.get((cls, label)))
        for (cls, label), n in freq.items()
        if n >= th[cls]
    ]
    kept.sort(key=lambda a: (a.cls.order, a.label))
    return AttributeCatalog(tuple(kept), th, excluded)
