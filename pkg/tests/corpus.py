"""Synthetic single-author corpus in ISI tagged format.

Built so that, with the focal author excluded, it carries exactly 48
co-authors, 27 title words in three or more titles, and 26 journals,
spread over 65 records dated 1975-2009.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from hetmap.wos_parser import Record, RecordSet

FOCAL = "Callon, M"

COAUTHORS = [
    "Courtial, JP", "Law, J", "Rip, A", "Turner, WA", "Bauin, S", "Penan, H",
    "Rabeharisoa, V", "Larédo, P", "Kodama, F", "Mustar, P", "Muniesa, F", "Barthe, Y",
    "Akrich, M", "Lascoumes, P", "Latour, B", "Michel, G", "Leydesdorff, L", "Foray, D",
    "Cohendet, P", "Lhomme, Y", "Vignolle, JP", "Boullier, D", "Meadel, C", "Caliskan, K",
    "Millo, Y", "Licoppe, C", "Dodier, N", "Hennion, A", "Teil, G", "Rosental, C",
    "Lemieux, C", "Thevenot, L", "Boltanski, L", "Moreira, T", "Mol, A", "Lezaun, J",
    "Mackenzie, D", "Guala, F", "Roth, AE", "Garud, R", "Karnoe, P", "Kjellberg, H",
    "Cochoy, F", "Granovetter, M", "Stark, D", "Beunza, D", "Hardie, I", "Preda, A",
]

WORDS = [
    "network", "translation", "science", "technology", "markets", "scientific",
    "analysis", "policy", "research", "economic", "sociology", "innovation",
    "actor", "performativity", "patients", "associations", "coword", "indicators",
    "laboratory", "economy", "society", "mapping", "dynamics", "strategy",
    "collective", "organizations", "public",
]

FILLERS = [
    "ultrasonographic", "sucking", "swallowing", "newborn", "infants", "editorial",
    "essay", "rejoinder", "reply", "lessons", "hybrid", "forums", "scallops",
    "fishermen", "electric", "vehicle", "struggles", "agencements", "calculative",
    "framing", "overflowing", "qualification", "goods", "techno", "ecosystems",
    "concerned", "groups", "emergent", "civic", "democracy",
]

JOURNALS = [
    "SOCIAL SCIENCE INFORMATION", "SCIENTOMETRICS", "RESEARCH POLICY",
    "SOCIOLOGICAL REVIEW", "ECONOMY AND SOCIETY", "SCIENCE TECHNOLOGY & HUMAN VALUES",
    "DEVELOPMENTAL MEDICINE AND CHILD NEUROLOGY", "SOCIAL STUDIES OF SCIENCE",
    "THEORY CULTURE & SOCIETY", "SOCIOLOGIE DU TRAVAIL", "REVUE FRANCAISE DE SOCIOLOGIE",
    "JOURNAL OF CULTURAL ECONOMY", "SCIENCE AND PUBLIC POLICY", "MINERVA",
    "TECHNOVATION", "ECONOMIC SOCIOLOGY", "ANNALES DES MINES", "POLITIX",
    "RESEAUX", "HERMES", "SOCIOLOGIE ET SOCIETES", "CONTEMPORARY SOCIOLOGY",
    "INTERNATIONAL JOURNAL OF URBAN AND REGIONAL RESEARCH", "ORGANIZATION STUDIES",
    "STUDIES IN HISTORY AND PHILOSOPHY OF SCIENCE", "FUTURES",
]

GLUE = ["of", "and", "the", "in", "for", "a", "to"]


@dataclass
class RawRecord:
    authors: list[str]
    title: str
    journal: str
    year: int | None
    words: list[str] = field(default_factory=list)  # content words placed in the title


def make_corpus(seed: int = 7, n: int = 65) -> list[RawRecord]:
    rng = random.Random(seed)
    years = [1975 + (i * 34) // (n - 1) for i in range(n)]

    coauthors: list[list[str]] = [[] for _ in range(n)]
    for i, name in enumerate(COAUTHORS):
        coauthors[(i * 7) % n].append(name)
    for r in range(n):
        for name in rng.sample(COAUTHORS, rng.randint(0, 2)):
            if name not in coauthors[r]:
                coauthors[r].append(name)

    words: list[list[str]] = [[] for _ in range(n)]
    for i, w in enumerate(WORDS):
        for r in rng.sample(range(n), 3 + rng.randint(0, 4)):
            if w not in words[r]:
                words[r].append(w)
    # fillers stay below the word threshold: at most two titles each
    for i, w in enumerate(FILLERS):
        for r in rng.sample(range(n), 1 + i % 2):
            words[r].append(w)

    for r in range(n):
        if not words[r]:
            words[r].append(rng.choice(WORDS))

    journals = JOURNALS + [rng.choice(JOURNALS) for _ in range(n - len(JOURNALS))]
    rng.shuffle(journals)

    out = []
    for r in range(n):
        ws = list(words[r])
        title_words = []
        for w in ws:
            title_words.append(w.capitalize())
            if rng.random() < 0.5:
                title_words.append(rng.choice(GLUE))
        authors = list(coauthors[r])
        authors.insert(rng.randint(0, len(authors)), FOCAL)
        content = [w for w in ws if w in WORDS]
        out.append(RawRecord(authors, " ".join(title_words), journals[r], years[r], content))
    return out


def render_isi(records: list[RawRecord], wrap: int = 50) -> str:
    """Tagged export with raw (un-normalized) author forms and wrapped titles."""
    lines = ["FN Thomson Reuters Web of Science", "VR 1.0"]
    for rec in records:
        lines.append("PT J")
        for i, a in enumerate(rec.authors):
            lines.append(("AU " if i == 0 else "   ") + a)
        chunks, cur = [], ""
        for w in rec.title.split(" "):
            if cur and len(cur) + len(w) + 1 > wrap:
                chunks.append(cur)
                cur = w
            else:
                cur = (cur + " " + w).strip()
        chunks.append(cur)
        for i, c in enumerate(chunks):
            lines.append(("TI " if i == 0 else "   ") + c)
        lines.append("AB An abstract that the reader must skip,")
        lines.append("   including this continuation line.")
        lines.append("SO " + rec.journal)
        if rec.year is not None:
            lines.append("PY %d" % rec.year)
        lines.append("ER")
        lines.append("")
    lines.append("EF")
    return "\n".join(lines) + "\n"


def corpus_text(seed: int = 7) -> str:
    return render_isi(make_corpus(seed))


def evolving_corpus():
    """One record pair per five-year period; 'performativity' first appears 1990-1994."""
    recs = []
    for p, start in enumerate(range(1975, 2005, 5)):
        words = "Translation network"
        if p >= 3:
            words += " performativity"
        for k in range(2):
            recs.append(Record(len(recs), ("callon m", "law j"), words, "minerva", start + k))
    recs.append(Record(len(recs), ("callon m",), "Translation", "minerva", None))
    return RecordSet(recs)
