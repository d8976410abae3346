"""Journal and citation data model, CSV ingestion, and the burger fixture.

All types are immutable after construction and all functions are pure, so
everything here is safe to share across threads.

File formats (UTF-8, comma-delimited, required header row):

* ``journals.csv``  -- ``journal_id,name,fields,year,articles`` with one row
  per (journal, year); ``fields`` is a semicolon-separated list of labels.
* ``citations.csv`` -- ``citing_id,cited_id,citing_year,cited_year,count``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, TextIO

import numpy as np
from scipy import sparse

from ._util import readonly
from .errors import CsvFormatError, ValidationError

JOURNALS_HEADER = ("journal_id", "name", "fields", "year", "articles")
CITATIONS_HEADER = ("citing_id", "cited_id", "citing_year", "cited_year", "count")


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JournalEntry:
    """One journal: identity, field memberships, and per-year article counts."""

    journal_id: str
    name: str
    fields: frozenset[str]
    articles_by_year: dict[int, int]

    def articles_in_window(self, census_year: int, window: int) -> int:
        """Articles published in the ``window`` years before ``census_year``."""
        lo = census_year - window
        return sum(c for y, c in self.articles_by_year.items() if lo <= y < census_year)


@dataclass(frozen=True)
class JournalTable:
    entries: tuple[JournalEntry, ...]

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if not e.journal_id:
                raise ValidationError("journal_id must be non-empty")
            if e.journal_id in seen:
                raise ValidationError(f"duplicate journal_id {e.journal_id!r}")
            seen.add(e.journal_id)
            if any(not f for f in e.fields):
                raise ValidationError(f"journal {e.journal_id!r} has an empty field label")
            if any(c < 0 for c in e.articles_by_year.values()):
                raise ValidationError(f"journal {e.journal_id!r} has a negative article count")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[JournalEntry]:
        return iter(self.entries)

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(e.journal_id for e in self.entries)

    @cached_property
    def index(self) -> dict[str, int]:
        return {jid: i for i, jid in enumerate(self.ids)}

    def get(self, journal_id: str) -> JournalEntry:
        return self.entries[self.index[journal_id]]

    def article_counts(self, census_year: int, window: int) -> np.ndarray:
        """Per-journal article counts over the window, in table order."""
        return readonly([e.articles_in_window(census_year, window) for e in self.entries],
                        dtype=np.int64)

    def field_labels(self) -> tuple[str, ...]:
        labels: set[str] = set()
        for e in self.entries:
            labels |= e.fields
        return tuple(sorted(labels))

    def members_of(self, field_label: str) -> tuple[str, ...]:
        """Journals carrying ``field_label`` (cross-listing allowed)."""
        return tuple(e.journal_id for e in self.entries if field_label in e.fields)


@dataclass(frozen=True)
class CitationRecord:
    citing_id: str
    cited_id: str
    citing_year: int
    cited_year: int
    count: int


@dataclass(frozen=True)
class CitationLedger:
    """Raw dated citation counts, preserved in input order."""

    records: tuple[CitationRecord, ...]

    def __post_init__(self):
        for r in self.records:
            if r.count <= 0:
                raise ValidationError(f"citation count must be positive, got {r.count}")
            if not r.citing_id or not r.cited_id:
                raise ValidationError("citation record with empty journal id")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[CitationRecord]:
        return iter(self.records)

    def validate(self, table: JournalTable) -> tuple[CitationRecord, ...]:
        """Check every id against ``table``; return the suspicious records.

        Unknown journal ids raise ``ValidationError`` listing all offenders.
        Records whose cited_year lies after their citing_year are legal (data
        may be noisy) but are returned so callers can flag them.
        """
        known = set(table.ids)
        unknown = sorted({jid for r in self.records for jid in (r.citing_id, r.cited_id)
                          if jid not in known})
        if unknown:
            raise ValidationError("unknown journal ids in ledger: " + ", ".join(unknown))
        return tuple(r for r in self.records if r.cited_year > r.citing_year)


@dataclass(frozen=True, eq=False)
class CitationMatrix:
    """Windowed citation matrix for one census year.

    ``matrix[i, j]`` holds citations given in ``census_year`` by journal ``j``
    (column) to articles journal ``i`` (row) published during the ``window``
    years before the census year.  Stored sparse; zeros are absent.
    """

    census_year: int
    window: int
    ids: tuple[str, ...]
    matrix: sparse.csc_matrix
    self_cites_excluded: bool

    def __post_init__(self):
        n = len(self.ids)
        if self.matrix.shape != (n, n):
            raise ValidationError(f"matrix shape {self.matrix.shape} does not match {n} journals")
        if self.window <= 0:
            raise ValidationError("window must be positive")
        if self.matrix.nnz and not (self.matrix.data > 0).all():
            raise ValidationError("stored citation entries must be strictly positive")
        if self.self_cites_excluded and self.matrix.diagonal().any():
            raise ValidationError("self-citations present despite exclusion flag")

    def to_dict(self) -> dict[tuple[str, str], float]:
        """(cited_id, citing_id) -> count view, mainly for tests and export."""
        coo = self.matrix.tocoo()
        return {(self.ids[i], self.ids[j]): float(v)
                for i, j, v in zip(coo.row, coo.col, coo.data)}


@dataclass(frozen=True, eq=False)
class PairedObservations:
    """Two aligned numeric series with labels; drives every correlation op."""

    labels: tuple[str, ...]
    x: np.ndarray
    y: np.ndarray
    x_name: str = "x"
    y_name: str = "y"

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "x", readonly(self.x))
        object.__setattr__(self, "y", readonly(self.y))
        if not (len(self.labels) == len(self.x) == len(self.y)):
            raise ValidationError("labels, x and y must have equal lengths")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("labels must be unique")

    def __len__(self) -> int:
        return len(self.labels)


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------

def _reader(source: str | TextIO) -> csv.reader:
    if isinstance(source, str):
        source = io.StringIO(source)
    return csv.reader(source)

def _check_header(row: list[str] | None, expected: tuple[str, ...], what: str) -> None:
    if row is None:
        raise CsvFormatError(f"{what}: missing header row")
    if tuple(h.strip() for h in row) != expected:
        raise CsvFormatError(f"{what}: expected header {','.join(expected)}, got {','.join(row)}")

def _int_field(value: str, what: str, line: int, minimum: int | None = None) -> int:
    try:
        n = int(value)
    except ValueError:
        raise CsvFormatError(f"line {line}: malformed {what} {value!r}") from None
    if minimum is not None and n < minimum:
        raise CsvFormatError(f"line {line}: {what} must be >= {minimum}, got {n}")
    return n


def parse_journal_metadata(source: str | TextIO) -> JournalTable:
    """Parse ``journals.csv`` content into a JournalTable.

    Rows for the same journal are merged into one entry (one row per year);
    field memberships are unioned across rows.  A repeated (journal, year)
    pair or a conflicting name is a format error.
    """
    rdr = _reader(source)
    _check_header(next(rdr, None), JOURNALS_HEADER, "journals.csv")
    order: list[str] = []
    names: dict[str, str] = {}
    fields: dict[str, set[str]] = {}
    years: dict[str, dict[int, int]] = {}
    for row in rdr:
        if not row:
            continue
        line = rdr.line_num
        if len(row) != len(JOURNALS_HEADER):
            raise CsvFormatError(f"line {line}: expected {len(JOURNALS_HEADER)} columns, got {len(row)}")
        jid, name, field_list, year_s, articles_s = (c.strip() for c in row)
        if not jid:
            raise CsvFormatError(f"line {line}: empty journal_id")
        year = _int_field(year_s, "year", line)
        articles = _int_field(articles_s, "articles", line, minimum=0)
        if jid not in names:
            order.append(jid)
            names[jid] = name
            fields[jid] = set()
            years[jid] = {}
        elif names[jid] != name:
            raise CsvFormatError(f"line {line}: journal {jid!r} renamed ({names[jid]!r} -> {name!r})")
        if year in years[jid]:
            raise CsvFormatError(f"line {line}: duplicate journal_id {jid!r} for year {year}")
        years[jid][year] = articles
        fields[jid] |= {f.strip() for f in field_list.split(";") if f.strip()}
    return JournalTable(tuple(
        JournalEntry(jid, names[jid], frozenset(fields[jid]), years[jid]) for jid in order))


def parse_citation_edges(source: str | TextIO) -> CitationLedger:
    """Parse ``citations.csv`` content into a CitationLedger (input order kept)."""
    rdr = _reader(source)
    _check_header(next(rdr, None), CITATIONS_HEADER, "citations.csv")
    records = []
    for row in rdr:
        if not row:
            continue
        line = rdr.line_num
        if len(row) != len(CITATIONS_HEADER):
            raise CsvFormatError(f"line {line}: expected {len(CITATIONS_HEADER)} columns, got {len(row)}")
        citing, cited, citing_year_s, cited_year_s, count_s = (c.strip() for c in row)
        if not citing or not cited:
            raise CsvFormatError(f"line {line}: empty journal id")
        records.append(CitationRecord(
            citing, cited,
            _int_field(citing_year_s, "citing_year", line),
            _int_field(cited_year_s, "cited_year", line),
            _int_field(count_s, "count", line, minimum=1),
        ))
    return CitationLedger(tuple(records))


def write_journal_metadata(table: JournalTable) -> str:
    """Serialize a JournalTable back to journals.csv text (round-trip safe)."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(JOURNALS_HEADER)
    for e in table:
        field_list = ";".join(sorted(e.fields))
        for year in sorted(e.articles_by_year):
            w.writerow([e.journal_id, e.name, field_list, year, e.articles_by_year[year]])
    return out.getvalue()


def write_citation_edges(ledger: CitationLedger) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CITATIONS_HEADER)
    for r in ledger:
        w.writerow([r.citing_id, r.cited_id, r.citing_year, r.cited_year, r.count])
    return out.getvalue()


# ---------------------------------------------------------------------------
# citation matrix
# ---------------------------------------------------------------------------

def build_citation_matrix(ledger: CitationLedger, table: JournalTable, census_year: int,
                          window: int, exclude_self: bool) -> CitationMatrix:
    """Aggregate ledger records into the windowed citation matrix.

    Only records with ``citing_year == census_year`` and a cited year inside
    ``[census_year - window, census_year - 1]`` contribute; everything else
    is silently ignored (ledgers legitimately span many years).  Journals
    with no in-window activity keep their all-zero rows and columns.
    """
    if window <= 0:
        raise ValueError("window must be positive")
    ledger.validate(table)
    idx = table.index
    lo = census_year - window
    rows, cols, vals = [], [], []
    for r in ledger:
        if r.citing_year != census_year or not (lo <= r.cited_year < census_year):
            continue
        if exclude_self and r.citing_id == r.cited_id:
            continue
        rows.append(idx[r.cited_id])
        cols.append(idx[r.citing_id])
        vals.append(float(r.count))
    n = len(table)
    matrix = sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsc()
    matrix.sum_duplicates()
    return CitationMatrix(census_year, window, table.ids, matrix, exclude_self)


# ---------------------------------------------------------------------------
# embedded fixture: Big Mac price vs hourly wage, 22 countries
# ---------------------------------------------------------------------------

# (country, burger price, mean hourly wage), both in local currency,
# ordered by purchasing power (wage / price), highest first.
_BIGMAC_ROWS = (
    ("Denmark", 24.75, 211.13),
    ("Australia", 3.00, 19.86),
    ("New Zealand", 3.60, 21.94),
    ("Switzerland", 6.30, 37.85),
    ("United States", 2.54, 14.32),
    ("Britain/UK", 1.99, 11.15),
    ("Germany", 2.61, 14.32),
    ("Canada", 3.33, 16.78),
    ("Singapore", 3.30, 15.65),
    ("Sweden", 24.00, 110.90),
    ("Hong Kong", 10.70, 44.26),
    ("Spain", 2.37, 8.59),
    ("South Africa", 9.70, 30.86),
    ("France", 2.82, 8.50),
    ("Poland", 5.90, 11.80),
    ("Hungary", 399.00, 704.34),
    ("Czech Rep.", 56.00, 85.34),
    ("Brazil", 3.60, 4.58),
    ("South Korea", 3000.00, 3134.00),
    ("Mexico", 21.90, 17.61),
    ("Thailand", 55.00, 31.69),
    ("China", 9.90, 5.56),
)


def bigmac_fixture() -> PairedObservations:
    """The 22-country burger-price / hourly-wage table as paired observations."""
    return PairedObservations(
        labels=tuple(r[0] for r in _BIGMAC_ROWS),
        x=[r[1] for r in _BIGMAC_ROWS],
        y=[r[2] for r in _BIGMAC_ROWS],
        x_name="burger_price",
        y_name="hourly_wage",
    )


def bigmac_csv() -> str:
    """The fixture as CSV text with header ``country,burger_price,hourly_wage``."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["country", "burger_price", "hourly_wage"])
    for country, price, wage in _BIGMAC_ROWS:
        w.writerow([country, f"{price:.2f}", f"{wage:.2f}"])
    return out.getvalue()
