"""Influence metrics over a citation window.

Computes the Eigenfactor score (EF), Article Influence (AI), two-year
Impact Factor (IF) and Total Citations (TC) for every journal of a corpus,
plus the multiplicative decomposition diagnostics that relate them.

EF comes from a damped fixed-point iteration on the column-normalized
citation matrix; dangling journals (those giving no in-window citations)
redistribute their weight through the article vector.  Scores are scaled so
EF sums to 100 and the article-weighted mean AI is exactly 1.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np
from scipy import sparse

from ._util import readonly
from .corpus import CitationLedger, CitationMatrix, JournalTable, build_citation_matrix
from .errors import (ConvergenceError, CsvFormatError, DegenerateDataError,
                     InconsistencyError)

DEFAULT_ALPHA = 0.85
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 1000

_METRIC_ALIASES = {
    "ef": "ef", "eigenfactor": "ef",
    "ai": "ai", "article_influence": "ai",
    "if": "impact_factor", "impact_factor": "impact_factor",
    "tc": "total_citations", "total_citations": "total_citations",
    "n5": "n5", "n2": "n2",
}

SCORES_HEADER = ("journal_id", "ef", "ai", "impact_factor", "total_citations", "n5", "n2")


def resolve_metric(name: str) -> str:
    """Map a metric name or alias (``if``, ``tc``, ...) to its column name."""
    try:
        return _METRIC_ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown metric {name!r}; expected one of "
                         f"{sorted(set(_METRIC_ALIASES))}") from None


# ---------------------------------------------------------------------------
# result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolverReport:
    """Convergence record for one fixed-point solve."""

    iterations: int
    final_residual: float
    alpha: float
    tolerance: float
    dangling_count: int
    residuals: tuple[float, ...]  # L1 change per iteration, in order


@dataclass(frozen=True, eq=False)
class MetricScores:
    """Per-journal metric vectors for one census year.

    Undefined values (AI or IF of a journal with no articles in the
    relevant window) are stored as NaN and excluded from correlations
    downstream.
    """

    census_year: int
    journal_ids: tuple[str, ...]
    ef: np.ndarray
    ai: np.ndarray
    impact_factor: np.ndarray
    total_citations: np.ndarray
    n5: np.ndarray
    n2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "journal_ids", tuple(self.journal_ids))
        object.__setattr__(self, "ef", readonly(self.ef))
        object.__setattr__(self, "ai", readonly(self.ai))
        object.__setattr__(self, "impact_factor", readonly(self.impact_factor))
        object.__setattr__(self, "total_citations", readonly(self.total_citations, dtype=np.int64))
        object.__setattr__(self, "n5", readonly(self.n5, dtype=np.int64))
        object.__setattr__(self, "n2", readonly(self.n2, dtype=np.int64))
        n = len(self.journal_ids)
        for name in ("ef", "ai", "impact_factor", "total_citations", "n5", "n2"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has wrong length")
        if abs(self.ef.sum() - 100.0) > 1e-9:
            raise ValueError(f"EF must sum to 100, got {self.ef.sum()!r}")
        defined = ~np.isnan(self.ai)
        if (self.ai[defined] < 0).any():
            raise ValueError("AI must be nonnegative")
        if ((self.ai[defined] == 0) != (self.ef[defined] == 0)).any():
            raise ValueError("AI must be zero exactly where EF is zero")
        if defined[self.n5 == 0].any():
            raise ValueError("AI must be undefined (NaN) where n5 is zero")

    def __len__(self) -> int:
        return len(self.journal_ids)

    def metric(self, name: str) -> np.ndarray:
        return getattr(self, resolve_metric(name))


@dataclass(frozen=True, eq=False)
class ScoreTable:
    """Loose, re-read view of a scores.csv file (no recomputation implied)."""

    journal_ids: tuple[str, ...]
    columns: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.journal_ids)

    def metric(self, name: str) -> np.ndarray:
        return self.columns[resolve_metric(name)]


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    """Diagnostics for the identity EF = scale * AI * n5.

    ``scale`` is the per-journal estimate EF / (AI * n5); by construction it
    equals 100 / total_n5 for every eligible journal, so its relative spread
    is a correctness probe.  ``citation_log_residual`` holds the analogous
    log(TC) - log(IF * n5) terms, which genuinely vary across journals: the
    citation-count side of the decomposition is only approximate.
    """

    journal_ids: tuple[str, ...]
    scale: np.ndarray                  # NaN where ineligible
    scale_spread: float                # (max - min) / mean over eligible
    citation_log_residual: np.ndarray  # NaN where TC or IF is unusable
    citation_log_residual_spread: float


# ---------------------------------------------------------------------------
# pipeline operations
# ---------------------------------------------------------------------------

def article_vector(table: JournalTable, census_year: int, window: int) -> np.ndarray:
    """Per-journal share of all articles published in the window (sums to 1)."""
    counts = table.article_counts(census_year, window).astype(float)
    total = counts.sum()
    if total <= 0:
        raise DegenerateDataError(
            f"no journal published any article in [{census_year - window}, {census_year - 1}]")
    return readonly(counts / total)


def normalize_columns(z: CitationMatrix) -> tuple[sparse.csc_matrix, np.ndarray]:
    """Column-normalize a citation matrix.

    Returns ``(H, dangling)`` where each non-empty column of ``H`` sums to 1
    and ``dangling`` lists the indices of all-zero columns (journals that
    gave no in-window citations), which are left empty.
    """
    col_sums = np.asarray(z.matrix.sum(axis=0)).ravel()
    dangling = np.flatnonzero(col_sums == 0)
    inv = np.divide(1.0, col_sums, out=np.zeros_like(col_sums), where=col_sums > 0)
    h = (z.matrix @ sparse.diags(inv)).tocsc()
    h.eliminate_zeros()
    return h, dangling


def power_iterate(h: sparse.csc_matrix, dangling: np.ndarray, a: np.ndarray,
                  alpha: float = DEFAULT_ALPHA, tol: float = DEFAULT_TOL,
                  max_iter: int = DEFAULT_MAX_ITER) -> tuple[np.ndarray, SolverReport]:
    """Damped fixed-point iteration for the journal weight vector.

    Starting from the article vector ``a``, iterates

        pi <- alpha * (H @ pi + a * sum(pi[dangling])) + (1 - alpha) * a

    until the L1 change drops to ``tol``.  Returns the stationary vector
    (a probability distribution) and a SolverReport with the residual log.

    Raises ConvergenceError (carrying the last residual) if ``max_iter``
    iterations are not enough.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.asarray(a, dtype=float)
    if abs(a.sum() - 1.0) > 1e-9:
        raise ValueError("article vector must sum to 1")
    is_dangling = np.zeros(len(a), dtype=bool)
    is_dangling[dangling] = True
    pi = a.copy()
    residuals: list[float] = []
    for iteration in range(1, max_iter + 1):
        nxt = alpha * (h @ pi + a * pi[is_dangling].sum()) + (1.0 - alpha) * a
        residual = float(np.abs(nxt - pi).sum())
        residuals.append(residual)
        pi = nxt
        if residual <= tol:
            report = SolverReport(iteration, residual, alpha, tol,
                                  int(len(dangling)), tuple(residuals))
            pi.setflags(write=False)
            return pi, report
    raise ConvergenceError(
        f"no convergence after {max_iter} iterations (residual {residuals[-1]:.3e})",
        residual=residuals[-1])


def eigenfactor_scores(h: sparse.csc_matrix, dangling: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """EF vector: in-window citation influence H @ pi, scaled to sum to 100.

    Dangling columns are empty in H, so they contribute nothing here.
    """
    if h.shape[0] != len(pi):
        raise ValueError("pi does not match the matrix dimension")
    s = h @ np.asarray(pi, dtype=float)
    total = s.sum()
    if total <= 0:
        raise DegenerateDataError("corpus has no in-window citations at all")
    return readonly(100.0 * s / total)


def article_influence(ef: np.ndarray, a: np.ndarray) -> np.ndarray:
    """AI vector: 0.01 * EF / article share, NaN where the share is zero.

    The article-weighted mean of the defined entries is exactly 1.  A
    journal with no in-window articles but a positive EF means the corpus
    is corrupted (it received citations it could not have earned), which
    raises InconsistencyError rather than being silently repaired.
    """
    ef = np.asarray(ef, dtype=float)
    a = np.asarray(a, dtype=float)
    bad = (a == 0) & (ef > 0)
    if bad.any():
        raise InconsistencyError(
            f"{int(bad.sum())} journal(s) received citations but published no articles "
            f"in the window (indices {np.flatnonzero(bad).tolist()})")
    ai = np.full(len(ef), np.nan)
    pos = a > 0
    ai[pos] = 0.01 * ef[pos] / a[pos]
    return readonly(ai)


def impact_factor(ledger: CitationLedger, table: JournalTable, census_year: int,
                  exclude_self: bool = False) -> np.ndarray:
    """Two-year impact factor per journal; NaN where no two-year articles exist.

    Citations given in the census year to articles from the two preceding
    years, divided by the article count of those two years.  Self-citations
    are included by default (the convention this metric imitates).
    """
    ledger.validate(table)
    idx = table.index
    cites = np.zeros(len(table))
    recent = (census_year - 1, census_year - 2)
    for r in ledger:
        if r.citing_year != census_year or r.cited_year not in recent:
            continue
        if exclude_self and r.citing_id == r.cited_id:
            continue
        cites[idx[r.cited_id]] += r.count
    n2 = table.article_counts(census_year, 2).astype(float)
    result = np.full(len(table), np.nan)
    has_articles = n2 > 0
    result[has_articles] = cites[has_articles] / n2[has_articles]
    return readonly(result)


def total_citations(ledger: CitationLedger, table: JournalTable, census_year: int,
                    exclude_self: bool = False) -> np.ndarray:
    """Citations received in the census year, regardless of cited article age."""
    ledger.validate(table)
    idx = table.index
    totals = np.zeros(len(table), dtype=np.int64)
    for r in ledger:
        if r.citing_year != census_year:
            continue
        if exclude_self and r.citing_id == r.cited_id:
            continue
        totals[idx[r.cited_id]] += r.count
    return readonly(totals, dtype=np.int64)


def decomposition_check(scores: MetricScores) -> DecompositionReport:
    """Probe the multiplicative structure linking the size-dependent and
    per-article metrics.

    Eligible journals are those with EF > 0, defined AI and n5 > 0; their
    ``scale`` estimates must agree to floating-point precision.  The TC side
    is reported for contrast: its per-journal log residuals spread widely
    because total citations also count citations to older articles.
    """
    eligible = (scores.ef > 0) & ~np.isnan(scores.ai) & (scores.n5 > 0)
    if not eligible.any():
        raise DegenerateDataError("no journal is eligible for the decomposition check")
    n = len(scores)
    scale = np.full(n, np.nan)
    scale[eligible] = scores.ef[eligible] / (scores.ai[eligible] * scores.n5[eligible])
    vals = scale[eligible]
    spread = float((vals.max() - vals.min()) / vals.mean())

    usable = ((scores.total_citations > 0) & ~np.isnan(scores.impact_factor)
              & (scores.impact_factor > 0) & (scores.n5 > 0))
    residual = np.full(n, np.nan)
    residual[usable] = (np.log(scores.total_citations[usable].astype(float))
                        - np.log(scores.impact_factor[usable] * scores.n5[usable]))
    res_vals = residual[usable]
    res_spread = float(res_vals.max() - res_vals.min()) if usable.any() else float("nan")
    return DecompositionReport(scores.journal_ids, readonly(scale), spread,
                               readonly(residual), res_spread)


def compute_metrics(table: JournalTable, ledger: CitationLedger, census_year: int, *,
                    window: int = 5, alpha: float = DEFAULT_ALPHA, tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER, exclude_self_influence: bool = True,
                    exclude_self_counts: bool = False) -> tuple[MetricScores, SolverReport]:
    """Full pipeline: ledger + table -> MetricScores for one census year.

    Self-citations are excluded from the EF/AI network and included in
    IF/TC by default; both policies are toggleable.
    """
    z = build_citation_matrix(ledger, table, census_year, window,
                              exclude_self=exclude_self_influence)
    a = article_vector(table, census_year, window)
    h, dangling = normalize_columns(z)
    pi, report = power_iterate(h, dangling, a, alpha=alpha, tol=tol, max_iter=max_iter)
    ef = eigenfactor_scores(h, dangling, pi)
    ai = article_influence(ef, a)
    scores = MetricScores(
        census_year=census_year,
        journal_ids=table.ids,
        ef=ef,
        ai=ai,
        impact_factor=impact_factor(ledger, table, census_year, exclude_self=exclude_self_counts),
        total_citations=total_citations(ledger, table, census_year,
                                        exclude_self=exclude_self_counts),
        n5=table.article_counts(census_year, window),
        n2=table.article_counts(census_year, 2),
    )
    return scores, report


# ---------------------------------------------------------------------------
# scores.csv
# ---------------------------------------------------------------------------

def _fmt_score(v: float) -> str:
    return "" if math.isnan(v) else f"{v:.6f}"


def write_scores_csv(scores: MetricScores) -> str:
    """scores.csv text; undefined AI/IF become empty fields."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(SCORES_HEADER)
    for i, jid in enumerate(scores.journal_ids):
        w.writerow([jid, _fmt_score(scores.ef[i]), _fmt_score(scores.ai[i]),
                    _fmt_score(scores.impact_factor[i]),
                    int(scores.total_citations[i]), int(scores.n5[i]), int(scores.n2[i])])
    return out.getvalue()


def read_scores_csv(source: str | TextIO) -> ScoreTable:
    """Read a scores.csv file back as a loose column table.

    The printed values are rounded, so this does not re-validate the exact
    metric invariants; empty AI/IF fields become NaN.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    rdr = csv.reader(source)
    header = next(rdr, None)
    if header is None or tuple(h.strip() for h in header) != SCORES_HEADER:
        raise CsvFormatError(f"scores.csv: expected header {','.join(SCORES_HEADER)}")
    ids: list[str] = []
    cols: dict[str, list[float]] = {name: [] for name in SCORES_HEADER[1:]}
    for row in rdr:
        if not row:
            continue
        if len(row) != len(SCORES_HEADER):
            raise CsvFormatError(f"line {rdr.line_num}: expected {len(SCORES_HEADER)} columns")
        ids.append(row[0])
        for name, cell in zip(SCORES_HEADER[1:], row[1:]):
            cell = cell.strip()
            try:
                cols[name].append(float(cell) if cell else float("nan"))
            except ValueError:
                raise CsvFormatError(f"line {rdr.line_num}: malformed {name} {cell!r}") from None
    return ScoreTable(tuple(ids), {name: readonly(vals) for name, vals in cols.items()})
