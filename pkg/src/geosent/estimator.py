"""Sentiment scores over time buckets and regions.

The positive sentiment score of a cell is pos/max(neg, 1), undefined
when the cell saw no positive and no negative signal at all.  Normalised
scores divide each cell by the maximum score of its normalisation group:
all regions of the same level and bucket by default, or only siblings
under one parent with norm_scope="siblings".  Scores keep full float
precision here; rounding happens at render time.

aggregate() makes one pass over a parsed table, bucketing timestamps
from the window start (the final bucket may be truncated) and delegating
per-tweet counting to an analyser (lexicon counter or classifier).  With
threads > 1 the pass fans out over row blocks through a process pool;
block results merge by addition, so the output is identical whatever the
thread count.  Window endpoints are UTC instants; display_tz_offset only
shifts rendered labels, never bucket boundaries.
"""
from __future__ import annotations

import logging
import multiprocessing
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path
from typing import Iterable, Protocol

import numpy as np

from .store import LEVELS, ScoreRow, _parse_parsed_line
from .lexicon import SentimentCounts

log = logging.getLogger(__name__)

NORM_SCOPES = ("level", "siblings")


class EstimatorError(Exception):
    pass


class CorrelationError(EstimatorError):
    """Correlation is undefined: too few joined points or zero variance."""


class Analyser(Protocol):
    approach: str
    unit: str

    def tweet_counts(self, text: str) -> tuple[int, int]: ...


def compute_pss(counts: SentimentCounts) -> float | None:
    """pos/max(neg, 1), or None when there was no signal either way."""
    if counts.pos == 0 and counts.neg == 0:
        return None
    return counts.pos / max(counts.neg, 1)


def normalize(group: list[tuple[str, float]]) -> list[tuple[str, float]]:
    """Scale a (region, pss) group by its maximum; order is preserved."""
    if not group:
        raise EstimatorError("empty normalisation group")
    if any(pss is None for _, pss in group):
        raise EstimatorError("normalisation group contains undefined scores")
    top = max(pss for _, pss in group)
    if top <= 0.0:
        raise EstimatorError("normalisation group has no positive score")
    return [(region, pss / top) for region, pss in group]


@dataclass
class AggregationSpec:
    """What to aggregate: level, UTC window, bucket size, normalisation."""

    level: str
    window: tuple[datetime, datetime]
    bucket_seconds: int
    norm_scope: str = "level"
    display_tz_offset_minutes: int = 0

    def validate(self) -> None:
        if self.level not in LEVELS:
            raise EstimatorError(f"unknown level {self.level!r}")
        if self.norm_scope not in NORM_SCOPES:
            raise EstimatorError(f"unknown norm_scope {self.norm_scope!r}")
        if self.bucket_seconds <= 0:
            raise EstimatorError("bucket_seconds must be positive")
        start, end = self.window
        if not start < end:
            raise EstimatorError("window start must precede window end")


# worker-side state for aggregate(); populated once per pool worker
_agg_state: dict = {}


def _agg_init(analyser, level, start, end, bucket_seconds):
    _agg_state.update(analyser=analyser, level=level, start=start, end=end,
                      bucket_seconds=bucket_seconds)


def _agg_block(lines: list[str]) -> tuple[dict, int]:
    """Fold one block of T2 lines into partial cell counts."""
    analyser = _agg_state["analyser"]
    level = _agg_state["level"]
    start = _agg_state["start"]
    end = _agg_state["end"]
    bucket_seconds = _agg_state["bucket_seconds"]
    country_level = level == "Country"
    cells: dict = {}
    skipped = 0
    for line in lines:
        if not line:
            continue
        try:
            row = _parse_parsed_line(line)
        except ValueError:
            skipped += 1
            continue
        ts = row.timestamp
        if not start <= ts < end:
            continue
        bucket = int((ts - start).total_seconds()) // bucket_seconds
        if country_level:
            key = (bucket, row.country, "")
        else:
            key = (bucket, row.county, row.country)
        pos, neg = analyser.tweet_counts(row.text)
        cell = cells.get(key)
        if cell is None:
            cells[key] = [pos, neg, 1]
        else:
            cell[0] += pos
            cell[1] += neg
            cell[2] += 1
    return cells, skipped


def _merge_cells(target: dict, part: dict) -> None:
    for key, (pos, neg, tweets) in part.items():
        cell = target.get(key)
        if cell is None:
            target[key] = [pos, neg, tweets]
        else:
            cell[0] += pos
            cell[1] += neg
            cell[2] += tweets


def _blocks(path: Path, size: int):
    block: list[str] = []
    with open(path, encoding="utf-8", newline="") as fh:
        for line in fh:
            block.append(line.rstrip("\n"))
            if len(block) >= size:
                yield block
                block = []
    if block:
        yield block


def aggregate(
    spec: AggregationSpec,
    parsed_path: str | Path,
    analyser: Analyser,
    threads: int = 1,
) -> list[ScoreRow]:
    """One scored row per (bucket, region) cell, normalised per group.

    Cells with undefined pss are emitted with pss=NA and stay out of
    their normalisation group; a group whose best defined score is 0
    gets npss=NA throughout.  Rows come back sorted by bucket then
    region, so equal inputs give byte-equal tables downstream.
    """
    spec.validate()
    start, end = spec.window
    cells: dict = {}
    skipped = 0
    done = 0
    if threads <= 1:
        _agg_init(analyser, spec.level, start, end, spec.bucket_seconds)
        for block in _blocks(Path(parsed_path), 50_000):
            part, bad = _agg_block(block)
            _merge_cells(cells, part)
            skipped += bad
            done += len(block)
            if done % 500_000 == 0:
                log.info("aggregate: %d rows in", done)
        _agg_state.clear()
    else:
        ctx = multiprocessing.get_context()
        with ctx.Pool(
            processes=threads,
            initializer=_agg_init,
            initargs=(analyser, spec.level, start, end, spec.bucket_seconds),
        ) as pool:
            for part, bad in pool.imap(_agg_block, _blocks(Path(parsed_path), 20_000)):
                _merge_cells(cells, part)
                skipped += bad
    if skipped:
        log.warning("aggregate: skipped %d malformed parsed rows", skipped)

    delta = timedelta(seconds=spec.bucket_seconds)
    rows: list[ScoreRow] = []
    for (bucket, region, parent), (pos, neg, tweets) in cells.items():
        bucket_start = start + bucket * delta
        bucket_end = min(bucket_start + delta, end)
        counts = SentimentCounts(pos=pos, neg=neg, unit=analyser.unit)
        rows.append(ScoreRow(
            approach=analyser.approach,
            level=spec.level,
            region=region,
            parent=parent,
            bucket_start=bucket_start,
            bucket_end=bucket_end,
            pos_count=pos,
            neg_count=neg,
            tweet_count=tweets,
            pss=compute_pss(counts),
            npss=None,
        ))

    groups: dict = {}
    for row in rows:
        if row.pss is None:
            continue
        key = (row.bucket_start, row.parent if spec.norm_scope == "siblings" else None)
        groups.setdefault(key, []).append(row)
    for members in groups.values():
        top = max(row.pss for row in members)
        if top <= 0.0:
            continue  # nothing positive anywhere in the group: npss stays NA
        for row in members:
            row.npss = row.pss / top

    rows.sort(key=lambda r: (r.bucket_start, r.region))
    return rows


@dataclass
class ScoreSeries:
    """Defined pss over strictly increasing bucket starts, for one region."""

    region: str
    approach: str
    points: list[tuple[datetime, float]] = field(default_factory=list)

    def validate(self) -> None:
        for (earlier, _), (later, _) in zip(self.points, self.points[1:]):
            if not earlier < later:
                raise EstimatorError(f"series for {self.region}: bucket starts not increasing")
        if any(p is None for _, p in self.points):
            raise EstimatorError(f"series for {self.region}: undefined score")


def series_from_rows(
    rows: Iterable[ScoreRow],
    region: str,
    approach: str,
    bucket_seconds: int | None = None,
) -> ScoreSeries:
    """Build the pss series of one region and approach from score rows."""
    points = []
    for row in rows:
        if row.region != region or row.approach != approach or row.pss is None:
            continue
        if bucket_seconds is not None:
            if (row.bucket_end - row.bucket_start).total_seconds() != bucket_seconds:
                continue
        points.append((row.bucket_start, row.pss))
    points.sort(key=lambda p: p[0])
    series = ScoreSeries(region=region, approach=approach, points=points)
    series.validate()
    return series


def correlate(series_a: ScoreSeries, series_b: ScoreSeries) -> float:
    """Pearson correlation over buckets both series cover.

    Raises CorrelationError when fewer than two buckets join or either
    joined side is constant.
    """
    series_a.validate()
    series_b.validate()
    by_bucket = dict(series_b.points)
    joined = [(pss, by_bucket[ts]) for ts, pss in series_a.points if ts in by_bucket]
    if len(joined) < 2:
        raise CorrelationError(f"only {len(joined)} joined points, need at least 2")
    xs = np.array([x for x, _ in joined], dtype=float)
    ys = np.array([y for _, y in joined], dtype=float)
    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        raise CorrelationError("correlation undefined for a constant series")
    r = float(np.corrcoef(xs, ys)[0, 1])
    return min(1.0, max(-1.0, r))
