"""Append-only tables for the tweet sentiment pipeline.

Three on-disk formats, all line-oriented and append-only:

 - T1 raw:    one collector payload per line, bytes preserved verbatim.
 - T2 parsed: TSV with columns tweet_id, timestamp (ISO-8601 UTC, seconds
   precision), lat, lon, country, county, text.  Tabs and newlines never
   appear inside a field; tweet text is escaped upstream.
 - T3 scores: CSV with header approach,level,region,parent,bucket_start,
   bucket_end,pos_count,neg_count,tweet_count,pss,npss.  Undefined pss or
   npss is serialised as NA.  Floats are written at full precision so a
   read back row compares equal.

Appends never rewrite earlier bytes; writers validate before touching the
file so a rejected batch leaves the table unchanged.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Iterator

log = logging.getLogger(__name__)

APPROACHES = ("Dictionary", "MachineLearning")
LEVELS = ("Country", "County")

#: county value used when a point falls inside a country but no county polygon
UNASSIGNED = "unassigned"

SCORE_COLUMNS = (
    "approach", "level", "region", "parent", "bucket_start", "bucket_end",
    "pos_count", "neg_count", "tweet_count", "pss", "npss",
)


class StoreError(Exception):
    """Raised for unreadable tables or rejected writes."""


class ScoreRowError(StoreError):
    """A write_scores batch was rejected; .indices lists the bad rows."""

    def __init__(self, message: str, indices: list[int]):
        super().__init__(message)
        self.indices = indices


def format_instant(ts: datetime) -> str:
    """Render a UTC instant as ISO-8601 with Z suffix, seconds precision."""
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_instant(text: str) -> datetime:
    """Parse an ISO-8601 instant; naive values are taken as UTC."""
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


@dataclass
class ParsedTweet:
    """One geolocated tweet, already resolved to a country and county."""

    tweet_id: str
    timestamp: datetime
    lat: float
    lon: float
    country: str
    county: str
    text: str

    def validate(self) -> None:
        if not self.tweet_id:
            raise ValueError("empty tweet_id")
        if self.timestamp.tzinfo is None:
            raise ValueError(f"tweet {self.tweet_id}: naive timestamp")
        if self.timestamp.microsecond:
            raise ValueError(f"tweet {self.tweet_id}: sub-second timestamp")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"tweet {self.tweet_id}: latitude {self.lat} out of range")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"tweet {self.tweet_id}: longitude {self.lon} out of range")
        if not self.country:
            raise ValueError(f"tweet {self.tweet_id}: empty country")
        if not self.county:
            raise ValueError(f"tweet {self.tweet_id}: empty county")
        for field in (self.country, self.county, self.text):
            if "\t" in field or "\n" in field or "\r" in field:
                raise ValueError(f"tweet {self.tweet_id}: raw tab or newline in field")


@dataclass
class ScoreRow:
    """One (approach, level, region, bucket) cell of the scores table."""

    approach: str
    level: str
    region: str
    parent: str
    bucket_start: datetime
    bucket_end: datetime
    pos_count: int
    neg_count: int
    tweet_count: int
    pss: float | None
    npss: float | None

    def problem(self) -> str | None:
        """Describe the first invariant violation, or None if the row is good."""
        if self.approach not in APPROACHES:
            return f"unknown approach {self.approach!r}"
        if self.level not in LEVELS:
            return f"unknown level {self.level!r}"
        if not self.region:
            return "empty region"
        if not self.bucket_start < self.bucket_end:
            return "bucket_start must precede bucket_end"
        if min(self.pos_count, self.neg_count, self.tweet_count) < 0:
            return "negative count"
        if self.pss is None:
            if self.npss is not None:
                return "npss defined while pss is undefined"
            return None
        expected = self.pos_count / max(self.neg_count, 1)
        if not math.isclose(self.pss, expected, rel_tol=1e-9, abs_tol=1e-12):
            return f"pss {self.pss!r} does not equal pos/max(neg,1) = {expected!r}"
        if self.npss is not None and not 0.0 <= self.npss <= 1.0:
            return f"npss {self.npss!r} outside [0, 1]"
        return None


class RawTable:
    """Append handle for a T1 file; keeps the running 1-based line count."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._count = 0
        if self.path.exists():
            with open(self.path, "rb") as fh:
                self._count = sum(1 for _ in fh)
        self._fh = open(self.path, "ab")

    def append(self, payload: str) -> int:
        if "\n" in payload or "\r" in payload:
            raise StoreError("raw payload must be a single line")
        return self.append_bytes(payload.encode("utf-8"))

    def append_bytes(self, payload: bytes) -> int:
        """Append one verbatim line (no trailing newline in payload)."""
        self._fh.write(payload + b"\n")
        self._count += 1
        return self._count

    def flush(self) -> None:
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "RawTable":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def append_raw(table_path: str | Path, payload: str) -> int:
    """Append one line to a T1 table, returning its 1-based line number."""
    with RawTable(table_path) as table:
        n = table.append(payload)
    return n


def iter_raw(table_path: str | Path) -> Iterator[tuple[int, bytes]]:
    """Yield (line_number, payload_bytes) for every line of a T1 table."""
    with open(table_path, "rb") as fh:
        for number, line in enumerate(fh, start=1):
            yield number, line.rstrip(b"\n")


def format_parsed_line(row: ParsedTweet) -> str:
    """One T2 line for a validated row, without the trailing newline."""
    return (
        f"{row.tweet_id}\t{format_instant(row.timestamp)}\t{row.lat!r}\t{row.lon!r}"
        f"\t{row.country}\t{row.county}\t{row.text}"
    )


def write_parsed(table_path: str | Path, rows: Iterable[ParsedTweet], append: bool = False) -> int:
    """Write T2 rows, validating each; returns the number written."""
    staged = []
    for row in rows:
        row.validate()
        staged.append(format_parsed_line(row) + "\n")
    mode = "a" if append else "w"
    with open(table_path, mode, encoding="utf-8", newline="") as fh:
        fh.writelines(staged)
    return len(staged)


def _parse_parsed_line(line: str) -> ParsedTweet:
    parts = line.split("\t")
    if len(parts) != 7:
        raise ValueError(f"expected 7 fields, found {len(parts)}")
    tweet_id, stamp, lat, lon, country, county, text = parts
    row = ParsedTweet(
        tweet_id=tweet_id,
        timestamp=parse_instant(stamp),
        lat=float(lat),
        lon=float(lon),
        country=country,
        county=county,
        text=text,
    )
    row.validate()
    return row


def scan_parsed(
    table_path: str | Path,
    window: tuple[datetime, datetime],
    region_filter: tuple[str, str] | None = None,
    on_skip: Callable[[int, str], None] | None = None,
) -> Iterator[ParsedTweet]:
    """Yield T2 rows with window[0] <= timestamp < window[1], in file order.

    region_filter is an optional (level, name) pair matched against the
    row's country or county column.  Malformed rows are skipped: each one
    is reported through on_skip(line_number, reason) when given, otherwise
    logged as a warning.
    """
    start, end = window
    if not start < end:
        raise ValueError("window start must precede window end")
    if region_filter is not None and region_filter[0] not in LEVELS:
        raise ValueError(f"unknown region filter level {region_filter[0]!r}")
    with open(table_path, encoding="utf-8", newline="") as fh:
        for number, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                row = _parse_parsed_line(line)
            except ValueError as exc:
                if on_skip is not None:
                    on_skip(number, str(exc))
                else:
                    log.warning("skipping malformed parsed row %d: %s", number, exc)
                continue
            if not start <= row.timestamp < end:
                continue
            if region_filter is not None:
                level, name = region_filter
                field = row.country if level == "Country" else row.county
                if field != name:
                    continue
            yield row


def _format_score(value: float | None) -> str:
    return "NA" if value is None else repr(value)


def _parse_score(text: str) -> float | None:
    return None if text == "NA" else float(text)


def write_scores(table_path: str | Path, rows: list[ScoreRow], append: bool = False) -> int:
    """Write T3 rows after validating the whole batch.

    On any invalid row the batch is rejected with a ScoreRowError naming
    the offending indices and nothing is written.
    """
    problems = [(i, p) for i, p in ((i, row.problem()) for i, row in enumerate(rows)) if p]
    if problems:
        detail = "; ".join(f"row {i}: {p}" for i, p in problems)
        raise ScoreRowError(f"rejected score rows: {detail}", [i for i, _ in problems])
    fresh = not (append and Path(table_path).exists())
    mode = "a" if append else "w"
    with open(table_path, mode, encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if fresh:
            writer.writerow(SCORE_COLUMNS)
        for row in rows:
            writer.writerow([
                row.approach, row.level, row.region, row.parent,
                format_instant(row.bucket_start), format_instant(row.bucket_end),
                row.pos_count, row.neg_count, row.tweet_count,
                _format_score(row.pss), _format_score(row.npss),
            ])
    return len(rows)


def read_scores(table_path: str | Path) -> list[ScoreRow]:
    """Read a T3 table back into ScoreRow values."""
    rows = []
    with open(table_path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(SCORE_COLUMNS):
            raise StoreError(f"unexpected scores header {header!r}")
        for record in reader:
            if len(record) != len(SCORE_COLUMNS):
                raise StoreError(f"scores row has {len(record)} fields")
            rows.append(ScoreRow(
                approach=record[0],
                level=record[1],
                region=record[2],
                parent=record[3],
                bucket_start=parse_instant(record[4]),
                bucket_end=parse_instant(record[5]),
                pos_count=int(record[6]),
                neg_count=int(record[7]),
                tweet_count=int(record[8]),
                pss=_parse_score(record[9]),
                npss=_parse_score(record[10]),
            ))
    return rows
