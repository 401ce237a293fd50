"""Collecting raw tweets and turning them into the parsed table.

Collection is deliberately dumb: whatever arrives on the stream is stored
byte for byte, one line per record, so a bad day at the firehose can always
be re-processed later.  Parsing is where judgement happens.  A record
survives only if it carries an id, a creation time we can read, a geo
point, and a text; the point must then land inside a known region.
Everything else is counted and dropped, never silently.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from multiprocessing import Pool
from pathlib import Path
from typing import BinaryIO, Iterator

from .georesolve import RegionIndex, resolve
from .store import ParsedTweet, RawTable, format_parsed_line, iter_raw, parse_instant

log = logging.getLogger(__name__)

NO_GEO = "no_geo"
MALFORMED = "malformed"
UNRESOLVED = "unresolved"

_CLASSIC_TIME_RE = re.compile(
    r"^[A-Za-z]{3} (?P<mon>[A-Za-z]{3}) (?P<day>\d{1,2}) "
    r"(?P<h>\d{2}):(?P<m>\d{2}):(?P<s>\d{2}) "
    r"(?P<sign>[+-])(?P<oh>\d{2})(?P<om>\d{2}) (?P<year>\d{4})$"
)

_MONTHS = {
    "Jan": 1, "Feb": 2, "Mar": 3, "Apr": 4, "May": 5, "Jun": 6,
    "Jul": 7, "Aug": 8, "Sep": 9, "Oct": 10, "Nov": 11, "Dec": 12,
}


@dataclass
class CollectorStats:
    """Line accounting for a collect or parse run."""

    lines_read: int = 0
    accepted: int = 0
    rejected_no_geo: int = 0
    rejected_malformed: int = 0
    rejected_unresolved: int = 0

    def merge(self, other: "CollectorStats") -> None:
        self.lines_read += other.lines_read
        self.accepted += other.accepted
        self.rejected_no_geo += other.rejected_no_geo
        self.rejected_malformed += other.rejected_malformed
        self.rejected_unresolved += other.rejected_unresolved

    def consistent(self) -> bool:
        return self.lines_read == (
            self.accepted
            + self.rejected_no_geo
            + self.rejected_malformed
            + self.rejected_unresolved
        )


@dataclass(frozen=True)
class ParsedCandidate:
    """A record that parsed cleanly but has not been region-resolved yet."""

    tweet_id: str
    timestamp: datetime
    lat: float
    lon: float
    text: str


def collect(source: BinaryIO, raw_path: str | Path) -> tuple[CollectorStats, bytes]:
    """Append complete lines from a byte stream to the raw table.

    Returns the stats and any trailing fragment that was not terminated by
    a newline.  The fragment is NOT written; the caller decides whether to
    keep it for a resumed stream or to drop it.
    """
    stats = CollectorStats()
    buffer = b""
    with RawTable(raw_path) as table:
        while True:
            chunk = source.read(65536)
            if not chunk:
                break
            buffer += chunk
            while True:
                cut = buffer.find(b"\n")
                if cut < 0:
                    break
                table.append_bytes(buffer[:cut])
                stats.lines_read += 1
                buffer = buffer[cut + 1 :]
    if buffer:
        log.warning("collect: %d trailing bytes without newline were not stored", len(buffer))
    return stats, buffer


def _parse_created_at(value: str) -> datetime | None:
    m = _CLASSIC_TIME_RE.match(value)
    if m is not None:
        month = _MONTHS.get(m.group("mon"))
        if month is None:
            return None
        offset = timedelta(hours=int(m.group("oh")), minutes=int(m.group("om")))
        if m.group("sign") == "-":
            offset = -offset
        try:
            stamp = datetime(
                int(m.group("year")), month, int(m.group("day")),
                int(m.group("h")), int(m.group("m")), int(m.group("s")),
                tzinfo=timezone(offset),
            )
        except ValueError:
            return None
        return stamp.astimezone(timezone.utc)
    try:
        stamp = parse_instant(value)
    except ValueError:
        return None
    return stamp.replace(microsecond=0)


def _coordinates_of(record: dict) -> tuple[float, float] | None:
    """Pull (lat, lon) out of a record, or None when there is no point."""
    geo = record.get("coordinates")
    if isinstance(geo, dict):
        if geo.get("type") not in (None, "Point"):
            return None
        geo = geo.get("coordinates")
    if not isinstance(geo, (list, tuple)) or len(geo) != 2:
        return None
    lon, lat = geo
    if isinstance(lon, bool) or isinstance(lat, bool):
        return None
    if not isinstance(lon, (int, float)) or not isinstance(lat, (int, float)):
        return None
    return float(lat), float(lon)


def sanitize_text(text: str) -> str:
    """Flatten tabs and line breaks so the text fits in one table field."""
    return (
        text.replace("\r\n", "\\n")
        .replace("\r", "\\n")
        .replace("\n", "\\n")
        .replace("\t", "\\t")
    )


def parse_record(payload: bytes | str) -> ParsedCandidate | str:
    """Parse one raw line; returns a candidate or a rejection reason."""
    try:
        if isinstance(payload, bytes):
            payload = payload.decode("utf-8")
        record = json.loads(payload)
    except (UnicodeDecodeError, json.JSONDecodeError):
        return MALFORMED
    if not isinstance(record, dict):
        return MALFORMED

    tweet_id = record.get("id_str")
    if tweet_id is None and "id" in record:
        tweet_id = str(record["id"])
    if not isinstance(tweet_id, str) or not tweet_id:
        return MALFORMED

    created = record.get("created_at")
    if not isinstance(created, str):
        return MALFORMED
    stamp = _parse_created_at(created)
    if stamp is None:
        return MALFORMED

    text = record.get("text")
    if not isinstance(text, str):
        return MALFORMED

    if "coordinates" not in record or record.get("coordinates") is None:
        return NO_GEO
    point = _coordinates_of(record)
    if point is None:
        return MALFORMED
    lat, lon = point
    if not (-90.0 <= lat <= 90.0) or not (-180.0 <= lon <= 180.0):
        return MALFORMED

    return ParsedCandidate(tweet_id, stamp, lat, lon, sanitize_text(text))


_parse_index: RegionIndex | None = None


def _parse_init(index: RegionIndex) -> None:
    global _parse_index
    _parse_index = index


def _parse_block(lines: list[bytes]) -> tuple[list[str], tuple[int, int, int, int]]:
    """Worker: parse and resolve a block, returning T2 lines and counts."""
    assert _parse_index is not None
    out: list[str] = []
    accepted = no_geo = malformed = unresolved = 0
    for payload in lines:
        got = parse_record(payload)
        if got == NO_GEO:
            no_geo += 1
            continue
        if got == MALFORMED:
            malformed += 1
            continue
        assert isinstance(got, ParsedCandidate)
        where = resolve(_parse_index, got.lat, got.lon)
        if where is None:
            unresolved += 1
            continue
        country, county = where
        row = ParsedTweet(
            tweet_id=got.tweet_id,
            timestamp=got.timestamp,
            lat=got.lat,
            lon=got.lon,
            country=country,
            county=county,
            text=got.text,
        )
        try:
            row.validate()
        except ValueError:
            malformed += 1
            continue
        out.append(format_parsed_line(row))
        accepted += 1
    return out, (accepted, no_geo, malformed, unresolved)


def _raw_blocks(raw_path: str | Path, size: int) -> Iterator[list[bytes]]:
    block: list[bytes] = []
    for _, payload in iter_raw(raw_path):
        block.append(payload)
        if len(block) >= size:
            yield block
            block = []
    if block:
        yield block


def parse_corpus(
    raw_path: str | Path,
    index: RegionIndex,
    parsed_path: str | Path,
    threads: int = 1,
) -> CollectorStats:
    """Parse the whole raw table into the parsed table.

    Output order follows input order whatever the thread count, so runs
    are byte for byte reproducible.  `imap` keeps block order for the
    multi-process path; each block's counts sum to its line count, which
    is how `lines_read` is recovered without extra bookkeeping.
    """
    if threads < 1:
        raise ValueError("threads must be at least 1")
    stats = CollectorStats()
    out = Path(parsed_path)
    with out.open("w", encoding="utf-8", newline="") as sink:
        if threads == 1:
            global _parse_index
            _parse_init(index)
            try:
                for block in _raw_blocks(raw_path, 50_000):
                    _drain(stats, sink, _parse_block(block))
                    if stats.lines_read % 500_000 == 0:
                        log.info("parse: %d lines in", stats.lines_read)
            finally:
                _parse_index = None
        else:
            with Pool(threads, initializer=_parse_init, initargs=(index,)) as pool:
                for result in pool.imap(_parse_block, _raw_blocks(raw_path, 20_000)):
                    _drain(stats, sink, result)
    if stats.rejected_malformed:
        log.warning("parse: %d malformed records dropped", stats.rejected_malformed)
    return stats


def _drain(stats: CollectorStats, sink, result: tuple[list[str], tuple[int, int, int, int]]) -> None:
    lines, (accepted, no_geo, malformed, unresolved) = result
    stats.lines_read += accepted + no_geo + malformed + unresolved
    stats.accepted += accepted
    stats.rejected_no_geo += no_geo
    stats.rejected_malformed += malformed
    stats.rejected_unresolved += unresolved
    if lines:
        sink.write("\n".join(lines) + "\n")
