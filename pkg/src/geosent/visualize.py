"""Rendering score tables as KML overlays, tile maps, and line graphs.

All three emitters share two conventions.  Numbers shown to a human are
cut to four decimal places, rounding halves away from zero; numbers meant
to be read back by software (the line graph's CSV) keep full precision.
Colour runs red at a relative score of 0 through olive at 0.5 to green
at 1, and a region whose score is undefined is painted a flat grey
rather than failing the whole render.

Every emitter writes deterministic bytes: same rows in, same file out.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from datetime import timedelta
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from xml.etree import ElementTree as ET

from .georesolve import RegionIndex, RegionPolygon
from .store import ScoreRow, format_instant

log = logging.getLogger(__name__)

KML_NS = "http://www.opengis.net/kml/2.2"
SVG_NS = "http://www.w3.org/2000/svg"

UNDEFINED_GREY = (128, 128, 128)

LINE_COLORS = {
    "Dictionary": "#1f77b4",
    "MachineLearning": "#d62728",
}
_FALLBACK_LINE_COLOR = "#555555"


class VisualizeError(Exception):
    """Raised when rows cannot be rendered as asked."""


@dataclass(frozen=True)
class ColorScale:
    """Linear ramp between two RGB endpoints, indexed by a 0..1 score."""

    low: tuple[int, int, int] = (255, 0, 0)
    high: tuple[int, int, int] = (0, 255, 0)


DEFAULT_SCALE = ColorScale()


def _half_up(value: float) -> int:
    """Round to the nearest integer, halves away from zero."""
    if value >= 0:
        return math.floor(value + 0.5)
    return -math.floor(-value + 0.5)


def color_for(scale: ColorScale, npss: float) -> tuple[int, int, int]:
    """Interpolate the scale at a relative score in [0, 1]."""
    if not 0.0 <= npss <= 1.0:
        raise VisualizeError(f"relative score {npss!r} is outside [0, 1]")
    return tuple(
        _half_up(lo + (hi - lo) * npss) for lo, hi in zip(scale.low, scale.high)
    )


def kml_color(rgb: tuple[int, int, int], alpha: int = 255) -> str:
    """KML colour string: aabbggrr, lowercase hex."""
    r, g, b = rgb
    return f"{alpha:02x}{b:02x}{g:02x}{r:02x}"


def svg_color(rgb: tuple[int, int, int]) -> str:
    r, g, b = rgb
    return f"#{r:02x}{g:02x}{b:02x}"


def fmt4(value: float) -> str:
    """Four decimal places, halves rounded away from zero."""
    return str(Decimal(repr(value)).quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP))


def _fmt4_or_na(value: float | None) -> str:
    return "NA" if value is None else fmt4(value)


def _single_bucket(rows: list[ScoreRow], what: str) -> None:
    if not rows:
        raise VisualizeError(f"{what}: no rows to render")
    buckets = {row.bucket_start for row in rows}
    if len(buckets) > 1:
        raise VisualizeError(f"{what}: rows span {len(buckets)} buckets, expected one")
    levels = {row.level for row in rows}
    if len(levels) > 1:
        raise VisualizeError(f"{what}: rows mix levels {sorted(levels)}")
    approaches = {row.approach for row in rows}
    if len(approaches) > 1:
        raise VisualizeError(f"{what}: rows mix approaches {sorted(approaches)}")
    names = [row.region for row in rows]
    if len(set(names)) != len(names):
        raise VisualizeError(f"{what}: duplicate region rows")


def _fill_for(scale: ColorScale, row: ScoreRow) -> tuple[int, int, int]:
    if row.npss is None:
        log.warning("region %r has no relative score; painting it grey", row.region)
        return UNDEFINED_GREY
    return color_for(scale, row.npss)


# ---------------------------------------------------------------------------
# KML


def _ring_text(ring: list[tuple[float, float]]) -> str:
    closed = list(ring)
    if closed[0] != closed[-1]:
        closed.append(closed[0])
    return " ".join(f"{lon!r},{lat!r},0" for lon, lat in closed)


def _polygon_element(parent: ET.Element, part: RegionPolygon) -> None:
    poly = ET.SubElement(parent, "Polygon")
    outer = ET.SubElement(poly, "outerBoundaryIs")
    ring = ET.SubElement(outer, "LinearRing")
    ET.SubElement(ring, "coordinates").text = _ring_text(part.exterior)
    for hole in part.holes:
        inner = ET.SubElement(poly, "innerBoundaryIs")
        ring = ET.SubElement(inner, "LinearRing")
        ET.SubElement(ring, "coordinates").text = _ring_text(hole)


def emit_kml(
    rows: list[ScoreRow],
    index: RegionIndex,
    out_path: str | Path,
    scale: ColorScale = DEFAULT_SCALE,
) -> None:
    """Write one bucket of scores as a coloured KML overlay.

    Expects rows for a single approach, level, and bucket, one row per
    region; each region must exist in the index at that level.
    """
    _single_bucket(rows, "kml")
    for row in rows:
        if not index.parts(row.level, row.region):
            raise VisualizeError(
                f"kml: region {row.region!r} is not in the region file at level {row.level}"
            )

    root = ET.Element("kml", xmlns=KML_NS)
    doc = ET.SubElement(root, "Document")
    name = ET.SubElement(doc, "name")
    name.text = (
        f"{rows[0].approach} sentiment, {rows[0].level} level, "
        f"{format_instant(rows[0].bucket_start)}"
    )
    for i, row in enumerate(rows):
        style = ET.SubElement(doc, "Style", id=f"s{i}")
        poly_style = ET.SubElement(style, "PolyStyle")
        ET.SubElement(poly_style, "color").text = kml_color(_fill_for(scale, row))
        ET.SubElement(poly_style, "fill").text = "1"
        ET.SubElement(poly_style, "outline").text = "1"
        line_style = ET.SubElement(style, "LineStyle")
        ET.SubElement(line_style, "color").text = "ff000000"
        ET.SubElement(line_style, "width").text = "1"
    for i, row in enumerate(rows):
        mark = ET.SubElement(doc, "Placemark")
        ET.SubElement(mark, "name").text = row.region
        ET.SubElement(mark, "description").text = (
            f"pss={_fmt4_or_na(row.pss)} npss={_fmt4_or_na(row.npss)} "
            f"positive={row.pos_count} negative={row.neg_count} tweets={row.tweet_count}"
        )
        ET.SubElement(mark, "styleUrl").text = f"#s{i}"
        parts = index.parts(row.level, row.region)
        if len(parts) == 1:
            _polygon_element(mark, parts[0])
        else:
            multi = ET.SubElement(mark, "MultiGeometry")
            for part in parts:
                _polygon_element(multi, part)

    tree = ET.ElementTree(root)
    ET.indent(tree, space="  ")
    tree.write(out_path, encoding="UTF-8", xml_declaration=True)


# ---------------------------------------------------------------------------
# Tile map


def _strip_worst(volumes: list[int], total: int, width: float, height: float) -> float:
    """Worst tile aspect ratio if these volumes share one vertical strip."""
    strip_volume = sum(volumes)
    w = strip_volume / total * width
    worst = 1.0
    for v in volumes:
        h = v / strip_volume * height
        worst = max(worst, w / h if w > h else h / w)
    return worst


def _pack_strips(
    rows: list[ScoreRow], total: int, width: float, height: float, max_ratio: float
) -> list[list[ScoreRow]]:
    strips: list[list[ScoreRow]] = []
    current: list[ScoreRow] = []
    for row in rows:
        if current:
            vols = [r.tweet_count for r in current]
            if (
                _strip_worst(vols, total, width, height) <= max_ratio
                and _strip_worst(vols + [row.tweet_count], total, width, height) > max_ratio
            ):
                strips.append(current)
                current = [row]
                continue
        current.append(row)
    if current:
        strips.append(current)
    return strips


def emit_tilemap(
    rows: list[ScoreRow],
    out_path: str | Path,
    scale: ColorScale = DEFAULT_SCALE,
    width: int = 1000,
    height: int = 600,
    max_ratio: float = 4.0,
) -> None:
    """Write one bucket of county scores as an SVG tile map.

    Tile area is proportional to each county's share of the bucket's
    tweets.  Counties are laid out largest first in vertical strips; a
    strip is closed once adding the next county would push some tile past
    the aspect-ratio limit.  Zero-volume counties are skipped.
    """
    _single_bucket(rows, "tilemap")
    drawable = [row for row in rows if row.tweet_count > 0]
    skipped = len(rows) - len(drawable)
    if skipped:
        log.warning("tilemap: skipped %d regions with no tweets", skipped)
    if not drawable:
        raise VisualizeError("tilemap: every region has zero tweets")
    drawable.sort(key=lambda row: (-row.tweet_count, row.region))
    total = sum(row.tweet_count for row in drawable)

    root = ET.Element(
        "svg",
        xmlns=SVG_NS,
        width=str(width),
        height=str(height),
        viewBox=f"0 0 {width} {height}",
        version="1.1",
    )
    ET.SubElement(root, "title").text = (
        f"County sentiment, {format_instant(drawable[0].bucket_start)}"
    )
    ET.SubElement(
        root, "rect",
        x="0", y="0", width=str(width), height=str(height), fill="#ffffff",
    )

    x = 0.0
    for strip in _pack_strips(drawable, total, float(width), float(height), max_ratio):
        strip_volume = sum(row.tweet_count for row in strip)
        strip_width = strip_volume / total * width
        y = 0.0
        for row in strip:
            tile_height = row.tweet_count / strip_volume * height
            group = ET.SubElement(root, "g")
            rect = ET.SubElement(
                group, "rect",
                x=f"{x:.2f}", y=f"{y:.2f}",
                width=f"{strip_width:.2f}", height=f"{tile_height:.2f}",
                fill=svg_color(_fill_for(scale, row)),
                stroke="#ffffff",
            )
            rect.set("stroke-width", "1")
            ET.SubElement(group, "title").text = (
                f"{row.region}: npss={_fmt4_or_na(row.npss)} tweets={row.tweet_count}"
            )
            if strip_width >= 60 and tile_height >= 16:
                label = ET.SubElement(
                    group, "text",
                    x=f"{x + strip_width / 2:.2f}", y=f"{y + tile_height / 2:.2f}",
                    fill="#111111",
                )
                label.set("text-anchor", "middle")
                label.set("dominant-baseline", "middle")
                label.set("font-size", "11")
                label.set("font-family", "sans-serif")
                label.text = row.region
            y += tile_height
        x += strip_width

    tree = ET.ElementTree(root)
    ET.indent(tree, space="  ")
    tree.write(out_path, encoding="UTF-8", xml_declaration=True)


# ---------------------------------------------------------------------------
# Line graph


def emit_linegraph(
    rows: list[ScoreRow],
    out_prefix: str | Path,
    display_tz_offset_minutes: int = 0,
) -> tuple[Path, Path]:
    """Write a per-bucket score series as an SVG graph plus a CSV twin.

    Expects rows for one region at one level, any number of approaches.
    Buckets present for every approach are drawn; the rest are dropped so
    the lines stay comparable.  The CSV carries full-precision scores;
    the graph shows the absolute score per bucket, one line per approach.
    The timezone offset shifts axis labels only, never the data.
    """
    if not rows:
        raise VisualizeError("linegraph: no rows to render")
    regions = {row.region for row in rows}
    if len(regions) > 1:
        raise VisualizeError(f"linegraph: rows mix regions {sorted(regions)}")
    levels = {row.level for row in rows}
    if len(levels) > 1:
        raise VisualizeError(f"linegraph: rows mix levels {sorted(levels)}")
    region = rows[0].region

    by_approach: dict[str, dict] = {}
    for row in rows:
        bucket = by_approach.setdefault(row.approach, {})
        if row.bucket_start in bucket:
            raise VisualizeError(
                f"linegraph: duplicate bucket {format_instant(row.bucket_start)} "
                f"for approach {row.approach}"
            )
        bucket[row.bucket_start] = row
    approaches = sorted(by_approach)
    shared = set.intersection(*(set(v) for v in by_approach.values()))
    if not shared:
        raise VisualizeError("linegraph: approaches share no buckets")
    buckets = sorted(shared)

    out_prefix = Path(out_prefix)
    svg_path = out_prefix.with_name(out_prefix.name + ".svg")
    csv_path = out_prefix.with_name(out_prefix.name + ".csv")

    with csv_path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["bucket_start", "region", "approach", "pss", "npss", "tweet_count"])
        for bucket in buckets:
            for approach in approaches:
                row = by_approach[approach][bucket]
                writer.writerow([
                    format_instant(bucket),
                    region,
                    approach,
                    "NA" if row.pss is None else repr(row.pss),
                    "NA" if row.npss is None else repr(row.npss),
                    row.tweet_count,
                ])

    _write_linegraph_svg(region, approaches, by_approach, buckets,
                         svg_path, display_tz_offset_minutes)
    return svg_path, csv_path


def _write_linegraph_svg(
    region: str,
    approaches: list[str],
    by_approach: dict[str, dict],
    buckets: list,
    svg_path: Path,
    display_tz_offset_minutes: int,
) -> None:
    width, height = 1000, 600
    left, right, top, bottom = 70, 30, 50, 80
    plot_w = width - left - right
    plot_h = height - top - bottom

    top_score = 0.0
    for approach in approaches:
        for bucket in buckets:
            row = by_approach[approach][bucket]
            if row.pss is not None:
                top_score = max(top_score, row.pss)
    if top_score == 0.0:
        top_score = 1.0
    y_max = top_score * 1.05

    def x_of(i: int) -> float:
        if len(buckets) == 1:
            return left + plot_w / 2
        span = (buckets[-1] - buckets[0]).total_seconds()
        return left + (buckets[i] - buckets[0]).total_seconds() / span * plot_w

    def y_of(score: float) -> float:
        return top + plot_h - score / y_max * plot_h

    root = ET.Element(
        "svg",
        xmlns=SVG_NS,
        width=str(width), height=str(height),
        viewBox=f"0 0 {width} {height}", version="1.1",
    )
    ET.SubElement(root, "title").text = f"Sentiment over time, {region}"
    ET.SubElement(
        root, "rect",
        x="0", y="0", width=str(width), height=str(height), fill="#ffffff",
    )
    heading = ET.SubElement(
        root, "text", x=f"{width / 2:.2f}", y="28", fill="#111111",
    )
    heading.set("text-anchor", "middle")
    heading.set("font-size", "16")
    heading.set("font-family", "sans-serif")
    heading.text = f"{region}: positive-to-negative score per bucket"

    axes = ET.SubElement(root, "g")
    axes.set("stroke", "#333333")
    axes.set("stroke-width", "1")
    ET.SubElement(
        axes, "line",
        x1=str(left), y1=str(top), x2=str(left), y2=str(top + plot_h),
    )
    ET.SubElement(
        axes, "line",
        x1=str(left), y1=str(top + plot_h), x2=str(left + plot_w), y2=str(top + plot_h),
    )

    for k in range(5):
        value = y_max * k / 4
        y = y_of(value)
        grid = ET.SubElement(
            root, "line",
            x1=str(left), y1=f"{y:.2f}", x2=str(left + plot_w), y2=f"{y:.2f}",
            stroke="#dddddd",
        )
        grid.set("stroke-width", "1")
        tick = ET.SubElement(
            root, "text",
            x=str(left - 8), y=f"{y + 4:.2f}", fill="#333333",
        )
        tick.set("text-anchor", "end")
        tick.set("font-size", "11")
        tick.set("font-family", "sans-serif")
        tick.text = f"{value:.2f}"

    shift = timedelta(minutes=display_tz_offset_minutes)
    step = max(1, math.ceil(len(buckets) / 8))
    for i in range(0, len(buckets), step):
        x = x_of(i)
        mark = ET.SubElement(
            root, "line",
            x1=f"{x:.2f}", y1=str(top + plot_h), x2=f"{x:.2f}", y2=str(top + plot_h + 5),
            stroke="#333333",
        )
        mark.set("stroke-width", "1")
        label = ET.SubElement(
            root, "text",
            x=f"{x:.2f}", y=str(top + plot_h + 22), fill="#333333",
        )
        label.set("text-anchor", "middle")
        label.set("font-size", "11")
        label.set("font-family", "sans-serif")
        label.text = (buckets[i] + shift).strftime("%m-%d %H:%M")

    for slot, approach in enumerate(approaches):
        color = LINE_COLORS.get(approach, _FALLBACK_LINE_COLOR)
        points = []
        for i, bucket in enumerate(buckets):
            row = by_approach[approach][bucket]
            if row.pss is None:
                continue
            points.append(f"{x_of(i):.2f},{y_of(row.pss):.2f}")
        if points:
            line = ET.SubElement(root, "polyline", points=" ".join(points))
            line.set("fill", "none")
            line.set("stroke", color)
            line.set("stroke-width", "2")
        key_y = top + 16 * slot
        swatch = ET.SubElement(
            root, "line",
            x1=str(left + plot_w - 150), y1=f"{key_y:.2f}",
            x2=str(left + plot_w - 126), y2=f"{key_y:.2f}",
            stroke=color,
        )
        swatch.set("stroke-width", "2")
        key = ET.SubElement(
            root, "text",
            x=str(left + plot_w - 120), y=f"{key_y + 4:.2f}", fill="#111111",
        )
        key.set("font-size", "12")
        key.set("font-family", "sans-serif")
        key.text = approach

    tree = ET.ElementTree(root)
    ET.indent(tree, space="  ")
    tree.write(svg_path, encoding="UTF-8", xml_declaration=True)
