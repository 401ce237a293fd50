"""Point-to-region resolution over a GeoJSON region file.

Regions are loaded from a FeatureCollection whose features carry
region_id, name, level ("Country" or "County") and parent properties and
a Polygon or MultiPolygon geometry.  A MultiPolygon becomes several
RegionPolygon parts sharing one name, kept in file order.

Containment is even-odd ray casting with a half-open crossing rule: an
edge is crossed when the point's latitude lies in [min(y1,y2), max(y1,y2))
and the edge intersects the eastward ray strictly east of the point.
That rule assigns a point on a shared border to exactly one of the
adjacent polygons.  A bounding-box test runs first; resolution over a
large corpus is dominated by that prefilter.

County polygons are authoritative: resolve() returns the first county in
file order containing the point together with that county's parent
country, falling back to (country, "unassigned") when only a country
ring contains the point.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .store import LEVELS, UNASSIGNED


class GeoError(Exception):
    """Raised for unreadable or inconsistent region files."""


Ring = list[tuple[float, float]]


@dataclass
class RegionPolygon:
    """One polygon part of a region, with exterior ring and optional holes."""

    region_id: str
    name: str
    level: str
    parent: str
    exterior: Ring
    holes: list[Ring]
    bbox: tuple[float, float, float, float]  # min_lon, min_lat, max_lon, max_lat


def _clean_ring(raw, where: str) -> Ring:
    if not isinstance(raw, list) or len(raw) < 3:
        raise GeoError(f"{where}: ring must be a list of at least 3 positions")
    ring: Ring = []
    for pos in raw:
        if (not isinstance(pos, (list, tuple)) or len(pos) < 2
                or not all(isinstance(c, (int, float)) and math.isfinite(c) for c in pos[:2])):
            raise GeoError(f"{where}: bad position {pos!r}")
        ring.append((float(pos[0]), float(pos[1])))
    if ring[0] == ring[-1]:
        ring.pop()
    if len(ring) < 3:
        raise GeoError(f"{where}: ring has fewer than 3 distinct vertices")
    return ring


def _polygon_parts(geometry, where: str) -> list[list[Ring]]:
    """Normalise a geometry to a list of [exterior, *holes] ring lists."""
    gtype = geometry.get("type") if isinstance(geometry, dict) else None
    coords = geometry.get("coordinates") if isinstance(geometry, dict) else None
    if gtype == "Polygon":
        raw_parts = [coords]
    elif gtype == "MultiPolygon":
        raw_parts = coords
    else:
        raise GeoError(f"{where}: unsupported geometry type {gtype!r}")
    if not isinstance(raw_parts, list) or not raw_parts:
        raise GeoError(f"{where}: empty geometry")
    parts = []
    for p, raw_rings in enumerate(raw_parts):
        if not isinstance(raw_rings, list) or not raw_rings:
            raise GeoError(f"{where}: part {p} has no rings")
        parts.append([_clean_ring(r, f"{where} part {p} ring {i}") for i, r in enumerate(raw_rings)])
    return parts


class RegionIndex:
    """All region polygons of one file, in file order, with fast lookup rows."""

    def __init__(self, polygons: list[RegionPolygon]):
        self.polygons = polygons
        self.counties = [p for p in polygons if p.level == "County"]
        self.countries = [p for p in polygons if p.level == "Country"]
        country_names = {p.name for p in self.countries}
        for county in self.counties:
            if county.parent not in country_names:
                raise GeoError(f"county {county.name!r} has unknown parent {county.parent!r}")
        # flat rows for the resolve hot loop
        self._county_rows = [
            (p.bbox[0], p.bbox[1], p.bbox[2], p.bbox[3], [p.exterior] + p.holes, p.name, p.parent)
            for p in self.counties
        ]
        self._country_rows = [
            (p.bbox[0], p.bbox[1], p.bbox[2], p.bbox[3], [p.exterior] + p.holes, p.name)
            for p in self.countries
        ]

    def parts(self, level: str, name: str) -> list[RegionPolygon]:
        return [p for p in self.polygons if p.level == level and p.name == name]

    def names(self, level: str) -> list[str]:
        seen: list[str] = []
        for p in self.polygons:
            if p.level == level and p.name not in seen:
                seen.append(p.name)
        return seen


def load_regions(path: str | Path) -> RegionIndex:
    """Read a GeoJSON FeatureCollection into a RegionIndex.

    Errors name the offending feature.  Duplicate (level, name) pairs
    across features are rejected since region names key the parsed table.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise GeoError(f"cannot read region file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise GeoError(f"region file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise GeoError(f"region file {path} is not a FeatureCollection")
    features = doc.get("features")
    if not isinstance(features, list) or not features:
        raise GeoError(f"region file {path} has no features")

    polygons: list[RegionPolygon] = []
    seen: set[tuple[str, str]] = set()
    for i, feature in enumerate(features):
        where = f"feature {i}"
        props = feature.get("properties") if isinstance(feature, dict) else None
        if not isinstance(props, dict):
            raise GeoError(f"{where}: missing properties")
        try:
            region_id = str(props["region_id"])
            name = str(props["name"])
            level = str(props["level"])
            parent = str(props["parent"])
        except KeyError as exc:
            raise GeoError(f"{where}: missing property {exc}") from exc
        if level not in LEVELS:
            raise GeoError(f"{where}: unknown level {level!r}")
        if not name or any(c in name for c in "\t\n\r"):
            raise GeoError(f"{where}: bad region name {name!r}")
        if level == "County" and not parent:
            raise GeoError(f"{where}: county {name!r} has no parent")
        if name == UNASSIGNED:
            raise GeoError(f"{where}: region name {UNASSIGNED!r} is reserved")
        if (level, name) in seen:
            raise GeoError(f"{where}: duplicate region ({level}, {name})")
        seen.add((level, name))
        for rings in _polygon_parts(feature.get("geometry"), f"{where} ({name})"):
            exterior = rings[0]
            xs = [x for x, _ in exterior]
            ys = [y for _, y in exterior]
            polygons.append(RegionPolygon(
                region_id=region_id,
                name=name,
                level=level,
                parent=parent,
                exterior=exterior,
                holes=rings[1:],
                bbox=(min(xs), min(ys), max(xs), max(ys)),
            ))
    return RegionIndex(polygons)


def _crossings(rings: list[Ring], lat: float, lon: float) -> int:
    """Count eastward-ray edge crossings over all rings (even-odd rule)."""
    n = 0
    for ring in rings:
        x1, y1 = ring[-1]
        for x2, y2 in ring:
            if (y1 > lat) != (y2 > lat):
                if lon < x1 + (lat - y1) * (x2 - x1) / (y2 - y1):
                    n += 1
            x1, y1 = x2, y2
    return n


def contains(polygon: RegionPolygon, lat: float, lon: float) -> bool:
    """True when the point is inside the polygon (holes excluded)."""
    min_lon, min_lat, max_lon, max_lat = polygon.bbox
    if not (min_lon <= lon <= max_lon and min_lat <= lat <= max_lat):
        return False
    return _crossings([polygon.exterior] + polygon.holes, lat, lon) % 2 == 1


def resolve(index: RegionIndex, lat: float, lon: float) -> tuple[str, str] | None:
    """Map a point to (country, county), or None when nothing contains it.

    The first county polygon in file order wins; its parent supplies the
    country.  A point inside only a country ring gets the "unassigned"
    county sentinel.
    """
    for min_lon, min_lat, max_lon, max_lat, rings, name, parent in index._county_rows:
        if min_lon <= lon <= max_lon and min_lat <= lat <= max_lat:
            if _crossings(rings, lat, lon) % 2 == 1:
                return parent, name
    for min_lon, min_lat, max_lon, max_lat, rings, name in index._country_rows:
        if min_lon <= lon <= max_lon and min_lat <= lat <= max_lat:
            if _crossings(rings, lat, lon) % 2 == 1:
                return name, UNASSIGNED
    return None
