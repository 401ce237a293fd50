import json
import re
from datetime import datetime, timezone
from pathlib import Path

import pytest

from geosent import bundled


@pytest.fixture(scope="session")
def lexicon_file():
    return bundled.lexicon_path()


@pytest.fixture(scope="session")
def regions_file():
    return bundled.regions_path()


@pytest.fixture(scope="session")
def corpus_file():
    return bundled.corpus_path()


@pytest.fixture(scope="session")
def training_file():
    return bundled.training_path()


@pytest.fixture(scope="session")
def model_file():
    return bundled.model_path()


def utc(*args):
    return datetime(*args, tzinfo=timezone.utc)


def square(x0, y0, x1, y1):
    """A closed counter-clockwise ring in (lon, lat) order."""
    return [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]


def grid_regions(side: int) -> dict:
    """A side x side county grid covering one square country.

    County (i, j) spans lon [i, i+1) x lat [j, j+1); names are stable and
    sortable so tests can predict file order.
    """
    features = []
    for i in range(side):
        for j in range(side):
            features.append({
                "type": "Feature",
                "properties": {
                    "region_id": f"c-{i:02d}-{j:02d}",
                    "name": f"county-{i:02d}-{j:02d}",
                    "level": "County",
                    "parent": "gridland",
                },
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [square(i, j, i + 1, j + 1)],
                },
            })
    features.append({
        "type": "Feature",
        "properties": {
            "region_id": "c-grid",
            "name": "gridland",
            "level": "Country",
            "parent": "",
        },
        "geometry": {
            "type": "Polygon",
            "coordinates": [square(0, 0, side, side)],
        },
    })
    return {"type": "FeatureCollection", "features": features}


@pytest.fixture
def grid_regions_file(tmp_path):
    def write(side: int) -> Path:
        path = tmp_path / f"grid{side}.geojson"
        path.write_text(json.dumps(grid_regions(side)), encoding="utf-8")
        return path
    return write


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion at the end of the run

_CRITERION_RE = re.compile(r"test_acceptance\.py::\w*test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    tally: dict[int, list[int]] = {}
    for bucket in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(bucket, []):
            match = _CRITERION_RE.search(report.nodeid)
            if not match:
                continue
            number = int(match.group(1))
            passed, total = tally.setdefault(number, [0, 0])
            tally[number][1] = total + 1
            if bucket == "passed":
                tally[number][0] = passed + 1
    if not tally:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(tally):
        passed, total = tally[number]
        verdict = "PASS" if passed == total else "FAIL"
        terminalreporter.write_line(
            f"criterion {number}: {verdict} ({passed}/{total} checks)"
        )
