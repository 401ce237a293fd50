"""Paths to the small data files shipped inside the package.

These exist so the demos and the command line work out of the box: a
starter opinion lexicon, a toy region file with two square counties, a
labelled training table, the model trained from it, and a nine-tweet
raw corpus that walks through every pipeline stage.  Real deployments
point the tools at their own files instead.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

_NAMES = {
    "lexicon": "lexicon.tsv",
    "regions": "regions.geojson",
    "corpus": "corpus.jsonl",
    "training": "train.tsv",
    "model": "model.nb",
}


def bundled_path(kind: str) -> Path:
    """Filesystem path of a bundled data file; see _NAMES for kinds."""
    try:
        name = _NAMES[kind]
    except KeyError:
        raise KeyError(f"no bundled file of kind {kind!r}; options: {sorted(_NAMES)}") from None
    path = Path(str(resources.files("geosent") / "_data" / name))
    if not path.is_file():
        raise FileNotFoundError(f"bundled file missing: {path}")
    return path


def lexicon_path() -> Path:
    return bundled_path("lexicon")


def regions_path() -> Path:
    return bundled_path("regions")


def corpus_path() -> Path:
    return bundled_path("corpus")


def training_path() -> Path:
    return bundled_path("training")


def model_path() -> Path:
    return bundled_path("model")
