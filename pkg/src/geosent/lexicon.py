"""Lexicon-based sentiment counting.

A lexicon is a TSV of pattern<TAB>strength lines: strength is an integer
in -5..-1 or 1..5, a trailing * marks a prefix wildcard, and # starts a
comment line.  Matching is case-insensitive against Word tokens and
hashtag bodies; an exact entry always beats a wildcard, and among
wildcards the longest prefix wins.  Only the sign of the strength feeds
the counts: one matched token is one positive or one negative word.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .store import ParsedTweet
from .tokenizer import HASHTAG, WORD, Token, tokenize

log = logging.getLogger(__name__)

WORDS = "Words"
TWEETS = "Tweets"


class LexiconError(Exception):
    """Raised for unreadable lexicon files; messages carry line numbers."""


@dataclass
class SentimentCounts:
    """Positive/negative tallies in a stated unit (Words or Tweets)."""

    pos: int
    neg: int
    unit: str


@dataclass
class Lexicon:
    exact: dict[str, int]
    wildcards: list[tuple[str, int]]  # (prefix, strength), longest prefix first

    def __len__(self) -> int:
        return len(self.exact) + len(self.wildcards)


def load_lexicon(path: str | Path) -> Lexicon:
    """Read a lexicon file; duplicate patterns keep the last entry."""
    exact: dict[str, int] = {}
    wild: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise LexiconError(f"line {number}: expected pattern<TAB>strength")
            pattern, raw_strength = parts[0].strip().lower(), parts[1].strip()
            try:
                strength = int(raw_strength)
            except ValueError:
                raise LexiconError(f"line {number}: strength {raw_strength!r} is not an integer") from None
            if strength == 0 or not -5 <= strength <= 5:
                raise LexiconError(f"line {number}: strength must be in -5..-1 or 1..5")
            wildcard = pattern.endswith("*")
            if wildcard:
                pattern = pattern[:-1]
            if not pattern:
                raise LexiconError(f"line {number}: empty pattern")
            if "*" in pattern:
                raise LexiconError(f"line {number}: * is only allowed at the end of a pattern")
            table = wild if wildcard else exact
            if pattern in table:
                log.warning("lexicon line %d: duplicate pattern %r, keeping the later entry", number, pattern)
            table[pattern] = strength
    ordered = sorted(wild.items(), key=lambda kv: (-len(kv[0]), kv[0]))
    return Lexicon(exact=exact, wildcards=ordered)


def match_token(lexicon: Lexicon, token: Token, hashtag_match: bool = True) -> int | None:
    """Return the matched strength for a Word or hashtag body, else None."""
    if token.kind == WORD:
        text = token.text
    elif token.kind == HASHTAG and hashtag_match:
        text = token.text[1:]
    else:
        return None
    text = text.lower()
    strength = lexicon.exact.get(text)
    if strength is not None:
        return strength
    for prefix, s in lexicon.wildcards:
        if text.startswith(prefix):
            return s
    return None


class DictionaryAnalyser:
    """Per-tweet positive/negative word counter for the aggregation step."""

    approach = "Dictionary"
    unit = WORDS

    def __init__(self, lexicon: Lexicon, hashtag_match: bool = True):
        self.lexicon = lexicon
        self.hashtag_match = hashtag_match

    def tweet_counts(self, text: str) -> tuple[int, int]:
        pos = neg = 0
        for token in tokenize(text):
            strength = match_token(self.lexicon, token, self.hashtag_match)
            if strength is None:
                continue
            if strength > 0:
                pos += 1
            else:
                neg += 1
        return pos, neg


def count_words(lexicon: Lexicon, tweets: Iterable[ParsedTweet], hashtag_match: bool = True) -> SentimentCounts:
    """Tally positive and negative lexicon matches over a tweet stream."""
    analyser = DictionaryAnalyser(lexicon, hashtag_match)
    pos = neg = 0
    for tweet in tweets:
        p, n = analyser.tweet_counts(tweet.text)
        pos += p
        neg += n
    return SentimentCounts(pos=pos, neg=neg, unit=WORDS)
