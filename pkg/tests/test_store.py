import math
from datetime import datetime, timezone

import pytest

from geosent.store import (
    ParsedTweet,
    RawTable,
    ScoreRow,
    ScoreRowError,
    StoreError,
    append_raw,
    format_instant,
    iter_raw,
    parse_instant,
    read_scores,
    scan_parsed,
    write_parsed,
    write_scores,
)

from conftest import utc


def tweet(**overrides):
    base = dict(
        tweet_id="1",
        timestamp=utc(2013, 7, 22, 12, 0, 0),
        lat=51.5,
        lon=-0.1,
        country="england",
        county="london",
        text="hello world",
    )
    base.update(overrides)
    return ParsedTweet(**base)


def score_row(**overrides):
    base = dict(
        approach="Dictionary",
        level="County",
        region="london",
        parent="england",
        bucket_start=utc(2013, 7, 22),
        bucket_end=utc(2013, 7, 23),
        pos_count=6,
        neg_count=3,
        tweet_count=4,
        pss=2.0,
        npss=0.5,
    )
    base.update(overrides)
    return ScoreRow(**base)


class TestInstants:
    def test_round_trip(self):
        stamp = utc(2013, 7, 22, 16, 24, 5)
        assert parse_instant(format_instant(stamp)) == stamp

    def test_format_is_utc_z(self):
        assert format_instant(utc(2013, 7, 22, 16, 24, 5)) == "2013-07-22T16:24:05Z"

    def test_non_utc_input_is_converted(self):
        from datetime import timedelta, timezone as tz
        plus_two = datetime(2013, 7, 22, 18, 0, 0, tzinfo=tz(timedelta(hours=2)))
        assert format_instant(plus_two) == "2013-07-22T16:00:00Z"

    def test_parse_accepts_offset_form(self):
        assert parse_instant("2013-07-22T18:00:00+02:00") == utc(2013, 7, 22, 16)


class TestRawTable:
    def test_append_returns_line_numbers(self, tmp_path):
        path = tmp_path / "t1.jsonl"
        assert append_raw(path, '{"a":1}') == 1
        assert append_raw(path, '{"b":2}') == 2
        lines = list(iter_raw(path))
        assert lines[0] == (1, b'{"a":1}')
        assert lines[1] == (2, b'{"b":2}')

    def test_payload_with_newline_is_rejected(self, tmp_path):
        with RawTable(tmp_path / "t1.jsonl") as table:
            with pytest.raises(StoreError):
                table.append("two\nlines")

    def test_bytes_stored_verbatim(self, tmp_path):
        path = tmp_path / "t1.jsonl"
        blob = '{"text":"café ❤"}'.encode("utf-8")
        with RawTable(path) as table:
            table.append_bytes(blob)
        assert path.read_bytes() == blob + b"\n"

    def test_append_only(self, tmp_path):
        path = tmp_path / "t1.jsonl"
        append_raw(path, "one")
        append_raw(path, "two")
        assert path.read_bytes() == b"one\ntwo\n"


class TestParsedTable:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "t2.tsv"
        rows = [tweet(), tweet(tweet_id="2", text="second")]
        assert write_parsed(path, rows) == 2
        window = (utc(2013, 7, 22), utc(2013, 7, 23))
        back = list(scan_parsed(path, window))
        assert back == rows

    def test_window_is_half_open(self, tmp_path):
        path = tmp_path / "t2.tsv"
        write_parsed(path, [
            tweet(tweet_id="a", timestamp=utc(2013, 7, 22, 0, 0, 0)),
            tweet(tweet_id="b", timestamp=utc(2013, 7, 23, 0, 0, 0)),
        ])
        got = list(scan_parsed(path, (utc(2013, 7, 22), utc(2013, 7, 23))))
        assert [row.tweet_id for row in got] == ["a"]

    def test_region_filter(self, tmp_path):
        path = tmp_path / "t2.tsv"
        write_parsed(path, [
            tweet(tweet_id="a", county="london"),
            tweet(tweet_id="b", county="kent"),
        ])
        window = (utc(2013, 7, 1), utc(2013, 8, 1))
        got = list(scan_parsed(path, window, region_filter=("County", "kent")))
        assert [row.tweet_id for row in got] == ["b"]
        got = list(scan_parsed(path, window, region_filter=("Country", "england")))
        assert len(got) == 2

    def test_malformed_line_reported_and_skipped(self, tmp_path):
        path = tmp_path / "t2.tsv"
        write_parsed(path, [tweet(tweet_id="a")])
        with path.open("a") as handle:
            handle.write("not\tenough\tfields\n")
        write_parsed(path, [tweet(tweet_id="b")], append=True)
        skips = []
        got = list(scan_parsed(
            path, (utc(2013, 7, 1), utc(2013, 8, 1)),
            on_skip=lambda lineno, reason: skips.append(lineno),
        ))
        assert [row.tweet_id for row in got] == ["a", "b"]
        assert skips == [2]

    def test_naive_timestamp_rejected(self):
        bad = tweet(timestamp=datetime(2013, 7, 22, 12, 0, 0))
        with pytest.raises(ValueError):
            bad.validate()

    def test_tab_in_text_rejected(self):
        with pytest.raises(ValueError):
            tweet(text="a\tb").validate()

    def test_out_of_range_coordinates_rejected(self):
        with pytest.raises(ValueError):
            tweet(lat=90.5).validate()


class TestScoreTable:
    def test_round_trip_exact(self, tmp_path):
        path = tmp_path / "t3.csv"
        rows = [
            score_row(),
            score_row(region="kent", pos_count=1, neg_count=3, tweet_count=2,
                      pss=1 / 3, npss=(1 / 3) / 2.0),
        ]
        write_scores(path, rows)
        back = read_scores(path)
        assert back == rows
        # full precision survives the text form
        assert back[1].pss == 1 / 3

    def test_na_markers(self, tmp_path):
        path = tmp_path / "t3.csv"
        rows = [score_row(pos_count=0, neg_count=0, tweet_count=1, pss=None, npss=None)]
        write_scores(path, rows)
        text = path.read_text()
        assert ",NA,NA" in text
        assert read_scores(path)[0].pss is None

    def test_header_written_once(self, tmp_path):
        path = tmp_path / "t3.csv"
        write_scores(path, [score_row()])
        write_scores(path, [score_row(region="kent")], append=True)
        text = path.read_text()
        assert text.count("approach,level,region") == 1
        assert len(read_scores(path)) == 2

    def test_batch_validation_writes_nothing(self, tmp_path):
        path = tmp_path / "t3.csv"
        rows = [score_row(), score_row(region="kent", pss=9.9)]  # pss lies
        with pytest.raises(ScoreRowError) as err:
            write_scores(path, rows)
        assert err.value.indices == [1]
        assert not path.exists()

    def test_inconsistent_pss_detected(self):
        row = score_row(pss=2.5)
        assert row.problem() is not None

    def test_npss_range_checked(self):
        assert score_row(npss=1.5).problem() is not None

    def test_read_rejects_wrong_header(self, tmp_path):
        path = tmp_path / "t3.csv"
        path.write_text("who,what\n1,2\n")
        with pytest.raises(StoreError):
            read_scores(path)


def test_score_row_pss_tolerance_is_relative():
    # the stored value differs in the last ulp, which must still be accepted
    row = score_row(pos_count=1, neg_count=3, tweet_count=1,
                    pss=float.fromhex("0x1.5555555555555p-2"), npss=None)
    assert math.isclose(row.pss, 1 / 3)
    assert row.problem() is None
