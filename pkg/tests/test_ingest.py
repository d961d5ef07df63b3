import datetime as dt
import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rec
from cpcmap.ingest import (
    ClassScheme,
    CorpusError,
    PatentRecord,
    RecordFilter,
    SchemeError,
    filter_corpus,
    parse_corpus,
    read_scheme,
    serialize_corpus,
    validate_against_scheme,
    write_scheme,
)


def line(**obj):
    base = {"id": "1", "date": "2016-01-05", "cpc4": ["A61K"], "cited": []}
    base.update(obj)
    return json.dumps(base)


def test_classes_deduplicated_and_uppercased():
    parsed = parse_corpus([line(cpc4=["a61k", "A61K", "C07D"])])
    assert parsed.records[0].classes == ("A61K", "C07D")
    assert parsed.warnings == []


def test_empty_input():
    parsed = parse_corpus(io.StringIO(""))
    assert parsed.records == [] and parsed.warnings == []


def test_lenient_mode_skips_malformed_line():
    lines = [line(id="1"), '{"id": "2", "date": ', line(id="3")]
    parsed = parse_corpus(lines, strict=False)
    assert [r.id for r in parsed.records] == ["1", "3"]
    assert len(parsed.warnings) == 1
    assert "line 2" in parsed.warnings[0]


def test_strict_mode_reports_line_number():
    with pytest.raises(CorpusError) as err:
        parse_corpus([line(id="1"), "not json"], strict=True)
    assert err.value.line == 2


def test_duplicate_id_raises_even_lenient():
    with pytest.raises(CorpusError, match="duplicate"):
        parse_corpus([line(id="7"), line(id="7")], strict=False)


def test_record_without_valid_classes_skipped_with_warning():
    parsed = parse_corpus([line(id="1", cpc4=["XX", "1234"]), line(id="2")])
    assert [r.id for r in parsed.records] == ["2"]
    assert any("skipped" in w for w in parsed.warnings)


def test_missing_date_is_malformed():
    with pytest.raises(CorpusError, match="date"):
        parse_corpus([json.dumps({"id": "1", "cpc4": ["A61K"]})])


def test_optional_metadata_parsed():
    r = parse_corpus([line(city="Boston", country="US", assignee="Novartis AG", cited=["x", "x"])]).records[0]
    assert (r.city, r.country, r.assignee, r.cited) == ("Boston", "US", "Novartis AG", ("x", "x"))
    assert r.date == dt.date(2016, 1, 5)


codes = st.sampled_from(["A01B", "B32B", "C07D", "H01L", "Y02E", "G06F"])
records = st.builds(
    PatentRecord,
    id=st.text(alphabet="0123456789ABC", min_size=1, max_size=8),
    date=st.dates(dt.date(1976, 1, 1), dt.date(2016, 12, 31)),
    classes=st.lists(codes, min_size=1, max_size=4, unique=True).map(tuple),
    cited=st.lists(st.text(alphabet="0123456789", min_size=1, max_size=6), max_size=6).map(tuple),
    assignee=st.none() | st.text(max_size=12),
    city=st.none() | st.sampled_from(["Boston", "Eindhoven", "Tel-Aviv"]),
    country=st.none() | st.sampled_from(["US", "NL", "IL"]),
)
corpora = st.lists(records, max_size=12, unique_by=lambda r: r.id)


@given(corpora)
def test_round_trip(corpus):
    parsed = parse_corpus(io.StringIO(serialize_corpus(corpus)))
    assert parsed.records == corpus
    assert parsed.warnings == []


filters = st.builds(
    RecordFilter,
    date_range=st.none() | st.tuples(st.none() | st.dates(dt.date(1990, 1, 1), dt.date(2016, 12, 31)),
                                     st.none() | st.dates(dt.date(1990, 1, 1), dt.date(2016, 12, 31))),
    city=st.none() | st.sampled_from(["boston", "EINDHOVEN"]),
    country=st.none() | st.sampled_from(["us", "NL"]),
    assignee_substring=st.none() | st.text(max_size=2),
)


@given(corpora, filters)
def test_filter_idempotent_and_order_preserving(corpus, f):
    once = filter_corpus(corpus, f)
    assert filter_corpus(once, f) == once
    positions = [corpus.index(r) for r in once]
    assert positions == sorted(positions)


@given(corpora)
def test_empty_filter_is_identity(corpus):
    assert filter_corpus(corpus, RecordFilter()) == corpus


def test_city_filter_case_insensitive():
    corpus = [rec("1", ["A01B"], city="Boston"), rec("2", ["A01B"], city="Eindhoven"), rec("3", ["A01B"], city="BOSTON")]
    assert [r.id for r in filter_corpus(corpus, RecordFilter(city="boston"))] == ["1", "3"]


def test_date_range_excluding_everything():
    corpus = [rec("1", ["A01B"]), rec("2", ["A01B"])]
    f = RecordFilter(date_range=(dt.date(2000, 1, 1), dt.date(2000, 12, 31)))
    assert filter_corpus(corpus, f) == []


def test_assignee_substring():
    corpus = [rec("1", ["A01B"], assignee="Novartis AG"), rec("2", ["A01B"], assignee="MSD")]
    assert [r.id for r in filter_corpus(corpus, RecordFilter(assignee_substring="novartis"))] == ["1"]


def test_validate_all_known(abc_scheme):
    kept, report = validate_against_scheme([rec("1", ["A01B", "C07D"])], abc_scheme)
    assert len(kept) == 1 and not report


def test_validate_one_unknown_code(abc_scheme):
    kept, report = validate_against_scheme([rec("1", ["A01B", "Z99Z"])], abc_scheme)
    assert report.unknown == [("1", "Z99Z")]
    assert kept[0].classes == ("A01B",)


def test_validate_lenient_drops_record_with_only_unknown(abc_scheme):
    kept, report = validate_against_scheme([rec("1", ["Z99Z"]), rec("2", ["B01C"])], abc_scheme)
    assert [r.id for r in kept] == ["2"]
    assert report.dropped_records == ["1"]


def test_validate_strict_names_code_and_patent(abc_scheme):
    with pytest.raises(SchemeError, match=r"patent 9.*Z99Z"):
        validate_against_scheme([rec("9", ["Z99Z"])], abc_scheme, strict=True)


@given(corpora)
def test_strict_validation_leaves_only_scheme_codes(corpus):
    scheme = ClassScheme.from_codes(["A01B", "B32B", "C07D", "H01L", "Y02E", "G06F"])
    kept, _ = validate_against_scheme(corpus, scheme, strict=True)
    assert all(c in scheme for r in kept for c in r.classes)


def test_scheme_csv_round_trip(tmp_path, abc_scheme):
    path = tmp_path / "scheme.csv"
    write_scheme(abc_scheme, path)
    assert read_scheme(path) == abc_scheme
    assert read_scheme(path).ordinal("C07D") == 2


def test_scheme_rejects_duplicates():
    with pytest.raises(SchemeError):
        ClassScheme.from_codes(["A01B", "A01B"])
