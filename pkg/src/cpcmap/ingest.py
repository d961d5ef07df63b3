"""Canonical patent records, the CPC-4 class scheme, and record filtering.

Records are read from line-delimited JSON, one granted patent per line::

    {"id": "9999999", "date": "2016-03-01", "cpc4": ["A61K", "C07D"],
     "cited": ["7654321", "5551234"], "city": "Boston", "country": "US"}
"""
from __future__ import annotations

import csv
import datetime as dt
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

CPC4_PATTERN = re.compile(r"^[A-Z][0-9]{2}[A-Z]$")


class CorpusError(ValueError):
    """Malformed or inconsistent input records."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemeError(ValueError):
    pass


@dataclass(frozen=True)
class PatentRecord:
    id: str
    date: dt.date
    classes: tuple[str, ...]
    cited: tuple[str, ...] = ()
    assignee: str | None = None
    city: str | None = None
    country: str | None = None

    def to_json(self) -> str:
        obj = {
            "id": self.id,
            "date": self.date.isoformat(),
            "cpc4": list(self.classes),
            "cited": list(self.cited),
        }
        for key in ("assignee", "city", "country"):
            value = getattr(self, key)
            if value is not None:
                obj[key] = value
        return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


@dataclass(frozen=True)
class ClassScheme:
    """Ordered list of CPC-4 codes. The order fixes vector coordinates."""

    codes: tuple[str, ...]
    titles: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.codes) != len(self.titles):
            raise SchemeError("codes and titles differ in length")
        index = {}
        for i, code in enumerate(self.codes):
            if code in index:
                raise SchemeError(f"duplicate class code {code!r}")
            index[code] = i
        object.__setattr__(self, "index", index)

    @classmethod
    def from_codes(cls, codes: Iterable[str], titles: Iterable[str] | None = None) -> "ClassScheme":
        codes = tuple(codes)
        titles = tuple(titles) if titles is not None else ("",) * len(codes)
        return cls(codes, titles)

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, code: str) -> bool:
        return code in self.index

    def ordinal(self, code: str) -> int:
        try:
            return self.index[code]
        except KeyError:
            raise SchemeError(f"class {code!r} not in scheme") from None

    def title(self, code: str) -> str:
        return self.titles[self.ordinal(code)]


def read_scheme(path) -> ClassScheme:
    """Load a class scheme from a CSV file with header ``code,title``."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"code", "title"} <= set(reader.fieldnames):
            raise SchemeError(f"{path}: expected header with columns code,title")
        codes, titles = [], []
        for row in reader:
            code = row["code"].strip().upper()
            if not CPC4_PATTERN.match(code):
                raise SchemeError(f"{path}: invalid class code {code!r}")
            codes.append(code)
            titles.append((row["title"] or "").strip())
    return ClassScheme(tuple(codes), tuple(titles))


def write_scheme(scheme: ClassScheme, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["code", "title"])
        writer.writerows(zip(scheme.codes, scheme.titles))


@dataclass
class ParsedCorpus:
    records: list[PatentRecord]
    warnings: list[str] = field(default_factory=list)


def _optional_str(obj: dict, key: str, lineno: int) -> str | None:
    value = obj.get(key)
    if value is None:
        return None
    if not isinstance(value, str):
        raise CorpusError(f"field {key!r} must be a string", lineno)
    return value


def _record_from_obj(obj, lineno: int, warnings: list[str]) -> PatentRecord | None:
    if not isinstance(obj, dict):
        raise CorpusError("record is not an object", lineno)
    pid = obj.get("id")
    if not isinstance(pid, str) or not pid:
        raise CorpusError("missing or empty 'id'", lineno)
    try:
        date = dt.date.fromisoformat(obj["date"])
    except (KeyError, TypeError, ValueError):
        raise CorpusError(f"patent {pid}: missing or invalid 'date'", lineno) from None
    raw_classes = obj.get("cpc4")
    if not isinstance(raw_classes, list) or not all(isinstance(c, str) for c in raw_classes):
        raise CorpusError(f"patent {pid}: 'cpc4' must be a list of strings", lineno)
    cited = obj.get("cited", [])
    if not isinstance(cited, list) or not all(isinstance(c, str) for c in cited):
        raise CorpusError(f"patent {pid}: 'cited' must be a list of strings", lineno)

    classes: list[str] = []
    for code in raw_classes:
        code = code.strip().upper()
        if not CPC4_PATTERN.match(code):
            warnings.append(f"line {lineno}: patent {pid}: dropped invalid class code {code!r}")
            continue
        if code not in classes:
            classes.append(code)
    if not classes:
        warnings.append(f"line {lineno}: patent {pid}: no valid classes, record skipped")
        return None
    return PatentRecord(
        id=pid,
        date=date,
        classes=tuple(classes),
        cited=tuple(cited),
        assignee=_optional_str(obj, "assignee", lineno),
        city=_optional_str(obj, "city", lineno),
        country=_optional_str(obj, "country", lineno),
    )


def parse_corpus(lines: Iterable[str] | TextIO, strict: bool = True) -> ParsedCorpus:
    """Parse line-delimited JSON patent records.

    With ``strict=False`` a malformed line is skipped and reported in
    ``warnings`` instead of raising. Duplicate ids always raise.
    """
    records: list[PatentRecord] = []
    warnings: list[str] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"invalid JSON ({exc.msg})", lineno) from None
            record = _record_from_obj(obj, lineno, warnings)
        except CorpusError as exc:
            if strict:
                raise
            warnings.append(str(exc))
            continue
        if record is None:
            continue
        if record.id in seen:
            raise CorpusError(f"duplicate patent id {record.id!r} (first seen on line {seen[record.id]})", lineno)
        seen[record.id] = lineno
        records.append(record)
    return ParsedCorpus(records, warnings)


def read_corpus(path, strict: bool = True) -> ParsedCorpus:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh, strict=strict)


def serialize_corpus(records: Iterable[PatentRecord]) -> str:
    return "".join(r.to_json() + "\n" for r in records)


def write_corpus(records: Iterable[PatentRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_corpus(records))


@dataclass(frozen=True)
class RecordFilter:
    """Selection criteria; unset fields match everything.

    ``date_range`` is inclusive at both ends, either end may be ``None``.
    """

    date_range: tuple[dt.date | None, dt.date | None] | None = None
    city: str | None = None
    country: str | None = None
    assignee_substring: str | None = None

    def matches(self, record: PatentRecord) -> bool:
        if self.date_range is not None:
            start, end = self.date_range
            if start is not None and record.date < start:
                return False
            if end is not None and record.date > end:
                return False
        if self.city is not None:
            if record.city is None or record.city.casefold() != self.city.casefold():
                return False
        if self.country is not None:
            if record.country is None or record.country.casefold() != self.country.casefold():
                return False
        if self.assignee_substring is not None:
            if record.assignee is None or self.assignee_substring.casefold() not in record.assignee.casefold():
                return False
        return True


def filter_corpus(corpus: Sequence[PatentRecord], f: RecordFilter) -> list[PatentRecord]:
    return [r for r in corpus if f.matches(r)]


@dataclass
class ValidationReport:
    unknown: list[tuple[str, str]] = field(default_factory=list)  # (patent id, code)
    dropped_records: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.unknown or self.dropped_records)

    def __len__(self) -> int:
        return len(self.unknown)


def validate_against_scheme(
    corpus: Sequence[PatentRecord], scheme: ClassScheme, strict: bool = False
) -> tuple[list[PatentRecord], ValidationReport]:
    """Check every class code against the scheme.

    Strict mode raises on the first unknown code. Lenient mode drops unknown
    codes, and drops records left without any class.
    """
    report = ValidationReport()
    kept: list[PatentRecord] = []
    for record in corpus:
        known = tuple(c for c in record.classes if c in scheme)
        if len(known) == len(record.classes):
            kept.append(record)
            continue
        for code in record.classes:
            if code not in scheme:
                if strict:
                    raise SchemeError(f"patent {record.id}: class {code!r} not in scheme")
                report.unknown.append((record.id, code))
        if known:
            kept.append(PatentRecord(record.id, record.date, known, record.cited,
                                     record.assignee, record.city, record.country))
        else:
            report.dropped_records.append(record.id)
    return kept, report
