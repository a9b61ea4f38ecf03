"""Timeline parsing and digital DNA encoding."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

logger = logging.getLogger(__name__)

FIELDS = ("account_id", "timestamp", "is_retweet", "is_reply", "has_url", "has_hashtag")


class IngestError(ValueError):
    pass


@dataclass(frozen=True)
class ActionRecord:
    account_id: str
    timestamp: int
    is_retweet: bool = False
    is_reply: bool = False
    has_url: bool = False
    has_hashtag: bool = False

    def __post_init__(self):
        if self.timestamp < 0:
            raise IngestError(f"negative timestamp for account {self.account_id!r}")
        if self.is_retweet and self.is_reply:
            raise IngestError(f"account {self.account_id!r}: record is both retweet and reply")


@dataclass(frozen=True)
class Alphabet:
    name: str
    symbols: str
    rule: Callable[[ActionRecord], str]

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols) or len(self.symbols) < 2:
            raise ValueError(f"alphabet {self.name!r} needs at least 2 distinct symbols")

    def __call__(self, record: ActionRecord) -> str:
        return self.rule(record)


@dataclass(frozen=True)
class DigitalDna:
    account_id: str
    sequence: str
    alphabet_name: str = ""

    def __len__(self):
        return len(self.sequence)


def _type_rule(r: ActionRecord) -> str:
    if r.is_retweet:
        return "T"
    if r.is_reply:
        return "C"
    return "A"


def _content_rule(r: ActionRecord) -> str:
    # url beats hashtag beats plain
    if r.has_url:
        return "U"
    if r.has_hashtag:
        return "H"
    return "A"


BUILTIN_ALPHABETS = {
    "type3": Alphabet("type3", "ATC", _type_rule),
    "content3": Alphabet("content3", "AUH", _content_rule),
}


def builtin_alphabet(name: str) -> Alphabet:
    try:
        return BUILTIN_ALPHABETS[name]
    except KeyError:
        raise IngestError(
            f"unknown alphabet {name!r}; available: {', '.join(sorted(BUILTIN_ALPHABETS))}"
        ) from None


def _flag(value, where: str) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip()
    if text in ("1", "true", "True"):
        return True
    if text in ("0", "false", "False", ""):
        return False
    raise IngestError(f"{where}: bad boolean {value!r}")


def _record(row: dict, where: str) -> ActionRecord:
    missing = [f for f in FIELDS if f not in row or row[f] is None]
    if missing:
        raise IngestError(f"{where}: missing field(s) {', '.join(missing)}")
    try:
        ts = int(row["timestamp"])
    except (TypeError, ValueError):
        raise IngestError(f"{where}: bad timestamp {row['timestamp']!r}") from None
    account = str(row["account_id"]).strip()
    if not account:
        raise IngestError(f"{where}: empty account_id")
    flags = {f: _flag(row[f], where) for f in FIELDS[2:]}
    if flags["is_retweet"] and flags["is_reply"]:
        raise IngestError(f"{where}: account {account!r} has a record that is both retweet and reply")
    if ts < 0:
        raise IngestError(f"{where}: negative timestamp")
    return ActionRecord(account, ts, **flags)


def _iter_rows(path: Path, fmt: str) -> Iterable[tuple[int, dict]]:
    with open(path, encoding="utf-8", newline="") as fh:
        if fmt == "csv":
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                return
            extra = set(FIELDS) - set(reader.fieldnames)
            if extra:
                raise IngestError(f"line 1: header lacks {', '.join(sorted(extra))}")
            for row in reader:
                if None in row:
                    raise IngestError(f"line {reader.line_num}: too many columns")
                yield reader.line_num, row
        elif fmt == "jsonl":
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise IngestError(f"line {lineno}: invalid JSON ({exc.msg})") from None
                if not isinstance(obj, dict):
                    raise IngestError(f"line {lineno}: expected a JSON object")
                yield lineno, obj
        else:
            raise IngestError(f"unknown format {fmt!r}; use csv or jsonl")


def parse_dataset(path, fmt: str | None = None) -> dict[str, list[ActionRecord]]:
    """Group a csv/jsonl timeline file by account, each group sorted by time.

    Ties on timestamp keep file order.  Insertion order of the returned dict
    follows first appearance in the file.
    """
    path = Path(path)
    if fmt is None:
        fmt = "jsonl" if path.suffix.lower() in (".jsonl", ".ndjson") else "csv"
    groups: dict[str, list[ActionRecord]] = {}
    for lineno, row in _iter_rows(path, fmt):
        rec = _record(row, f"line {lineno}")
        groups.setdefault(rec.account_id, []).append(rec)
    for recs in groups.values():
        recs.sort(key=lambda r: r.timestamp)
    if not groups:
        logger.warning("%s: 0 accounts parsed", path)
    return groups


def encode_timeline(records, alphabet: Alphabet) -> DigitalDna:
    records = list(records)
    if not records:
        raise IngestError("empty timeline")
    owners = {r.account_id for r in records}
    if len(owners) != 1:
        raise IngestError(f"records span several accounts: {sorted(owners)}")
    ordered = sorted(records, key=lambda r: r.timestamp)
    seq = "".join(alphabet(r) for r in ordered)
    bad = set(seq) - set(alphabet.symbols)
    if bad:
        raise IngestError(f"alphabet {alphabet.name!r} produced foreign symbols {sorted(bad)}")
    return DigitalDna(ordered[0].account_id, seq, alphabet.name)


def encode_dataset(groups: dict[str, list[ActionRecord]], alphabet: Alphabet) -> list[DigitalDna]:
    dnas = []
    dropped = []
    for account, recs in groups.items():
        if not recs:
            dropped.append(account)
            continue
        dnas.append(encode_timeline(recs, alphabet))
    if dropped:
        logger.warning("dropped %d account(s) with empty timelines: %s", len(dropped), ", ".join(dropped))
    return dnas


def write_dna_file(path, dnas: Iterable[DigitalDna]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in dnas:
            fh.write(f"{d.account_id}\t{d.sequence}\n")


def read_dna_file(path, alphabet_name: str = "") -> list[DigitalDna]:
    dnas = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise IngestError(f"{path}: line {lineno}: expected 'account_id<TAB>sequence'")
            if parts[0] in seen:
                raise IngestError(f"{path}: line {lineno}: duplicate account {parts[0]!r}")
            seen.add(parts[0])
            dnas.append(DigitalDna(parts[0], parts[1], alphabet_name))
    return dnas
