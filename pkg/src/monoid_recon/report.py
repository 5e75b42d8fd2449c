"""Check records and report rendering.

Reports must be reproducible: the record stream is sorted by check id and
every witness string is built from canonically ordered data.  The records
format is line oriented with a fixed field order (id, anchor, status,
witness, millis) for diff-friendliness; wall times are suppressed there (a
`-` placeholder) so that two runs of the same suite are byte identical, and
shown only in the human-readable text format.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

from . import __version__

PASS = "pass"
FAIL = "fail"
SKIP = "skipped"


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    anchor: str
    status: str
    witness: str = "-"
    millis: float = 0.0

    def records_line(self) -> str:
        w = self.witness if self.witness else "-"
        w = "_".join(w.split())  # keep the line single-field-per-column
        return f"{self.check_id}\t{self.anchor}\t{self.status}\t{w}\t-"

    def text_line(self) -> str:
        mark = {PASS: "ok  ", FAIL: "FAIL", SKIP: "skip"}[self.status]
        extra = f"  [{self.witness}]" if self.witness and self.witness != "-" else ""
        return f"{mark} {self.check_id:<44} {self.anchor:<12} {self.millis:7.1f}ms{extra}"


@dataclass
class Report:
    tool_version: str = __version__
    input_digest: str = ""
    records: list[CheckRecord] = field(default_factory=list)

    def add(self, check_id: str, anchor: str, ok: bool, witness: str = "-", millis: float = 0.0):
        self.records.append(
            CheckRecord(check_id, anchor, PASS if ok else FAIL, witness, millis)
        )

    def extend(self, records):
        self.records.extend(records)

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.records)

    def sorted_records(self) -> list[CheckRecord]:
        return sorted(self.records, key=lambda r: r.check_id)

    def render(self, fmt: str) -> str:
        if fmt == "records":
            lines = [
                f"# monoid-recon {self.tool_version}",
                f"# input sha256:{self.input_digest}",
            ]
            lines += [r.records_line() for r in self.sorted_records()]
            return "\n".join(lines) + "\n"
        if fmt == "text":
            lines = [f"monoid-recon {self.tool_version}  input {self.input_digest[:12]}"]
            lines += [r.text_line() for r in self.sorted_records()]
            fails = sum(1 for r in self.records if r.status == FAIL)
            lines.append(
                f"{len(self.records)} checks, {fails} failed"
                if fails
                else f"{len(self.records)} checks, all passed"
            )
            return "\n".join(lines) + "\n"
        raise ValueError(f"unknown format {fmt!r}")


def digest_inputs(chunks) -> str:
    h = hashlib.sha256()
    for chunk in chunks:
        h.update(chunk.encode() if isinstance(chunk, str) else chunk)
        h.update(b"\x00")
    return h.hexdigest()


class timer:
    """Context manager measuring wall milliseconds."""

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.millis = (time.perf_counter() - self.start) * 1000.0
        return False
