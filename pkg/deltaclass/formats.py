"""Sequence codecs (b-file and JSON) and atomic report writing."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from pydantic import ValidationError

from deltaclass.exact import Sequence, as_rational, rational_str
from deltaclass.exceptions import (
    DeltaclassError,
    IndexGapError,
    ReportIOError,
    SequenceParseError,
)
from deltaclass.models import SequenceDocument


def parse_bfile(text: str) -> Sequence:
    """
    Parse "index value" lines; "#" starts a comment, blank lines are skipped.

    :raises SequenceParseError: On a malformed line (with its line number)
    :raises IndexGapError: If an index does not follow its predecessor
    """
    start: int | None = None
    expected = 0
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SequenceParseError(f"expected 'index value', got {raw.strip()!r}", line=lineno)
        try:
            index = int(parts[0])
            value = as_rational(parts[1])
        except (ValueError, DeltaclassError) as e:
            raise SequenceParseError(f"unparseable line {raw.strip()!r}", line=lineno) from e
        if start is None:
            if index < 0:
                raise SequenceParseError("indices must be nonnegative", line=lineno)
            start = expected = index
        elif index != expected:
            raise IndexGapError(f"expected index {expected}, got {index}", line=lineno)
        values.append(value)
        expected += 1
    if start is None:
        raise SequenceParseError("no data lines")
    return Sequence(start, values)


def format_bfile(s: Sequence) -> str:
    return "".join(f"{a} {rational_str(v)}\n" for a, v in s)


def parse_json(text: str) -> Sequence:
    """
    Parse a {"start": ..., "values": [...]} document.

    :raises SequenceParseError: On invalid JSON, schema or values
    """
    try:
        doc = SequenceDocument.model_validate_json(text)
    except ValidationError as e:
        raise SequenceParseError(f"invalid sequence document: {e.error_count()} errors") from e
    try:
        return Sequence(doc.start, (as_rational(v) for v in doc.values))
    except DeltaclassError as e:
        raise SequenceParseError(f"invalid sequence value: {e}") from e


def format_json(s: Sequence) -> str:
    doc = SequenceDocument(start=s.start, values=[rational_str(v) for _, v in s])
    return doc.model_dump_json(indent=2) + "\n"


def detect_format(path: str | Path) -> str:
    return "json" if Path(path).suffix.lower() == ".json" else "bfile"


def ingest(path: str | Path, fmt: str | None = None) -> Sequence:
    """
    Read a sequence file.

    :param path: File path
    :param fmt: "bfile" or "json"; detected from the extension when omitted
    :raises ReportIOError: If the file cannot be read
    """
    fmt = fmt or detect_format(path)
    try:
        text = Path(path).read_text(encoding="ascii" if fmt == "bfile" else "utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ReportIOError(f"cannot read sequence: {e}", path=str(path)) from e
    return parse_json(text) if fmt == "json" else parse_bfile(text)


def emit(s: Sequence, fmt: str = "bfile") -> str:
    return format_json(s) if fmt == "json" else format_bfile(s)


def write_atomic(path: str | Path, text: str) -> None:
    """
    Write text to path through a temporary file in the same directory.

    :raises ReportIOError: On any filesystem failure
    """
    target = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent or ".")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
            os.replace(tmp, target)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
    except OSError as e:
        raise ReportIOError(f"cannot write {target}: {e}", path=str(target)) from e
