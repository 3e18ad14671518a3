"""Shared TSV reading and writing.

All files are UTF-8 with LF line endings. On input, blank lines and lines
starting with `#` are ignored; fields may not contain tabs. Output never
contains comments or timestamps, so identical data emits identical bytes.
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Iterator, Sequence

from .errors import MissingFileError, TsvParseError


def read_rows(
    path,
    n_cols: int,
    header: Sequence[str] | None = None,
    min_cols: int | None = None,
) -> Iterator[tuple[int, list[str]]]:
    """Yield (1-based line number, fields) for every data row of `path`.

    When `header` is given, the first data row must equal it and is consumed.
    Rows must have exactly `n_cols` fields; when `min_cols` is given, shorter
    rows down to `min_cols` are padded with empty strings, so files whose
    trailing optional column was stripped by an editor still load.
    """
    if not os.path.isfile(path):
        raise MissingFileError(f"missing file: {path}")
    lowest = n_cols if min_cols is None else min_cols
    expect_header = header is not None
    with open(path, encoding="utf-8", newline="") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if expect_header:
                if fields != list(header):
                    raise TsvParseError(
                        f"expected header {list(header)!r}, found {fields!r}",
                        path=path,
                        line=lineno,
                    )
                expect_header = False
                continue
            if not lowest <= len(fields) <= n_cols:
                raise TsvParseError(
                    f"expected {n_cols} tab-separated fields, found {len(fields)}",
                    path=path,
                    line=lineno,
                )
            fields += [""] * (n_cols - len(fields))
            yield lineno, fields
    if expect_header:
        raise TsvParseError("file has no header row", path=path)


def write_rows(path, rows: Iterable[Sequence[str]], header: Sequence[str] | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        if header is not None:
            handle.write("\t".join(header) + "\n")
        for row in rows:
            for value in row:
                if "\t" in value or "\n" in value:
                    raise TsvParseError(f"field value may not contain tabs or newlines: {value!r}", path=path)
            handle.write("\t".join(row) + "\n")
