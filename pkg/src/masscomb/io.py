"""Reading and writing mass functions in the shared file formats.

Two formats round-trip losslessly:

* dense CSV: one assignment per row, ``2**n`` columns in natural order,
  header row of binary subset bitmasks (``000``, ``001`` ... with the
  first hypothesis in the lowest bit, so the all-ones column is the whole
  frame).  The CSV carries no hypothesis labels; readers may supply them.
* sparse JSON: ``{"frame": [labels], "bbas": [{"focal elements":
  [[label, ...], ...], "masses": [...]}]}``.
"""

from __future__ import annotations

import csv
import json
import os
from typing import Sequence

import numpy as np

from .core import FrameOfDiscernment, MassFunction
from .errors import ParameterError, ParseError

#: File-level tolerance on the mass total; tighter validation happens on
#: ingestion into MassFunction after the single renormalisation.
FILE_MASS_TOL = 1e-6

FORMATS = ("csv", "json")


def default_labels(n: int) -> tuple[str, ...]:
    return tuple(f"theta{i + 1}" for i in range(n))


def bitmask_header(n: int) -> list[str]:
    return [format(i, f"0{n}b") for i in range(1 << n)]


# ---------------------------------------------------------------------------
# Dense CSV
# ---------------------------------------------------------------------------


def write_csv(path, bbas: Sequence[MassFunction]) -> None:
    if not bbas:
        raise ParameterError("nothing to write")
    frame = bbas[0].frame
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(bitmask_header(frame.n))
        for m in bbas:
            writer.writerow([repr(v) for v in m.values.tolist()])


def read_csv(path, labels: Sequence[str] | None = None) -> list[MassFunction]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty file", line=1)
    header = [tok.strip() for tok in rows[0]]
    size = len(header)
    if size < 2 or size & (size - 1):
        raise ParseError(f"{size} columns is not a power-set size", line=1)
    n = size.bit_length() - 1
    if header != bitmask_header(n):
        raise ParseError("header must list binary subset bitmasks in natural order", line=1)
    frame = FrameOfDiscernment(tuple(labels) if labels else default_labels(n))
    if frame.n != n:
        raise ParameterError(f"{frame.n} labels supplied for {n}-element data")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != size:
            raise ParseError(f"expected {size} values, found {len(row)}", line=lineno)
        try:
            values = np.array([float(tok) for tok in row])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        out.append(_ingest(frame, values, lineno))
    if not out:
        raise ParseError("no assignments in file", line=1)
    return out


def _ingest(frame: FrameOfDiscernment, values: np.ndarray, lineno: int | None) -> MassFunction:
    lo = float(values.min())
    if lo < -FILE_MASS_TOL:
        raise ParseError(f"negative mass {lo!r}", line=lineno)
    total = float(values.sum())
    if abs(total - 1.0) > FILE_MASS_TOL:
        raise ParseError(f"masses sum to {total!r}, expected 1", line=lineno)
    return MassFunction(frame, values, tol=FILE_MASS_TOL)


# ---------------------------------------------------------------------------
# Sparse JSON
# ---------------------------------------------------------------------------


def to_json_doc(bbas: Sequence[MassFunction]) -> dict:
    if not bbas:
        raise ParameterError("nothing to write")
    frame = bbas[0].frame
    return {
        "frame": list(frame.labels),
        "bbas": [
            {
                "focal elements": [
                    list(frame.subset_labels(int(a))) for a in m.focal_elements()
                ],
                "masses": [float(m.values[a]) for a in m.focal_elements()],
            }
            for m in bbas
        ],
    }


def write_json(path, bbas: Sequence[MassFunction]) -> None:
    doc = to_json_doc(bbas)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_json(path) -> list[MassFunction]:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc), line=exc.lineno) from None
    if not isinstance(doc, dict) or "frame" not in doc or "bbas" not in doc:
        raise ParseError("document must have 'frame' and 'bbas' keys")
    try:
        frame = FrameOfDiscernment(tuple(doc["frame"]))
    except ParameterError as exc:
        raise ParseError(f"bad frame: {exc}") from None
    out = []
    for pos, entry in enumerate(doc["bbas"]):
        focals = entry.get("focal elements")
        masses = entry.get("masses")
        if focals is None or masses is None:
            raise ParseError(f"bba {pos}: needs 'focal elements' and 'masses'")
        if len(focals) != len(masses):
            raise ParseError(
                f"bba {pos}: {len(focals)} focal elements but {len(masses)} masses"
            )
        values = np.zeros(frame.powerset_size)
        seen = set()
        for members, mass in zip(focals, masses):
            try:
                idx = frame.subset_index(members)
            except Exception as exc:
                raise ParseError(f"bba {pos}: {exc}") from None
            if idx in seen:
                raise ParseError(
                    f"bba {pos}: duplicate focal element {frame.format_subset(idx)}"
                )
            seen.add(idx)
            values[idx] = float(mass)
        out.append(_ingest(frame, values, None))
    if not out:
        raise ParseError("no assignments in file")
    return out


# ---------------------------------------------------------------------------
# Dispatch by format or extension
# ---------------------------------------------------------------------------


def _resolve_format(path, fmt: str | None) -> str:
    if fmt:
        if fmt not in FORMATS:
            raise ParameterError(f"unknown format {fmt!r}; choose from {FORMATS}")
        return fmt
    ext = os.path.splitext(str(path))[1].lower().lstrip(".")
    return ext if ext in FORMATS else "csv"


def read_bbas(path, fmt: str | None = None, labels: Sequence[str] | None = None) -> list[MassFunction]:
    if _resolve_format(path, fmt) == "json":
        return read_json(path)
    return read_csv(path, labels=labels)


def write_bbas(path, bbas: Sequence[MassFunction], fmt: str | None = None) -> None:
    if _resolve_format(path, fmt) == "json":
        write_json(path, bbas)
    else:
        write_csv(path, bbas)
