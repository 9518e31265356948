"""CSV ingestion for direction records.

Two layouts are accepted, distinguished by the required header row:

* ``x,y,z``: Cartesian components of a unit vector. Rows whose norm strays
  from 1 by more than 1e-6 are normalized with a warning.
* ``dec,inc``: declination [0, 360) and inclination [-90, 90] in degrees,
  converted through the north-east-down geomagnetic convention
  x = cos(inc) cos(dec), y = cos(inc) sin(dec), z = -sin(inc); pass
  ``up_positive`` to flip the vertical axis instead.

An optional trailing ``site`` column is tolerated and ignored.
"""

import csv
import logging
import math
import pathlib

import numpy as np

from .errors import ParseError

__all__ = ["ingest", "write_xyz_csv"]

logger = logging.getLogger(__name__)

FORMAT_XYZ = "csv-xyz"
FORMAT_DECINC = "csv-decinc"

_HEADERS = {
    ("x", "y", "z"): FORMAT_XYZ,
    ("dec", "inc"): FORMAT_DECINC,
}


def _detect_format(header) -> str:
    fields = tuple(h.strip().lower() for h in header)
    if fields and fields[-1] == "site":
        fields = fields[:-1]
    fmt = _HEADERS.get(fields)
    if fmt is None:
        raise ParseError(
            f"unrecognized header {header}; expected x,y,z or dec,inc (optional site column)",
            line=1,
        )
    return fmt


def ingest(path, fmt: str = None, up_positive: bool = False) -> np.ndarray:
    """Read a direction file into an (n, 3) array of unit vectors.

    Args:
        path: CSV file with a header row.
        fmt: expected format ("csv-xyz" or "csv-decinc"); None infers from
            the header, anything else must match it.
        up_positive: use z = +sin(inc) for dec/inc files.

    Raises:
        ParseError: missing/malformed rows (with line number), empty file,
            or a header that contradicts ``fmt``.
    """
    path = pathlib.Path(path)
    if not path.exists():
        raise ParseError(f"input file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file (a header row is required)") from None
        detected = _detect_format(header)
        if fmt is not None and fmt != detected:
            raise ParseError(f"file header is {detected} but --format asked for {fmt}", line=1)
        ncols = 3 if detected == FORMAT_XYZ else 2
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            values = row[:-1] if len(row) == ncols + 1 else row
            if len(values) != ncols:
                raise ParseError(f"expected {ncols} numeric columns, got {len(row)}", line=lineno)
            try:
                nums = [float(c) for c in values]
            except ValueError as exc:
                raise ParseError(f"non-numeric value ({exc})", line=lineno) from None
            rows.append((lineno, nums))
    if not rows:
        raise ParseError("no data rows in file")

    out = np.empty((len(rows), 3))
    if detected == FORMAT_XYZ:
        for i, (lineno, (x, y, z)) in enumerate(rows):
            norm = math.sqrt(x * x + y * y + z * z)
            if norm < 1e-12:
                raise ParseError("zero vector cannot be normalized", line=lineno)
            if abs(norm - 1.0) > 1e-6:
                logger.warning("%s line %d: |v| = %.8f, normalizing", path.name, lineno, norm)
            out[i] = (x / norm, y / norm, z / norm)
    else:
        sign = 1.0 if up_positive else -1.0
        for i, (lineno, (dec, inc)) in enumerate(rows):
            if not 0.0 <= dec < 360.0:
                raise ParseError(f"declination {dec} outside [0, 360)", line=lineno)
            if not -90.0 <= inc <= 90.0:
                raise ParseError(f"inclination {inc} outside [-90, 90]", line=lineno)
            d, j = math.radians(dec), math.radians(inc)
            out[i] = (math.cos(j) * math.cos(d), math.cos(j) * math.sin(d), sign * math.sin(j))
    return out


def write_xyz_csv(path, vectors) -> None:
    """Write unit vectors as a csv-xyz file at full double precision."""
    arr = np.asarray(vectors, dtype=float)
    lines = ["x,y,z"]
    for row in arr:
        lines.append(",".join(format(c, ".17g") for c in row))
    pathlib.Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
