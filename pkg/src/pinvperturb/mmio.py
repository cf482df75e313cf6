"""Matrix Market reader and writer.

Supports the dense "array" and sparse "coordinate" formats with "real" and
"complex" fields and "general" symmetry. Every parse failure carries the
offending line number. Values are written with 17 significant digits so a
write/read round trip is bit-exact for binary64.
"""

import os

import numpy as np

from .errors import MatrixMarketError
from .linalg import as_matrix

_BANNER = "%%matrixmarket"


def _parse_float(token: str, path, lineno) -> float:
    try:
        return float(token)
    except ValueError:
        raise MatrixMarketError(
            f"non-numeric token {token!r}", path=path, line=lineno
        ) from None


def _parse_index(token: str, path, lineno) -> int:
    try:
        return int(token)
    except ValueError:
        raise MatrixMarketError(
            f"non-numeric token {token!r} where an index was expected",
            path=path,
            line=lineno,
        ) from None


def _parse_size(tokens, count, path, lineno):
    if len(tokens) != count:
        raise MatrixMarketError(
            f"size line must have {count} integers, got {len(tokens)} tokens",
            path=path,
            line=lineno,
        )
    values = [_parse_index(tok, path, lineno) for tok in tokens]
    if values[0] < 1 or values[1] < 1:
        raise MatrixMarketError(
            f"matrix dimensions must be positive, got {values[0]} x {values[1]}",
            path=path,
            line=lineno,
        )
    if count == 3 and values[2] < 0:
        raise MatrixMarketError(
            f"entry count must be non-negative, got {values[2]}", path=path, line=lineno
        )
    return values


def read_matrix(path) -> np.ndarray:
    """Parse a Matrix Market file into a complex dense matrix.

    Raises :class:`MatrixMarketError` with a line number for malformed
    headers, unsupported field/symmetry classes, out-of-range coordinate
    indices, non-numeric tokens, and entry-count mismatches.
    """
    path = os.fspath(path)
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MatrixMarketError("empty file, missing Matrix Market header", path=path, line=1)

    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != _BANNER:
        raise MatrixMarketError(
            "malformed header: expected"
            " '%%MatrixMarket matrix <format> <field> <symmetry>'",
            path=path,
            line=1,
        )
    obj, fmt, field, symmetry = (w.lower() for w in header[1:])
    if obj != "matrix":
        raise MatrixMarketError(f"unsupported object {obj!r}", path=path, line=1)
    if fmt not in ("array", "coordinate"):
        raise MatrixMarketError(
            f"unsupported format {fmt!r} (only 'array' and 'coordinate')",
            path=path,
            line=1,
        )
    if field not in ("real", "complex"):
        raise MatrixMarketError(
            f"unsupported field {field!r} (only 'real' and 'complex')",
            path=path,
            line=1,
        )
    if symmetry != "general":
        raise MatrixMarketError(
            f"unsupported symmetry class {symmetry!r} (only 'general')",
            path=path,
            line=1,
        )

    data = [
        (no, line.split())
        for no, line in enumerate(lines[1:], start=2)
        if line.strip() and not line.lstrip().startswith("%")
    ]
    if not data:
        raise MatrixMarketError("missing size line", path=path, line=len(lines))
    size_lineno, size_tokens = data[0]
    entries = data[1:]
    values_per_entry = 1 if field == "real" else 2

    if fmt == "array":
        rows, cols = _parse_size(size_tokens, 2, path, size_lineno)
        need = rows * cols
        if len(entries) < need:
            raise MatrixMarketError(
                f"unexpected end of file: expected {need} entries, found {len(entries)}",
                path=path,
                line=len(lines),
            )
        if len(entries) > need:
            raise MatrixMarketError(
                f"trailing data: expected {need} entries, found {len(entries)}",
                path=path,
                line=entries[need][0],
            )
        mat = np.zeros((rows, cols), dtype=np.complex128)
        for k, (no, tokens) in enumerate(entries):
            if len(tokens) != values_per_entry:
                raise MatrixMarketError(
                    f"array entry must have {values_per_entry} value(s), got {len(tokens)}",
                    path=path,
                    line=no,
                )
            re = _parse_float(tokens[0], path, no)
            im = _parse_float(tokens[1], path, no) if field == "complex" else 0.0
            # array entries are stored column-major
            mat[k % rows, k // rows] = complex(re, im)
        return mat

    rows, cols, nnz = _parse_size(size_tokens, 3, path, size_lineno)
    if len(entries) < nnz:
        raise MatrixMarketError(
            f"unexpected end of file: expected {nnz} entries, found {len(entries)}",
            path=path,
            line=len(lines),
        )
    if len(entries) > nnz:
        raise MatrixMarketError(
            f"trailing data: expected {nnz} entries, found {len(entries)}",
            path=path,
            line=entries[nnz][0],
        )
    mat = np.zeros((rows, cols), dtype=np.complex128)
    for no, tokens in entries:
        if len(tokens) != 2 + values_per_entry:
            raise MatrixMarketError(
                f"coordinate entry must have {2 + values_per_entry} tokens,"
                f" got {len(tokens)}",
                path=path,
                line=no,
            )
        i = _parse_index(tokens[0], path, no)
        j = _parse_index(tokens[1], path, no)
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise MatrixMarketError(
                f"coordinate ({i}, {j}) out of range for a {rows} x {cols} matrix",
                path=path,
                line=no,
            )
        re = _parse_float(tokens[2], path, no)
        im = _parse_float(tokens[3], path, no) if field == "complex" else 0.0
        # duplicates accumulate, matching common reference parsers
        mat[i - 1, j - 1] += complex(re, im)
    return mat


def write_matrix(m, path, format: str = "array") -> None:
    """Write a matrix in Matrix Market form.

    The field is "complex" whenever any imaginary part is nonzero, "real"
    otherwise. Coordinate output lists nonzero entries only (a zero matrix
    gets an entry count of zero).
    """
    if format not in ("array", "coordinate"):
        raise ValueError(f"format must be 'array' or 'coordinate', got {format!r}")
    mat = as_matrix(m)
    rows, cols = mat.shape
    field = "complex" if np.any(mat.imag != 0.0) else "real"

    def render(value) -> str:
        if field == "complex":
            return f"{value.real:.17g} {value.imag:.17g}"
        return f"{value.real:.17g}"

    out = [f"%%MatrixMarket matrix {format} {field} general"]
    if format == "array":
        out.append(f"{rows} {cols}")
        for j in range(cols):
            for i in range(rows):
                out.append(render(mat[i, j]))
    else:
        nz = [(i, j) for j in range(cols) for i in range(rows) if mat[i, j] != 0.0]
        out.append(f"{rows} {cols} {len(nz)}")
        for i, j in nz:
            out.append(f"{i + 1} {j + 1} {render(mat[i, j])}")
    with open(os.fspath(path), "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
