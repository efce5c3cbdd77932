"""
Reader and writer for the alist sparse-matrix format.

Layout (ASCII, space separated, newline terminated, indices 1-based):

    n m_rows
    max_col_degree max_row_degree
    <n column degrees>
    <m_rows row degrees>
    <n lines: row indices of each column, 0-padded to max_col_degree>
    <m_rows lines: column indices of each row, 0-padded to max_row_degree>
"""

import logging

from sp_recon.exceptions import AlistParseError, ConstructionError
from .ldpc import ParityCheckCode, require_full_rank

logger = logging.getLogger(__name__)


def _lines(text):
    """Non-blank lines with their 1-based line numbers."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise AlistParseError(f"alist must be ASCII ({exc})") from exc
    numbered = []
    for number, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            numbered.append((number, line))
    return numbered


def _ints(number, line, expected=None):
    try:
        values = [int(token) for token in line.split()]
    except ValueError as exc:
        raise AlistParseError(f"non-integer entry ({exc})", line=number) from exc
    if expected is not None and len(values) != expected:
        raise AlistParseError(f"expected {expected} values, got {len(values)}", line=number)
    return values


def _entries(number, line, degree, max_degree, upper, what):
    values = _ints(number, line)
    if len(values) < degree or len(values) > max(degree, max_degree):
        raise AlistParseError(
            f"{what} has {len(values)} entries for degree {degree} "
            f"(max degree {max_degree})",
            line=number,
        )
    entries, padding = values[:degree], values[degree:]
    if any(v != 0 for v in padding):
        raise AlistParseError(f"{what} has more nonzero entries than its degree", line=number)
    for v in entries:
        if v == 0:
            raise AlistParseError(f"{what} has index 0 inside its declared degree", line=number)
        if not 1 <= v <= upper:
            raise AlistParseError(f"{what} index {v} outside [1, {upper}]", line=number)
    if len(set(entries)) != len(entries):
        raise AlistParseError(f"{what} repeats an index", line=number)
    return [v - 1 for v in entries]


def load_alist(text, check_rank=True, name=""):
    """Parse alist text (str or bytes) into a ParityCheckCode.

    With ``check_rank`` the matrix must have full row rank; pass False to skip
    the elimination on very large codes.
    """
    lines = _lines(text)
    if not lines:
        raise AlistParseError("empty alist stream", line=1)
    if len(lines) < 4:
        last = lines[-1][0]
        raise AlistParseError("truncated header", line=last + 1)

    number, line = lines[0]
    n, m_rows = _ints(number, line, expected=2)
    if n <= 0 or m_rows <= 0:
        raise AlistParseError(f"invalid dimensions {n} x {m_rows}", line=number)
    number, line = lines[1]
    max_col, max_row = _ints(number, line, expected=2)

    number, line = lines[2]
    col_degrees = _ints(number, line, expected=n)
    if any(d < 0 or d > max_col for d in col_degrees):
        raise AlistParseError(f"column degree outside [0, {max_col}]", line=number)
    number, line = lines[3]
    row_degrees = _ints(number, line, expected=m_rows)
    if any(d < 0 or d > max_row for d in row_degrees):
        raise AlistParseError(f"row degree outside [0, {max_row}]", line=number)
    if sum(col_degrees) != sum(row_degrees):
        raise AlistParseError(
            f"column degrees sum to {sum(col_degrees)} but row degrees to {sum(row_degrees)}",
            line=number,
        )

    body = lines[4:]
    if len(body) < n + m_rows:
        missing_at = body[-1][0] + 1 if body else lines[3][0] + 1
        raise AlistParseError(
            f"expected {n + m_rows} adjacency lines, found {len(body)}", line=missing_at
        )
    if len(body) > n + m_rows:
        raise AlistParseError("trailing content after the row section", line=body[n + m_rows][0])

    columns = [
        _entries(number, line, col_degrees[i], max_col, m_rows, f"column {i + 1}")
        for i, (number, line) in enumerate(body[:n])
    ]
    rows = [
        _entries(number, line, row_degrees[j], max_row, n, f"row {j + 1}")
        for j, (number, line) in enumerate(body[n:])
    ]

    # rows and columns must describe the same matrix
    from_columns = [set() for _ in range(m_rows)]
    for i, col in enumerate(columns):
        for j in col:
            from_columns[j].add(i)
    for j, row in enumerate(rows):
        if set(row) != from_columns[j]:
            raise AlistParseError(
                f"row {j + 1} disagrees with the column section", line=body[n + j][0]
            )

    try:
        code = ParityCheckCode(n, rows, columns, name=name)
    except ConstructionError as exc:
        raise AlistParseError(str(exc), line=lines[0][0]) from exc
    if check_rank:
        require_full_rank(code)
    logger.info(f"Loaded {code!r} from alist")
    return code


def write_alist(code):
    col_degrees = [int(d) for d in code.col_degrees]
    row_degrees = [int(d) for d in code.row_degrees]
    max_col = max(col_degrees)
    max_row = max(row_degrees)

    def padded(entries, width):
        values = [str(int(v) + 1) for v in entries]
        values += ["0"] * (width - len(values))
        return " ".join(values)

    out = [
        f"{code.n} {code.m_rows}",
        f"{max_col} {max_row}",
        " ".join(map(str, col_degrees)),
        " ".join(map(str, row_degrees)),
    ]
    out += [padded(code.column(i), max_col) for i in range(code.n)]
    out += [padded(code.row(j), max_row) for j in range(code.m_rows)]
    return "\n".join(out) + "\n"
