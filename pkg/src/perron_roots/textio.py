"""Matrix and factorization text formats, and report serialization.

Matrix file::

    # comment lines start with '#'
    2 2
    1/2 1/2
    0.25 0.75

Factorization file: a matrix block for ``R`` followed by one block descriptor
per line, in ``J_R`` order: ``real <lam> <k>`` or ``cpair <re> <im> <k>``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import yaml

from .rjcf import ComplexPairBlock, RealEigenBlock

SCHEMA_VERSION = 1


class ParseError(ValueError):
    """Malformed input file; the message carries line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, path: str | None = None):
        self.line, self.column, self.path = line, column, path
        where = ":".join(str(x) for x in (path, line, column) if x is not None)
        super().__init__(f"{where}: {message}" if where else message)


def parse_scalar(token: str) -> float:
    """Decimal or rational ``a/b`` token to float."""
    if "/" in token:
        num, _, den = token.partition("/")
        try:
            frac = Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational {token!r}") from exc
        return float(frac)
    value = float(token)
    if not np.isfinite(value):
        raise ValueError(f"non-finite entry {token!r}")
    return value


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, raw


def _tokens(raw: str):
    col = 0
    for tok in raw.split():
        col = raw.index(tok, col)
        yield col + 1, tok
        col += len(tok)


def _read_matrix(lines, path=None) -> np.ndarray:
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("missing 'rows cols' header", path=path) from None
    dims = header.split()
    if len(dims) != 2:
        raise ParseError("header must be 'rows cols'", lineno, 1, path)
    try:
        rows, cols = int(dims[0]), int(dims[1])
    except ValueError:
        raise ParseError("header must hold two integers", lineno, 1, path) from None
    if rows < 1 or cols < 1:
        raise ParseError("dimensions must be positive", lineno, 1, path)
    out = np.empty((rows, cols))
    for i in range(rows):
        try:
            lineno, raw = next(lines)
        except StopIteration:
            raise ParseError(f"expected {rows} rows, found {i}", path=path) from None
        toks = list(_tokens(raw))
        if len(toks) != cols:
            raise ParseError(f"row has {len(toks)} entries, expected {cols}", lineno, 1, path)
        for jcol, (col, tok) in enumerate(toks):
            try:
                out[i, jcol] = parse_scalar(tok)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, col, path) from None
    return out


def parse_matrix(text: str, path: str | None = None) -> np.ndarray:
    lines = _content_lines(text)
    m = _read_matrix(lines, path)
    for lineno, _ in lines:
        raise ParseError("unexpected content after matrix", lineno, 1, path)
    return m


def read_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return parse_matrix(fh.read(), str(path))


def format_scalar(x: float) -> str:
    return repr(float(x))


def format_matrix(m: np.ndarray) -> str:
    """Matrix text format with round-trip (17 significant digit) entries."""
    m = np.asarray(m, dtype=float)
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    lines += [" ".join(format_scalar(x) for x in row) for row in m]
    return "\n".join(lines) + "\n"


def parse_factorization(text: str, path: str | None = None):
    """Return ``(R, blocks)`` from a factorization file."""
    lines = _content_lines(text)
    R = _read_matrix(lines, path)
    blocks = []
    for lineno, raw in lines:
        toks = raw.split()
        kind = toks[0]
        try:
            if kind == "real" and len(toks) == 3:
                blocks.append(RealEigenBlock(parse_scalar(toks[1]), int(toks[2])))
            elif kind == "cpair" and len(toks) == 4:
                blocks.append(ComplexPairBlock(complex(parse_scalar(toks[1]), parse_scalar(toks[2])), int(toks[3])))
            else:
                raise ParseError("expected 'real <lam> <k>' or 'cpair <re> <im> <k>'", lineno, 1, path)
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), lineno, 1, path) from None
    if not blocks:
        raise ParseError("factorization has no block descriptors", path=path)
    return R, blocks


def read_factorization(path):
    with open(path) as fh:
        return parse_factorization(fh.read(), str(path))


def format_factorization(R: np.ndarray, blocks) -> str:
    out = [format_matrix(R)]
    for b in blocks:
        if isinstance(b, RealEigenBlock):
            out.append(f"real {format_scalar(b.lam)} {b.size}\n")
        else:
            out.append(f"cpair {format_scalar(b.lam.real)} {format_scalar(b.lam.imag)} {b.size}\n")
    return "".join(out)


def _fmt4(x: float) -> str:
    text = f"{x:.4f}"
    return "0.0000" if text == "-0.0000" else text


def matrix_entry(m: np.ndarray) -> dict:
    """Report form of a matrix: 4-decimal display rows plus full-precision rows."""
    m = np.asarray(m)
    if np.iscomplexobj(m):
        return {
            "rows": int(m.shape[0]),
            "cols": int(m.shape[1]),
            "complex": True,
            "display": [" ".join(f"{_fmt4(z.real)}{z.imag:+.4f}j" for z in row) for row in m],
            "real": [[float(x) for x in row] for row in m.real],
            "imag": [[float(x) for x in row] for row in m.imag],
        }
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "display": [" ".join(_fmt4(x) for x in row) for row in m],
        "entries": [[float(x) for x in row] for row in m],
    }


def matrix_from_entry(entry: dict) -> np.ndarray:
    if entry.get("complex"):
        return np.array(entry["real"]) + 1j * np.array(entry["imag"])
    return np.array(entry["entries"], dtype=float)


def dump_report(report: dict) -> str:
    """Structured report: YAML mapping with ``schema`` first, key order preserved."""
    doc = {"schema": SCHEMA_VERSION}
    doc.update(report)
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None, width=1 << 16)


def load_report(text: str) -> dict:
    return yaml.safe_load(text)


def render_text(report: dict, indent: int = 0) -> str:
    """Human-readable rendering of a report dict."""
    pad = "  " * indent
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            if "display" in value:
                lines.append(f"{pad}{key}:")
                lines.extend(f"{pad}  {row}" for row in value["display"])
            else:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for i, item in enumerate(value):
                lines.append(f"{pad}  [{i}]")
                lines.append(render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(line for line in lines if line != "")
