from __future__ import annotations

import csv
import logging
import pathlib
from fractions import Fraction
from typing import Iterable, Sequence

from interval_exchange.gauges.traces import GaugeTrace
from interval_exchange.utils.error import BadCsv, UserException
from interval_exchange.utils.exact_real import ExactReal
from interval_exchange.utils.literal_parser import parse_exact

logger = logging.getLogger(__name__)

TRACE_HEADER = ["sample_id", "x", "y", "horizon", "running_min", "argmin"]


def format_cell(value) -> str:
    """Numbers as decimal strings, exact values as 'p/q' or radical literals."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (ExactReal, Fraction)):
        return str(value)
    return repr(float(value))


def write_table(path, header: Sequence[str], rows: Iterable[Sequence]) -> pathlib.Path:
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])
    logger.info("Table saved as %s", path)
    return path


def write_trace_csv(path, traces: Sequence[GaugeTrace], exact: bool = False):
    rows = []
    for trace in sorted(traces, key=lambda t: t.sample_id):
        rows.extend(trace.rows(exact))
    return write_table(path, TRACE_HEADER, rows)


def read_table(path) -> tuple[list[str], list[list[str]]]:
    path = pathlib.Path(path)
    try:
        with path.open("r", newline="", encoding="utf-8") as f:
            lines = [row for row in csv.reader(f) if row]
    except (OSError, UnicodeDecodeError, csv.Error) as e:
        raise BadCsv("Could not read " + str(path) + ": " + str(e)) from e

    if not lines:
        raise BadCsv(str(path) + " is empty")
    header, rows = lines[0], lines[1:]
    if not rows:
        raise BadCsv(str(path) + " has a header but no rows")
    for number, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise BadCsv(
                str(path)
                + ":"
                + str(number)
                + ": expected "
                + str(len(header))
                + " columns, got "
                + str(len(row))
            )
    return header, rows


def _number(cell: str) -> float:
    try:
        return float(cell)
    except ValueError:
        return float(parse_exact(cell))


def read_trace_csv(path) -> list[dict]:
    header, rows = read_table(path)
    if header != TRACE_HEADER:
        raise BadCsv(str(path) + " is not a trace table, header " + ",".join(header))
    records = []
    for number, row in enumerate(rows, start=2):
        try:
            records.append(
                {
                    "sample_id": int(row[0]),
                    "x": row[1],
                    "y": row[2],
                    "horizon": int(row[3]),
                    "running_min": _number(row[4]),
                    "argmin": int(row[5]),
                }
            )
        except (ValueError, UserException) as e:
            raise BadCsv(str(path) + ":" + str(number) + ": " + str(e)) from e
    return records


def column(path, name: str) -> list[float]:
    header, rows = read_table(path)
    if name not in header:
        raise BadCsv(str(path) + " has no column '" + name + "'")
    index = header.index(name)
    try:
        return [_number(row[index]) for row in rows]
    except (ValueError, UserException) as e:
        raise BadCsv(str(path) + ": column '" + name + "' is not numeric") from e
