from __future__ import annotations

import logging
import pathlib
from collections import defaultdict
from multiprocessing import Process

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib import pyplot as plt

from interval_exchange.reports.csv_report import (
    TRACE_HEADER,
    column,
    read_table,
    read_trace_csv,
)
from interval_exchange.utils.error import BadCsv

logger = logging.getLogger(__name__)

FIGURE_SIZE = (8, 5)
HISTOGRAM_BINS = 24


class PlotKind:
    TRACE = "trace"
    HISTOGRAM = "histogram"
    LOGLOG = "loglog"

    ALL = (TRACE, HISTOGRAM, LOGLOG)


def _svg_settings():
    # fixed ids and no date stamp
    matplotlib.rcParams.update(
        {
            "svg.hashsalt": "iet-lab",
            "svg.fonttype": "path",
            "font.size": 11,
        }
    )


def _save(figure, svg_path: pathlib.Path):
    svg_path.parent.mkdir(parents=True, exist_ok=True)
    figure.savefig(svg_path, format="svg", metadata={"Date": None})
    plt.close(figure)
    logger.info("Plot saved as %s", svg_path)


def _plot_trace(csv_path, svg_path, asymptote):
    records = read_trace_csv(csv_path)
    series = defaultdict(list)
    for record in records:
        series[record["sample_id"]].append((record["horizon"], record["running_min"]))

    figure, axes = plt.subplots(figsize=FIGURE_SIZE)
    for sample_id in sorted(series):
        points = sorted(series[sample_id])
        horizons = [p[0] for p in points]
        values = [p[1] for p in points]
        axes.plot(horizons, values, marker=".", linewidth=0.8, label=str(sample_id))
    if asymptote is not None:
        axes.axhline(
            asymptote,
            color="gray",
            linestyle="dashed",
            linewidth=0.8,
            label="asymptote " + format(asymptote, ".6g"),
        )
    axes.set_xscale("log")
    axes.set_xlabel("horizon N")
    axes.set_ylabel("running minimum")
    axes.set_title("Gauge trace")
    if len(series) <= 12 or asymptote is not None:
        axes.legend(frameon=False, fontsize=8)
    axes.grid(color="gray", linestyle="dashed", linewidth=0.5)
    _save(figure, svg_path)


def _plot_histogram(csv_path, svg_path, asymptote):
    records = read_trace_csv(csv_path)
    final = {}
    for record in records:
        current = final.get(record["sample_id"])
        if current is None or record["horizon"] >= current["horizon"]:
            final[record["sample_id"]] = record
    values = np.array([final[k]["running_min"] for k in sorted(final)])
    logs = np.log10(np.clip(values, 1e-12, 1e12))

    figure, axes = plt.subplots(figsize=FIGURE_SIZE)
    axes.hist(logs, bins=HISTOGRAM_BINS, color="tab:blue", edgecolor="white")
    if asymptote is not None and asymptote > 0:
        axes.axvline(np.log10(asymptote), color="gray", linestyle="dashed")
    axes.set_xlabel("log10 running minimum at the final horizon")
    axes.set_ylabel("samples")
    axes.set_title("Gauge histogram")
    axes.grid(color="gray", linestyle="dashed", linewidth=0.5)
    _save(figure, svg_path)


def _plot_loglog(csv_path, svg_path, asymptote):
    header, _ = read_table(csv_path)
    if len(header) < 2:
        raise BadCsv(str(csv_path) + " needs two columns for a log-log plot")
    n = np.array(column(csv_path, header[0]))
    values = np.array(column(csv_path, header[1]))
    mask = (n > 0) & (values > 0)
    if mask.sum() < 2:
        raise BadCsv(str(csv_path) + " has fewer than two positive rows")
    slope, intercept = np.polyfit(np.log(n[mask]), np.log(values[mask]), 1)

    figure, axes = plt.subplots(figsize=FIGURE_SIZE)
    axes.plot(n[mask], values[mask], marker="o", linestyle="none", label=header[1])
    axes.plot(
        n[mask],
        np.exp(intercept) * n[mask] ** slope,
        color="orange",
        label="fitted slope " + format(slope, ".4f"),
    )
    if asymptote is not None:
        axes.plot(
            n[mask],
            values[mask][0] * (n[mask] / n[mask][0]) ** asymptote,
            color="gray",
            linestyle="dashed",
            label="slope " + format(asymptote, ".4g"),
        )
    axes.set_xscale("log")
    axes.set_yscale("log")
    axes.set_xlabel(header[0])
    axes.set_ylabel(header[1])
    axes.legend(frameon=False)
    axes.grid(color="gray", linestyle="dashed", linewidth=0.5)
    _save(figure, svg_path)


_PLOTTERS = {
    PlotKind.TRACE: _plot_trace,
    PlotKind.HISTOGRAM: _plot_histogram,
    PlotKind.LOGLOG: _plot_loglog,
}


def _plot_loglog_check(csv_path, header):
    if len(header) < 2:
        raise BadCsv(str(csv_path) + " needs two columns for a log-log plot")
    column(csv_path, header[0])
    column(csv_path, header[1])


def _emit(csv_path, svg_path, kind, asymptote):
    _svg_settings()
    _PLOTTERS[kind](csv_path, svg_path, asymptote)


def emit_plot(
    csv_path, kind: str, svg_path=None, asymptote: float | None = None
) -> pathlib.Path:
    """

    Renders a CSV written by a run as an SVG file. `trace` and `histogram` read a
    trace table (header sample_id,x,y,horizon,running_min,argmin); `loglog` plots the
    second column against the first and fits a slope.

    The table is validated before rendering, which runs in a child process.

    """

    csv_path = pathlib.Path(csv_path)
    if kind not in PlotKind.ALL:
        raise BadCsv("Unknown plot kind '" + kind + "'")
    svg_path = pathlib.Path(svg_path) if svg_path else csv_path.with_suffix(".svg")

    header, _ = read_table(csv_path)
    if kind != PlotKind.LOGLOG:
        if header != TRACE_HEADER:
            raise BadCsv(str(csv_path) + " is not a trace table")
        read_trace_csv(csv_path)
    else:
        _plot_loglog_check(csv_path, header)

    p = Process(target=_emit, args=(csv_path, svg_path, kind, asymptote))
    p.start()
    p.join()
    if p.exitcode != 0:
        raise RuntimeError("Plot process failed with exit code " + str(p.exitcode))
    return svg_path
