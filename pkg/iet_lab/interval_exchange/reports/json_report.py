from __future__ import annotations

import json
import logging
import math
import pathlib
from fractions import Fraction

import numpy as np

from interval_exchange import __version__
from interval_exchange.utils.exact_real import ExactReal

logger = logging.getLogger(__name__)

SAFE_INTEGER = 2**53


def to_plain(value):
    """

    Converts a payload into JSON-safe values: integers beyond 2^53 and exact numbers
    become decimal strings, non-finite floats become 'inf', '-inf' or 'nan'.

    """

    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [to_plain(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        value = int(value)
        return str(value) if abs(value) > SAFE_INTEGER else value
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, (ExactReal, Fraction)):
        return str(value)
    if value is None or isinstance(value, str):
        return value
    if hasattr(value, "to_json"):
        return to_plain(value.to_json())
    return str(value)


def dumps(payload) -> str:
    return json.dumps(to_plain(payload), sort_keys=True, indent=2) + "\n"


def timing_path(path) -> pathlib.Path:
    path = pathlib.Path(path)
    return path.with_name(path.stem + ".timing.json")


class Report:
    """

    The JSON report of a run: the config echo, the artifact version and the
    experiment payload. Timing and the step history go to a sidecar file next to it so
    that reruns produce byte-identical reports.

    """

    def __init__(self, config: dict, payload: dict, exit_code: int = 0):
        self.config = config
        self.payload = payload
        self.exit_code = exit_code
        self.timing: dict[str, float] = {}
        self.steps: list[dict] = []

    def to_json(self) -> dict:
        return {
            "version": __version__,
            "config": self.config,
            "payload": self.payload,
            "exit_code": self.exit_code,
        }

    def write(self, path) -> pathlib.Path:
        path = pathlib.Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="\n", encoding="utf-8") as f:
            f.write(dumps(self.to_json()))

        with timing_path(path).open("w", newline="\n", encoding="utf-8") as f:
            f.write(dumps({"seconds": self.timing, "steps": self.steps}))

        logger.info("Report saved as %s", path)
        return path


def read_report(path) -> dict:
    with pathlib.Path(path).open("r", encoding="utf-8") as f:
        return json.load(f)
