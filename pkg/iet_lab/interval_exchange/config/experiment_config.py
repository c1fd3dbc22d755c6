from __future__ import annotations

import configparser
import io
import json
import logging
import pathlib
import re
from typing import Literal, Optional, get_args

import pydantic

from interval_exchange.gauges.traces import dyadic_horizons
from interval_exchange.utils.error import ConfigError

logger = logging.getLogger(__name__)

SEED_LIMIT = 2**64
EXACT_HORIZON_LIMIT = 10**5

ExperimentName = Literal[
    "gauge",
    "constants",
    "tau",
    "discrepancy",
    "cf",
    "liouville",
    "akc",
    "kesten",
    "chebyshev",
    "induce",
    "tower",
    "towerbook",
    "mix3",
    "bc-measure",
    "decisive",
]

EXPERIMENTS: tuple[str, ...] = get_args(ExperimentName)
OUTPUT_KEYS = ("csv", "json", "svg")

_INTEGER = re.compile(r"^\s*(\d+)\s*(?:e\s*(\d+))?\s*$", re.IGNORECASE)
_POWER = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*$")


def parse_count(text: str) -> int:
    """'1000', '1e6' and '2^20' as integers."""
    text = str(text)
    match = _POWER.match(text)
    if match:
        return int(match.group(1)) ** int(match.group(2))
    match = _INTEGER.match(text)
    if match:
        exponent = int(match.group(2)) if match.group(2) else 0
        return int(match.group(1)) * 10**exponent
    raise ValueError("'" + text + "' is not a count")


def _canonical_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_canonical_value(item) for item in value)
    return str(value).strip()


def _exact_text(value: Optional[bool]) -> str:
    if value is None:
        return "auto"
    return "true" if value else "false"


class OutputPaths(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid", populate_by_name=True)

    csv: Optional[str] = None
    report: Optional[str] = pydantic.Field(None, alias="json")
    svg: Optional[str] = None


class ExperimentConfig(pydantic.BaseModel):
    """

    One experiment: its name, the target map or number, typed parameters kept as
    canonical strings, the seed and the horizon ladder.

    The horizon ladder is either a comma separated list ('1024,65536') or
    'dyadic:N' for 2, 4, ..., N.

    """

    model_config = pydantic.ConfigDict(extra="forbid")

    experiment: ExperimentName
    target: str = ""
    parameters: dict[str, str] = {}
    seed: int = 0
    horizons: str = "1024"
    exact: Optional[bool] = None
    output: OutputPaths = OutputPaths()

    @pydantic.field_validator("parameters", mode="before")
    @classmethod
    def _canonical_parameters(cls, value):
        if not isinstance(value, dict):
            return value
        return {str(key).strip(): _canonical_value(item) for key, item in value.items()}

    @pydantic.field_validator("exact", mode="before")
    @classmethod
    def _auto_exact(cls, value):
        if isinstance(value, str) and value.strip().lower() in ("", "auto"):
            return None
        return value

    @pydantic.field_validator("seed")
    @classmethod
    def _seed_range(cls, value: int) -> int:
        if not 0 <= value < SEED_LIMIT:
            raise ValueError("seed must satisfy 0 <= seed < 2^64")
        return value

    @pydantic.field_validator("horizons", mode="before")
    @classmethod
    def _horizon_ladder(cls, value):
        text = _canonical_value(value).replace(" ", "")
        if text.startswith("dyadic:"):
            parse_count(text.partition(":")[2])
        else:
            counts = [parse_count(item) for item in text.split(",")]
            if any(n < 1 for n in counts):
                raise ValueError("horizons must be positive")
        return text

    def horizon_list(self) -> list[int]:
        if self.horizons.startswith("dyadic:"):
            return dyadic_horizons(parse_count(self.horizons.partition(":")[2]))
        return sorted(set(parse_count(item) for item in self.horizons.split(",")))

    @property
    def horizon(self) -> int:
        return self.horizon_list()[-1]

    @property
    def exact_mode(self) -> bool:
        """Unset exact means exact arithmetic up to horizon 10^5 and floats beyond."""
        if self.exact is None:
            return self.horizon <= EXACT_HORIZON_LIMIT
        return self.exact

    def has(self, key: str) -> bool:
        return key in self.parameters and self.parameters[key] != ""

    def get_str(self, key: str, default: str | None = None) -> str:
        if not self.has(key):
            if default is None:
                raise ConfigError("Missing parameter", field="parameters." + key)
            return default
        return self.parameters[key]

    def get_int(self, key: str, default: int | None = None) -> int:
        if not self.has(key) and default is not None:
            return default
        try:
            return parse_count(self.get_str(key))
        except ValueError as e:
            raise ConfigError(str(e), field="parameters." + key) from e

    def get_float(self, key: str, default: float | None = None) -> float:
        if not self.has(key) and default is not None:
            return default
        try:
            return float(self.get_str(key))
        except ValueError as e:
            raise ConfigError(str(e), field="parameters." + key) from e

    def get_bool(self, key: str, default: bool = False) -> bool:
        if not self.has(key):
            return default
        value = self.get_str(key).lower()
        if value in ("true", "yes", "1", "on"):
            return True
        if value in ("false", "no", "0", "off"):
            return False
        raise ConfigError("Not a boolean: '" + value + "'", field="parameters." + key)

    def get_list(self, key: str, default: str | None = None) -> list[str]:
        text = self.get_str(key, default)
        return [item.strip() for item in text.strip("[]").split(",") if item.strip()]

    def with_overrides(self, experiment: dict, parameters: dict) -> ExperimentConfig:
        """Command line values replace config values; None means not given."""
        data = self.model_dump(by_alias=True)
        for key, value in experiment.items():
            if value is None:
                continue
            if key in OUTPUT_KEYS:
                data["output"][key] = value
            else:
                data[key] = value
        data["parameters"].update(
            {key: value for key, value in parameters.items() if value is not None}
        )
        return validate_config(data)

    def serialize(self) -> str:
        """Canonical INI text; parsing it gives back an equal config."""
        parser = _new_parser()
        parser["experiment"] = {
            "experiment": self.experiment,
            "target": self.target,
            "seed": str(self.seed),
            "horizons": self.horizons,
            "exact": _exact_text(self.exact),
        }
        parser["parameters"] = {
            key: self.parameters[key] for key in sorted(self.parameters)
        }
        parser["output"] = {
            key: value
            for key, value in self.output.model_dump(by_alias=True).items()
            if value is not None
        }
        buffer = io.StringIO()
        parser.write(buffer)
        return buffer.getvalue()

    def echo(self) -> dict:
        return json.loads(self.model_dump_json(by_alias=True))


def _new_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    parser.optionxform = str
    return parser


def _line_of(text: str, section: str, key: str | None) -> int | None:
    current = None
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].strip()
            if key is None and current == section:
                return number
            continue
        if current == section and key is not None:
            name = stripped.partition("=")[0].strip()
            if name == key:
                return number
    return None


def _field_path(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"])


def validate_config(data: dict, text: str | None = None) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except pydantic.ValidationError as e:
        error = e.errors()[0]
        field = _field_path(error)
        line = None
        if text is not None:
            loc = [str(part) for part in error["loc"]]
            if loc[0] in ("parameters", "output") and len(loc) > 1:
                line = _line_of(text, loc[0], loc[1])
            else:
                line = _line_of(text, "experiment", loc[0])
        raise ConfigError(error["msg"], line=line, field=field) from e


def parse_ini(text: str) -> ExperimentConfig:
    parser = _new_parser()
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError("Missing section header", line=e.lineno) from e
    except configparser.DuplicateOptionError as e:
        raise ConfigError("Duplicate option '" + e.option + "'", line=e.lineno) from e
    except configparser.DuplicateSectionError as e:
        raise ConfigError("Duplicate section '" + e.section + "'", line=e.lineno) from e
    except configparser.ParsingError as e:
        line = e.errors[0][0] if e.errors else None
        raise ConfigError("Malformed line", line=line) from e

    for section in parser.sections():
        if section not in ("experiment", "parameters", "output"):
            raise ConfigError(
                "Unknown section '" + section + "'", line=_line_of(text, section, None)
            )
    if not parser.has_section("experiment"):
        raise ConfigError("Missing section [experiment]", field="experiment")

    data: dict = dict(parser["experiment"])
    if parser.has_section("parameters"):
        data["parameters"] = dict(parser["parameters"])
    if parser.has_section("output"):
        data["output"] = {
            key: value for key, value in parser["output"].items() if value != ""
        }
    return validate_config(data, text)


def parse_json(text: str) -> ExperimentConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("Invalid JSON: " + e.msg, line=e.lineno) from e
    if not isinstance(data, dict):
        raise ConfigError("A JSON config must be an object", line=1)
    return validate_config(data)


def load_config(path) -> ExperimentConfig:
    path = pathlib.Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError("Could not read config " + str(path) + ": " + str(e)) from e
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        config = parse_json(text)
    else:
        config = parse_ini(text)
    logger.debug("Loaded config %s: %s", path, config.echo())
    return config
