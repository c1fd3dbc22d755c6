import pytest

from interval_exchange.config.experiment_config import (
    EXPERIMENTS,
    load_config,
    parse_count,
    parse_ini,
    parse_json,
    validate_config,
)
from interval_exchange.utils.error import ConfigError

INI = """
[experiment]
experiment = gauge
target = rot: alpha=golden
seed = 42
horizons = dyadic:1024
exact = true

[parameters]
kind = phi
scale = pow:1
pairs = 4

[output]
csv = out/trace.csv
json = out/trace.json
"""


def test_parse_count():
    assert parse_count("1000") == 1000
    assert parse_count("1e6") == 10**6
    assert parse_count("2^20") == 2**20
    with pytest.raises(ValueError):
        parse_count("many")


def test_ini_config():
    config = parse_ini(INI)
    assert config.experiment == "gauge"
    assert config.seed == 42
    assert config.exact
    assert config.horizon_list()[-1] == 1024
    assert config.horizon == 1024
    assert config.get_int("pairs") == 4
    assert config.get_str("kind") == "phi"
    assert config.output.csv == "out/trace.csv"
    assert config.output.report == "out/trace.json"


def test_serialize_round_trip():
    config = parse_ini(INI)
    assert parse_ini(config.serialize()) == config
    assert config.serialize() == parse_ini(config.serialize()).serialize()


def test_json_config_matches_ini():
    config = parse_json(
        '{"experiment": "cf", "target": "golden", "parameters": {"depth": 12}}'
    )
    assert config.get_int("depth") == 12
    assert config.horizon_list() == [1024]
    assert config.echo()["output"]["json"] is None


def test_explicit_horizon_list_is_sorted():
    config = validate_config({"experiment": "gauge", "horizons": "65536, 1024,1e3"})
    assert config.horizon_list() == [1000, 1024, 65536]


def test_exact_mode_follows_the_horizon_unless_set():
    at_limit = validate_config({"experiment": "gauge", "horizons": "1024,1e5"})
    assert at_limit.exact is None
    assert at_limit.exact_mode

    beyond = validate_config({"experiment": "gauge", "horizons": "100001"})
    assert not beyond.exact_mode

    forced = validate_config(
        {"experiment": "gauge", "horizons": "2^20", "exact": "true"}
    )
    assert forced.exact_mode
    floats = validate_config({"experiment": "gauge", "exact": False})
    assert not floats.exact_mode

    assert "exact = auto" in at_limit.serialize()
    assert parse_ini(at_limit.serialize()) == at_limit


def test_ini_errors_carry_line_numbers():
    with pytest.raises(ConfigError) as e:
        parse_ini("experiment = gauge\n")
    assert e.value.line == 1

    text = "[experiment]\nexperiment = gauge\nseed = -3\n"
    with pytest.raises(ConfigError) as e:
        parse_ini(text)
    assert e.value.line == 3
    assert e.value.field == "seed"

    with pytest.raises(ConfigError) as e:
        parse_ini("[experiment]\nexperiment = painting\n")
    assert e.value.line == 2

    with pytest.raises(ConfigError) as e:
        parse_ini("[experiment]\nexperiment = cf\n\n[extras]\nx = 1\n")
    assert e.value.line == 4


def test_validation_errors_carry_field_paths():
    with pytest.raises(ConfigError) as e:
        validate_config({"experiment": "cf", "output": {"pdf": "x.pdf"}})
    assert e.value.field == "output.pdf"

    with pytest.raises(ConfigError) as e:
        validate_config({"experiment": "gauge", "horizons": "0,8"})
    assert e.value.field == "horizons"

    with pytest.raises(ConfigError):
        parse_json("[1, 2]")
    with pytest.raises(ConfigError) as e:
        parse_json('{"experiment": ')
    assert e.value.line == 1


def test_parameter_accessors():
    config = validate_config(
        {
            "experiment": "akc",
            "parameters": {"k": "1:3", "c": 0.5, "flag": True, "bad": "x"},
        }
    )
    assert config.get_str("k") == "1:3"
    assert config.get_float("c") == 0.5
    assert config.get_bool("flag")
    assert config.get_int("missing", 7) == 7
    assert config.get_list("k") == ["1:3"]
    with pytest.raises(ConfigError) as e:
        config.get_int("bad")
    assert e.value.field == "parameters.bad"
    with pytest.raises(ConfigError):
        config.get_str("missing")
    with pytest.raises(ConfigError):
        config.get_bool("bad")


def test_overrides_replace_config_values():
    config = parse_ini(INI)
    merged = config.with_overrides(
        {"seed": 7, "target": None, "csv": "other.csv"}, {"pairs": "9", "kind": None}
    )
    assert merged.seed == 7
    assert merged.target == config.target
    assert merged.output.csv == "other.csv"
    assert merged.get_int("pairs") == 9
    assert merged.get_str("kind") == "phi"


def test_load_config(tmp_path):
    path = tmp_path / "gauge.ini"
    path.write_text(INI, encoding="utf-8")
    assert load_config(path).seed == 42
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.ini")
    assert "mix3" in EXPERIMENTS
