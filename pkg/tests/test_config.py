import pytest

from tradehurst.config import ConfigError, RunConfig, build_config, read_config_file
from tradehurst.ingest import EXCLUDED_CONDITIONS


def test_defaults_match_filter_rules():
    cfg = build_config()
    pol = cfg.filter_policy()
    assert pol.excluded_conditions == EXCLUDED_CONDITIONS
    assert pol.allowed_corrections == {0, 1, 2}
    assert (pol.session_start, pol.session_end, pol.nasdaq_trim_seconds) == (34200, 57600, 30)
    assert (cfg.j1, cfg.j2, cfg.max_octave, cfg.delta_t) == (1, 10, 14, 1.0)


def test_file_then_flags(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# study\ninputs = a.csv, b.csv\nj2 = 9\nformat = json\nbias-correction = yes\n")
    values = read_config_file(p)
    cfg = build_config(values, {"j2": 8, "out": None})
    assert cfg.inputs == ["a.csv", "b.csv"]
    assert cfg.j2 == 8 and cfg.format == "json" and cfg.bias_correction is True


@pytest.mark.parametrize("key, value", [
    ("j2", 2), ("delta_t", -1), ("format", "xml"), ("workers", 0), ("max_octave", 5),
    ("size_buckets", "a:1-300;b:200-400"), ("j1", "one"), ("session_end", 1000),
])
def test_field_level_errors(key, value):
    with pytest.raises(ConfigError) as info:
        build_config({}, {key: value})
    assert info.value.key == key


def test_unknown_key(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("octaves = 3\n")
    with pytest.raises(ConfigError, match="octaves"):
        read_config_file(p)


def test_digest_stable():
    assert RunConfig().validate().digest() == RunConfig().validate().digest()
    assert RunConfig(j2=9).validate().digest() != RunConfig().validate().digest()


def test_input_expansion(tmp_path):
    for name in ("b.csv", "a.csv", "skip.txt"):
        (tmp_path / name).write_text("")
    cfg = build_config({}, {"inputs": [str(tmp_path), str(tmp_path / "a.csv")]})
    assert [p.rsplit("/", 1)[1] for p in cfg.input_files()] == ["a.csv", "b.csv"]
