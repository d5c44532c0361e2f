from prymtools.config import Config, PrymSettings, load_settings


def write_ini(tmp_path, body):
    path = tmp_path / "config.ini"
    path.write_text("[prym]\n" + body)
    return path


def test_ini_values(tmp_path):
    settings = load_settings(write_ini(tmp_path, "seed = 7\ncases = 3\n"))
    assert settings.seed == 7
    assert settings.cases == 3
    assert settings.workers == PrymSettings.model_fields["workers"].default


def test_environment_beats_ini(tmp_path, monkeypatch):
    monkeypatch.setenv("PRYM_SEED", "11")
    assert load_settings(write_ini(tmp_path, "seed = 7\n")).seed == 11


def test_overrides_beat_everything(tmp_path, monkeypatch):
    monkeypatch.setenv("PRYM_SEED", "11")
    settings = load_settings(write_ini(tmp_path, "seed = 7\n"), seed=5, cases=None)
    assert settings.seed == 5
    assert settings.cases == 50


def test_missing_file_gives_defaults(tmp_path):
    assert Config(tmp_path / "missing.ini").values() == {}
    assert load_settings(tmp_path / "missing.ini").seed == 0


def test_get_value(tmp_path):
    config = Config(write_ini(tmp_path, "log_level = DEBUG\n"))
    assert config.get_value("log_level") == "DEBUG"
    assert config.get_value("workers", "2") == "2"
