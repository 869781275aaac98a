import pytest

from diabrisk.config import ExperimentConfig, config_to_dict, parse_config
from diabrisk.errors import ConfigError


class TestDefaults:
    def test_empty_config_defaults(self):
        cfg = parse_config()
        assert cfg.seed == 42
        assert cfg.test_fraction == 0.2
        assert cfg.cv_folds == 5
        assert cfg.rfe_n_select == 10
        assert cfg.lasso_lambda == 0.01
        assert cfg.split_first is False
        assert cfg.health_features == (
            "HighBP", "HighChol", "CholCheck", "Smoker",
            "HvyAlcoholConsump", "BMI",
        )

    def test_seed_propagates_to_smote_and_forest(self):
        cfg = parse_config(overrides={"seed": "7"})
        assert cfg.smote.seed == 7
        assert cfg.forest.seed == 7

    def test_output_dir_env(self, monkeypatch):
        monkeypatch.setenv("DIABRISK_OUT", "/tmp/elsewhere")
        assert parse_config().output_dir == "/tmp/elsewhere"
        monkeypatch.delenv("DIABRISK_OUT")
        assert parse_config().output_dir == "out"


class TestFileParsing:
    def test_file_values_and_comments(self, tmp_path):
        path = tmp_path / "exp.conf"
        path.write_text(
            "# experiment settings\n"
            "seed = 11\n"
            "logreg.c = 0.5   # inline comment\n"
            "tree.max_depth = none\n"
            "grid.logistic.c = 0.1, 1, 10\n"
            "smote.k_neighbors = 3\n"
            "\n"
            "split_first = true\n"
        )
        cfg = parse_config(str(path))
        assert cfg.seed == 11
        assert cfg.logreg.C == 0.5
        assert cfg.tree.max_depth is None
        assert cfg.logistic_grid == {"C": [0.1, 1.0, 10.0]}
        assert cfg.smote.k_neighbors == 3
        assert cfg.smote.seed == 11
        assert cfg.split_first is True

    def test_override_beats_file(self, tmp_path):
        path = tmp_path / "exp.conf"
        path.write_text("seed = 11\n")
        cfg = parse_config(str(path), overrides={"seed": "99"})
        assert cfg.seed == 99

    def test_unknown_key_named_in_error(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(overrides={"smotee": "5"})
        assert "smotee" in str(exc.value)

    def test_bad_number(self):
        with pytest.raises(ConfigError):
            parse_config(overrides={"seed": "forty-two"})

    def test_bad_boolean(self):
        with pytest.raises(ConfigError):
            parse_config(overrides={"split_first": "maybe"})

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            parse_config("/nonexistent/exp.conf")

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "exp.conf"
        path.write_text("seed 11\n")
        with pytest.raises(ConfigError):
            parse_config(str(path))

    def test_grid_tree_depth_list_with_none(self):
        cfg = parse_config(overrides={"grid.tree.max_depth": "none, 3, 5"})
        assert cfg.tree_grid == {"max_depth": [None, 3, 5]}


class TestValidation:
    def test_unknown_health_feature(self):
        with pytest.raises(ConfigError):
            parse_config(overrides={"health_features": "HighBP, NotAColumn"})

    def test_test_fraction_bounds(self):
        with pytest.raises(ConfigError):
            parse_config(overrides={"test_fraction": "0"})
        with pytest.raises(ConfigError):
            parse_config(overrides={"test_fraction": "1.0"})

    def test_bad_model_param_wrapped(self):
        with pytest.raises(ConfigError):
            parse_config(overrides={"logreg.penalty": "elastic"})


class TestEcho:
    def test_dict_round_trips_key_fields(self):
        cfg = parse_config(overrides={"seed": "5", "logreg.c": "2.0"})
        d = config_to_dict(cfg)
        assert d["seed"] == 5
        assert d["logreg"]["C"] == 2.0
        assert d["smote"]["seed"] == 5
        assert d["health_features"][0] == "HighBP"

    def test_resolved_is_idempotent(self):
        cfg = parse_config()
        assert cfg.resolved() == cfg

    def test_direct_construction_resolves(self):
        cfg = ExperimentConfig(seed=3).resolved()
        assert cfg.smote.seed == 3
        assert cfg.output_dir is not None
