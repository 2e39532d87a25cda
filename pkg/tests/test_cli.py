import json

import pytest

from nilwalk.cli import EXIT_RESOURCE, EXIT_SCHEMA, EXIT_UNSUPPORTED, main

HEISENBERG_Z5 = {"backend": "unitriangular", "d": 3, "generators": ["E12", "E23", "E13^5"]}
U4_WITH_CORNER = {"backend": "unitriangular", "d": 4, "generators": ["E12", "E23", "E34", "E14"]}
Z1 = {"backend": "zd", "d": 1, "generators": [[1]]}
Z2 = {"backend": "zd", "generators": [[1, 0], [0, 1]]}
Z3 = {"backend": "zd", "generators": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}


@pytest.fixture
def run(tmp_path, capsys):
    def run(command, config, *flags):
        path = tmp_path / "{}.json".format(command)
        path.write_text(json.dumps(config))
        code = main(["--config", str(path), *flags, command])
        out = capsys.readouterr().out
        return code, json.loads(out) if out else None
    return run


def test_analyze_with_explicit_weights(run):
    code, document = run("analyze", {"weights_from": "weights", "group": HEISENBERG_Z5, "weights": ["1", "3/2", "3"]})
    assert code == 0
    assert document["command"] == "analyze"
    assert document["result"]["D"] == "11/2"
    assert document["result"]["ranks"] == [1, 1, 0, 0, 1]
    assert document["config"]["weights_from"] == "weights"


def test_analyze_with_exponents(run):
    code, document = run("analyze", {"group": U4_WITH_CORNER, "a": ["1", "2", "5", "1/3"]})
    assert code == 0
    result = document["result"]
    assert (result["D1"], result["D2"]) == ("15/2", "3/2")
    assert result["regime"] == "mixed/unproven"
    assert document["truncated"] is False


def test_missing_group(run):
    code, document = run("analyze", {"a": ["1"]})
    assert code == EXIT_SCHEMA
    assert document is None


def test_unknown_backend(run):
    code, _ = run("analyze", {"group": {"backend": "lamplighter"}, "a": ["1"]})
    assert code == EXIT_UNSUPPORTED


def test_config_for_another_command(run):
    code, _ = run("analyze", {"command": "simulate", "group": Z1, "a": ["1"]})
    assert code == EXIT_SCHEMA


def test_unknown_setting(run):
    code, _ = run("volume", {"group": Z2, "radius": 3})
    assert code == EXIT_SCHEMA


def test_oracle_witt(run):
    code, document = run("oracle", {"table": "witt", "k": 2, "l": 3, "a": ["1", "1"]})
    assert code == 0
    assert document["result"]["witt_numbers"] == [2, 1, 2]
    assert document["result"]["D"] == "10"


def test_oracle_box_count(run):
    code, document = run("oracle", {"table": "box_count", "group": Z2, "r": 3})
    assert code == 0
    assert document["result"]["count"] == 49


def test_oracle_convolution(run):
    code, document = run("oracle", {"table": "convolution", "group": Z1, "a": ["inf"], "n": 2})
    assert code == 0
    assert document["result"]["collision_value"] == "19/81"


def test_oracle_smith(run):
    code, document = run("oracle", {"table": "smith", "group": {"backend": "zd", "generators": [[2, 0], [0, 1]]}})
    assert code == 0
    assert document["result"]["levels"][0]["invariant_factors"] == [1, 2]


def test_norm(run):
    code, document = run("norm", {"group": Z3, "weights": ["1", "2", "3"], "element": [8, 9, 27]})
    assert code == 0
    assert document["result"]["norm"]["r"] == 8.0
    assert document["result"]["norm"]["exact"] == "8"


def test_norm_outside_the_subgroup(run):
    group = {"backend": "zd", "generators": [[2, 0], [0, 1]]}
    code, _ = run("norm", {"group": group, "element": [1, 0]})
    assert code == EXIT_SCHEMA


def test_volume_with_box_counts(run):
    code, document = run("volume", {"group": Z2, "radii": [3], "box_count": True})
    assert code == 0
    row = document["result"]["rows"][0]
    assert row["box_count"] == 49
    assert row["box_lower_bound"] == 49.0


def test_simulate_is_reproducible(run, tmp_path):
    config = {"measure": "stable", "group": Z1, "a": ["inf"], "n_grid": [1, 2, 3, 4], "samples": 2000}
    outputs = []
    for name in ("first", "second"):
        out = tmp_path / name
        code, document = run("simulate", config, "--seed", "17", "--out", str(out))
        assert code == 0
        assert document["config"]["seed"] == 17
        assert len(document["result"]["rows"]) == 4
        assert "power" in document["result"]["fits"]
        assert json.loads((out / "resolved_config.json").read_text())["command"] == "simulate"
        outputs.append((out / "results.csv").read_bytes())
    assert outputs[0] == outputs[1]


def test_simulate_budget_truncates(run):
    config = {"group": Z1, "a": ["inf"], "n_grid": [1, 2], "samples": 100, "budget_seconds": -1}
    code, document = run("simulate", config)
    assert code == EXIT_RESOURCE
    assert document["truncated"] is True


def test_flags_after_the_subcommand(tmp_path, capsys):
    path = tmp_path / "witt.json"
    path.write_text(json.dumps({"table": "witt", "k": 2, "l": 2}))
    assert main(["oracle", "--config", str(path), "--log-level", "WARNING"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["witt_numbers"] == [2, 1]


def test_malformed_numbers_exit_with_the_schema_code(run):
    code, document = run("analyze", {"group": {"backend": "unitriangular", "d": "x"}, "a": ["1"]})
    assert code == EXIT_SCHEMA
    assert document is None
    code, _ = run("analyze", {"group": {"backend": "unitriangular", "d": 3, "generators": ["E1x"]}, "a": ["1"]})
    assert code == EXIT_SCHEMA


def test_simulate_judges_alpha_two_on_the_power_log_fit(run):
    config = {"group": Z1, "a": ["2"], "n_grid": [4, 8, 16, 32], "samples": 4000}
    code, document = run("simulate", config, "--seed", "3")
    assert code == 0
    result = document["result"]
    assert set(result["fits"]) == {"power", "power-log"}
    assert result["judged_model"] == "power-log"
    assert result["best_model"] in result["fits"]
    assert result["prediction"]["regime"] == "all-core-α=2"


def test_simulate_reports_the_best_model(run):
    config = {"group": Z1, "a": ["1"], "n_grid": [4, 8, 16, 32], "samples": 2000, "models": ["power", "power+log"]}
    code, document = run("simulate", config)
    assert code == 0
    assert document["result"]["judged_model"] == "power"
    assert document["result"]["best_model"] in ("power", "power+log")


def test_radial_walk_refuses_a_heavy_truncation(run):
    group = {"backend": "unitriangular", "d": 3, "generators": ["E12", "E23"]}
    code, _ = run("simulate", {"measure": "radial", "group": group, "gamma": "1", "radius": 4, "n_grid": [2, 4, 6, 8]})
    assert code == EXIT_RESOURCE
