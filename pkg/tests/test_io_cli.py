import json
from fractions import Fraction

import pytest

from beliefcheck import (
    Dist,
    FormatError,
    Observation,
    WeightedPosteriors,
    construct_rationalization,
    load_model,
    load_observation,
    save_model,
    save_observation,
    verify_model,
)
from beliefcheck.cli import main

S2 = ("H", "L")


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


WORKED_RAW = {
    "mode": "rational",
    "states": ["H", "L"],
    "prior": {"H": "1/2", "L": "1/2"},
    "posteriors": [
        {"weight": "1/4", "belief": {"H": "0.8", "L": "0.2"}},
        {"weight": "3/4", "belief": {"H": "1", "L": "0"}},
    ],
}


class TestObservationFiles:
    def test_decimal_strings_parse_exactly_in_rational_mode(self, tmp_path):
        obs, mode = load_observation(write_json(tmp_path / "o.json", WORKED_RAW))
        assert mode == "rational"
        assert obs.posteriors.beliefs[0]["H"] == Fraction(4, 5)

    def test_round_trip(self, tmp_path, worked_example):
        path = tmp_path / "o.json"
        save_observation(worked_example, path)
        loaded, mode = load_observation(path)
        assert loaded == worked_example
        assert mode == "rational"

    def test_float_mode(self, tmp_path):
        raw = dict(WORKED_RAW, mode="float")
        obs, mode = load_observation(write_json(tmp_path / "o.json", raw))
        assert mode == "float"
        assert obs.prior["H"] == pytest.approx(0.5)
        assert not obs.is_exact

    def test_bad_sum_names_the_field(self, tmp_path):
        raw = dict(WORKED_RAW, prior={"H": "1/2", "L": "2/5"})
        with pytest.raises(FormatError) as err:
            load_observation(write_json(tmp_path / "o.json", raw))
        assert "prior" in str(err.value)

    def test_unknown_state_label(self, tmp_path):
        raw = dict(WORKED_RAW, prior={"H": "1/2", "X": "1/2"})
        with pytest.raises(FormatError) as err:
            load_observation(write_json(tmp_path / "o.json", raw))
        assert "X" in str(err.value)

    def test_bad_number_string(self, tmp_path):
        raw = dict(WORKED_RAW, prior={"H": "one half", "L": "1/2"})
        with pytest.raises(FormatError):
            load_observation(write_json(tmp_path / "o.json", raw))

    def test_invalid_json_names_the_line(self, tmp_path):
        path = tmp_path / "o.json"
        path.write_text("{\n  broken\n}")
        with pytest.raises(FormatError) as err:
            load_observation(path)
        assert "line 2" in str(err.value)


class TestModelFiles:
    def test_round_trip(self, tmp_path, worked_example):
        model = construct_rationalization(worked_example)
        path = tmp_path / "m.json"
        save_model(model, path)
        loaded, mode = load_model(path)
        assert mode == "rational"
        assert loaded == model

    def test_partition_mismatch_rejected(self, tmp_path, worked_example):
        model = construct_rationalization(worked_example)
        path = tmp_path / "m.json"
        save_model(model, path)
        data = json.loads(path.read_text())
        data["partition"]["nu0+"], data["partition"]["nu1+"] = (
            data["partition"]["nu1+"],
            data["partition"]["nu0+"],
        )
        path.write_text(json.dumps(data))
        with pytest.raises(FormatError):
            load_model(path)


class TestCliExitCodes:
    def test_check_passes(self, tmp_path):
        path = write_json(tmp_path / "o.json", WORKED_RAW)
        assert main(["check", path]) == 0

    def test_check_fails_on_violation(self, tmp_path):
        raw = {
            "states": ["H", "L"],
            "prior": {"H": "1", "L": "0"},
            "posteriors": [
                {"weight": "1", "belief": {"H": "1/2", "L": "1/2"}}
            ],
        }
        assert main(["check", write_json(tmp_path / "o.json", raw)]) == 2

    def test_check_malformed_input(self, tmp_path):
        raw = dict(WORKED_RAW, prior={"H": "1/2", "L": "2/5"})
        assert main(["check", write_json(tmp_path / "o.json", raw)]) == 1

    def test_missing_file(self):
        assert main(["check", "/no/such/file.json"]) == 1

    def test_usage_error_is_exit_one(self):
        assert main(["check"]) == 1

    def test_rationalize_then_verify(self, tmp_path):
        obs = write_json(tmp_path / "o.json", WORKED_RAW)
        model = str(tmp_path / "m.json")
        assert main(["rationalize", obs, "--out", model]) == 0
        assert main(["verify", model, obs]) == 0

    def test_rationalize_refuses_violation(self, tmp_path):
        raw = {
            "states": ["H", "L"],
            "prior": {"H": "1", "L": "0"},
            "posteriors": [
                {"weight": "1", "belief": {"H": "1/2", "L": "1/2"}}
            ],
        }
        assert main(["rationalize", write_json(tmp_path / "o.json", raw)]) == 2

    def test_rationalize_rejects_partial_lambda(self, tmp_path):
        obs = write_json(tmp_path / "o.json", WORKED_RAW)
        lam = write_json(tmp_path / "lam.json", {"nu0": "1", "nu1": "0"})
        assert main(["rationalize", obs, "--lambda", lam]) == 2

    def test_rationalize_prints_worked_tables(self, tmp_path, capsys):
        obs = write_json(tmp_path / "o.json", WORKED_RAW)
        assert main(["rationalize", obs]) == 0
        out = capsys.readouterr().out
        mu_line_h = next(
            line for line in out.splitlines() if line.startswith("H")
        )
        assert mu_line_h.split()[1:] == ["1/4", "1/4", "0", "0"]
        mu_line_l = next(
            line for line in out.splitlines() if line.startswith("L")
        )
        assert mu_line_l.split()[1:] == ["1/16", "0", "3/16", "1/4"]

    def test_known_omega_cites_overlap(self, tmp_path, capsys):
        obs = write_json(tmp_path / "o.json", WORKED_RAW)
        assert main(["known-omega", obs, "--brute-force", "--json"]) == 2
        payload = json.loads(capsys.readouterr().out)
        assert payload["overlapping_pairs"] == [
            {"i": 0, "j": 1, "shared": ["H"]}
        ]
        assert payload["brute_force"] is False
        assert payload["oracle_agrees"] is True

    def test_martingale_objective_fails(self, tmp_path, capsys):
        obs = write_json(tmp_path / "o.json", WORKED_RAW)
        assert main(["martingale", obs, "--json"]) == 2
        payload = json.loads(capsys.readouterr().out)
        assert payload["holds"] is False
        assert payload["mean_posterior"] == {"H": "19/20", "L": "1/20"}

    def test_martingale_subjective_holds(self, tmp_path):
        obs = write_json(tmp_path / "o.json", WORKED_RAW)
        model = str(tmp_path / "m.json")
        assert main(["rationalize", obs, "--out", model]) == 0
        assert main(
            ["martingale", obs, "--weights", "subjective-from", "--model", model]
        ) == 0

    def test_simulate(self, tmp_path, capsys):
        obs = write_json(tmp_path / "o.json", WORKED_RAW)
        model = str(tmp_path / "m.json")
        assert main(["rationalize", obs, "--out", model]) == 0
        capsys.readouterr()  # drop the rationalize tables
        assert main(
            [
                "simulate", model,
                "--n", "20000",
                "--seed", "3",
                "--threshold", "0.05",
                "--json",
            ]
        ) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["within_threshold"] is True

    def test_json_output_is_stable(self, tmp_path, capsys):
        obs = write_json(tmp_path / "o.json", WORKED_RAW)
        assert main(["check", obs, "--json"]) == 0
        first = capsys.readouterr().out
        assert main(["check", obs, "--json"]) == 0
        assert capsys.readouterr().out == first
        payload = json.loads(first)
        assert payload["pass"] is True
        assert payload["posteriors"][0]["epsilon"] == "5/8"
        assert payload["posteriors"][1]["epsilon"] == "1/2"
