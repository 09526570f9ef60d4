import json
from fractions import Fraction

import pytest

from ef1price.cli import main
from ef1price.core import instance_to_json
from ef1price.generators import gen_intro_example, gen_two_agent_tight
from ef1price.oracle import price_of_ef1


def write_json(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def two_tight_file(tmp_path):
    return write_json(tmp_path / "two.json", instance_to_json(gen_two_agent_tight()))


@pytest.fixture
def intro_file(tmp_path):
    return write_json(tmp_path / "intro.json", instance_to_json(gen_intro_example()))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_intro_counterexample_exits_one(self, capsys, tmp_path, intro_file):
        alloc = write_json(tmp_path / "a.json", {"bundles": [[0, 1], [2]]})
        code, out, _ = run(capsys, "check", intro_file, alloc)
        assert code == 1
        payload = json.loads(out)
        assert payload["holds"] is False
        assert payload["violations"] == [[1, 0]]

    def test_ef1_split_exits_zero(self, capsys, tmp_path, two_tight_file):
        alloc = write_json(tmp_path / "a.json", {"bundles": [[0, 1], [2, 3]]})
        code, out, _ = run(capsys, "check", two_tight_file, alloc)
        assert code == 0
        payload = json.loads(out)
        assert payload["holds"] is True
        assert payload["social_welfare"] == "11/2"

    def test_malformed_json_exits_two(self, capsys, tmp_path, two_tight_file):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, "check", two_tight_file, str(bad))
        assert code == 2
        assert "error" in err

    def test_wrong_bundle_count_exits_two(self, capsys, tmp_path, two_tight_file):
        alloc = write_json(tmp_path / "a.json", {"bundles": [[0], [1], [2]]})
        code, _, _ = run(capsys, "check", two_tight_file, alloc)
        assert code == 2


class TestSolve:
    def test_m2rr_two_tight(self, capsys, two_tight_file):
        code, out, _ = run(capsys, "solve", two_tight_file, "--alg", "m2rr")
        assert code == 0
        payload = json.loads(out)
        assert payload["bundles"] == [[0, 1], [3, 2]]
        assert payload["social_welfare"] == "11/2"
        assert payload["optimal_social_welfare"] == "6"
        assert payload["ratio_to_optimal"] == "12/11"

    def test_opt_ef1_three_tight(self, capsys, tmp_path):
        from ef1price.generators import gen_three_agent_tight

        path = write_json(tmp_path / "three.json", instance_to_json(gen_three_agent_tight()))
        code, out, _ = run(capsys, "solve", path, "--alg", "opt-ef1")
        assert code == 0
        assert json.loads(out)["social_welfare"] == "10"

    def test_gate_failure_exits_two(self, capsys, intro_file):
        code, _, err = run(capsys, "solve", intro_file, "--alg", "m2rr")
        assert code == 2
        assert "NotTernary" in err  # the failed gate is named
        assert "2 distinct positive value levels" in err

    def test_trace_flag_round_trips(self, capsys, tmp_path, two_tight_file):
        code, out, _ = run(capsys, "solve", two_tight_file, "--alg", "m2rr", "--trace")
        assert code == 0
        payload = json.loads(out)
        trace_file = write_json(tmp_path / "trace.json", payload["trace"])
        code, out, _ = run(capsys, "trace-replay", trace_file, two_tight_file)
        assert code == 0
        assert json.loads(out)["bundles"] == [[0, 1], [3, 2]]


class TestGen:
    def test_sqrt_n_to_file(self, capsys, tmp_path):
        out_path = tmp_path / "inst.json"
        code, out, _ = run(
            capsys, "gen", "--family", "sqrt-n", "--n", "4", "--b", "1", "--out", str(out_path)
        )
        assert code == 0
        data = json.loads(out_path.read_text())
        assert data["values"] == [
            ["2", "2", "0", "0"],
            ["0", "0", "2", "2"],
            ["1", "1", "1", "1"],
            ["1", "1", "1", "1"],
        ]
        summary = json.loads(out)
        assert summary["normalized"] is True
        assert summary["ternary"] == {"a": "2", "b": "1"}

    def test_two_tight_to_stdout(self, capsys):
        code, out, err = run(capsys, "gen", "--family", "two-tight")
        assert code == 0
        data = json.loads(out)
        assert data["values"][0][0] == "3/2"
        assert json.loads(err)["ternary"] == {"a": "3/2", "b": "1"}

    def test_imperfect_square_exits_two(self, capsys):
        code, _, _ = run(capsys, "gen", "--family", "sqrt-n", "--n", "6")
        assert code == 2

    def test_intro_summary_not_ternary(self, capsys, tmp_path):
        out_path = tmp_path / "intro.json"
        code, out, _ = run(capsys, "gen", "--family", "intro", "--out", str(out_path))
        assert code == 0
        assert json.loads(out)["ternary"] is None


class TestPrice:
    def test_two_tight(self, capsys, two_tight_file):
        code, out, _ = run(capsys, "price", two_tight_file)
        assert code == 0
        payload = json.loads(out)
        assert payload["price"] == "12/11"
        assert payload["opt"] == "6"
        assert payload["ef1_opt"] == "11/2"
        assert payload["price_decimal"] == "1.090909"

    def test_round_trip_matches_library(self, capsys, tmp_path):
        out_path = tmp_path / "gen.json"
        run(capsys, "gen", "--family", "three-tight", "--out", str(out_path))
        code, out, _ = run(capsys, "price", str(out_path))
        assert code == 0
        report = price_of_ef1(__import__("ef1price").core.instance_from_json(
            json.loads(out_path.read_text())
        ))
        payload = json.loads(out)
        assert Fraction(payload["price"]) == report.price == Fraction(6, 5)

    def test_budget_exit_three(self, capsys, tmp_path):
        big = write_json(
            tmp_path / "big.json",
            {"values": [[1] * 20, [1] * 20, [1] * 20]},  # 3^20 >> default budget
        )
        code, _, err = run(capsys, "price", big)
        assert code == 3
        assert "exceeds the budget" in err

    def test_env_budget_override(self, capsys, monkeypatch, two_tight_file):
        monkeypatch.setenv("EF1_BUDGET", "10")  # 2^4 = 16 > 10
        code, _, _ = run(capsys, "price", two_tight_file)
        assert code == 3
        monkeypatch.setenv("EF1_BUDGET", "junk")
        code, _, _ = run(capsys, "price", two_tight_file)
        assert code == 2


class TestSearch:
    def test_tiny_sweep_summary(self, capsys, tmp_path):
        out_csv = tmp_path / "sweep.csv"
        code, out, _ = run(
            capsys,
            "search", "--n", "2", "--m-max", "2", "--levels", "2:1", "--out", str(out_csv),
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["worst_price"] == "1"
        assert payload["instances_checked"] == 4
        assert out_csv.exists()

    def test_rerun_identical_bytes(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(capsys, "search", "--n", "2", "--m-max", "3", "--levels", "3:2", "--out", str(a))
        run(capsys, "search", "--n", "2", "--m-max", "3", "--levels", "3:2", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_bad_levels_exit_two(self, capsys, tmp_path):
        code, _, _ = run(
            capsys,
            "search", "--n", "2", "--m-max", "3", "--levels", "nope", "--out", str(tmp_path / "x.csv"),
        )
        assert code == 2


class TestTraceReplay:
    def test_empty_trace(self, capsys, tmp_path, two_tight_file):
        trace = write_json(tmp_path / "t.json", [])
        code, out, _ = run(capsys, "trace-replay", trace, two_tight_file)
        assert code == 0
        assert json.loads(out)["bundles"] == [[], []]

    def test_out_of_range_item_exits_two(self, capsys, tmp_path, two_tight_file):
        trace = write_json(
            tmp_path / "t.json",
            [{"round": 1, "events": [{"agent": 0, "item": 9}]}],
        )
        code, _, _ = run(capsys, "trace-replay", trace, two_tight_file)
        assert code == 2
