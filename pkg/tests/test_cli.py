import json
import subprocess
import sys

import pytest

from runlattice.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEnumerate:
    def test_rank_universe_listing(self, capsys):
        code, out, _ = run_cli(capsys, "enumerate", "--mode", "rank", "--c", "2", "--n", "3")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "# mode=rank c=2 n=3 count=27"
        assert len(lines) == 28
        assert lines[1] == "0,0,0" and lines[-1] == "2,2,2"

    def test_set_universe_listing(self, capsys):
        code, out, _ = run_cli(capsys, "enumerate", "--mode", "set", "--c", "2", "--n", "2")
        assert code == 0
        assert out.splitlines()[1:] == ["0,0", "1,0", "1,1", "2,0", "2,1", "2,2"]

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "enumerate", "--mode", "set", "--c", "2",
                               "--n", "2", "--format", "json")
        payload = json.loads(out)
        assert code == 0
        assert payload["count"] == 6
        assert payload["runs"][0] == "0,0"

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(capsys, "enumerate", "--mode", "rank", "--c", "1",
                               "--n", "2", "--format", "csv")
        assert code == 0
        assert out.splitlines() == ["run", '"0,0"', '"0,1"', '"1,0"', '"1,1"']

    def test_invalid_degree_count_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "enumerate", "--mode", "rank", "--c", "0", "--n", "3")
        assert code == 2
        assert "c >= 1" in err

    def test_cap_exceeded_is_structure_error(self, capsys):
        code, _, err = run_cli(capsys, "enumerate", "--mode", "rank", "--c", "3",
                               "--n", "5", "--cap", "1000")
        assert code == 3
        assert "cap" in err

    def test_cap_above_hard_limit_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "enumerate", "--mode", "rank", "--c", "2",
                               "--n", "3", "--cap", "2000000")
        assert code == 2
        assert "hard limit" in err


class TestHasse:
    def test_set_lattice_with_highlighting(self, capsys):
        code, out, err = run_cli(capsys, "hasse", "--ordering", "repl-set", "--c", "2",
                                 "--n", "5", "--highlight-irreducibles")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "digraph hasse {"
        assert sum(1 for l in lines if l.endswith('";') or l.endswith("];")
                   and "->" not in l) >= 21
        assert out.count("peripheries=2") == 10
        assert err == ""

    def test_chain_is_path(self, capsys):
        code, out, _ = run_cli(capsys, "hasse", "--ordering", "proj-repl-rank",
                               "--c", "2", "--n", "3")
        assert code == 0
        assert out.count(" -> ") == 26

    def test_json_export(self, capsys):
        code, out, _ = run_cli(capsys, "hasse", "--ordering", "repl-set", "--c", "2",
                               "--n", "2", "--format", "json")
        payload = json.loads(out)
        assert code == 0
        assert payload["ordering"] == "repl-set"
        assert len(payload["covers"]) == 6
        assert payload["irreducibles"] == [1, 2, 3, 5]

    def test_swap_ordering_refused_with_witness(self, capsys):
        # For three relevance degrees the swap-compatible order is not a
        # lattice; the command surfaces the witness pair instead of a diagram.
        code, out, err = run_cli(capsys, "hasse", "--ordering", "repl-swap-rank",
                                 "--c", "2", "--n", "3")
        assert code == 3
        assert out == ""
        assert "not a lattice" in err and "bound" in err

    def test_swap_ordering_binary_case_works(self, capsys):
        code, out, _ = run_cli(capsys, "hasse", "--ordering", "repl-swap-rank",
                               "--c", "1", "--n", "3")
        assert code == 0
        assert out.startswith("digraph hasse {")

    def test_deterministic_output(self, capsys):
        args = ("hasse", "--ordering", "repl-set", "--c", "2", "--n", "4",
                "--highlight-irreducibles")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second


class TestCheck:
    def test_poset_passes(self, capsys):
        code, out, _ = run_cli(capsys, "check", "poset", "--ordering", "repl-swap-rank",
                               "--c", "2", "--n", "3")
        assert code == 0
        assert out.strip().endswith("PASS")

    def test_total_passes_on_chain(self, capsys):
        code, out, _ = run_cli(capsys, "check", "total", "--ordering", "proj-repl-set",
                               "--c", "2", "--n", "5")
        assert code == 0

    def test_total_fails_with_witness(self, capsys):
        code, out, _ = run_cli(capsys, "check", "total", "--ordering", "repl-set",
                               "--c", "2", "--n", "2")
        assert code == 1
        assert "1,1" in out and "2,0" in out

    def test_distributive_passes(self, capsys):
        code, out, _ = run_cli(capsys, "check", "distributive", "--ordering",
                               "repl-rank", "--c", "2", "--n", "3")
        assert code == 0
        assert "PASS" in out

    def test_distributive_on_swap_ordering_is_structure_error(self, capsys):
        code, _, err = run_cli(capsys, "check", "distributive", "--ordering",
                               "repl-swap-rank", "--c", "2", "--n", "3")
        assert code == 3
        assert "not a lattice" in err

    def test_valuation_passes(self, capsys):
        code, out, _ = run_cli(capsys, "check", "valuation", "--ordering", "repl-set",
                               "--c", "2", "--n", "5", "--metric", "gp")
        assert code == 0
        assert "PASS" in out

    def test_valuation_needs_metric(self, capsys):
        code, _, err = run_cli(capsys, "check", "valuation", "--ordering", "repl-set",
                               "--c", "2", "--n", "5")
        assert code == 2
        assert "--metric" in err


class TestDecompose:
    def test_rank_example(self, capsys):
        code, out, _ = run_cli(capsys, "decompose", "--ordering", "repl-rank",
                               "--c", "2", "--n", "3", "2,1,1")
        assert code == 0
        assert out.strip() == "0,0,1 ∨ 0,1,0 ∨ 2,0,0"

    def test_irreducible_maps_to_itself(self, capsys):
        code, out, _ = run_cli(capsys, "decompose", "--ordering", "repl-rank",
                               "--c", "2", "--n", "3", "0,2,0")
        assert code == 0
        assert out.strip() == "0,2,0"

    def test_bottom_is_property_failure(self, capsys):
        code, _, err = run_cli(capsys, "decompose", "--ordering", "repl-rank",
                               "--c", "2", "--n", "3", "0,0,0")
        assert code == 1
        assert "bottom" in err

    def test_swap_ordering_is_structure_error(self, capsys):
        code, _, err = run_cli(capsys, "decompose", "--ordering", "repl-swap-rank",
                               "--c", "2", "--n", "3", "2,1,1")
        assert code == 3

    def test_length_mismatch_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "decompose", "--ordering", "repl-rank",
                               "--c", "2", "--n", "3", "2,1")
        assert code == 2
        assert "--n" in err


class TestEval:
    def test_gp_set_based(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--metric", "gp", "2,1,0,0,0",
                               "--mode", "set", "--c", "2", "--n", "5")
        assert code == 0
        assert out.strip() == "0.3"

    def test_gp_zero(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--metric", "gp", "0,0,0",
                               "--mode", "rank", "--c", "2", "--n", "3")
        assert code == 0
        assert out.strip() == "0"

    def test_gr_with_recall_base(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--metric", "gr", "--rb", "7",
                               "2,1,0,0,0", "--mode", "set", "--c", "2", "--n", "5")
        assert code == 0
        assert float(out) == pytest.approx(3 / 14)

    def test_grbp_requires_rank_mode(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--metric", "grbp", "--p", "0.8",
                               "2,1,0", "--mode", "set", "--c", "2", "--n", "3")
        assert code == 2

    def test_grbp_requires_p(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--metric", "grbp", "2,1,0",
                               "--mode", "rank", "--c", "2", "--n", "3")
        assert code == 2
        assert "--p" in err

    def test_degree_out_of_range_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "eval", "--metric", "gp", "3,0",
                             "--mode", "set", "--c", "2", "--n", "2")
        assert code == 2


class TestReconstructCommand:
    def test_rank_example(self, capsys):
        code, out, _ = run_cli(capsys, "reconstruct", "--metric", "gp", "--ordering",
                               "repl-rank", "--c", "2", "--n", "3", "2,1,1")
        assert code == 0
        value_line, diff_line = out.splitlines()
        assert float(value_line) == pytest.approx(2 / 3, abs=1e-9)
        assert float(diff_line.split()[-1]) < 1e-9

    def test_needs_distributive_ordering(self, capsys):
        code, _, _ = run_cli(capsys, "reconstruct", "--metric", "gp", "--ordering",
                             "repl-swap-rank", "--c", "2", "--n", "3", "2,1,1")
        assert code == 3


class TestTable:
    def test_csv_output(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--metric", "gp", "--mode", "set",
                               "--c", "2", "--n", "5")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "run,value"
        assert len(lines) == 22
        assert lines[1] == '"0,0,0,0,0",0'

    def test_json_output(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--metric", "dcg", "--b", "2",
                               "--mode", "rank", "--c", "1", "--n", "2",
                               "--format", "json")
        payload = json.loads(out)
        assert code == 0
        assert payload["metric"] == "dcg(b=2)"
        assert len(payload["rows"]) == 4

    def test_lattice_backed_table_matches_plain(self, capsys):
        _, plain, _ = run_cli(capsys, "table", "--metric", "gp", "--mode", "set",
                              "--c", "2", "--n", "4")
        _, backed, _ = run_cli(capsys, "table", "--metric", "gp", "--ordering",
                               "repl-set", "--c", "2", "--n", "4")
        assert plain == backed

    def test_deterministic(self, capsys):
        args = ("table", "--metric", "grbp", "--p", "0.8", "--mode", "rank",
                "--c", "2", "--n", "3")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second


class TestCustomMetric:
    @pytest.fixture
    def custom_file(self, tmp_path):
        payload = {"1,0,0": 0.4, "0,1,0": 0.4, "0,0,1": 0.4,
                   "2,0,0": 1.0, "0,2,0": 1.0, "0,0,2": 1.0, "_bottom": 0.0}
        path = tmp_path / "custom.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    def test_eval(self, capsys, custom_file):
        code, out, _ = run_cli(capsys, "eval", "--metric", "custom", "--custom",
                               custom_file, "--ordering", "repl-rank",
                               "--c", "2", "--n", "3", "1,1,0")
        assert code == 0
        assert float(out) == pytest.approx(0.8)

    def test_table(self, capsys, custom_file):
        code, out, _ = run_cli(capsys, "table", "--metric", "custom", "--custom",
                               custom_file, "--ordering", "repl-rank",
                               "--c", "2", "--n", "3")
        assert code == 0
        rows = dict(line.rsplit(",", 1) for line in out.splitlines()[1:])
        assert float(rows['"2,0,0"']) == pytest.approx(1.0)
        assert float(rows['"1,1,0"']) == pytest.approx(0.8)

    def test_valuation_check(self, capsys, custom_file):
        code, out, _ = run_cli(capsys, "check", "valuation", "--metric", "custom",
                               "--custom", custom_file, "--ordering", "repl-rank",
                               "--c", "2", "--n", "3")
        assert code == 0
        assert "PASS" in out

    def test_missing_irreducible_is_usage_error(self, capsys, tmp_path):
        path = tmp_path / "partial.json"
        path.write_text(json.dumps({"1,0,0": 0.4, "_bottom": 0.0}), encoding="utf-8")
        code, _, err = run_cli(capsys, "eval", "--metric", "custom", "--custom",
                               str(path), "--ordering", "repl-rank",
                               "--c", "2", "--n", "3", "1,1,0")
        assert code == 2
        assert "missing" in err

    def test_needs_ordering(self, capsys, custom_file):
        code, _, err = run_cli(capsys, "eval", "--metric", "custom", "--custom",
                               custom_file, "--mode", "rank",
                               "--c", "2", "--n", "3", "1,1,0")
        assert code == 2
        assert "--ordering" in err

    def test_missing_bottom_entry(self, capsys, tmp_path):
        path = tmp_path / "nobottom.json"
        path.write_text(json.dumps({"1,0,0": 0.4}), encoding="utf-8")
        code, _, err = run_cli(capsys, "eval", "--metric", "custom", "--custom",
                               str(path), "--ordering", "repl-rank",
                               "--c", "2", "--n", "3", "1,1,0")
        assert code == 2
        assert "_bottom" in err


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "runlattice", "eval", "--metric", "gp", "2,1,0,0,0",
         "--mode", "set", "--c", "2", "--n", "5"],
        capture_output=True, text=True, check=False,
    )
    assert result.returncode == 0
    assert result.stdout.strip() == "0.3"
