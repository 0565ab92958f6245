import io
import json
from pathlib import Path

import jsonschema
import pytest

from betaexp.cli import main, random_point, resolve_x
from betaexp import make_beta, val_beta

SCHEMA = json.loads(
    (Path(__file__).parent.parent / "schema" / "betaexp-v1.schema.json")
    .read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def check(payload, name):
    jsonschema.validate(payload,
                        {**SCHEMA, "$ref": f"#/$defs/{name}"})


class TestExpand:
    def test_greedy_of_one(self, capsys):
        code, out = run(capsys, "expand", "--beta", "poly:x^2-x-1",
                        "--x", "1", "--mode", "greedy", "-n", "5")
        assert code == 0 and out.strip() == "11000"

    def test_word_value_spelling(self, capsys):
        # val:11 has value exactly 1, matching the greedy digits of 1;
        # val:1 is the word "1" with value 1/beta
        _, out = run(capsys, "expand", "--beta", "poly:x^2-x-1",
                     "--x", "val:11", "-n", "5")
        assert out.strip() == "11000"
        _, out = run(capsys, "expand", "--beta", "poly:x^2-x-1",
                     "--x", "val:1", "-n", "5")
        assert out.strip() == "10000"

    def test_zero(self, capsys):
        _, out = run(capsys, "expand", "--beta", "poly:x^2-x-1",
                     "--x", "0", "-n", "5")
        assert out.strip() == "00000"

    def test_quasi_greedy(self, capsys):
        code, payload = run_json(capsys, "expand", "--beta", "poly:x^2-x-1",
                                 "--mode", "quasi-greedy-one", "-n", "6")
        assert code == 0
        check(payload, "expand")
        assert payload["digits"] == "101010"
        assert payload["exact_form"] == "(10)"

    def test_domain_error_exit_code(self, capsys):
        code = main(["expand", "--beta", "poly:x^2-x-1", "--x", "3", "-n", "5"])
        assert code == 2


class TestNormalizeCommands:
    def test_normalize(self, capsys):
        code, out = run(capsys, "normalize", "--beta", "poly:x^2-x-1",
                        "--word", "011")
        assert code == 0 and out.strip() == "100"

    def test_normalize_json(self, capsys):
        _, payload = run_json(capsys, "normalize", "--beta", "poly:x^2-x-1",
                              "--word", "011", "--out-len", "5")
        check(payload, "normalize")
        assert payload["normalized"] == "10000" and payload["finite"]

    def test_equiv_class(self, capsys):
        code, out = run(capsys, "equiv-class", "--beta", "poly:x^2-x-1",
                        "--word", "100")
        assert code == 0 and out.strip() == "{011,100}"
        _, payload = run_json(capsys, "equiv-class", "--beta", "poly:x^2-x-1",
                              "--word", "100")
        check(payload, "equiv")

    def test_value_exceeds_one_exit(self, capsys):
        assert main(["normalize", "--beta", "poly:x^2-x-1",
                     "--word", "111"]) == 2


class TestUniversalize:
    def test_complete_run(self, capsys):
        code, payload = run_json(
            capsys, "universalize", "--beta", "dec:1.9@8192",
            "--x", "random:42", "-L", "3", "-N", "20000")
        assert code == 0
        check(payload, "universalize")
        assert payload["completed"] and payload["census"]["universal"]
        assert len(payload["report"]) == 14

    def test_budget_exit_code(self, capsys):
        code, payload = run_json(
            capsys, "universalize", "--beta", "poly:x^2-x-1",
            "--x", "random:42", "-L", "4", "-N", "30")
        assert code == 4
        assert not payload["completed"]

    def test_occurrence_not_found_exit(self, capsys):
        # greedy(1/beta) = 10^inf never contains the cover of "0";
        # the budget exceeds the scan horizon so this is a true not-found
        code = main(["universalize", "--beta", "poly:x^2-x-1",
                     "--x", "expr:1/beta", "-L", "2", "-N", "20000"])
        assert code == 3

    def test_finitary(self, capsys):
        code, payload = run_json(
            capsys, "universalize", "--beta", "poly:x^2-x-1",
            "--x", "random:9", "-L", "3", "-N", "30000", "--finitary")
        assert code == 0 and payload["census"]["universal"]


class TestTreeCommands:
    def test_tree_paths(self, capsys):
        code, out = run(capsys, "tree", "--beta", "poly:x^2-x-1",
                        "--x", "expr:1/beta", "--depth", "6")
        assert code == 0
        assert out.split() == ["001111", "010011", "010100", "010101",
                               "010110", "011000", "100000"]

    def test_tree_json_schema(self, capsys):
        _, payload = run_json(capsys, "tree", "--beta", "poly:x^2-x-1",
                              "--x", "expr:beta/2", "--depth", "6")
        check(payload, "tree")

    def test_tree_dot(self, capsys):
        _, out = run(capsys, "tree", "--beta", "poly:x^2-x-1",
                     "--x", "0", "--depth", "3", "--dot")
        assert out.startswith("digraph")

    def test_unique(self, capsys):
        code, payload = run_json(capsys, "unique", "--beta", "1.5",
                                 "--x", "random:7")
        assert code == 0
        check(payload, "unique")
        assert payload["verdict"] == "BRANCHES"

    def test_gamma_full(self, capsys):
        code, payload = run_json(capsys, "gamma", "--beta", "poly:x^2-x-1",
                                 "--x", "expr:1/(2*beta)", "--depth", "4")
        assert code == 0
        check(payload, "gamma")
        assert payload["full"] and len(payload["realized"]) == 16


class TestConstants:
    def test_kl(self, capsys):
        code, out = run(capsys, "kl-constant", "--digits", "10")
        assert code == 0 and out.strip() == "1.787231650"
        _, payload = run_json(capsys, "kl-constant", "--digits", "10")
        check(payload, "kl")

    def test_tm_word(self, capsys):
        code, out = run(capsys, "tm-word", "-n", "3")
        assert code == 0 and out.strip() == "11010011"
        _, payload = run_json(capsys, "tm-word", "--prefix", "8")
        check(payload, "tm")
        assert payload["word"] == "01101001"

    def test_dim_estimate(self, capsys):
        code, payload = run_json(capsys, "dim-estimate", "--beta",
                                 "poly:20*x-39", "-n", "20")
        assert code == 0
        check(payload, "dim")
        assert 0 < payload["estimate"] < 1.05


class TestStatsAndSample:
    def test_sample_deterministic(self, capsys):
        _, first = run(capsys, "sample", "--beta", "1.7", "--seed", "1",
                       "-n", "500")
        _, second = run(capsys, "sample", "--beta", "1.7", "--seed", "1",
                        "-n", "500")
        assert first == second and len(first.strip()) == 500

    def test_sample_jobs_respect_chunking(self, capsys):
        _, solo = run(capsys, "sample", "--beta", "1.7", "--seed", "3",
                      "-n", "70000")
        _, multi = run(capsys, "sample", "--beta", "1.7", "--seed", "3",
                       "-n", "70000", "--jobs", "2")
        assert solo == multi

    def test_sample_json(self, capsys):
        _, payload = run_json(capsys, "sample", "--beta", "1.7", "--seed", "1",
                              "-n", "100")
        check(payload, "sample")

    def test_stats_blocks_from_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("0101010101\n"))
        code, out = run(capsys, "stats", "--blocks", "2")
        assert code == 0
        assert "00,0" in out and "01,5" in out

    def test_stats_complexity(self, capsys):
        _, payload = run_json(capsys, "stats", "--word", "0110100110010110",
                              "--complexity", "3")
        check(payload, "complexity")
        assert payload["counts"]["3"] == 6

    def test_stats_normality(self, capsys):
        _, payload = run_json(capsys, "stats", "--word", "01" * 100,
                              "--normality", "2")
        check(payload, "normality")

    def test_stats_csv(self, capsys):
        code, out = run(capsys, "stats", "--word", "0011", "--blocks", "1",
                        "--format", "csv")
        assert out.splitlines()[0] == "block,count,freq"


class TestConfigFile:
    def test_config_provides_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "run.conf"
        cfg.write_text("beta = poly:x^2-x-1\nformat = json\n")
        code, out = run(capsys, "expand", "--config", str(cfg),
                        "--x", "1", "-n", "5")
        payload = json.loads(out)
        assert code == 0 and payload["digits"] == "11000"

    def test_explicit_flag_wins(self, capsys, tmp_path):
        cfg = tmp_path / "run.conf"
        cfg.write_text("beta = dec:1.5\n")
        _, out = run(capsys, "expand", "--config", str(cfg),
                     "--beta", "poly:x^2-x-1", "--x", "1", "-n", "5")
        assert out.strip() == "11000"


class TestResolveX:
    def test_forms(self, G):
        assert (resolve_x("val:011", G) - G.inv_beta).is_zero()
        assert (resolve_x("expr:1/(2*beta)", G) * 2 * G.beta_value() - 1).is_zero()
        assert (resolve_x("3/4", G) - resolve_x("0.75", G)).is_zero()
        r = resolve_x("random:5", G)
        assert (r - G.from_fraction(random_point(5))).is_zero()

    def test_expr_against_val(self, G):
        v = resolve_x("expr:beta/2+1/4-beta/4", G)
        w = resolve_x("expr:(beta+1)/4", G)
        assert (v - w).is_zero()

    def test_parse_error_exit(self, capsys):
        assert main(["expand", "--beta", "poly:x^2-x-1", "--x", "huh",
                     "-n", "3"]) == 2
