import json
from fractions import Fraction

import pytest

from ssmass.cli import run
from ssmass.massfml import mass_classical, mass_quaternionic
from ssmass.numfield import parse_field
from ssmass.quatalg import parse_algebra


def run_json(capsys, argv):
    code = run(argv + ["--format", "json"])
    out = capsys.readouterr().out.strip()
    return code, json.loads(out) if out else None


class TestBasicCommands:
    def test_classical(self, capsys):
        code, record = run_json(capsys, ["classical", "--g", "2", "--p", "2"])
        assert code == 0
        assert record["mass"] == "1/1152"
        assert "zeta_F(-3)" in record["factored"]

    def test_round_trip_recompute(self, capsys):
        code, record = run_json(
            capsys, ["quaternionic", "--field", "Q(sqrt:5)", "--algebra",
                     "split", "--p", "11", "--m", "1"]
        )
        assert code == 0
        num, den = record["mass"].split("/")
        parsed = Fraction(int(num), int(den))
        field = parse_field(record["field"])
        algebra = parse_algebra(field, record["algebra"])
        recomputed = mass_quaternionic(
            field, algebra, record["p"], record["m"]
        )
        assert recomputed.value == parsed

    def test_decomposition_check(self, capsys):
        code, record = run_json(
            capsys, ["check", "decomposition", "--field", "Q(sqrt:5)",
                     "--algebra", "split", "--p", "2", "--m", "1"]
        )
        assert code == 0
        assert record["holds"] is True
        assert record["summary"] == "OK: 1/24 = 1/120 * 5"

    def test_functional_check(self, capsys):
        code, record = run_json(
            capsys, ["check", "functional", "--field", "Q", "--i", "1",
                     "--term-budget", "200000"]
        )
        assert code == 0
        assert record["passed"] is True
        assert record["exact"] == "-1/12"

    def test_count(self, capsys):
        code, record = run_json(
            capsys, ["count", "--field", "Q", "--algebra", "split",
                     "--p", "2", "--m", "1", "--N", "3"]
        )
        assert code == 0
        assert record["count"] == "1"

    def test_group_orders(self, capsys):
        code, record = run_json(
            capsys, ["group", "sp-order", "--m", "2", "--q", "3"]
        )
        assert code == 0 and record["order"] == "51840"
        code, record = run_json(
            capsys, ["group", "mod-n", "--m", "1", "--field", "Q", "--N", "4"]
        )
        assert code == 0 and record["order"] == "48"

    def test_local_index(self, capsys):
        code, record = run_json(
            capsys, ["local-index", "--field", "Q(sqrt:5)", "--algebra",
                     "split", "--p", "2", "--m", "1"]
        )
        assert code == 0
        assert record["index"] == "5"
        assert record["twisted_discriminant"] == "(1)"

    def test_shimura_definite_flag(self, capsys):
        code, record = run_json(
            capsys, ["shimura", "--field", "Q", "--algebra", "2:0",
                     "--definite", "--m", "1"]
        )
        assert code == 0
        assert record["mass"] == "1/24"

    def test_oracle(self, capsys):
        code, record = run_json(capsys, ["oracle", "sp", "--m", "1", "--q", "4"])
        assert code == 0 and record["count"] == "60"
        code, record = run_json(capsys, ["oracle", "bernoulli", "--n", "12"])
        assert code == 0 and record["value"] == "-691/2730"

    def test_dieudonne_deterministic(self, capsys):
        argv = ["dieudonne", "--p", "2", "--f", "2", "--m", "1", "--seed", "5"]
        code, first = run_json(capsys, argv)
        assert code == 0 and first["verified"] is True
        code, second = run_json(capsys, argv)
        assert first == second


class TestFormats:
    def test_tsv_matches_json(self, capsys):
        code = run(["classical", "--g", "1", "--p", "5", "--format", "json"])
        json_out = json.loads(capsys.readouterr().out)
        code = run(["classical", "--g", "1", "--p", "5", "--format", "tsv"])
        lines = capsys.readouterr().out.strip().splitlines()
        header = lines[0].split("\t")
        values = lines[1].split("\t")
        tsv_record = dict(zip(header, values))
        assert tsv_record["mass"] == json_out["mass"]
        assert tsv_record["factored"] == json_out["factored"]

    def test_table(self, capsys):
        code = run(["table", "--p-max", "3", "--g-max", "2", "--format", "tsv"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "g\tp\tmass\tfactored"
        assert len(lines) == 5  # header + (g,p) in {1,2} x {2,3}
        assert lines[1].startswith("1\t2\t1/24")

    def test_table_json(self, capsys):
        code = run(["table", "--p-max", "3", "--g-max", "1", "--format", "json"])
        payload = json.loads(capsys.readouterr().out)
        assert [row["mass"] for row in payload["rows"]] == ["1/24", "1/12"]
        for row in payload["rows"]:
            assert row["mass"] == f"{mass_classical(row['g'], row['p']).value.numerator}/" \
                f"{mass_classical(row['g'], row['p']).value.denominator}"


class TestErrors:
    def test_invalid_input_exit_code(self, capsys):
        assert run(["classical", "--g", "0", "--p", "2"]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error: invalid-input:")
        assert "\n" not in err.strip()

    def test_gcd_violation(self, capsys):
        code = run(["count", "--field", "Q", "--algebra", "split", "--p",
                    "3", "--m", "1", "--N", "9"])
        assert code == 1

    def test_bad_field(self, capsys):
        assert run(["quaternionic", "--field", "Q(sqrt:7)x", "--algebra",
                    "split", "--p", "2", "--m", "1"]) == 1

    def test_missing_zeta_table(self, capsys):
        code = run(["quaternionic", "--field", "Q", "--algebra", "split",
                    "--p", "2", "--m", "1", "--zeta-table", "/nonexistent"])
        assert code == 1


class TestZetaTableFlag:
    def test_table_accepted_but_not_overriding(self, capsys, tmp_path):
        path = tmp_path / "zeta.tsv"
        path.write_text("5\t1\t999/1\n", encoding="utf-8")
        code, record = run_json(
            capsys, ["quaternionic", "--field", "Q(sqrt:5)", "--algebra",
                     "split", "--p", "2", "--m", "1",
                     "--zeta-table", str(path)]
        )
        assert code == 0
        assert record["mass"] == "1/24"  # computed value wins for degree <= 2
