import json

import pytest
from click.testing import CliRunner

from app.core.audit import record_run
from app.core.output import parse_csv
from app.deps import SessionLocal, initialize_database
from app.models import Suite
from app.schemas import ExponentPair
from app.services import verification, witness_io
from main import cli


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner(mix_stderr=False)


def invoke(runner, *args):
    return runner.invoke(cli, list(args), catch_exceptions=False)


class TestBounds:
    def test_schuett_large_n(self, runner):
        result = invoke(runner, "bounds", "--thm", "2.1", "--m", "4", "--n", "8", "--p", "1", "--q", "inf")
        assert result.exit_code == 0
        (row,) = parse_csv(result.stdout)
        assert row["value"] == "0.0625"
        assert row["regime"] == "LARGE_N"
        assert row["q"] == "inf"

    def test_grid_order(self, runner):
        result = invoke(runner, "bounds", "--thm", "2.1", "--m", "1..3", "--n", "1,2", "--p", "1", "--q", "2")
        rows = parse_csv(result.stdout)
        assert [(r["m"], r["n"]) for r in rows] == [("1", "1"), ("1", "2"), ("2", "1"), ("2", "2"), ("3", "1"), ("3", "2")]

    def test_thm32_preset(self, runner):
        result = invoke(
            runner, "bounds", "--thm", "3.2", "--m", "16", "--n", "4", "--p", "1", "--q", "inf",
            "--profile-preset", "scalar-identity",
        )
        (row,) = parse_csv(result.stdout)
        assert float(row["value"]) == pytest.approx(0.75)
        assert row["regime"] == "NORM"

    def test_domain_error_exit_code(self, runner):
        result = invoke(
            runner, "bounds", "--thm", "3.2", "--m", "3", "--n", "5", "--p", "1", "--q", "inf",
            "--profile", "1,0.5",
        )
        assert result.exit_code == 3
        assert result.stderr.startswith("error:")
        assert "n <= m" in result.stderr
        assert result.stdout == ""

    def test_skip_invalid(self, runner):
        result = invoke(
            runner, "bounds", "--thm", "3.2", "--m", "4", "--n", "2..5", "--p", "1", "--q", "inf",
            "--profile", "1,0.5", "--skip-invalid",
        )
        assert result.exit_code == 0
        assert [r["n"] for r in parse_csv(result.stdout)] == ["2", "3", "4"]

    def test_missing_profile(self, runner):
        result = invoke(runner, "bounds", "--thm", "3.2", "--m", "4", "--n", "2", "--p", "1", "--q", "inf")
        assert result.exit_code == 2

    def test_bad_exponent_order(self, runner):
        result = invoke(runner, "bounds", "--thm", "2.1", "--m", "4", "--n", "2", "--p", "2", "--q", "1")
        assert result.exit_code == 2

    def test_unparseable_real(self, runner):
        result = invoke(runner, "bounds", "--thm", "2.1", "--m", "4", "--n", "2", "--p", "abc", "--q", "1")
        assert result.exit_code == 2

    def test_json_document(self, runner):
        result = invoke(runner, "--format", "json", "bounds", "--thm", "2.1", "--m", "4", "--n", "8", "--p", "1", "--q", "inf")
        document = json.loads(result.stdout)
        assert document["schema"] == 1
        assert document["command"] == "bounds"
        assert document["columns"] == ["theorem", "m", "n", "p", "q", "value", "regime"]
        assert document["rows"][0]["q"] == "inf"
        assert document["rows"][0]["value"] == 0.0625

    def test_out_file(self, runner, tmp_path):
        target = tmp_path / "bounds.csv"
        result = invoke(runner, "--out", str(target), "bounds", "--thm", "2.1", "--m", "2", "--n", "1", "--p", "1", "--q", "2")
        assert result.stdout == ""
        assert parse_csv(target.read_text())[0]["value"] == "1.0"


class TestGamma:
    def test_enumerate(self, runner):
        result = invoke(runner, "gamma", "--m", "2", "--enumerate")
        assert sorted(r["eps"] for r in parse_csv(result.stdout)) == ["1 1", "1 1/2", "1/2 1", "1/2 1/2"]

    def test_dominate(self, runner):
        result = invoke(runner, "gamma", "--dominate", "1,0,0,0")
        assert parse_csv(result.stdout)[0]["eps"] == "1 1/4 1/4 1/4"

    def test_dominate_rejects_bad_sum(self, runner):
        assert invoke(runner, "gamma", "--dominate", "0.5,0.2").exit_code == 2

    def test_stats(self, runner):
        (row,) = parse_csv(invoke(runner, "gamma", "--m", "4", "--stats").stdout)
        assert row["within_bound"] == "true"

    def test_one_mode_only(self, runner):
        assert invoke(runner, "gamma", "--m", "2", "--stats", "--enumerate").exit_code == 2

    def test_witness(self, runner, tmp_path):
        target = tmp_path / "gamma3.txt"
        invoke(runner, "gamma", "--m", "3", "--enumerate", "--witness", str(target))
        m, family = witness_io.loads_gamma(target.read_text())
        assert m == 3 and family


def test_codes(runner):
    result = invoke(runner, "--format", "json", "codes", "--ground", "6", "--v", "2")
    document = json.loads(result.stdout)
    assert document["rows"][0]["size"] == 15
    assert document["rows"][0]["counting_lower_bound"] == "15"
    assert len(document["members"]) == 15
    assert document["seed"] == 0


def test_codes_csv_lists_members(runner):
    result = invoke(runner, "--seed", "5", "codes", "--ground", "6", "--v", "2")
    assert result.exit_code == 0
    stats, *members = parse_csv(result.stdout)
    assert stats["size"] == "15"
    assert stats["member"] == ""
    assert len(members) == 15
    assert "1 2" in {row["member"] for row in members}
    assert {row["seed"] for row in [stats, *members]} == {"5"}


class TestEstimate:
    def test_scalar_bracket(self, runner):
        result = invoke(runner, "estimate", "--m", "1", "--n", "4", "--p", "1", "--q", "2")
        (row,) = parse_csv(result.stdout)
        assert row["lo"] == row["hi"] == "0.125"
        assert row["truncated"] == "false"
        assert row["seed"] == "0"

    def test_seed_column(self, runner):
        rows = parse_csv(invoke(runner, "--seed", "3", "estimate", "--m", "2", "--n", "1,2", "--p", "1", "--q", "inf").stdout)
        assert [r["seed"] for r in rows] == ["3", "3"]

    def test_deterministic(self, runner):
        args = ("--seed", "3", "estimate", "--m", "2", "--n", "1..3", "--p", "1", "--q", "inf")
        assert invoke(runner, *args).stdout == invoke(runner, *args).stdout

    def test_budget_exhausted(self, runner):
        result = invoke(runner, "--budget", "20", "estimate", "--m", "3", "--n", "6", "--p", "1", "--q", "inf")
        assert result.exit_code == 4
        (row,) = parse_csv(result.stdout)
        assert row["truncated"] == "true"

    def test_witness_dir(self, runner, tmp_path):
        invoke(runner, "estimate", "--m", "2", "--n", "3", "--p", "1", "--q", "inf", "--witness-dir", str(tmp_path))
        net = witness_io.loads_net((tmp_path / "net_m2_n3.txt").read_text(), p=1.0)
        packing = witness_io.loads_packing((tmp_path / "packing_m2_n3.txt").read_text(), p=1.0)
        assert net.count <= 4
        assert packing.count >= 5


class TestVerify:
    def test_binom(self, runner):
        result = invoke(runner, "verify", "--suite", "binom", "--max-m", "8")
        assert result.exit_code == 0
        assert {r["name"] for r in parse_csv(result.stdout)} >= {"(m/k)^k <= C(m,k) <= (em/k)^k"}
        assert "PASS" in result.stderr

    def test_csv_carries_seed(self, runner):
        result = invoke(runner, "--seed", "7", "verify", "--suite", "codes", "--max-m", "4")
        assert {r["seed"] for r in parse_csv(result.stdout)} == {"7"}

    def test_rejects_m_for_thm32(self, runner):
        result = invoke(runner, "verify", "--suite", "thm32", "--m", "4")
        assert result.exit_code == 2
        assert "does not take --m" in result.stderr

    def test_json_report(self, runner):
        result = invoke(runner, "--format", "json", "verify", "--suite", "codes", "--max-m", "5")
        document = json.loads(result.stdout)
        assert document["suite"] == "codes"
        assert document["rows"] == []
        assert all(c["passed"] for c in document["criteria"])

    def test_p_without_q(self, runner):
        assert invoke(runner, "verify", "--suite", "schuett", "--p", "1").exit_code == 2

    def test_regression_failure(self, runner):
        args = ("verify", "--suite", "schuett", "--m", "1", "--n", "1..2", "--p", "1", "--q", "2")
        assert invoke(runner, *args, "--record").exit_code == 0

        params = verification.run_suite(
            Suite.SCHUETT, m_values=(1,), n_values=(1, 2), pq=ExponentPair(p=1, q=2)
        ).params
        initialize_database()
        with SessionLocal() as db:
            record_run(db, suite="schuett", params=params, seed=0, passed=True, values={"upper_gap_envelope": 0.5})
            db.commit()

        result = invoke(runner, *args, "--check-regression")
        assert result.exit_code == 1
        assert "FAIL regression upper_gap_envelope" in result.stderr
