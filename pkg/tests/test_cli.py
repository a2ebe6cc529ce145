import pytest

from modsymm import main as cli
from modsymm.core.exceptions import SolverFailure
from modsymm.schemas.experiment_schema import SelfTestResult

SMALL_SWEEP = ["--curve", "ellipse", "--params", "1,2", "--method", "GC", "--n", "4,6"]


# --- 1. Sweeps ---


class TestSweepCommands:

    def test_convergence_table_on_stdout(self, capsys):
        assert cli.main(["convergence", *SMALL_SWEEP, "--delta", "0,0.01"]) == cli.EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("curve,method,n,delta,r,")
        assert len(lines) == 5
        assert all(line.startswith("ellipse,GC,") for line in lines[1:])

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "solve.csv"
        assert cli.main(["solve", *SMALL_SWEEP, "--out", str(target)]) == cli.EXIT_OK
        assert capsys.readouterr().out == ""
        assert len(target.read_text(encoding="utf-8").splitlines()) == 3

    def test_config_file_with_flags(self, tmp_path, capsys):
        path = tmp_path / "sweep.env"
        path.write_text("curve=ellipse\nmethod=LS\nn=2,4,6\n", encoding="utf-8")
        assert cli.main(["convergence", "--config", str(path), "--n", "4"]) == cli.EXIT_OK
        assert len(capsys.readouterr().out.splitlines()) == 2

    def test_empty_degree_list(self, capsys):
        assert cli.main(["convergence", "--n", ""]) == cli.EXIT_OK
        assert capsys.readouterr().out.splitlines() == [
            "curve,method,n,delta,r,residual,condition,elapsed_s,u_inf,err_grid"
        ]

    def test_configuration_error(self):
        assert cli.main(["convergence", "--method", "LS,XX"]) == cli.EXIT_CONFIG
        assert cli.main(["solve", "--n", "6,4"]) == cli.EXIT_CONFIG
        assert cli.main(["solve", "--config", "/nonexistent/sweep.env"]) == cli.EXIT_CONFIG

    def test_grid_inside_curve(self):
        args = ["errgrid", "--curve", "circle", "--params", "30", "--method", "GC", "--n", "2"]
        assert cli.main(args) == 1

    def test_solver_failure_exit_code(self, mocker):
        mocker.patch(
            "modsymm.services.experiment_service.solve",
            side_effect=SolverFailure("singular", 1e18),
        )
        assert cli.main(["solve", *SMALL_SWEEP]) == cli.EXIT_SOLVER

    def test_convergence_reports_failures_as_rows(self, mocker, capsys):
        mocker.patch(
            "modsymm.services.experiment_service.solve",
            side_effect=SolverFailure("singular", 1e18),
        )
        assert cli.main(["convergence", *SMALL_SWEEP]) == cli.EXIT_OK
        rows = capsys.readouterr().out.splitlines()[1:]
        assert all(",failed,failed,1.000000000e+18," in row for row in rows)

    def test_unexpected_error(self, mocker):
        mocker.patch.object(cli, "run_convergence", side_effect=RuntimeError("boom"))
        assert cli.main(["convergence"]) == cli.EXIT_SOLVER


class TestFarFieldCommand:

    def test_arguments_are_parsed(self, mocker):
        run = mocker.patch.object(cli, "run_farfield", return_value=[])
        argv = ["farfield", "--direction", "0,1", "--direction", "1,1", "--radii", "1e2,1e3"]
        assert cli.main(argv) == cli.EXIT_OK
        _, directions, radii = run.call_args.args
        assert directions == [(0.0, 1.0), (1.0, 1.0)]
        assert radii == [100.0, 1000.0]

    def test_malformed_direction(self):
        with pytest.raises(SystemExit) as info:
            cli.main(["farfield", "--direction", "1"])
        assert info.value.code == 2

    def test_table(self, capsys):
        argv = ["farfield", *SMALL_SWEEP, "--n", "8", "--radii", "1e3,1e6"]
        assert cli.main(argv) == cli.EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].endswith("radius,u,u_inf,abs_diff")
        assert len(lines) == 3


# --- 2. Self-test ---


class TestSelfTestCommand:

    def test_all_passing(self, mocker, tmp_path, capsys):
        mocker.patch.object(
            cli, "run_selftest", return_value=[SelfTestResult(check="a", passed=True)]
        )
        target = tmp_path / "selftest.csv"
        assert cli.main(["selftest", "--out", str(target)]) == cli.EXIT_OK
        assert "a,pass" in capsys.readouterr().out
        assert target.read_text(encoding="utf-8").splitlines()[1].startswith("a,pass")

    def test_failing_check(self, mocker, tmp_path):
        mocker.patch.object(
            cli,
            "run_selftest",
            return_value=[
                SelfTestResult(check="a", passed=True),
                SelfTestResult(check="b", passed=False),
            ],
        )
        assert cli.main(["selftest", "--out", str(tmp_path / "s.csv")]) == cli.EXIT_SOLVER


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["--version"])
    assert info.value.code == 0
    assert capsys.readouterr().out.strip() == "0.1.0"
