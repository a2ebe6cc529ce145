import pytest

from modsymm.bie.kernel import Convention
from modsymm.config import Config
from modsymm.core.exceptions import ConfigurationError
from modsymm.schemas.experiment_schema import (
    ExperimentConfig,
    FarFieldRecord,
    RunRecord,
    SelfTestResult,
)
from modsymm.schemas.solve_schema import MethodKind
from modsymm.services.config_service import load_experiment_config, parse_entries
from modsymm.utils.fmt import format_scientific

CONFIG_TEXT = """\
# ellipse sweep
curve=ellipse
params=1,2
method=LS,GC
n=2,4,8
delta=0,0.001
convention=classic
rhs_degree=10
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "sweep.env"
    path.write_text(CONFIG_TEXT, encoding="utf-8")
    return path


# --- 1. Experiment configuration ---


class TestLoadExperimentConfig:

    def test_defaults(self):
        config = load_experiment_config()
        assert config.curve == "ellipse"
        assert config.methods == list(MethodKind)
        assert config.n_values == [2, 4, 6, 8, 10, 12]
        assert config.deltas == [0.0]
        assert config.convention is Convention.DOUBLED
        assert config.output is None

    def test_reads_file(self, config_file):
        config = load_experiment_config(config_file)
        assert config.curve_params == [1.0, 2.0]
        assert config.methods == [MethodKind.LS, MethodKind.GC]
        assert config.n_values == [2, 4, 8]
        assert config.deltas == [0.0, 0.001]
        assert config.convention is Convention.CLASSIC
        assert config.rhs_degree == 10

    def test_overrides_win(self, config_file):
        config = load_experiment_config(
            config_file, {"n": "4,6", "method": "bg", "curve": None}
        )
        assert config.n_values == [4, 6]
        assert config.methods == [MethodKind.BG]
        assert config.curve == "ellipse"

    def test_output_path(self, tmp_path):
        config = load_experiment_config(overrides={"out": str(tmp_path / "table.csv")})
        assert config.output == tmp_path / "table.csv"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="does not exist"):
            load_experiment_config(tmp_path / "absent.env")

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError, match="Unknown configuration key"):
            load_experiment_config(overrides={"solver": "LS"})

    def test_unknown_method(self):
        with pytest.raises(ConfigurationError):
            load_experiment_config(overrides={"method": "LS,XYZ"})

    @pytest.mark.parametrize(
        "overrides",
        [
            {"n": "4,2"},
            {"n": "2,2"},
            {"n": "1,2"},
            {"delta": "0,-0.1"},
            {"convention": "halved"},
            {"rhs_degree": "-1"},
            {"out": "/nonexistent-dir/x/table.csv"},
        ],
    )
    def test_invalid_values(self, overrides):
        with pytest.raises(ConfigurationError, match="Invalid experiment configuration"):
            load_experiment_config(overrides=overrides)

    def test_key_spellings(self):
        fields = parse_entries({"Density-Spec": "sin", "n_values": "2", "params": ""})
        assert fields == {"density": "sin", "n_values": ["2"], "curve_params": []}

    def test_empty_degree_list_is_valid(self):
        assert load_experiment_config(overrides={"n": ""}).n_values == []


class TestSettings:

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("MODSYMM_SWEEP_WORKERS", "3")
        monkeypatch.setenv("MODSYMM_G3_REFERENCE_DEGREE", "96")
        config = Config()
        assert config.SWEEP_WORKERS == 3
        assert config.G3_REFERENCE_DEGREE == 96

    def test_defaults(self):
        config = Config()
        assert config.RHS_DEGREE_FACTOR == 4
        assert config.RHS_MIN_DEGREE == 32
        assert config.ERRGRID_REFERENCE_DEGREE == 32
        assert config.PIVOT_TOLERANCE == 1e-14


# --- 2. Records ---


class TestMethodKind:

    def test_parse(self):
        assert MethodKind.parse(" dls ") is MethodKind.DLS
        assert str(MethodKind.GC) == "GC"

    def test_parse_unknown(self):
        with pytest.raises(ConfigurationError):
            MethodKind.parse("CG")


class TestRecords:

    def test_format_scientific(self):
        assert format_scientific(0.625) == "6.250000000e-01"
        assert format_scientific(None) == ""
        assert format_scientific(float("inf")) == "failed"

    def test_run_record_row(self):
        record = RunRecord(
            curve="ellipse",
            method=MethodKind.GC,
            n=8,
            delta=1e-3,
            r=2e-5,
            residual=1e-16,
            condition=12.5,
            elapsed_s=0.01,
            u_inf=1.5,
        )
        assert record.to_row() == [
            "ellipse",
            "GC",
            "8",
            "1.000000000e-03",
            "2.000000000e-05",
            "1.000000000e-16",
            "1.250000000e+01",
            "1.000000000e-02",
            "1.500000000e+00",
            "",
        ]

    def test_failed_run_record_row(self):
        record = RunRecord(curve="circle", method=MethodKind.DLS, n=20, delta=0.0, failed=True)
        row = record.to_row()
        assert row[:4] == ["circle", "DLS", "20", "0.000000000e+00"]
        assert row[4:] == ["failed"] * 6

    def test_far_field_record(self):
        record = FarFieldRecord(
            curve="ellipse",
            method=MethodKind.LS,
            n=8,
            delta=0.0,
            direction_x=1.0,
            direction_y=0.0,
            radius=1e4,
            u=1.25,
            u_inf=1.0,
        )
        assert record.abs_diff == 0.25
        assert record.to_row()[-3:] == ["1.250000000e+00", "1.000000000e+00", "2.500000000e-01"]
        assert len(record.to_row()) == len(FarFieldRecord.HEADER)

    def test_self_test_result(self):
        assert SelfTestResult(check="x", passed=False).to_row() == ["x", "FAIL", "", "", ""]

    def test_config_is_frozen(self):
        config = ExperimentConfig()
        with pytest.raises(Exception):
            config.curve = "circle"
