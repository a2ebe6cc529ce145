import os
from pathlib import Path
from typing import ClassVar, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from modsymm.bie.kernel import Convention
from modsymm.config import settings
from modsymm.schemas.solve_schema import MethodKind
from modsymm.utils.fmt import format_scientific


class ExperimentConfig(BaseModel):
    """
    One sweep over (method, n, delta) on a single curve.

    An empty ``curve_params`` uses the curve's own defaults.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    curve: str = Field(default="ellipse", description="Registered curve name")
    curve_params: List[float] = Field(default_factory=list)
    methods: List[MethodKind] = Field(
        default_factory=lambda: [MethodKind.LS, MethodKind.DLS, MethodKind.BG, MethodKind.GC]
    )
    n_values: List[int] = Field(default_factory=lambda: [2, 4, 6, 8, 10, 12])
    deltas: List[float] = Field(default_factory=lambda: [0.0])
    density: str = Field(default="exp-sin", description="Name of the exact density")
    rhs_degree: int = Field(
        default=0, ge=0, description="Forward map degree; 0 picks max(4n, 32)"
    )
    convention: Convention = Convention.DOUBLED
    seed: int = Field(default=0, description="Reserved; every run is deterministic")
    output: Optional[Path] = None

    @field_validator("methods", mode="before")
    @classmethod
    def parse_methods(cls, value):
        if isinstance(value, str):
            value = [item for item in value.split(",") if item.strip()]
        return [MethodKind.parse(v) if isinstance(v, str) else v for v in value]

    @field_validator("n_values")
    @classmethod
    def check_n_values(cls, value: List[int]) -> List[int]:
        if any(n < 2 for n in value):
            raise ValueError("every n must be >= 2")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("n_values must be sorted ascending without repeats")
        return value

    @field_validator("deltas")
    @classmethod
    def check_deltas(cls, value: List[float]) -> List[float]:
        if any(d < 0 for d in value):
            raise ValueError("noise levels must be >= 0")
        return value

    @field_validator("output")
    @classmethod
    def check_output(cls, value: Optional[Path]) -> Optional[Path]:
        if value is None:
            return value
        parent = value.expanduser().resolve().parent
        if not parent.is_dir() or not os.access(parent, os.W_OK):
            raise ValueError(f"output directory {parent} is not writable")
        if value.exists() and not os.access(value, os.W_OK):
            raise ValueError(f"output file {value} is not writable")
        return value


class RunRecord(BaseModel):
    """One row of a convergence or error-grid table."""

    HEADER: ClassVar[tuple[str, ...]] = (
        "curve",
        "method",
        "n",
        "delta",
        "r",
        "residual",
        "condition",
        "elapsed_s",
        "u_inf",
        "err_grid",
    )

    curve: str
    method: MethodKind
    n: int
    delta: float
    r: Optional[float] = None
    residual: Optional[float] = None
    condition: Optional[float] = None
    elapsed_s: Optional[float] = None
    u_inf: Optional[float] = None
    err_grid: Optional[float] = None
    failed: bool = False

    def to_row(self) -> list[str]:
        failed = settings.CSV_FAILED_MARK

        def cell(value: Optional[float], known_on_failure: bool = False) -> str:
            if self.failed and (value is None or not known_on_failure):
                return failed
            return format_scientific(value)

        return [
            self.curve,
            self.method.value,
            str(self.n),
            format_scientific(self.delta),
            cell(self.r),
            cell(self.residual),
            # a rejected system still has a condition number and a wall time
            cell(self.condition, known_on_failure=True),
            cell(self.elapsed_s, known_on_failure=True),
            cell(self.u_inf),
            cell(self.err_grid),
        ]


class FarFieldRecord(BaseModel):
    """One sampled value of u along a direction, next to its limit."""

    HEADER: ClassVar[tuple[str, ...]] = (
        "curve",
        "method",
        "n",
        "delta",
        "direction_x",
        "direction_y",
        "radius",
        "u",
        "u_inf",
        "abs_diff",
    )

    curve: str
    method: MethodKind
    n: int
    delta: float
    direction_x: float
    direction_y: float
    radius: float
    u: Optional[float] = None
    u_inf: Optional[float] = None
    failed: bool = False

    @property
    def abs_diff(self) -> Optional[float]:
        if self.u is None or self.u_inf is None:
            return None
        return abs(self.u - self.u_inf)

    def to_row(self) -> list[str]:
        values = [self.u, self.u_inf, self.abs_diff]
        cells = (
            [settings.CSV_FAILED_MARK] * 3
            if self.failed
            else [format_scientific(v) for v in values]
        )
        return [
            self.curve,
            self.method.value,
            str(self.n),
            format_scientific(self.delta),
            format_scientific(self.direction_x),
            format_scientific(self.direction_y),
            format_scientific(self.radius),
            *cells,
        ]


class SelfTestResult(BaseModel):
    HEADER: ClassVar[tuple[str, ...]] = ("check", "passed", "value", "limit", "detail")

    check: str
    passed: bool
    value: Optional[float] = None
    limit: Optional[float] = None
    detail: str = ""

    def to_row(self) -> list[str]:
        return [
            self.check,
            "pass" if self.passed else "FAIL",
            format_scientific(self.value),
            format_scientific(self.limit),
            self.detail,
        ]
