import platform
from typing import Literal, Any, ClassVar

from pydantic_settings import BaseSettings, SettingsConfigDict


class Config(BaseSettings):

    _PROJECT_NAME: str = "ModSymm"
    _PROJECT_NAME_CODE: str = _PROJECT_NAME.lower()
    _PROJECT_NAME_ENV: str = _PROJECT_NAME.upper()
    _PROJECT_LICENSE: str = "MIT"

    _SYSTEM_NAME: str = platform.system()

    APP_DATA_DIR: str = "app_data"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix=f"{_PROJECT_NAME_ENV}_",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )
    SYSTEM_NAME: str = _SYSTEM_NAME

    DEBUG: bool = False

    APP_NAME: str = _PROJECT_NAME
    APP_VERSION: str = "0.1.0"

    # Trapezoid nodes for geometry constants (boundary length, regularity check)
    GEOMETRY_NODES: int = 256
    # Boundary polygon resolution for the exterior (winding number) test
    WINDING_SAMPLES: int = 256

    # Degree at which S_K|gamma'| is discretized before sampling g3 at solver nodes
    G3_REFERENCE_DEGREE: int = 64

    # Reference forward map degree = max(RHS_DEGREE_FACTOR * n, RHS_MIN_DEGREE)
    RHS_DEGREE_FACTOR: int = 4
    RHS_MIN_DEGREE: int = 32

    # Off-boundary trapezoid nodes = max(4n, POTENTIAL_MIN_NODES)
    POTENTIAL_MIN_NODES: int = 256

    # |t - s| below which the smooth kernel uses its analytic diagonal
    NEAR_DIAGONAL_THRESHOLD: float = 1e-6

    # Smallest accepted |pivot| relative to the largest one
    PIVOT_TOLERANCE: float = 1e-14

    # error_metric samples ERROR_METRIC_FACTOR * n points
    ERROR_METRIC_FACTOR: int = 8

    ERRGRID_REFERENCE_DEGREE: int = 32

    SWEEP_WORKERS: int = 1

    CSV_SIGNIFICANT_DIGITS: ClassVar[int] = 10
    CSV_FAILED_MARK: ClassVar[str] = "failed"

    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    CONSOLE_LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"

    def __init__(self, **values: Any):
        super().__init__(**values)


settings = Config()
