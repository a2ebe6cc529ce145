from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from modsymm.core.exceptions import ConfigurationError
from modsymm.core.logging import logger
from modsymm.schemas.experiment_schema import ExperimentConfig

# Accepted spellings of each ExperimentConfig field
KEY_ALIASES = {
    "curve": "curve",
    "params": "curve_params",
    "curve_params": "curve_params",
    "method": "methods",
    "methods": "methods",
    "n": "n_values",
    "n_values": "n_values",
    "delta": "deltas",
    "deltas": "deltas",
    "density": "density",
    "density_spec": "density",
    "rhs_degree": "rhs_degree",
    "convention": "convention",
    "seed": "seed",
    "out": "output",
    "output": "output",
}

LIST_FIELDS = {"curve_params", "methods", "n_values", "deltas"}


def _normalize_key(key: str) -> str:
    name = key.strip().lower().replace("-", "_")
    field = KEY_ALIASES.get(name)
    if field is None:
        raise ConfigurationError(
            f"Unknown configuration key '{key}'. Known keys: {', '.join(sorted(KEY_ALIASES))}."
        )
    return field


def _split_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_entries(entries: Mapping[str, Any]) -> Dict[str, Any]:
    """Map raw key=value pairs to ExperimentConfig fields; lists are comma separated."""
    fields: Dict[str, Any] = {}
    for key, value in entries.items():
        if value is None:
            continue
        field = _normalize_key(key)
        if field in LIST_FIELDS and isinstance(value, str):
            value = _split_list(value)
        fields[field] = value
    return fields


def read_config_file(path: Path) -> Dict[str, Any]:
    if not path.is_file():
        raise ConfigurationError(f"Configuration file {path} does not exist.")
    return parse_entries(dotenv_values(path))


def load_experiment_config(
    path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None
) -> ExperimentConfig:
    """
    Build an ExperimentConfig from a key=value file and overrides.

    Overrides win over file entries; None-valued overrides are ignored.
    """
    fields = read_config_file(path) if path is not None else {}
    fields.update(parse_entries(overrides or {}))
    try:
        config = ExperimentConfig(**fields)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in error['loc'])}: {error['msg']}"
            for error in e.errors()
        )
        raise ConfigurationError(f"Invalid experiment configuration: {problems}") from e
    logger.debug({"event": "config_loaded", **config.model_dump(mode="json")})
    return config
