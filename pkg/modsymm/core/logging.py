import contextvars
import json
import logging
import time
from contextlib import contextmanager
from logging import StreamHandler
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Iterator, Optional

import numpy as np

from modsymm.config import settings
from modsymm.core.paths import LOG_DIR, PROJECT_ROOT
from modsymm.utils.time import utc_now

LOG_MAX_BYTES = 10 * 1024 * 1024
LOG_BACKUP_COUNT = 5
TIME_FORMAT = "%Y-%m-%d %H:%M:%S %Z"

# numpy and scipy report through the warnings module (overflow, LinAlgWarning)
WARNINGS_LOGGER = "py.warnings"

# Sweep id of the run currently logging, stamped on every record
current_run_id: contextvars.ContextVar[Optional[str]] = contextvars.ContextVar(
    "current_run_id", default=None
)


@contextmanager
def run_context(run_id: str) -> Iterator[None]:
    """Tag every record logged inside the block with ``run_id``."""
    token = current_run_id.set(run_id)
    try:
        yield
    finally:
        current_run_id.reset(token)


class RunContextFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = current_run_id.get()
        return True


def _to_json(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return repr(value)


class JsonFormatter(logging.Formatter):
    """
    One JSON object per record: UTC time, level, logger, source location
    relative to the project root and the run id, followed by either the
    message or the dict payload merged in. Solver payloads may carry numpy
    scalars and arrays; they are converted to plain JSON values.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.base_dir = PROJECT_ROOT.resolve()

    def _source(self, record: logging.LogRecord) -> str:
        try:
            return str(Path(record.pathname).resolve().relative_to(self.base_dir))
        except (ValueError, RuntimeError):
            return record.filename

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "time": utc_now().strftime(TIME_FORMAT),
            "level": record.levelname,
            "logger": record.name,
            "file": self._source(record),
            "line": record.lineno,
        }
        run_id = getattr(record, "run_id", None)
        if run_id is not None:
            entry["run_id"] = run_id

        if isinstance(record.msg, dict):
            entry.update(record.msg)
        else:
            entry["message"] = record.getMessage()

        if record.exc_info:
            entry["stack_trace"] = self.formatException(record.exc_info)
        elif record.exc_text:
            entry["stack_trace"] = record.exc_text

        return json.dumps(entry, ensure_ascii=False, default=_to_json)


def create_file_handler(
    filename: Path, formatter: logging.Formatter
) -> RotatingFileHandler:
    handler = RotatingFileHandler(
        filename,
        maxBytes=LOG_MAX_BYTES,
        backupCount=LOG_BACKUP_COUNT,
        encoding="utf-8",
    )
    handler.setFormatter(formatter)
    handler.addFilter(RunContextFilter())
    return handler


def create_console_handler() -> StreamHandler:
    """stderr only, so CSV tables on stdout stay machine readable."""
    formatter = logging.Formatter(
        fmt="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt=TIME_FORMAT,
    )
    formatter.converter = time.gmtime
    handler = StreamHandler()
    handler.setFormatter(formatter)
    handler.setLevel(getattr(logging, settings.CONSOLE_LOG_LEVEL, logging.WARNING))
    return handler


def setup_logging() -> logging.Logger:
    """
    Configure the package logger once.

    JSON lines go to ``<data>/log/modsymm.log``. Numerical warnings raised
    through the warnings module are captured into the same file.
    """
    package_logger = logging.getLogger(settings._PROJECT_NAME_CODE)
    if getattr(package_logger, "_initialized", False):
        return package_logger

    LOG_DIR.mkdir(parents=True, exist_ok=True)
    file_handler = create_file_handler(
        LOG_DIR / f"{settings._PROJECT_NAME_CODE}.log", JsonFormatter()
    )

    level = (
        logging.DEBUG
        if settings.DEBUG
        else getattr(logging, settings.LOG_LEVEL, logging.INFO)
    )
    package_logger.setLevel(level)
    package_logger.addHandler(file_handler)
    package_logger.addHandler(create_console_handler())

    logging.captureWarnings(True)
    logging.getLogger(WARNINGS_LOGGER).addHandler(file_handler)

    package_logger._initialized = True
    return package_logger


logger = setup_logging()
