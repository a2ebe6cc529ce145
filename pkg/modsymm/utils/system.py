import os

import psutil

from modsymm.config import settings


def get_process_memory() -> int:
    """Return the current memory usage (in bytes) of this process."""
    process = psutil.Process(os.getpid())
    return process.memory_info().rss


def get_host_snapshot() -> dict:
    """
    Describe the machine a sweep runs on.

    Wall times in the result tables are hardware-specific, so every sweep
    logs this snapshot next to its run id.
    """
    memory_info = psutil.virtual_memory()
    return {
        "system": settings.SYSTEM_NAME,
        "cpu_count": psutil.cpu_count(logical=True),
        "memory_total_gb": round(memory_info.total / (1024**3), 2),
        "memory_percent": memory_info.percent,
        "process_memory_mb": round(get_process_memory() / (1024**2), 2),
    }
