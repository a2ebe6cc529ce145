import os
from pathlib import Path

# Determine the absolute project root (three levels up from this file)
PROJECT_ROOT = Path(__file__).resolve().parents[2]

# Package source root
PACKAGE_ROOT = PROJECT_ROOT / "modsymm"

# Runtime data directories (configurable via environment variable)
DATA_ROOT = PROJECT_ROOT / os.environ.get("MODSYMM_APP_DATA_DIR", "app_data")
LOG_DIR = DATA_ROOT / "log"  # Structured run logs
OUTPUT_DIR = DATA_ROOT / "output"  # Default location for CSV tables

# Ensure all runtime directories exist
for directory in [LOG_DIR, OUTPUT_DIR]:
    directory.mkdir(parents=True, exist_ok=True)
