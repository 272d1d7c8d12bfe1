import os
import sys
from pathlib import Path

import platformdirs

# Release mode logs to the console only; development mode also writes log files.
RELEASE_MODE = True


def get_package_data_dir() -> Path:
    """Get the appropriate data directory for the package based on platform."""
    return Path(platformdirs.user_data_dir("exit_spectra"))


if os.environ.get("READTHEDOCS") == "True":
    # Dummy paths so the docs build can import the package.
    LOG_DIR_PATH = Path("/dummy/exit_spectra/logs")
    OUTPUT_FILES_DIR_PATH = Path("/dummy/exit_spectra/output_files")
elif getattr(sys, "frozen", False):
    LOG_DIR_PATH = get_package_data_dir() / "logs"
    OUTPUT_FILES_DIR_PATH = Path(".") / "output_files"
elif RELEASE_MODE:
    LOG_DIR_PATH = Path(".") / "logs"
    OUTPUT_FILES_DIR_PATH = Path(".") / "output_files"
else:
    LOG_DIR_PATH = get_package_data_dir() / "logs"
    OUTPUT_FILES_DIR_PATH = get_package_data_dir() / "output_files"
