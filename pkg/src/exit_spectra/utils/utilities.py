from __future__ import annotations

import json
import os
import tempfile
from io import StringIO
from pathlib import Path
from typing import Any, Dict, List, Sequence

import pandas as pd

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.constants import THREADS_ENV_VAR
from exit_spectra.exceptions import ValidationError

logger = configure_logging(__name__, "utilities", DEBUG)

CSV_FLOAT_FORMAT = "%.17g"


def resolve_worker_count(requested: int | None = None) -> int:
    """Number of worker threads, capped by the EXITSPEC_THREADS environment variable.

    Args:
        requested (int | None): Explicit request; defaults to the CPU count.

    Returns:
        int: At least 1.

    Raises:
        ValidationError: If the environment variable is not a positive integer.
    """
    count = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV_VAR)
    if cap:
        try:
            limit = int(cap)
        except ValueError as exc:
            raise ValidationError(f"{THREADS_ENV_VAR} must be an integer, got {cap!r}") from exc
        if limit < 1:
            raise ValidationError(f"{THREADS_ENV_VAR} must be positive, got {limit}")
        count = min(count, limit)
    return max(int(count), 1)


class Utilities:
    """Atomic report writing and reading.

    Attributes:
        logger (logging.Logger): Module logger.
    """

    def __init__(self):
        self.logger = configure_logging(
            module_name=__name__,
            log_file_name="utilities",
            log_level=DEBUG,
        )

    @staticmethod
    def atomic_write_text(path: str | Path, text: str) -> Path:
        """Write ``text`` to a temporary file next to ``path`` and rename it into place."""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        return target

    def write_csv(
        self,
        rows: Sequence[Dict[str, Any]],
        path: str | Path,
        columns: Sequence[str] | None = None,
    ) -> Path:
        """Write report rows as CSV with 17 significant digits."""
        frame = pd.DataFrame(list(rows), columns=list(columns) if columns else None)
        buffer = StringIO()
        frame.to_csv(buffer, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        target = self.atomic_write_text(path, buffer.getvalue())
        self.logger.debug(f"Wrote {len(frame)} rows to {target}")
        return target

    def write_json(self, report: Dict[str, Any], path: str | Path) -> Path:
        """Write a JSON report; floats keep their shortest round-trip repr."""
        text = json.dumps(report, indent=2, sort_keys=False, allow_nan=True) + "\n"
        target = self.atomic_write_text(path, text)
        self.logger.debug(f"Wrote JSON report to {target}")
        return target

    @staticmethod
    def read_report(path: str | Path) -> pd.DataFrame | Dict[str, Any]:
        """Re-read a CSV table (as a DataFrame) or a JSON report (as a dict).

        Raises:
            ValidationError: If the file is neither, or a JSON report lacks
                ``schema_version``.
        """
        source = Path(path)
        suffix = source.suffix.lower()
        if suffix == ".csv":
            return pd.read_csv(source, float_precision="round_trip")
        if suffix == ".json":
            with source.open("r", encoding="utf-8") as handle:
                report = json.load(handle)
            if not isinstance(report, dict) or "schema_version" not in report:
                raise ValidationError(f"{source} is not a report: missing schema_version")
            return report
        raise ValidationError(f"unknown report format: {source.suffix!r}")


def rows_to_records(rows: Sequence[Any]) -> List[Dict[str, Any]]:
    """Turn report dataclasses (anything with ``to_dict``) into plain dicts."""
    return [row.to_dict() if hasattr(row, "to_dict") else dict(row) for row in rows]
