from __future__ import annotations

import warnings
from typing import Dict, List

from exit_spectra.configs import configure_logging, DEBUG


class CustomWarning(Warning):
    """Structured warning raised for non-fatal numerical or mesh conditions.

    Attributes:
        category (str): Short category tag, e.g. ``"mesh_quality"`` or ``"time_step"``.
        message (str): Human readable description.
        entry_id (str | None): Identifier of the object the warning refers to.
    """

    def __init__(self, category: str, message: str, entry_id: str | None = None):
        self.category: str = category
        self.message: str = message
        self.entry_id: str | None = entry_id
        super().__init__(self.message)


class WarningManager:
    """Collects warnings so reports can list them after a run.

    Every warning is also emitted through :func:`warnings.warn` and logged.

    Attributes:
        warning_count (int): The number of warnings recorded.
        warnings (List[CustomWarning]): The recorded warnings, in order.
    """

    def __init__(self):
        self.logger = configure_logging(
            module_name=__name__,
            log_file_name="warning_manager",
            log_level=DEBUG,
        )
        self.warning_count: int = 0
        self.warnings: List[CustomWarning] = []

    def log_warning(
        self, category: str, warning_message: str, entry_id: str | None = None
    ) -> CustomWarning:
        """Record a warning with the provided category, message, and entry ID.

        Args:
            category (str): The category of the warning.
            warning_message (str): The message of the warning.
            entry_id (str | None): The entry ID of the warning. Defaults to None.

        Returns:
            CustomWarning: The warning that was recorded.
        """
        warning = CustomWarning(category, warning_message, entry_id)
        self.logger.warning(f"[{category}] {warning_message}")
        warnings.warn(warning, stacklevel=2)
        self.warning_count += 1
        self.warnings.append(warning)
        return warning

    def by_category(self) -> Dict[str, int]:
        """Count recorded warnings per category."""
        counts: Dict[str, int] = {}
        for warning in self.warnings:
            counts[warning.category] = counts.get(warning.category, 0) + 1
        return counts

    def summary(self) -> List[Dict[str, str | None]]:
        """Return the recorded warnings as plain dictionaries for reports."""
        return [
            {
                "category": warning.category,
                "message": warning.message,
                "entry_id": warning.entry_id,
            }
            for warning in self.warnings
        ]
