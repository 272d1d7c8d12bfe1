from dataclasses import dataclass
from typing import Dict, Type

from exit_spectra.configs import (
    configure_logging,
    DEBUG,
)
from exit_spectra.enums import ReportTypes


class ReportFactory:
    """Factory for the report record dataclasses.

    Report dataclasses register themselves with :meth:`register_report`; the
    command line builds records through :meth:`get_report` so every record is
    created the same way and serialised through ``to_dict``.

    Attributes:
        _registry (Dict[str, Type[dataclass]]): Report type value -> dataclass.
        logger (logging.Logger): Logger instance for this class.
    """

    _registry: Dict[str, Type[dataclass]] = {}

    def __init__(self):
        self.logger = configure_logging(
            module_name=__name__,
            log_file_name="dataclass_factory",
            log_level=DEBUG,
        )

    @classmethod
    def register_report(cls, report_type: ReportTypes):
        """Decorator registering a dataclass under ``report_type``.

        Args:
            report_type (ReportTypes): The type of report to register.
        """

        def decorator(data_class: Type):
            cls._registry[report_type.value] = data_class
            return data_class

        return decorator

    @classmethod
    def get_report(cls, report_type: ReportTypes, **init_params):
        """Create a record of the registered dataclass.

        The record is created with its defaults first, then the parameters
        are applied with ``set_params``.

        Args:
            report_type (ReportTypes): The report type to create.
            init_params (dict): Field values.

        Returns:
            AbstractBaseDataClass: The populated record.

        Raises:
            ValueError: If no dataclass is registered for the given type.
        """
        _ensure_registered()
        data_class = cls._registry.get(report_type.value)

        if not data_class:
            raise ValueError(f"No report dataclass registered for type: {report_type}")

        instance = data_class()
        if init_params:
            instance.set_params(init_params)
        return instance

    @classmethod
    def is_registered(cls, report_type: ReportTypes) -> bool:
        """Check if a report type is registered."""
        _ensure_registered()
        return report_type.value in cls._registry


def _ensure_registered() -> None:
    # Registration happens on import of the dataclass module.
    import exit_spectra.dataclass_models  # noqa: F401
