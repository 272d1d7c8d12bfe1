from __future__ import annotations

from typing import TYPE_CHECKING, Dict, List, Type

from exit_spectra.configs import (
    configure_logging,
    DEBUG,
)
from exit_spectra.enums import SurfaceTypes

if TYPE_CHECKING:
    from exit_spectra.strategies import SurfaceGeneratorStrategy
    from exit_spectra.utils import WarningManager


class SurfaceGeneratorFactory:
    """Registry of the built-in parametric surface generators.

    Generators register with :meth:`register_generator` and are retrieved by
    :class:`~exit_spectra.enums.SurfaceTypes`.

    Attributes:
        _generators (Dict[SurfaceTypes, Type[SurfaceGeneratorStrategy]]): Surface type -> generator class.

    Usage:
    - Add a generator: decorate the class with
      ``@SurfaceGeneratorFactory.register_generator(SurfaceTypes.NEW)``
      and add the member to ``SurfaceTypes``.
    - Get a generator: ``SurfaceGeneratorFactory.get_generator(SurfaceTypes.DISK)``.
    """

    _generators: Dict[SurfaceTypes, Type["SurfaceGeneratorStrategy"]] = {}

    def __init__(self):
        self.logger = configure_logging(
            module_name=__name__,
            log_file_name="strategy_factory",
            log_level=DEBUG,
        )

    @classmethod
    def register_generator(cls, *surface_types: SurfaceTypes):
        """Register a generator class for one or more surface types.

        Args:
            *surface_types (SurfaceTypes): Types the class generates.

        Returns:
            function: A decorator that registers the class.
        """

        def decorator(generator_class):
            for surface_type in surface_types:
                cls._generators[surface_type] = generator_class
            return generator_class

        return decorator

    @classmethod
    def get_generator(
        cls,
        surface_type: SurfaceTypes,
        warning_manager: WarningManager | None = None,
    ) -> SurfaceGeneratorStrategy:
        """Instantiate the generator registered for ``surface_type``.

        Raises:
            ValueError: If no generator is registered for the type.
        """
        # Generators register themselves on import.
        import exit_spectra.strategies  # noqa: F401

        generator_class = cls._generators.get(surface_type)
        if not generator_class:
            raise ValueError(f"No generator found for surface type: {surface_type}")
        return generator_class(warning_manager)

    @classmethod
    def available(cls) -> List[SurfaceTypes]:
        import exit_spectra.strategies  # noqa: F401

        return sorted(cls._generators, key=lambda t: t.value)
