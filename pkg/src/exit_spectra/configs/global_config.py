import logging
import os
import warnings
from typing import Any, Dict, cast

from exit_spectra.constants import LOG_DIR_PATH, RELEASE_MODE

LOG_TO_CONSOLE = True
LOG_LEVEL = logging.WARNING if RELEASE_MODE else logging.DEBUG


class ColorFormatter(logging.Formatter):
    """Formatter that colours the level name of console records.

    Attributes:
        COLOR_MAP (Dict[str, str]): ANSI colour prefix per level name.
    """

    COLOR_MAP: Dict[str, str] = {
        "DEBUG": "\033[36m",  # Cyan
        "INFO": "\033[32m",  # Green
        "WARNING": "\033[33m",  # Yellow
        "ERROR": "\033[31m",  # Red
        "CRITICAL": "\033[41m",  # Red background
        "RESET": "\033[0m",
    }

    def format(self, record: logging.LogRecord) -> str:
        """Format the log record, colouring the level for console handlers only.

        Args:
            record (logging.LogRecord): The log record to format.

        Returns:
            str: The formatted record.
        """
        levelname = record.levelname
        for handler in logging.getLogger(record.name).handlers:
            if type(handler) is logging.StreamHandler:
                if levelname in self.COLOR_MAP:
                    record.levelname = f"{self.COLOR_MAP[levelname]}{levelname}{self.COLOR_MAP['RESET']}"
                break
        try:
            return super().format(record)
        finally:
            record.levelname = levelname


# One logger instance per unique module name for the lifetime of the process.
_configured_loggers: Dict[str, logging.Logger] = {}

# Re-exported so modules don't need to import logging just for the levels.
DEBUG = logging.DEBUG
INFO = logging.INFO
WARNING = logging.WARNING
ERROR = logging.ERROR
CRITICAL = logging.CRITICAL

VALID_LOG_LEVELS = {DEBUG, INFO, WARNING, ERROR, CRITICAL}

_console_level = LOG_LEVEL

_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

_config_logger = logging.getLogger(__name__)
_config_logger.setLevel(LOG_LEVEL)
_config_logger.propagate = False

if os.environ.get("READTHEDOCS") != "True":
    if not RELEASE_MODE:
        LOG_DIR_PATH.mkdir(parents=True, exist_ok=True)
        _file_handler = logging.FileHandler(LOG_DIR_PATH / "config.log")
        _file_handler.setLevel(LOG_LEVEL)
        _file_handler.setFormatter(logging.Formatter(_FORMAT))
        _config_logger.addHandler(_file_handler)

    if LOG_TO_CONSOLE:
        _console_handler = logging.StreamHandler()
        _console_handler.setLevel(LOG_LEVEL)
        _console_handler.setFormatter(ColorFormatter(_FORMAT))
        _config_logger.addHandler(_console_handler)


def set_log_to_console(value: bool) -> None:
    """Set the global LOG_TO_CONSOLE flag.

    Loggers created afterwards follow the new value; the config logger's own
    console handlers are removed immediately when the flag is switched off.

    Args:
        value (bool): The new value for LOG_TO_CONSOLE.

    Warning:
        If the value is not a boolean, a warning is issued and the current value remains unchanged.
    """
    global LOG_TO_CONSOLE
    if not isinstance(cast(Any, value), bool):
        warnings.warn(
            f"LOG_TO_CONSOLE must be a boolean value, keeping `{LOG_TO_CONSOLE}`",
            stacklevel=2,
        )
        return

    LOG_TO_CONSOLE = value

    if not LOG_TO_CONSOLE:
        for handler in _config_logger.handlers[:]:
            if isinstance(handler, logging.StreamHandler) and not isinstance(
                handler, logging.FileHandler
            ):
                _config_logger.removeHandler(handler)
                _config_logger.debug(f"Removed console handler: {handler}")


def configure_logging(
    module_name: str,
    log_file_name: str | None = None,
    log_level: int | None = LOG_LEVEL,
    force: bool | None = False,
) -> logging.Logger:
    """Configure a logger for a specific module.

    Acts as a singleton per `module_name`: a second call returns the logger
    configured by the first unless `force` is set.

    Args:
        module_name (str): The module's `__name__`.
        log_file_name (str | None): Log file stem (no extension, no directory).
            Defaults to `module_name`.
        log_level (int | None): A standard logging level. Invalid values fall
            back to LOG_LEVEL with a warning.
        force (bool | None): Rebuild the logger even if one exists.

    Returns:
        logging.Logger: The configured logger for the module.
    """
    if module_name in _configured_loggers and not force:
        return _configured_loggers[module_name]

    if log_file_name is None:
        log_file_name = module_name

    if log_level is None or log_level not in VALID_LOG_LEVELS:
        _config_logger.warning(
            f"Invalid log level provided: `{log_level}`. "
            f"Must be one of: {VALID_LOG_LEVELS}. "
            f"Using default log level: `{LOG_LEVEL}` instead.",
            stacklevel=2,
        )
        log_level = LOG_LEVEL

    _config_logger.debug(f"Creating new logger configuration for {module_name}")

    logger = logging.getLogger(module_name)
    logger.setLevel(log_level)
    # Avoid duplicate lines through the root logger.
    logger.propagate = False
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    if not RELEASE_MODE and os.environ.get("READTHEDOCS") != "True":
        LOG_DIR_PATH.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(LOG_DIR_PATH / f"{log_file_name}.log")
        file_handler.setLevel(log_level)
        file_handler.setFormatter(logging.Formatter(_FORMAT))
        logger.addHandler(file_handler)

    if LOG_TO_CONSOLE:
        console_handler = logging.StreamHandler()
        console_handler.setLevel(max(log_level, _console_level))
        console_handler.setFormatter(ColorFormatter(_FORMAT))
        logger.addHandler(console_handler)

    _configured_loggers[module_name] = logger
    return logger


def set_console_level(log_level: int) -> None:
    """Change the console threshold of every configured logger.

    File handlers keep their own level; only console output is affected.

    Args:
        log_level (int): A standard logging level.

    Raises:
        ValueError: If `log_level` is not a standard logging level.
    """
    global _console_level
    if log_level not in VALID_LOG_LEVELS:
        raise ValueError(f"Invalid log level: {log_level}")
    _console_level = log_level
    for logger in [_config_logger, *_configured_loggers.values()]:
        if log_level < logger.level:
            logger.setLevel(log_level)
        for handler in logger.handlers:
            if isinstance(handler, logging.StreamHandler) and not isinstance(
                handler, logging.FileHandler
            ):
                handler.setLevel(log_level)
