from .run_config import RunConfig, read_config_file
from .cli import ExitSpectraRunner, build_parser, command_line_runner, main, run
