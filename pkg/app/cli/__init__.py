"""
Command-Line Interface
argparse front end over the services; artifacts are written atomically
"""
from app.cli.commands import COMMANDS
from app.cli.parser import COMMAND_NAMES, build_parser, resolve_config

__all__ = ["COMMANDS", "COMMAND_NAMES", "build_parser", "resolve_config"]
