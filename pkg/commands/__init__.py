"""
Commands package - every CLI subcommand group
"""

from .absorb import absorb, factor
from .graphs import gen, solve, verify_extremal
from .structure import diamond, reduce_command, upsilon_command
from .tile import frac, frac_vs_int, sweep, tile

COMMANDS = [gen, solve, tile, frac, reduce_command, upsilon_command, diamond, absorb, factor, verify_extremal, sweep, frac_vs_int]


def register_commands(group):
    for command in COMMANDS:
        group.add_command(command)


__all__ = ["COMMANDS", "register_commands"]
