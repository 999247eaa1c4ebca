"""
Main CLI entry point for rankin-bookkeeper.
"""

import logging

import click

from . import __version__
from .commands.divisor_cmd import divisor_cmd
from .commands.enumerate_cmd import enumerate_cmd
from .commands.report_cmd import report_cmd
from .commands.verify_cmd import verify_cmd

LOG_LEVELS = {0: logging.WARNING, 1: logging.INFO}


@click.group()
@click.version_option(version=__version__)
@click.option('-v', '--verbose', count=True, help='Log progress (-v for info, -vv for debug)')
@click.pass_context
def cli(ctx, verbose):
    """
    Rankin Bookkeeper - exact bookkeeping for the Rankin-Selberg period on GL(n) x GL(n+1).

    Enumerate inducing data, compute singularity divisors and run the verification suites.
    """
    ctx.ensure_object(dict)
    ctx.obj['verbose'] = verbose
    logging.basicConfig(level=LOG_LEVELS.get(verbose, logging.DEBUG),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


# Add commands
cli.add_command(enumerate_cmd, name='enumerate')
cli.add_command(verify_cmd, name='verify')
cli.add_command(divisor_cmd, name='divisor')
cli.add_command(report_cmd, name='report')


def main():
    """Entry point for the CLI application."""
    cli(prog_name="rankin")


if __name__ == '__main__':
    main()
