"""
cantor-forge entry point
    python app.py second-gen --spec job.json --out out --svg
"""
import click

from config import configure_logging
from commands import register_commands


@click.group(name='cantor-forge')
@click.option('-v', '--verbose', count=True, help="-v for progress, -vv for per-level detail.")
def cli(verbose):
    """Cantor sets, their sums and second-generation attractors."""
    level = {0: None, 1: 'INFO'}.get(verbose, 'DEBUG')
    configure_logging(level)


register_commands(cli)


if __name__ == '__main__':
    cli()
