"""
Command-line surface
Every command reads a job file, lets flags override its scalar fields and
hands the job to the runner
"""
import logging

import click

from config import Config
from errors import CantorError
from commands.jobspec import COMMANDS, MODES, apply_overrides, parse_spec
from commands.output import write_report
from commands.runner import run

logger = logging.getLogger(__name__)

HELP = {
    'attractor': "First-generation attractor: hull, outer cover and constants.",
    'second-gen': "Second-generation attractor K_Phi as a finite union of intervals.",
    'sum-check': "Certify that a sum of Cantor sets is an interval, with a grid cross-check.",
    'ulbd-check': "Lower bound of the dissection ratios, with exhaustiveness.",
    'gaps': "List the gaps of a construction down to the given depth.",
    'neps': "Open intervals N_eps in the complement of K_Phi.",
    'oracle-compare': "Hausdorff distance between K_Phi and the grid oracle.",
    'plot': "Second-generation attractor with an SVG plot of its lanes.",
    'union': "Union construction of two separated Cantor sets.",
}


def _job_command(name):
    @click.command(name=name, help=HELP[name])
    @click.option('--spec', 'spec_path', required=True,
                  type=click.Path(exists=True, dir_okay=False), help="JSON job file.")
    @click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None,
                  help="Directory for the artifacts.")
    @click.option('--alpha', default=None, help="Contraction ratio, e.g. 9/20 or 0.45.")
    @click.option('--depth', type=int, default=None, help="Cover depth.")
    @click.option('--tol', default=None, help="Tolerance.")
    @click.option('--mode', type=click.Choice(MODES), default=None)
    @click.option('--svg', is_flag=True, default=False, help="Also write plot.svg.")
    @click.pass_context
    def command(ctx, spec_path, out_dir, alpha, depth, tol, mode, svg):
        out_dir = out_dir or Config.OUTPUT_DIR
        try:
            with open(spec_path) as f:
                job = parse_spec(f.read(), command=name)
            job = apply_overrides(job, alpha=alpha, depth=depth, tol=tol, mode=mode, svg=svg)
        except CantorError as e:
            logger.error("invalid job %s: %s", spec_path, e.message)
            write_report(out_dir, {**e.to_payload(), 'command': name})
            click.echo(f"error: {e.message}", err=True)
            ctx.exit(e.exit_code)
        ctx.exit(run(job, out_dir, echo=click.echo))

    return command


def register_commands(group):
    for name in COMMANDS:
        group.add_command(_job_command(name))
    return group
