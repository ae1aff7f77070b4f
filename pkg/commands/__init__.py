from .jobspec import JobSpec, apply_overrides, parse_spec
from .output import format_csv, format_intervals, read_intervals, render_svg
from .runner import run
from .cli import register_commands
