from densig.cli.parser import StateProgram, parse_state_spec
from densig.cli.runner import Report, render_report, run

__all__ = ["StateProgram", "Report", "parse_state_spec", "run", "render_report"]
