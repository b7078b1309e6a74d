# Command-line package
from .commands import cmd_check, cmd_plot, cmd_solve, cmd_sweep, cmd_verify

__all__ = ['cmd_check', 'cmd_plot', 'cmd_solve', 'cmd_sweep', 'cmd_verify']
