"""
Command-line front-end: kernel evaluation, experiment runs and reports
"""

from .commands import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    KERNEL_QUANTITIES,
    cmd_kernel_eval,
    cmd_report,
    cmd_run,
    kernel_table,
    parse_function,
)
from .manifest import RunManifest, unique_run_dir
from .report import ReportBuilder, histogram_table, load_results

__all__ = [
    'EXIT_FAILED',
    'EXIT_OK',
    'EXIT_USAGE',
    'KERNEL_QUANTITIES',
    'cmd_kernel_eval',
    'cmd_report',
    'cmd_run',
    'kernel_table',
    'parse_function',
    'RunManifest',
    'unique_run_dir',
    'ReportBuilder',
    'histogram_table',
    'load_results',
]
