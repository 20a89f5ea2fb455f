"""
Utility modules for the coalescing-flow toolkit
"""

from .logger import setup_logging, run_log, get_logger, LoggerMixin

__all__ = ['setup_logging', 'run_log', 'get_logger', 'LoggerMixin']
