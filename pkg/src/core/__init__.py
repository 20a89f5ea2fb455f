"""
Core configuration and error types
"""

from .config import SystemConfig
from . import exceptions

__all__ = ['SystemConfig', 'exceptions']
