"""
Shared fixtures for the test suite
"""

import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.flow.config import SimConfig
from src.kernels.context import KernelContext


@pytest.fixture(scope="session")
def ctx1():
    """Kernel context at t = 1 with the default tolerances"""
    return KernelContext.adaptive(1.0)


@pytest.fixture
def small_sim():
    """A short realization: window [0, 2], one checkpoint, 100 steps"""
    return SimConfig(window=(0.0, 2.0), checkpoints=(0.25,), grid_spacing=0.025, dt=0.0025, seed=11)


@pytest.fixture
def no_threads_env(monkeypatch):
    monkeypatch.delenv("COALESCE_THREADS", raising=False)
