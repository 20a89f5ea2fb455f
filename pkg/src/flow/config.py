"""
Simulation configuration for the coalescing particle system
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Tuple

from ..core.exceptions import ConfigError

COALESCENCE_MODES = ("bridge", "order-merge")
GRID_FIDELITY = 20.0
MARGIN_FACTOR = 6.0
MAX_DT_FRACTION = 1e-2
DEFAULT_DT_FRACTION = 1e-3


@dataclass(frozen=True)
class SimConfig:
    """
    One realization of the flow started from a grid.

    Particles start at spacing ``grid_spacing`` on
    [window[0] - margin, window[1] + margin]. Point measures are read inside
    ``window`` at each checkpoint.
    """
    window: Tuple[float, float]
    checkpoints: Tuple[float, ...]
    grid_spacing: float = 0.01
    margin: Optional[float] = None
    dt: Optional[float] = None
    seed: int = 0
    coalescence_mode: str = "bridge"
    dt_fraction: float = field(default=DEFAULT_DT_FRACTION, repr=False)

    def __post_init__(self):
        checkpoints = tuple(float(t) for t in self.checkpoints)
        object.__setattr__(self, "checkpoints", checkpoints)
        object.__setattr__(self, "window", (float(self.window[0]), float(self.window[1])))
        if not checkpoints:
            raise ConfigError("at least one checkpoint time is required")
        if any(t <= 0 for t in checkpoints) or list(checkpoints) != sorted(checkpoints):
            raise ConfigError(f"checkpoints must be positive and sorted, got {list(checkpoints)}")
        if self.window[0] > self.window[1]:
            raise ConfigError(f"window {self.window} is empty")
        if self.coalescence_mode not in COALESCENCE_MODES:
            raise ConfigError(f"coalescence_mode must be one of {COALESCENCE_MODES}, got '{self.coalescence_mode}'")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

        t_min, t_max = checkpoints[0], checkpoints[-1]
        if self.margin is None:
            object.__setattr__(self, "margin", MARGIN_FACTOR * math.sqrt(t_max))
        if self.dt is None:
            object.__setattr__(self, "dt", self.dt_fraction * t_min)

        if not self.grid_spacing > 0:
            raise ConfigError(f"grid_spacing must be positive, got {self.grid_spacing}")
        if self.grid_spacing > math.sqrt(t_min) / GRID_FIDELITY:
            raise ConfigError(
                f"grid_spacing δ={self.grid_spacing} violates δ <= √t_min/{GRID_FIDELITY:g} = "
                f"{math.sqrt(t_min) / GRID_FIDELITY:.4g}"
            )
        if self.margin < MARGIN_FACTOR * math.sqrt(t_max) * (1 - 1e-12):
            raise ConfigError(
                f"margin {self.margin} violates margin >= {MARGIN_FACTOR:g}√t_max = "
                f"{MARGIN_FACTOR * math.sqrt(t_max):.4g}"
            )
        if not self.dt > 0 or self.dt > MAX_DT_FRACTION * t_min * (1 + 1e-12):
            raise ConfigError(f"dt={self.dt} violates 0 < dt <= t_min/100 = {MAX_DT_FRACTION * t_min:.4g}")

    @property
    def grid_bounds(self) -> Tuple[float, float]:
        return self.window[0] - self.margin, self.window[1] + self.margin

    @property
    def grid_size(self) -> int:
        lo, hi = self.grid_bounds
        return int(round((hi - lo) / self.grid_spacing)) + 1

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SimConfig':
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigError(f"unknown simulation keys: {unknown}")
        if "window" not in known or "checkpoints" not in known:
            raise ConfigError("simulation config needs 'window' and 'checkpoints'")
        known["window"] = tuple(known["window"])
        known["checkpoints"] = tuple(known["checkpoints"])
        return cls(**known)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["window"] = list(self.window)
        data["checkpoints"] = list(self.checkpoints)
        return data
