"""
Orthonormal bases of L2([0, 1]) used to represent the limit field.

Both families start from e_0 = 1 when ``includes_constant`` is set; every other
element has zero mean.
"""

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from ..core.exceptions import ConfigError
from ..kernels.quadrature import gauss_legendre

FAMILIES = ("trigonometric", "haar")
ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True)
class BasisSpec:
    """
    First ``size`` elements of the trigonometric or Haar basis.

    trigonometric: 1, √2 cos 2πx, √2 sin 2πx, √2 cos 4πx, ...
    haar: 1, then ψ_{j,k}(x) = 2^{j/2} ψ(2^j x - k) level by level
    """
    family: str
    size: int
    includes_constant: bool = True
    points_per_panel: int = 16
    _elements: Tuple[Tuple[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        family = self.family.lower()
        if family in ("trig", "fourier"):
            family = "trigonometric"
        if family not in FAMILIES:
            raise ConfigError(f"basis family must be one of {FAMILIES}, got '{self.family}'")
        if self.size < 1:
            raise ConfigError(f"basis size must be positive, got {self.size}")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "_elements", tuple(self._element_ids()))
        gram = self.gram()
        error = float(np.max(np.abs(gram - np.eye(self.size))))
        if error > ORTHONORMAL_TOL:
            raise ConfigError(f"{self.label} is not orthonormal under its quadrature (error {error:.2e})")

    def _element_ids(self) -> List[Tuple[int, int]]:
        """(level, index) per element; (-1, 0) is the constant"""
        ids = [(-1, 0)] if self.includes_constant else []
        if self.family == "trigonometric":
            k = 1
            while len(ids) < self.size:
                ids.append((k, 0))
                if len(ids) < self.size:
                    ids.append((k, 1))
                k += 1
        else:
            level = 0
            while len(ids) < self.size:
                for k in range(2 ** level):
                    if len(ids) == self.size:
                        break
                    ids.append((level, k))
                level += 1
        return ids

    @property
    def label(self) -> str:
        return f"{self.family}-{self.size}"

    @property
    def piecewise_constant(self) -> bool:
        return self.family == "haar"

    @property
    def cells(self) -> int:
        """Dyadic cells on which every Haar element is constant"""
        finest = max((lvl for lvl, _ in self._elements), default=-1)
        return 2 ** (finest + 1)

    def panels(self) -> int:
        if self.piecewise_constant:
            return self.cells
        top = max((lvl for lvl, _ in self._elements), default=0)
        return max(1, 2 * top)

    def quadrature(self) -> Tuple[np.ndarray, np.ndarray]:
        """Composite rule on [0, 1] whose panels align with every jump or oscillation"""
        n_panels = self.panels()
        return gauss_legendre(self.points_per_panel, 0.0, 1.0,
                              breakpoints=np.arange(1, n_panels) / n_panels)

    def evaluate(self, x) -> np.ndarray:
        """Basis values, shape (size,) + x.shape"""
        x = np.asarray(x, dtype=float)
        out = np.empty((self.size,) + x.shape)
        for i, (level, k) in enumerate(self._elements):
            if level < 0:
                out[i] = 1.0
            elif self.family == "trigonometric":
                arg = 2.0 * math.pi * level * x
                out[i] = math.sqrt(2.0) * (np.cos(arg) if k == 0 else np.sin(arg))
            else:
                scaled = (2 ** level) * x - k
                inside = (scaled >= 0.0) & (scaled < 1.0)
                sign = np.where(scaled < 0.5, 1.0, -1.0)
                out[i] = np.where(inside, (2 ** (level / 2)) * sign, 0.0)
        return out

    def cell_values(self) -> np.ndarray:
        """Haar values on each dyadic cell, shape (size, cells)"""
        n = self.cells
        return self.evaluate((np.arange(n) + 0.5) / n)

    def gram(self) -> np.ndarray:
        nodes, weights = self.quadrature()
        values = self.evaluate(nodes)
        return (values * weights) @ values.T
