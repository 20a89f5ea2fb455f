"""
1-periodic test functions used as integrands against the point measure.

Every function is evaluated by reducing its argument mod 1, so f(x + 1) = f(x)
holds by construction.
"""

from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ConfigError
from .quadrature import gauss_legendre

_KINDS = ("trig", "constant", "hat", "table")


@dataclass(frozen=True)
class PeriodicFunction:
    """
    A member of the class of 1-periodic functions square integrable on [0, 1].

    Representations:
        trig:     scale * cos(2πku) or scale * sin(2πku)
        constant: scale
        hat:      C¹ bump supported in [ε, 1-ε]; the zero-mean variant is
                  sin²(πy)cos(πy) with y the rescaled position in the support
        table:    piecewise-linear interpolation of values on a uniform grid
    """
    kind: str
    scale: float = 1.0
    frequency: int = 0
    phase: str = "cos"
    support_margin: float = 0.0
    zero_mean: bool = False
    table: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigError(f"unknown periodic function kind {self.kind!r}; expected one of {_KINDS}")
        if not 0.0 <= self.support_margin < 0.5:
            raise ConfigError(f"support_margin must lie in [0, 1/2), got {self.support_margin}")
        if self.kind == "trig" and self.phase not in ("cos", "sin"):
            raise ConfigError(f"trig phase must be 'cos' or 'sin', got {self.phase!r}")
        if self.kind == "table":
            if len(self.table) < 2:
                raise ConfigError("table needs at least two values")
            if self.table[0] != self.table[-1]:
                raise ConfigError("table must be periodic: first and last values must coincide")

    # -- constructors -----------------------------------------------------

    @classmethod
    def trig(cls, k: int, phase: str = "cos", scale: float = 1.0) -> 'PeriodicFunction':
        return cls(kind="trig", scale=scale, frequency=int(k), phase=phase,
                   zero_mean=(k != 0 or phase == "sin"))

    @classmethod
    def constant(cls, value: float = 1.0) -> 'PeriodicFunction':
        return cls(kind="constant", scale=value, zero_mean=(value == 0.0))

    @classmethod
    def hat(
        cls,
        margin: float,
        mass: Optional[float] = None,
        zero_mean: bool = False,
        scale: float = 1.0,
    ) -> 'PeriodicFunction':
        """C¹ bump on [margin, 1 - margin]; ``mass`` fixes ∫f (plain variant only)"""
        if mass is not None:
            if zero_mean:
                raise ConfigError("a zero-mean hat cannot carry a prescribed mass")
            scale = mass / (0.5 * (1.0 - 2.0 * margin))
        return cls(kind="hat", scale=scale, support_margin=margin, zero_mean=zero_mean)

    @classmethod
    def from_table(cls, values: Sequence[float], zero_mean: bool = False) -> 'PeriodicFunction':
        return cls(kind="table", table=tuple(float(v) for v in values), zero_mean=zero_mean)

    @classmethod
    def from_spec(cls, spec: Dict[str, Any]) -> 'PeriodicFunction':
        """Build from an experiment-file entry such as {"kind": "trig", "k": 1}"""
        spec = dict(spec)
        kind = spec.pop("kind", None)
        scale = float(spec.pop("scale", 1.0))
        try:
            if kind == "trig":
                fn = cls.trig(int(spec.pop("k")), spec.pop("phase", "cos"), scale)
            elif kind == "constant":
                fn = cls.constant(float(spec.pop("value", 1.0)) * scale)
            elif kind == "hat":
                fn = cls.hat(float(spec.pop("margin")), spec.pop("mass", None),
                             bool(spec.pop("zero_mean", False)), scale)
            elif kind == "table":
                fn = cls.from_table(spec.pop("values"), bool(spec.pop("zero_mean", False)))
                fn = fn.scaled(scale)
            else:
                raise ConfigError(f"unknown periodic function kind {kind!r}")
        except KeyError as e:
            raise ConfigError(f"periodic function spec {kind!r} is missing field {e}") from e
        if spec:
            raise ConfigError(f"unexpected fields in periodic function spec: {sorted(spec)}")
        return fn

    def to_spec(self) -> Dict[str, Any]:
        if self.kind == "trig":
            return {"kind": "trig", "k": self.frequency, "phase": self.phase, "scale": self.scale}
        if self.kind == "constant":
            return {"kind": "constant", "value": self.scale}
        if self.kind == "hat":
            return {"kind": "hat", "margin": self.support_margin,
                    "zero_mean": self.zero_mean, "scale": self.scale}
        return {"kind": "table", "values": list(self.table),
                "zero_mean": self.zero_mean, "scale": self.scale}

    # -- algebra ------------------------------------------------------------

    def scaled(self, factor: float) -> 'PeriodicFunction':
        new_scale = self.scale * factor
        zero_mean = self.zero_mean or (self.kind == "constant" and new_scale == 0.0)
        return replace(self, scale=new_scale, zero_mean=zero_mean)

    def __neg__(self) -> 'PeriodicFunction':
        return self.scaled(-1.0)

    @property
    def label(self) -> str:
        if self.kind == "trig":
            body = f"{self.phase}(2π·{self.frequency}u)"
        elif self.kind == "constant":
            return f"{self.scale:g}"
        elif self.kind == "hat":
            body = f"{'dipole' if self.zero_mean else 'hat'}({self.support_margin:g})"
        else:
            body = f"table[{len(self.table)}]"
        return body if self.scale == 1.0 else f"{self.scale:g}·{body}"

    # -- evaluation -----------------------------------------------------------

    def __call__(self, x) -> np.ndarray:
        y = np.mod(np.asarray(x, dtype=float), 1.0)
        if self.kind == "trig":
            arg = 2.0 * np.pi * self.frequency * y
            base = np.cos(arg) if self.phase == "cos" else np.sin(arg)
        elif self.kind == "constant":
            base = np.ones_like(y)
        elif self.kind == "hat":
            eps = self.support_margin
            z = (y - eps) / (1.0 - 2.0 * eps)
            inside = (z >= 0.0) & (z <= 1.0)
            bump = np.sin(np.pi * z) ** 2
            if self.zero_mean:
                bump = bump * np.cos(np.pi * z)
            base = np.where(inside, bump, 0.0)
        else:
            grid = np.linspace(0.0, 1.0, len(self.table))
            base = np.interp(y, grid, np.asarray(self.table))
        return self.scale * base

    def breakpoints(self) -> Tuple[float, ...]:
        """Points in (0, 1) where smoothness may fail"""
        if self.kind == "hat":
            return (self.support_margin, 1.0 - self.support_margin)
        if self.kind == "table":
            return tuple(np.linspace(0.0, 1.0, len(self.table))[1:-1])
        return ()

    def integral(self, n: int = 64) -> float:
        """∫_0^1 f by panel-aligned Gauss-Legendre"""
        nodes, weights = gauss_legendre(n, breakpoints=self.breakpoints())
        return float(np.dot(weights, self(nodes)))

    def l2_inner(self, other: 'PeriodicFunction', n: int = 64) -> float:
        """∫_0^1 f h"""
        nodes, weights = gauss_legendre(n, breakpoints=self.breakpoints() + other.breakpoints())
        return float(np.dot(weights, self(nodes) * other(nodes)))

    def validate(self, abs_tol: float, n: int = 64):
        """Check the declared flags against quadrature"""
        if self.zero_mean:
            mean = self.integral(n)
            if abs(mean) > abs_tol:
                raise ConfigError(f"{self.label} is flagged zero_mean but ∫f = {mean:.3e} > {abs_tol:g}")
        if self.support_margin > 0.0:
            eps = self.support_margin
            outside = np.concatenate([np.linspace(0.0, eps, 33)[:-1], np.linspace(1.0 - eps, 1.0, 33)[1:]])
            if np.any(self(outside) != 0.0):
                raise ConfigError(f"{self.label} does not vanish outside [{eps:g}, {1 - eps:g}]")


@dataclass(frozen=True)
class SeparableFunction2:
    """
    Symmetric function on [0,1]², 1-periodic in each variable:

        f(x, y) = Σ_j w_j · ½[f_j(x) h_j(y) + f_j(y) h_j(x)]
    """
    terms: Tuple[Tuple[float, PeriodicFunction, PeriodicFunction], ...]

    @classmethod
    def product(cls, f: PeriodicFunction, h: Optional[PeriodicFunction] = None,
                weight: float = 1.0) -> 'SeparableFunction2':
        return cls(((float(weight), f, h if h is not None else f),))

    @classmethod
    def zero(cls) -> 'SeparableFunction2':
        return cls(())

    @classmethod
    def from_spec(cls, spec: Dict[str, Any]) -> 'SeparableFunction2':
        """{"terms": [{"weight": w, "x": {...}, "y": {...}}, ...]} or a single {"x": .., "y": ..}"""
        entries = spec.get("terms", [spec] if "x" in spec else [])
        terms = []
        for entry in entries:
            unknown = sorted(set(entry) - {"weight", "x", "y"})
            if unknown or "x" not in entry:
                raise ConfigError(f"bad two-variable term {entry}: needs 'x' (and optional 'y', 'weight')")
            f = PeriodicFunction.from_spec(entry["x"])
            h = PeriodicFunction.from_spec(entry.get("y", entry["x"]))
            terms.append((float(entry.get("weight", 1.0)), f, h))
        return cls(tuple(terms))

    def to_spec(self) -> Dict[str, Any]:
        return {"terms": [{"weight": w, "x": f.to_spec(), "y": h.to_spec()} for w, f, h in self.terms]}

    @property
    def label(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{w:g}·{f.label}⊗{h.label}" for w, f, h in self.terms)

    @property
    def zero_marginals(self) -> bool:
        return all(f.zero_mean and h.zero_mean for _, f, h in self.terms)

    def __call__(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for w, f, h in self.terms:
            out = out + 0.5 * w * (f(x) * h(y) + f(y) * h(x))
        return out

    def diagonal(self, x) -> np.ndarray:
        """x ↦ f(x, x)"""
        return self(x, x)

    def diagonal_integral(self, n: int = 64) -> float:
        """∫_0^1 f(x, x) dx"""
        points = sum((f.breakpoints() + h.breakpoints() for _, f, h in self.terms), ())
        nodes, weights = gauss_legendre(n, breakpoints=points)
        return float(np.dot(weights, self.diagonal(nodes)))
