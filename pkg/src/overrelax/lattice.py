"""Kinetic lattice state and scheme configuration."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Scheme(str, enum.Enum):
    S1 = "s1"
    S2 = "s2"


class Relaxation(str, enum.Enum):
    INSTANT = "instant"   # over-relaxation z -> 2 f(w) - z
    OVER = "over"         # Crank-Nicolson damping (2eps - dt)/(2eps + dt)
    EXACT = "exact"       # exponential damping exp(-dt/eps)
    PROJECT = "project"   # z -> f(w)


@dataclass(frozen=True)
class LatticeState:
    """Grid values of ``w`` and ``z`` on points 0..N+1 plus the lattice clock.

    The clock counts quarter steps; ``sub_time`` is always an integer
    multiple of ``quarter_dt``.
    """
    w: np.ndarray
    z: np.ndarray
    quarters: int = 0
    quarter_dt: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        z = np.asarray(self.z, dtype=np.float64)
        if w.ndim != 1 or w.shape != z.shape:
            raise ValueError(f"w and z must be 1-D arrays of equal length, got {w.shape} and {z.shape}")
        if w.shape[0] < 4:
            raise ValueError("lattice needs N >= 2 interior points")
        if self.quarters < 0:
            raise ValueError("quarter count must be non-negative")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "z", z)

    @property
    def n_interior(self) -> int:
        return self.w.shape[0] - 2

    @property
    def sub_time(self) -> float:
        return self.quarters * self.quarter_dt

    def replace(self, w=None, z=None, advance: int = 0) -> "LatticeState":
        return LatticeState(
            w=self.w if w is None else w,
            z=self.z if z is None else z,
            quarters=self.quarters + advance,
            quarter_dt=self.quarter_dt,
        )

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.w)) and np.all(np.isfinite(self.z)))


@dataclass(frozen=True)
class SchemeConfig:
    """Lattice parameters.  ``dt`` is locked to ``4 dx / lam``."""
    n_interior: int
    lam: float = 2.0
    epsilon: float = 0.0
    scheme: Scheme = Scheme.S2
    relaxation: Relaxation = Relaxation.INSTANT
    dx: float = field(init=False)
    dt: float = field(init=False)

    def __post_init__(self):
        if self.n_interior < 2:
            raise ValueError(f"need N >= 2 interior points, got {self.n_interior}")
        if not self.lam > 0:
            raise ValueError(f"kinetic speed must be positive, got {self.lam}")
        if self.epsilon < 0:
            raise ValueError(f"relaxation time must be non-negative, got {self.epsilon}")
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "relaxation", Relaxation(self.relaxation))
        dx = 1.0 / (self.n_interior + 1)
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dt", 4.0 * dx / self.lam)

    @classmethod
    def from_exponent(cls, k: int, **kwargs) -> "SchemeConfig":
        """Configuration with ``dx = 2**-k``."""
        return cls(n_interior=2 ** k - 1, **kwargs)
