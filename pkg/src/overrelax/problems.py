"""Scalar transport test problem: linear flux, Gaussian data, exact solution.

The Gaussian is the decaying bump ``exp(-A (x - alpha - c t)**2)`` with
``A > 0``.  It is defined on the whole real line, so inflow values
``v(-c t)`` need no extension rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .lattice import LatticeState, SchemeConfig

# image copies summed for the periodised profile; exp(-A L^2) is negligible beyond
_PERIODIC_IMAGES = 3


@dataclass(frozen=True)
class FluxModel:
    """Scalar flux ``f`` together with its exact derivative."""
    f: Callable[[np.ndarray], np.ndarray]
    fprime: Callable[[np.ndarray], np.ndarray]
    descriptor: str = "flux"


def linear_flux(c: float) -> FluxModel:
    c = float(c)
    return FluxModel(
        f=lambda u: c * u,
        fprime=lambda u: np.full_like(np.asarray(u, dtype=float), c),
        descriptor=f"linear(c={c:g})",
    )


@dataclass(frozen=True)
class ProblemSetup:
    """Transport test case on [0, 1].

    ``A`` is the Gaussian sharpness, ``alpha`` the initial centre of ``w``,
    ``B`` and ``beta`` the amplitude and centre of the initial flux error
    ``y = z - c w``.  Defaults are the Gaussian boundary test.
    """
    c: float = 1.0
    A: float = 80.0
    alpha: float = 0.0
    B: float = 0.0
    beta: float = 0.0
    t_max: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"transport speed must be positive, got c={self.c}")
        if not self.A > 0:
            raise ValueError(f"Gaussian sharpness must be positive, got A={self.A}")
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")

    @property
    def flux(self) -> FluxModel:
        return linear_flux(self.c)

    def v(self, x, period: Optional[float] = None):
        """Initial/inflow profile, optionally periodised with the given period."""
        return _bump(x, self.alpha, self.A, period)

    def y0(self, x, period: Optional[float] = None):
        if self.B == 0:
            return np.zeros_like(np.asarray(x, dtype=float))
        return self.B * _bump(x, self.beta, self.A, period)


def _bump(x, centre, A, period):
    x = np.asarray(x, dtype=float)
    if period is None:
        return np.exp(-A * (x - centre) ** 2)
    # nearest-image distance, then neighbouring images
    d = np.mod(x - centre + 0.5 * period, period) - 0.5 * period
    total = np.zeros_like(d)
    for k in range(-_PERIODIC_IMAGES, _PERIODIC_IMAGES + 1):
        total = total + np.exp(-A * (d - k * period) ** 2)
    return total


def exact_solution(setup: ProblemSetup, x, t, period: Optional[float] = None):
    """``u(x, t) = v(x - c t)``."""
    x = np.asarray(x, dtype=float)
    return setup.v(x - setup.c * t, period)


def grid(n_interior: int) -> np.ndarray:
    """Points ``x_i = i dx`` for i = 0..N+1 with ``dx = 1/(N+1)``."""
    dx = 1.0 / (n_interior + 1)
    x = np.arange(n_interior + 2, dtype=float) * dx
    x[-1] = 1.0
    return x


def lattice_period(n_interior: int) -> float:
    """Length of the periodic lattice: N+2 cells of width dx."""
    return (n_interior + 2) / (n_interior + 1)


def initial_state(setup: ProblemSetup, cfg: SchemeConfig, periodic: bool = False) -> LatticeState:
    """Sampled equilibrium data plus the optional flux disequilibrium.

    With ``periodic=True`` the profiles are the periodic images on the
    ``N+2``-point ring, so the data are smooth across the wrap.
    """
    x = grid(cfg.n_interior)
    period = lattice_period(cfg.n_interior) if periodic else None
    w = setup.v(x, period)
    z = setup.c * w + setup.y0(x, period)
    return LatticeState(w=w, z=z, quarters=0, quarter_dt=cfg.dt / 4.0)
