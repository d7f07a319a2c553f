"""Boundary closures for one quarter transport step on [0, 1].

Transport updates points 1..N from their two neighbours; each end point
is missing one relation.  At the inflow end (x = 0) the missing relation
fixes ``w`` at the time midpoint of the quarter step.  At the outflow end
(x = 1) one of three strategies is used:

``exact``      ``w`` at the time midpoint taken from the exact solution;
``dirichlet``  ``y = z - c w`` vanishes at the time midpoint;
``neumann``    ``y`` at N+1 equals ``y`` at N after the step.

The second relation at each end is the outgoing characteristic, which the
lattice shifts exactly.  Formulas assume the linear flux ``f(w) = c w``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .lattice import LatticeState, SchemeConfig
from .problems import ProblemSetup


class Kind(str, enum.Enum):
    PERIODIC = "periodic"
    PHYSICAL = "physical"


class RightStrategy(str, enum.Enum):
    EXACT = "exact"
    DIRICHLET_Y = "dirichlet"
    NEUMANN_Y = "neumann"


@dataclass(frozen=True)
class BoundaryClosure:
    kind: Kind
    right_strategy: Optional[RightStrategy] = None
    setup: Optional[ProblemSetup] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.PHYSICAL:
            if self.setup is None or self.right_strategy is None:
                raise ValueError("a physical closure needs a problem setup and a right strategy")
            object.__setattr__(self, "right_strategy", RightStrategy(self.right_strategy))
            if not self.setup.c > 0:
                raise ValueError("physical closure requires c > 0 (inflow at x = 0)")

    @classmethod
    def periodic(cls) -> "BoundaryClosure":
        return cls(Kind.PERIODIC)

    @classmethod
    def physical(cls, right_strategy, setup: ProblemSetup) -> "BoundaryClosure":
        return cls(Kind.PHYSICAL, RightStrategy(right_strategy), setup)

    @classmethod
    def from_name(cls, name: str, setup: ProblemSetup) -> "BoundaryClosure":
        """``periodic`` or one of the right-strategy names."""
        if name == Kind.PERIODIC.value:
            return cls.periodic()
        return cls.physical(name, setup)

    @property
    def is_periodic(self) -> bool:
        return self.kind is Kind.PERIODIC

    @property
    def label(self) -> str:
        return "periodic" if self.is_periodic else self.right_strategy.value


def _midpoint_time(t_sub: float, cfg: SchemeConfig) -> float:
    return t_sub + cfg.dt / 8.0


def close_left(state_before: LatticeState, t_sub: float, cfg: SchemeConfig,
               setup: ProblemSetup) -> Tuple[float, float]:
    """Inflow: ``(w0_old + w0_new)/2 = v(-c t_mid)``; z0 from the left-going characteristic."""
    w, z = state_before.w, state_before.z
    lam = cfg.lam
    inflow = float(setup.v(-setup.c * _midpoint_time(t_sub, cfg)))
    w0 = 2.0 * inflow - w[0]
    z0 = lam * w0 + (z[1] - lam * w[1])
    return w0, z0


def close_right_exact(state_before: LatticeState, t_sub: float, cfg: SchemeConfig,
                      setup: ProblemSetup) -> Tuple[float, float]:
    w, z = state_before.w, state_before.z
    lam = cfg.lam
    target = float(setup.v(1.0 - setup.c * _midpoint_time(t_sub, cfg)))
    wr = 2.0 * target - w[-1]
    zr = (z[-2] + lam * w[-2]) - lam * wr
    return wr, zr


def close_right_dirichlet_y(state_before: LatticeState, cfg: SchemeConfig,
                            setup: ProblemSetup) -> Tuple[float, float]:
    w, z = state_before.w, state_before.z
    lam, c = cfg.lam, setup.c
    wr = (lam * w[-2] - c * w[-1] + z[-2] + z[-1]) / (lam + c)
    zr = (z[-2] + lam * w[-2]) - lam * wr
    return wr, zr


def close_right_neumann_y(state_before: LatticeState, cfg: SchemeConfig,
                          setup: ProblemSetup) -> Tuple[float, float]:
    w, z = state_before.w, state_before.z
    if w.shape[0] < 4:
        raise ValueError("Neumann closure needs N >= 2")
    lam, c = cfg.lam, setup.c
    w_nm1, w_n, w_np1 = w[-3], w[-2], w[-1]
    z_nm1, z_n, z_np1 = z[-3], z[-2], z[-1]
    num = (2.0 * lam * w_n + (lam + c) * w_np1 - (lam - c) * w_nm1
           + 2.0 * z_n - (lam + c) / lam * z_np1 - (lam - c) / lam * z_nm1)
    wr = num / (2.0 * (lam + c))
    zr = (z_n + lam * w_n) - lam * wr
    return wr, zr


def close_right(state_before: LatticeState, t_sub: float, cfg: SchemeConfig,
                closure: BoundaryClosure) -> Tuple[float, float]:
    strategy, setup = closure.right_strategy, closure.setup
    if strategy is RightStrategy.EXACT:
        return close_right_exact(state_before, t_sub, cfg, setup)
    if strategy is RightStrategy.DIRICHLET_Y:
        return close_right_dirichlet_y(state_before, cfg, setup)
    return close_right_neumann_y(state_before, cfg, setup)


def apply_closure(closure: BoundaryClosure, state_before: LatticeState, cfg: SchemeConfig,
                  new_w: np.ndarray, new_z: np.ndarray) -> None:
    """Fill the two end points of ``new_w``/``new_z`` in place."""
    t_sub = state_before.sub_time
    new_w[0], new_z[0] = close_left(state_before, t_sub, cfg, closure.setup)
    new_w[-1], new_z[-1] = close_right(state_before, t_sub, cfg, closure)
