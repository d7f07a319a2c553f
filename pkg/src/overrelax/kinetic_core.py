"""Split evolution operators of the kinetic relaxation scheme.

Transport is the exact solution of the free linear system on the lattice
(``dt = 4 dx / lam`` makes a quarter step a one-cell shift of the
characteristic variables ``z +- lam w``).  Relaxation acts pointwise on
every grid point, boundary points included.  All operators return a new
state and leave their input untouched.

Composition order follows operator notation: the rightmost factor is
applied first.
"""
from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .boundary import BoundaryClosure, apply_closure
from .lattice import LatticeState, Relaxation, Scheme, SchemeConfig

__all__ = [
    "LatticeState", "SchemeConfig", "Scheme", "Relaxation",
    "transport_quarter", "relax_instant", "relax_over", "relax_exact",
    "relax_project", "step_s1", "step_s2", "step", "reversibility_defect",
]


def _shift(state: LatticeState, lam: float, closure: BoundaryClosure, cfg: SchemeConfig,
           advance: int) -> LatticeState:
    new_w = np.empty_like(state.w)
    new_z = np.empty_like(state.z)
    if closure.is_periodic:
        _kernels.transport_periodic(state.w, state.z, lam, new_w, new_z)
    else:
        _kernels.transport_interior(state.w, state.z, lam, new_w, new_z)
        apply_closure(closure, state, cfg, new_w, new_z)
    return state.replace(w=new_w, z=new_z, advance=advance)


def transport_quarter(state: LatticeState, cfg: SchemeConfig, closure: BoundaryClosure) -> LatticeState:
    """Advance the free transport by ``dt/4``.

    Interior points use
    ``w_i' = (w_{i-1} + w_{i+1})/2 + (z_{i-1} - z_{i+1})/(2 lam)`` and
    ``z_i' = (z_{i-1} + z_{i+1})/2 + lam (w_{i-1} - w_{i+1})/2``;
    the end points come from ``closure``.
    """
    if state.n_interior != cfg.n_interior:
        raise ValueError(f"state has N={state.n_interior}, config expects N={cfg.n_interior}")
    return _shift(state, cfg.lam, closure, cfg, advance=1)


def relax_instant(state: LatticeState, flux) -> LatticeState:
    """Over-relaxation ``z -> 2 f(w) - z``; its own inverse."""
    return state.replace(z=2.0 * flux.f(state.w) - state.z)


def _damp(state: LatticeState, flux, factor: float) -> LatticeState:
    fw = flux.f(state.w)
    return state.replace(z=fw + factor * (state.z - fw))


def over_factor(epsilon: float, dt: float) -> float:
    return (2.0 * epsilon - dt) / (2.0 * epsilon + dt)


def relax_over(state: LatticeState, flux, epsilon: float, dt: float) -> LatticeState:
    """Crank-Nicolson relaxation over ``dt``; ``epsilon = 0`` is :func:`relax_instant`."""
    if epsilon < 0:
        raise ValueError(f"relaxation time must be non-negative, got {epsilon}")
    if not 2.0 * epsilon + dt > 0:
        raise ValueError("relax_over needs 2*epsilon + dt > 0")
    if epsilon == 0:
        return relax_instant(state, flux)
    return _damp(state, flux, over_factor(epsilon, dt))


def relax_exact(state: LatticeState, flux, epsilon: float, dt: float) -> LatticeState:
    """Exact solution of ``dz/dt = (f(w) - z)/epsilon`` over ``dt``."""
    if not epsilon > 0:
        raise ValueError("exact relaxation needs epsilon > 0; use relax_project for the limit")
    if dt == 0:
        return state.replace()
    return _damp(state, flux, math.exp(-dt / epsilon))


def relax_project(state: LatticeState, flux) -> LatticeState:
    """Projection onto equilibrium, ``z -> f(w)``."""
    return state.replace(z=np.array(flux.f(state.w), dtype=np.float64))


def _s2_relax(cfg: SchemeConfig, flux):
    if cfg.relaxation is Relaxation.INSTANT:
        return lambda s: relax_instant(s, flux)
    if cfg.relaxation is Relaxation.OVER:
        # each of the two collisions covers half the step
        return lambda s: relax_over(s, flux, cfg.epsilon, cfg.dt / 2.0)
    raise ValueError(f"S2 uses instant or over relaxation, not {cfg.relaxation.value}")


def step_s2(state: LatticeState, cfg: SchemeConfig, flux, closure: BoundaryClosure) -> LatticeState:
    """``T(dt/4) R T(dt/2) R T(dt/4)`` with ``T(dt/2)`` taken as two quarter steps."""
    relax = _s2_relax(cfg, flux)
    s = transport_quarter(state, cfg, closure)
    s = relax(s)
    s = transport_quarter(s, cfg, closure)
    s = transport_quarter(s, cfg, closure)
    s = relax(s)
    return transport_quarter(s, cfg, closure)


def step_s1(state: LatticeState, cfg: SchemeConfig, flux, closure: BoundaryClosure) -> LatticeState:
    """Lie splitting: full transport ``T(dt)`` then one relaxation over ``dt``."""
    if cfg.relaxation is Relaxation.EXACT:
        relax = lambda s: relax_exact(s, flux, cfg.epsilon, cfg.dt)  # noqa: E731
    elif cfg.relaxation is Relaxation.PROJECT:
        relax = lambda s: relax_project(s, flux)  # noqa: E731
    else:
        raise ValueError(f"S1 uses exact or project relaxation, not {cfg.relaxation.value}")
    s = state
    for _ in range(4):
        s = transport_quarter(s, cfg, closure)
    return relax(s)


def step(state: LatticeState, cfg: SchemeConfig, flux, closure: BoundaryClosure) -> LatticeState:
    if cfg.scheme is Scheme.S2:
        return step_s2(state, cfg, flux, closure)
    return step_s1(state, cfg, flux, closure)


def _step_s2_inverse(state: LatticeState, cfg: SchemeConfig, flux) -> LatticeState:
    # T(-dt/4) swaps the shift directions, i.e. lam -> -lam in the quarter formula
    periodic = BoundaryClosure.periodic()
    if cfg.relaxation is Relaxation.INSTANT or cfg.epsilon == 0:
        relax = lambda s: relax_instant(s, flux)  # noqa: E731
    else:
        factor = over_factor(cfg.epsilon, cfg.dt / 2.0)
        if factor == 0:
            raise ValueError("relaxation with factor 0 is not invertible")
        relax = lambda s: _damp(s, flux, 1.0 / factor)  # noqa: E731
    s = _shift(state, -cfg.lam, periodic, cfg, advance=-1)
    s = relax(s)
    s = _shift(s, -cfg.lam, periodic, cfg, advance=-1)
    s = _shift(s, -cfg.lam, periodic, cfg, advance=-1)
    s = relax(s)
    return _shift(s, -cfg.lam, periodic, cfg, advance=-1)


def reversibility_defect(state: LatticeState, cfg: SchemeConfig, flux,
                         closure: BoundaryClosure | None = None) -> float:
    """Max-norm of ``S2(-dt) S2(dt) s - s`` on a periodic lattice."""
    if closure is not None and not closure.is_periodic:
        raise ValueError("reversibility is only defined for the periodic closure")
    if cfg.relaxation not in (Relaxation.INSTANT, Relaxation.OVER):
        raise ValueError("reversibility needs an S2 relaxation (instant or over)")
    periodic = BoundaryClosure.periodic()
    there = step_s2(state, cfg, flux, periodic)
    back = _step_s2_inverse(there, cfg, flux)
    return float(max(np.max(np.abs(back.w - state.w)), np.max(np.abs(back.z - state.z))))
