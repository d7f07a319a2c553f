"""Simulation driver, error measurement, convergence sweeps and CSV output."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .boundary import BoundaryClosure
from .kinetic_core import step
from .lattice import LatticeState, SchemeConfig
from .problems import ProblemSetup, exact_solution, grid, initial_state, lattice_period

log = logging.getLogger(__name__)

FLOAT_FMT = "%.17g"


class StabilityError(RuntimeError):
    """Raised when a run produces NaN/Inf; carries the partial report."""

    def __init__(self, message: str, report: "RunReport"):
        super().__init__(message)
        self.report = report


@dataclass
class Snapshot:
    time: float
    w: np.ndarray
    z: np.ndarray


@dataclass
class RunReport:
    final_state: LatticeState
    error: float
    step_count: int
    final_time: float
    max_error: float = float("nan")
    snapshots: List[Snapshot] = field(default_factory=list)
    norms: np.ndarray = field(default_factory=lambda: np.empty(0))
    period: Optional[float] = None


def _period_for(closure: BoundaryClosure, n_interior: int) -> Optional[float]:
    return lattice_period(n_interior) if closure.is_periodic else None


def state_norm(state: LatticeState, dx: float) -> float:
    """Discrete L2 norm of the pair (w, z); inf once the squares overflow."""
    with np.errstate(over="ignore", invalid="ignore"):
        return math.sqrt(dx * float(np.sum(state.w ** 2) + np.sum(state.z ** 2)))


def l2_error(state: LatticeState, setup: ProblemSetup, t: Optional[float] = None,
             period: Optional[float] = None) -> float:
    """``sqrt(dx * sum((w - u)^2 + (z - c u)^2))`` against the exact solution at ``t``."""
    if t is None:
        t = state.sub_time
    n = state.n_interior
    x = grid(n)
    u = exact_solution(setup, x, t, period)
    dx = 1.0 / (n + 1)
    return math.sqrt(dx * float(np.sum((state.w - u) ** 2 + (state.z - setup.c * u) ** 2)))


def max_error(state: LatticeState, setup: ProblemSetup, t: Optional[float] = None,
              period: Optional[float] = None) -> float:
    """Max-norm deviation of ``w`` from the exact solution."""
    if t is None:
        t = state.sub_time
    u = exact_solution(setup, grid(state.n_interior), t, period)
    return float(np.max(np.abs(state.w - u)))


def step_count(t_max: float, dt: float) -> int:
    """Nearest whole number of steps; the achieved time is within dt/2 of t_max."""
    return int(math.floor(t_max / dt + 0.5))


def _snapshot_steps(n_steps: int, count: int) -> set:
    if count <= 0:
        return set()
    if count == 1:
        return {n_steps}
    return {int(round(k)) for k in np.linspace(0, n_steps, count)}


def run_simulation(setup: ProblemSetup, cfg: SchemeConfig, closure: BoundaryClosure,
                   snapshots: int = 0, flux=None, n_steps: Optional[int] = None) -> RunReport:
    """Run ``round(t_max/dt)`` full steps from the sampled initial data.

    ``snapshots`` evenly spaced states (first and last included) are kept.
    ``n_steps`` overrides the step count derived from ``setup.t_max``.
    """
    flux = setup.flux if flux is None else flux
    period = _period_for(closure, cfg.n_interior)
    state = initial_state(setup, cfg, periodic=closure.is_periodic)
    if n_steps is None:
        n_steps = step_count(setup.t_max, cfg.dt)
    keep = _snapshot_steps(n_steps, snapshots)
    shots: List[Snapshot] = []
    norms = np.empty(n_steps + 1)
    norms[0] = state_norm(state, cfg.dx)

    def report(s, k):
        t = s.sub_time
        return RunReport(final_state=s, error=l2_error(s, setup, t, period), step_count=k,
                         final_time=t, max_error=max_error(s, setup, t, period),
                         snapshots=shots, norms=norms[:k + 1], period=period)

    if 0 in keep:
        shots.append(Snapshot(state.sub_time, state.w.copy(), state.z.copy()))
    for k in range(1, n_steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            state = step(state, cfg, flux, closure)
        norms[k] = state_norm(state, cfg.dx)
        if not (state.is_finite() and math.isfinite(norms[k])):
            norms[k] = np.inf
            with np.errstate(over="ignore", invalid="ignore"):
                partial = report(state, k)
            raise StabilityError(f"non-finite state after step {k} (t={state.sub_time:.6g})", partial)
        if k in keep:
            shots.append(Snapshot(state.sub_time, state.w.copy(), state.z.copy()))
    return report(state, n_steps)


@dataclass
class ConvergenceRow:
    n_interior: int
    dx: float
    error: float
    order: Optional[float] = None


@dataclass
class ConvergenceTable:
    rows: List[ConvergenceRow]
    slope: float = float("nan")
    label: str = ""
    failed: bool = False


def observed_orders(dx: Sequence[float], errors: Sequence[float]) -> List[Optional[float]]:
    """Pairwise orders ``log(e_{k-1}/e_k) / log(dx_{k-1}/dx_k)``; None for the first row."""
    out: List[Optional[float]] = [None]
    for k in range(1, len(errors)):
        out.append(math.log(errors[k - 1] / errors[k]) / math.log(dx[k - 1] / dx[k]))
    return out


def least_squares_slope(dx: Sequence[float], errors: Sequence[float]) -> float:
    if len(errors) < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(np.asarray(dx)), np.log(np.asarray(errors)), 1)
    return float(slope)


def build_table(n_interior: Sequence[int], dx: Sequence[float], errors: Sequence[float],
                label: str = "") -> ConvergenceTable:
    order = sorted(range(len(dx)), key=lambda k: -dx[k])
    n_interior = [n_interior[k] for k in order]
    dx = [dx[k] for k in order]
    errors = [errors[k] for k in order]
    orders = observed_orders(dx, errors)
    rows = [ConvergenceRow(n, h, e, p) for n, h, e, p in zip(n_interior, dx, errors, orders)]
    return ConvergenceTable(rows=rows, slope=least_squares_slope(dx, errors), label=label)


def convergence_study(setup: ProblemSetup, cfg_template: SchemeConfig, closure: BoundaryClosure,
                      exponents: Sequence[int] = (5, 6, 7, 8, 9), flux=None) -> ConvergenceTable:
    """L2 errors at ``dx = 2**-k`` for each exponent, with observed orders.

    An unstable resolution ends the sweep; the rows gathered so far are
    returned with ``failed`` set.
    """
    ns, dxs, errs = [], [], []
    failed = False
    for k in sorted(exponents):
        cfg = replace(cfg_template, n_interior=2 ** k - 1)
        try:
            rep = run_simulation(setup, cfg, closure, flux=flux)
        except StabilityError as exc:
            log.warning("sweep aborted at dx=2^-%d: %s", k, exc)
            failed = True
            break
        ns.append(cfg.n_interior)
        dxs.append(cfg.dx)
        errs.append(rep.error)
        log.info("dx=2^-%d N=%d error=%.6e", k, cfg.n_interior, rep.error)
    table = build_table(ns, dxs, errs, label=closure.label)
    table.failed = failed
    return table


def peak_position(x: np.ndarray, values: np.ndarray) -> float:
    """Grid argmax refined by a three-point parabola."""
    values = np.asarray(values)
    i = int(np.argmax(values))
    top = values[i]
    if not np.isfinite(top) or top - np.min(values) <= 1e-12 * max(1.0, abs(top)):
        raise ValueError("flat profile: argmax is ambiguous")
    if np.count_nonzero(values == top) > 1:
        raise ValueError("argmax is not unique")
    if i == 0 or i == len(values) - 1:
        return float(x[i])
    a, b, c = values[i - 1], values[i], values[i + 1]
    denom = a - 2.0 * b + c
    shift = 0.0 if denom == 0 else 0.5 * (a - c) / denom
    return float(x[i] + shift * (x[i + 1] - x[i]))


class WaveFit(NamedTuple):
    v_w: float
    v_y: Optional[float]
    times: np.ndarray
    w_peaks: np.ndarray
    y_peaks: Optional[np.ndarray]
    y_max: np.ndarray


def counter_propagation_test(setup: ProblemSetup, cfg: SchemeConfig, closure: BoundaryClosure,
                             n_snapshots: int = 16, flux=None) -> WaveFit:
    """Fit the peak velocities of ``w`` and of the flux error ``y = z - c w``.

    With ``B = 0`` no ``y`` bump exists; ``v_y`` is None and only the
    max-norm of ``y`` per snapshot is returned.
    """
    if n_snapshots < 8:
        raise ValueError("need at least 8 snapshots for the peak fit")
    rep = run_simulation(setup, cfg, closure, snapshots=n_snapshots, flux=flux)
    x = grid(cfg.n_interior)
    times = np.array([s.time for s in rep.snapshots])
    ys = [s.z - setup.c * s.w for s in rep.snapshots]
    y_max = np.array([np.max(np.abs(y)) for y in ys])
    w_peaks = np.array([peak_position(x, s.w) for s in rep.snapshots])
    v_w = float(np.polyfit(times, w_peaks, 1)[0])
    if setup.B == 0:
        return WaveFit(v_w, None, times, w_peaks, None, y_max)
    sign = 1.0 if setup.B > 0 else -1.0
    y_peaks = np.array([peak_position(x, sign * y) for y in ys])
    v_y = float(np.polyfit(times, y_peaks, 1)[0])
    return WaveFit(v_w, v_y, times, w_peaks, y_peaks, y_max)


PROFILE_COLUMNS = ("t", "x", "w", "z", "y", "u_exact")
TABLE_COLUMNS = ("N", "dx", "error", "order")


def _fmt(v) -> str:
    return "" if v is None else FLOAT_FMT % v


def emit_profiles(report: RunReport, setup: ProblemSetup, path) -> Path:
    """One CSV row per grid point per snapshot."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(PROFILE_COLUMNS)
        for snap in report.snapshots:
            x = grid(snap.w.shape[0] - 2)
            u = exact_solution(setup, x, snap.time, report.period)
            y = snap.z - setup.c * snap.w
            for row in zip(x, snap.w, snap.z, y, u):
                out.writerow([_fmt(snap.time)] + [_fmt(v) for v in row])
    return path


def read_profiles(path) -> List[Snapshot]:
    """Parse a file written by :func:`emit_profiles` back into snapshots."""
    data: dict = {}
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            t = float(row["t"])
            data.setdefault(t, ([], []))
            data[t][0].append(float(row["w"]))
            data[t][1].append(float(row["z"]))
    return [Snapshot(t, np.array(w), np.array(z)) for t, (w, z) in data.items()]


def emit_table(table: ConvergenceTable, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(TABLE_COLUMNS)
        for r in table.rows:
            out.writerow([r.n_interior, _fmt(r.dx), _fmt(r.error), _fmt(r.order)])
    return path
