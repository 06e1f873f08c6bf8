"""
Semi-discrete penalized Navier-Stokes-Fourier scheme with forward Euler time
stepping.

The conserved unknowns are the density ``rho``, the momentum ``m = rho u`` and
the internal energy density ``rho e = cv rho theta``. With the
viscosity-upwind divergence ``div_up`` and the face-average operators the
right-hand side reads::

    d rho    = -div_up(rho, u)
    d m      = -div_up(m, u) - grad p + 2 div(mu D u) + grad(lam div u)
               + rho g - (1/eps) 1_solid u
    d (rho e) = -div_up(rho e, u) - p div u + div(kappa grad theta)
               + 2 mu |D u|^2 + lam |div u|^2
               - (1/eps) 1_solid |theta - theta_B|^k (theta - theta_B)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from nsfpen import operators as ops
from nsfpen.grid import TorusGrid
from nsfpen.physics import (
    GasModel,
    PenaltyConfig,
    TransportCoeffs,
    friction_penalty,
    gravity_field,
    heat_penalty,
)

logger = logging.getLogger(__name__)

#: Advisory stability numbers above this value trigger a warning.
ADVISORY_LIMIT = 0.5


class SchemeFailure(RuntimeError):
    """Loss of positivity (or finiteness) of density or temperature."""

    def __init__(self, message: str, *, time: float, cell: tuple[int, ...],
                 rho: float, rho_e: float, step: int | None = None):
        super().__init__(
            f"{message} at t={time:.17g}, cell={cell}: rho={rho!r}, rho_e={rho_e!r}"
            + ("" if step is None else f" (step {step})"))
        self.time = time
        self.cell = cell
        self.rho = rho
        self.rho_e = rho_e
        self.step = step


# {{{ state


@dataclass(frozen=True)
class State:
    rho: np.ndarray
    mom: np.ndarray
    rho_e: np.ndarray

    @classmethod
    def from_primitive(cls, rho, u, theta, gas: GasModel) -> "State":
        rho = np.asarray(rho, dtype=np.float64)
        return cls(rho=rho, mom=rho * u, rho_e=gas.cv * rho * theta)

    @property
    def velocity(self) -> np.ndarray:
        return self.mom / self.rho

    def temperature(self, gas: GasModel) -> np.ndarray:
        return gas.theta_from_conserved(self.rho, self.rho_e)

    def pressure(self, gas: GasModel) -> np.ndarray:
        return self.rho * self.temperature(gas)

    def copy(self) -> "State":
        return State(self.rho.copy(), self.mom.copy(), self.rho_e.copy())


@dataclass(frozen=True)
class Tendency:
    d_rho: np.ndarray
    d_mom: np.ndarray
    d_rho_e: np.ndarray


def check_positive(state: State, time: float = 0.0, step: int | None = None) -> None:
    bad = ~(np.isfinite(state.rho) & np.isfinite(state.rho_e)
            & (state.rho > 0.0) & (state.rho_e > 0.0))
    bad |= ~np.all(np.isfinite(state.mom), axis=0)
    if np.any(bad):
        cell = tuple(int(i) for i in np.argwhere(bad)[0])
        raise SchemeFailure("nonpositive or nonfinite density/temperature", time=time,
                            cell=cell, rho=float(state.rho[cell]),
                            rho_e=float(state.rho_e[cell]), step=step)


# }}}


@dataclass(frozen=True)
class RunParams:
    """Discretization and physical parameters of one run.

    ``gravity`` is the sampled cell field ``g_h`` (``None`` for no force).
    Diagnostics are sampled every ``diag_every`` steps and at the final step.
    """

    dt: float
    t_final: float
    h: float
    penalty: PenaltyConfig
    alpha: float = 0.6
    gas: GasModel = field(default_factory=GasModel)
    transport: TransportCoeffs = field(default_factory=TransportCoeffs)
    gravity: Optional[np.ndarray] = None
    diag_every: int = 1

    def __post_init__(self) -> None:
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_final >= 0.0:
            raise ValueError(f"t_final must be nonnegative, got {self.t_final}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.diag_every < 1:
            raise ValueError("diag_every must be a positive step count")

    @property
    def cell_volume(self) -> float:
        return self.h ** self.penalty.mask.ndim


def make_params(scenario, grid: TorusGrid, *, epsilon: float, dt: float,
                t_final: float | None = None, alpha: float = 0.6, gamma: float = 1.4,
                mu: float = 0.001, lam: float = 0.001, kappa: float = 0.001, k: int = 6,
                diag_every: int = 1) -> RunParams:
    """Assemble :class:`RunParams` for *scenario* on *grid*."""
    from nsfpen.scenarios import build_theta_B, scenario_mask

    penalty = PenaltyConfig(epsilon=epsilon, mask=scenario_mask(scenario, grid),
                            theta_B=build_theta_B(scenario, grid), k=k)
    gravity = None if scenario.gravity is None else gravity_field(grid, scenario.gravity)
    return RunParams(
        dt=dt,
        t_final=scenario.t_final if t_final is None else t_final,
        h=grid.h,
        penalty=penalty,
        alpha=alpha,
        gas=GasModel(gamma),
        transport=TransportCoeffs(mu, lam, kappa),
        gravity=gravity,
        diag_every=diag_every,
    )


def compute_rhs(state: State, params: RunParams, time: float = 0.0) -> Tendency:
    check_positive(state, time)

    h, alpha = params.h, params.alpha
    gas, tc, pen = params.gas, params.transport, params.penalty

    rho, m, rho_e = state.rho, state.mom, state.rho_e
    u = m / rho
    theta = gas.theta_from_conserved(rho, rho_e)
    p = rho * theta

    div_u = ops.div_h_vec(u, h)
    Du = ops.sym_grad(u, h)

    d_rho = -ops.upwind_div_scalar(rho, u, h, alpha)

    d_mom = (
        -ops.upwind_div_vector(m, u, h, alpha)
        - ops.grad_h(p, h)
        + 2.0 * ops.div_h_tensor(tc.mu * Du, h)
        + ops.grad_h(tc.lam * div_u, h)
        + friction_penalty(u, pen)
    )
    if params.gravity is not None:
        d_mom = d_mom + rho * params.gravity

    d_rho_e = (
        -ops.upwind_div_scalar(rho_e, u, h, alpha)
        - p * div_u
        + ops.div_h_vec(tc.kappa * ops.grad_h(theta, h), h)
        + 2.0 * tc.mu * np.sum(Du**2, axis=(0, 1))
        + tc.lam * div_u**2
        + heat_penalty(theta, pen)
    )
    return Tendency(d_rho, d_mom, d_rho_e)


def euler_step(state: State, params: RunParams, time: float = 0.0,
               dt: float | None = None, step: int | None = None) -> State:
    """Advance by one forward Euler step of length *dt* (default ``params.dt``)."""
    dt = params.dt if dt is None else dt
    tend = compute_rhs(state, params, time)
    new = State(
        rho=state.rho + dt * tend.d_rho,
        mom=state.mom + dt * tend.d_mom,
        rho_e=state.rho_e + dt * tend.d_rho_e,
    )
    check_positive(new, time + dt, step)
    return new


# {{{ diagnostics


def _total(a: np.ndarray) -> float:
    return math.fsum(np.ravel(a))


@dataclass(frozen=True)
class DiagnosticsRecord:
    step: int
    time: float
    total_mass: float
    total_momentum_x: float
    total_momentum_y: float
    total_energy: float
    ballistic_energy: float
    solid_kinetic: float
    solid_theta_mismatch: float
    advisory_adv: float
    advisory_diff: float
    advisory_pen: float


def solid_kinetic(state: State, params: RunParams) -> float:
    """``sum over solid cells of |K| |u|^2``."""
    mask = params.penalty.mask
    u = state.velocity
    return params.cell_volume * _total(np.sum(u**2, axis=0)[mask])


def advisories(state: State, params: RunParams) -> tuple[float, float, float]:
    """Advective, diffusive and penalty-stiffness numbers of the explicit step."""
    gas, tc, pen = params.gas, params.transport, params.penalty
    dt, h = params.dt, params.h
    rho = state.rho
    u = state.velocity
    theta = state.temperature(gas)

    speed = np.sqrt(np.sum(u**2, axis=0)) + np.sqrt(gas.gamma * theta)
    adv = float(np.max(speed)) * dt / h
    diff = max(2.0 * tc.mu, tc.kappa / gas.cv) * dt / (float(np.min(rho)) * h**2)
    if np.any(pen.mask):
        rho_s = rho[pen.mask]
        heat = np.abs(theta[pen.mask] - pen.theta_B[pen.mask]) ** pen.k / gas.cv
        pen_num = dt * float(np.max(np.maximum(1.0, heat) / rho_s)) / pen.epsilon
    else:
        pen_num = 0.0
    return adv, diff, pen_num


def diagnostics(state: State, params: RunParams, step: int = 0,
                time: float = 0.0) -> DiagnosticsRecord:
    gas, pen = params.gas, params.penalty
    vol = params.cell_volume
    rho = state.rho
    u = state.velocity
    theta = state.temperature(gas)
    kinetic = 0.5 * rho * np.sum(u**2, axis=0)
    s = gas.entropy(rho, theta)

    mismatch = np.abs(theta - pen.theta_B) ** (pen.k + 2) / theta
    adv, diff, pen_num = advisories(state, params)
    return DiagnosticsRecord(
        step=step,
        time=time,
        total_mass=vol * _total(rho),
        total_momentum_x=vol * _total(state.mom[0]),
        total_momentum_y=vol * _total(state.mom[1]),
        total_energy=vol * _total(kinetic + state.rho_e),
        ballistic_energy=vol * _total(kinetic + state.rho_e - pen.theta_B * rho * s),
        solid_kinetic=solid_kinetic(state, params),
        solid_theta_mismatch=vol * _total(mismatch[pen.mask]),
        advisory_adv=adv,
        advisory_diff=diff,
        advisory_pen=pen_num,
    )


# }}}


@dataclass
class RunResult:
    state: State
    series: list[DiagnosticsRecord]
    steps: int
    time: float
    #: left Riemann sum of the solid kinetic diagnostic over the run
    solid_kinetic_integral: float = 0.0


def step_schedule(t_final: float, dt: float) -> list[float]:
    """Step lengths reaching *t_final*, the last one truncated to land on it."""
    if t_final == 0.0:
        return []
    n = int(math.floor(t_final / dt * (1.0 + 1e-12)))
    steps = [dt] * n
    rest = t_final - n * dt
    if rest > 1e-9 * dt:
        steps.append(rest)
    return steps


def _warn_advisories(numbers, warned: set, step: int) -> None:
    for name, value in zip(("advective", "diffusive", "penalty"), numbers):
        if value > ADVISORY_LIMIT and name not in warned:
            warned.add(name)
            logger.warning("%s stability number %.3g exceeds %.1f at step %d",
                           name, value, ADVISORY_LIMIT, step)


def integrate(state: State, params: RunParams,
              callback: Callable[[int, float, State], None] | None = None) -> RunResult:
    """Step *state* to ``params.t_final``.

    *callback* is invoked as ``callback(step, time, state)`` after every
    accepted step.
    """
    check_positive(state, 0.0, 0)
    schedule = step_schedule(params.t_final, params.dt)
    series: list[DiagnosticsRecord] = []
    warned: set[str] = set()
    _warn_advisories(advisories(state, params), warned, 0)

    time = 0.0
    integral = 0.0
    for n, dt in enumerate(schedule, start=1):
        integral += dt * solid_kinetic(state, params)
        state = euler_step(state, params, time, dt=dt, step=n)
        time = params.t_final if n == len(schedule) else n * params.dt
        if n % params.diag_every == 0 or n == len(schedule):
            rec = diagnostics(state, params, n, time)
            series.append(rec)
            _warn_advisories((rec.advisory_adv, rec.advisory_diff, rec.advisory_pen),
                             warned, n)
        if callback is not None:
            callback(n, time, state)
    return RunResult(state=state, series=series, steps=len(schedule), time=time,
                     solid_kinetic_integral=integral)


def run(scenario, grid: TorusGrid, params: RunParams,
        callback: Callable[[int, float, State], None] | None = None) -> RunResult:
    from nsfpen.scenarios import project_initial

    state = project_initial(scenario, grid, params.gas)
    return integrate(state, params, callback)


