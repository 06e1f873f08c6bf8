"""
Initial data, geometry and gravity of the four ring experiments.

Initial data are functions of the cell-center coordinates returning
``(rho, u, theta)`` with ``u`` of shape ``(2, ...)``. They are sampled at cell
centers (point-value projection).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from nsfpen.grid import Annulus, DomainSpec, StarAnnulus, TorusGrid, build_mask, polar_angle
from nsfpen.physics import ORIGIN_CUTOFF, CentralPull, GasModel, GravitySpec

InitFn = Callable[[np.ndarray, np.ndarray], "tuple[np.ndarray, np.ndarray, np.ndarray]"]

#: Density used outside the fluid domain when approximating vacuum; exactly
#: zero density makes the scheme unstable.
SMALL_DENSITY = 0.01


class InvalidScenario(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    domain: DomainSpec
    init: InitFn
    gravity: GravitySpec
    t_final: float
    outside_density: float


def _swirl(x1, x2, amplitude):
    """Rotating ring velocity ``A sin(4 pi (|x| - 0.2)) (x2, -x1) / |x|``."""
    r = np.hypot(x1, x2)
    safe = np.where(r < ORIGIN_CUTOFF, 1.0, r)
    s = np.where(r < ORIGIN_CUTOFF, 0.0, amplitude * np.sin(4.0 * np.pi * (r - 0.2)) / safe)
    return np.stack([s * x2, -s * x1])


def _ring_init(rho_in, theta_in, rho_out, theta_out, swirl_amp, theta_ring):
    def init(x1, x2):
        x1 = np.asarray(x1, dtype=np.float64)
        x2 = np.asarray(x2, dtype=np.float64)
        r = np.hypot(x1, x2)
        inner = r < 0.2
        outer = r >= 0.7
        ring = ~(inner | outer)

        rho = np.select([inner, ring], [rho_in, 1.0], rho_out).astype(np.float64)
        theta = np.select([inner, ring], [theta_in, theta_ring(r)], theta_out).astype(np.float64)
        u = np.where(ring, _swirl(x1, x2, swirl_amp), 0.0)
        return rho, u, theta

    return init


def experiment1() -> Scenario:
    """Ring with constant density 1 outside the fluid."""
    return Scenario(
        name="exp1",
        domain=Annulus(0.2, 0.7),
        init=_ring_init(1.0, 1.0, 1.0, 3.0, 1.0, lambda r: 0.2 + 4.0 * r),
        gravity=None,
        t_final=0.1,
        outside_density=1.0,
    )


def experiment2() -> Scenario:
    """As :func:`experiment1` with (nearly) vacuum outside the fluid."""
    return Scenario(
        name="exp2",
        domain=Annulus(0.2, 0.7),
        init=_ring_init(SMALL_DENSITY, 1.0, SMALL_DENSITY, 3.0, 1.0,
                        lambda r: 0.2 + 4.0 * r),
        gravity=None,
        t_final=0.1,
        outside_density=SMALL_DENSITY,
    )


def experiment3() -> Scenario:
    """Star-shaped outer boundary with eight lobes.

    The collar between the circle of radius 0.7 and the star curve belongs to
    the fluid and starts at rest with density 1 and temperature 3.
    """
    domain = StarAnnulus(0.2, 0.7, 0.05, 8)
    ring = _ring_init(SMALL_DENSITY, 1.0, 1.0, 3.0, 1.0, lambda r: 0.2 + 4.0 * r)

    def init(x1, x2):
        rho, u, theta = ring(x1, x2)
        r = np.hypot(x1, x2)
        beyond = r > domain.outer_radius(polar_angle(x1, x2))
        rho = np.where(beyond, SMALL_DENSITY, rho)
        return rho, u, theta

    return Scenario(
        name="exp3",
        domain=domain,
        init=init,
        gravity=None,
        t_final=0.1,
        outside_density=SMALL_DENSITY,
    )


def experiment4() -> Scenario:
    """Hot inner wall, cold outer wall and a central gravity pull."""
    return Scenario(
        name="exp4",
        domain=Annulus(0.2, 0.7),
        init=_ring_init(SMALL_DENSITY, 30.0, SMALL_DENSITY, 1.0, 5.0,
                        lambda r: 41.6 - 58.0 * r),
        gravity=CentralPull(100.0),
        t_final=0.2,
        outside_density=SMALL_DENSITY,
    )


def equilibrium() -> Scenario:
    """Gas at rest with uniform density and temperature 1 in the ring geometry."""

    def init(x1, x2):
        shape = np.broadcast(np.asarray(x1), np.asarray(x2)).shape
        return np.ones(shape), np.zeros((2, *shape)), np.ones(shape)

    return Scenario(
        name="equilibrium",
        domain=Annulus(0.2, 0.7),
        init=init,
        gravity=None,
        t_final=0.1,
        outside_density=1.0,
    )


SCENARIOS: dict[str, Callable[[], Scenario]] = {
    "exp1": experiment1,
    "exp2": experiment2,
    "exp3": experiment3,
    "exp4": experiment4,
    "equilibrium": equilibrium,
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]()
    except KeyError:
        raise InvalidScenario(
            f"unknown experiment {name!r}, expected one of {sorted(SCENARIOS)}") from None


def sample_initial(scenario: Scenario, grid: TorusGrid):
    rho, u, theta = scenario.init(*grid.centers())
    if not (np.all(rho > 0.0) and np.all(theta > 0.0)):
        raise InvalidScenario(f"{scenario.name}: initial density and temperature must be positive")
    return rho, u, theta


def build_theta_B(scenario: Scenario, grid: TorusGrid) -> np.ndarray:
    """Boundary temperature extension: the initial temperature, frozen in time.

    Only solid cells are read by the penalty; fluid cells keep the initial
    value for definiteness.
    """
    _, _, theta = sample_initial(scenario, grid)
    return theta


def scenario_mask(scenario: Scenario, grid: TorusGrid) -> np.ndarray:
    return build_mask(grid, scenario.domain)


def project_initial(scenario: Scenario, grid: TorusGrid, gas: GasModel | None = None):
    from nsfpen.solver import State

    gas = gas or GasModel()
    rho, u, theta = sample_initial(scenario, grid)
    return State.from_primitive(rho, u, theta, gas)
