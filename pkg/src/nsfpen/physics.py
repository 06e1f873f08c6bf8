"""
Perfect-gas closure, transport coefficients, gravity and the two penalty
sources.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from nsfpen.grid import TorusGrid

#: Below this distance from the origin the central gravity pull is zero.
ORIGIN_CUTOFF = 1.0e-12


class DomainError(ValueError):
    """Nonpositive density or temperature handed to a thermodynamic function."""


def _require_positive(name: str, value) -> None:
    if not np.all(np.asarray(value) > 0.0):
        raise DomainError(f"{name} must be positive")


@dataclass(frozen=True)
class GasModel:
    gamma: float = 1.4

    def __post_init__(self) -> None:
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")

    @property
    def cv(self) -> float:
        return 1.0 / (self.gamma - 1.0)

    def pressure(self, rho, theta):
        _require_positive("density", rho)
        _require_positive("temperature", theta)
        return rho * theta

    def internal_energy(self, theta):
        _require_positive("temperature", theta)
        return self.cv * theta

    def entropy(self, rho, theta):
        """Specific entropy ``s = cv log(theta) - log(rho)``."""
        _require_positive("density", rho)
        _require_positive("temperature", theta)
        return self.cv * np.log(theta) - np.log(rho)

    def theta_from_conserved(self, rho, rho_e):
        return rho_e / (self.cv * rho)

    def theta_from_entropy_data(self, rho0, S0):
        """Temperature from density and total entropy ``S0 = rho0 s``."""
        _require_positive("density", rho0)
        return np.exp((self.gamma - 1.0) * (S0 / rho0 + np.log(rho0)))


@dataclass(frozen=True)
class TransportCoeffs:
    """Constant viscosities and heat conductivity.

    ``lam`` is the second viscosity ``lambda`` and is stored as given; it is
    tied to the bulk viscosity through ``lambda = eta - 2 mu / d``.
    """

    mu: float = 0.001
    lam: float = 0.001
    kappa: float = 0.001

    def __post_init__(self) -> None:
        if not (self.mu > 0.0 and self.kappa > 0.0):
            raise ValueError("mu and kappa must be positive")


@dataclass(frozen=True)
class PenaltyConfig:
    epsilon: float
    mask: np.ndarray
    theta_B: np.ndarray
    k: int = 6

    def __post_init__(self) -> None:
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.k < 1:
            raise ValueError(f"penalty exponent must be at least 1, got {self.k}")
        if self.mask.shape != self.theta_B.shape:
            raise ValueError("mask and theta_B must share a grid")
        if not np.all(self.theta_B[self.mask] > 0.0):
            raise ValueError("theta_B must be positive on solid cells")


def friction_penalty(u: np.ndarray, cfg: PenaltyConfig) -> np.ndarray:
    """Momentum source ``-(1/eps) u`` on solid cells, exactly zero elsewhere."""
    return np.where(cfg.mask, -u / cfg.epsilon, 0.0)


def heat_penalty(theta: np.ndarray, cfg: PenaltyConfig) -> np.ndarray:
    """Energy source ``-(1/eps) |theta - theta_B|^k (theta - theta_B)`` on solid cells."""
    diff = theta - cfg.theta_B
    return np.where(cfg.mask, -np.abs(diff) ** cfg.k * diff / cfg.epsilon, 0.0)


@dataclass(frozen=True)
class CentralPull:
    """Gravity of constant magnitude pointing to the origin."""

    magnitude: float


GravitySpec = Optional[CentralPull]


def gravity_at(x: np.ndarray, spec: GravitySpec) -> np.ndarray:
    """Gravity at points ``x`` of shape ``(d, ...)``."""
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    if spec is None:
        return g
    r = np.sqrt(np.sum(x**2, axis=0))
    far = r >= ORIGIN_CUTOFF
    g[:, far] = -spec.magnitude * x[:, far] / r[far]
    return g


def gravity_field(grid: TorusGrid, spec: GravitySpec) -> np.ndarray:
    """Gravity sampled at the cell centers of *grid*."""
    return gravity_at(np.stack(grid.centers()), spec)
