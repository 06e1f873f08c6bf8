"""
Periodic Cartesian grid on the square ``[-1, 1]^2`` and the solid mask of an
embedded fluid domain.

Scalar fields are arrays of shape ``(N, N)`` indexed ``[i, j]`` with ``i``
running along ``x1`` and ``j`` along ``x2``. Vector fields carry a leading
component axis, ``(2, N, N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

#: Polar angle convention for star-shaped boundaries, ``phi = atan2(x2, x1)``.
#: For a lobe count divisible by 4 the alternative ``atan2(x1, x2)`` gives the
#: same curve, since ``cos(n (pi/2 - phi)) = cos(n phi)``.
POLAR_ANGLE = "atan2(x2, x1)"


@dataclass(frozen=True)
class TorusGrid:
    """
    Uniform periodic grid of square cells on ``[-1, 1]^2``.

    Parameters
    ----------
    N : int
        Number of cells per axis.
    """

    N: int
    dim: int = 2

    def __post_init__(self) -> None:
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"need at least 2 cells per axis, got N={self.N!r}")
        if self.dim != 2:
            raise ValueError("only two-dimensional grids are supported")

    @property
    def h(self) -> float:
        return 2.0 / self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.h**self.dim

    @property
    def face_area(self) -> float:
        return self.h ** (self.dim - 1)

    @property
    def ncells(self) -> int:
        return self.N**self.dim

    def centers_1d(self) -> np.ndarray:
        return -1.0 + (np.arange(self.N) + 0.5) * self.h

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-center coordinates ``(x1, x2)``, each of shape ``(N, N)``."""
        c = self.centers_1d()
        return tuple(np.meshgrid(c, c, indexing="ij"))

    def neighbor(self, index: tuple[int, ...], axis: int, step: int) -> tuple[int, ...]:
        """Index of the neighbor across the face of ``index`` along ``axis``.

        ``step`` is ``+1`` for the positive side, ``-1`` for the negative one.
        """
        if step not in (-1, 1):
            raise ValueError("step must be +1 or -1")
        out = list(index)
        out[axis] = (out[axis] + step) % self.N
        return tuple(out)

    def outward_normals(self) -> np.ndarray:
        """Unit outward normals of the ``2 dim`` faces of any cell."""
        eye = np.eye(self.dim)
        return np.concatenate([eye, -eye])

    def zeros(self, ncomp: int | None = None) -> np.ndarray:
        if ncomp is None:
            return np.zeros(self.shape)
        return np.zeros((ncomp, *self.shape))


def build_grid(N: int) -> TorusGrid:
    return TorusGrid(N)


# {{{ domains


@dataclass(frozen=True)
class Annulus:
    r_inner: float
    r_outer: float

    def __post_init__(self) -> None:
        if not 0.0 < self.r_inner < self.r_outer < 1.0:
            raise ValueError(
                f"need 0 < r_inner < r_outer < 1, got {self.r_inner}, {self.r_outer}")

    def outer_radius(self, phi: np.ndarray) -> np.ndarray:
        return np.full_like(phi, self.r_outer, dtype=np.float64)


@dataclass(frozen=True)
class StarAnnulus:
    """Annulus whose outer boundary is ``|x| = (r_base + delta) + delta cos(lobes phi)``."""

    r_inner: float
    r_base: float
    delta: float
    lobes: int

    def __post_init__(self) -> None:
        if not (0.0 < self.r_inner < self.r_base - self.delta):
            raise ValueError("star boundary must stay outside the inner circle")
        if self.delta < 0.0:
            raise ValueError("delta must be nonnegative")
        if self.r_base + 2.0 * self.delta >= 1.0:
            raise ValueError("star boundary must fit inside the torus")

    def outer_radius(self, phi: np.ndarray) -> np.ndarray:
        return (self.r_base + self.delta) + self.delta * np.cos(self.lobes * phi)


DomainSpec = Union[Annulus, StarAnnulus]


def polar_angle(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    return np.arctan2(x2, x1)


def solid_indicator(domain: DomainSpec, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Point membership of ``x`` in the complement of the fluid domain.

    Points exactly on a boundary curve count as fluid.
    """
    r = np.hypot(x1, x2)
    outer = domain.outer_radius(polar_angle(x1, x2))
    return (r < domain.r_inner) | (r > outer)


# }}}


def build_mask(grid: TorusGrid, domain: DomainSpec) -> np.ndarray:
    """Boolean solid mask, true where the cell center lies outside the domain."""
    x1, x2 = grid.centers()
    mask = solid_indicator(domain, x1, x2)
    mask.setflags(write=False)
    return mask


def fluid_volume(mask: np.ndarray, grid: TorusGrid) -> float:
    # (2/N)^2 is inexact for most N; scale the count by the torus area instead
    return 2.0**grid.dim * np.count_nonzero(~mask) / grid.ncells
