"""Finite volume simulation of the volume-penalized Navier-Stokes-Fourier system."""

from nsfpen.grid import Annulus, StarAnnulus, TorusGrid, build_grid, build_mask, fluid_volume
from nsfpen.physics import CentralPull, GasModel, PenaltyConfig, TransportCoeffs
from nsfpen.scenarios import Scenario, get_scenario, project_initial
from nsfpen.solver import (
    RunParams,
    RunResult,
    SchemeFailure,
    State,
    compute_rhs,
    diagnostics,
    euler_step,
    make_params,
    run,
)

__version__ = "0.1.0"
