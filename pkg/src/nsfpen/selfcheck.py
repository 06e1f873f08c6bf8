"""Fast invariant checks run by ``nsfpen check``."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from nsfpen import operators as ops
from nsfpen.grid import build_grid
from nsfpen.scenarios import equilibrium, experiment1, project_initial
from nsfpen.solver import euler_step, make_params


def _inner(a: np.ndarray, b: np.ndarray, vol: float) -> float:
    return vol * math.fsum((a * b).ravel())


def check_adjointness(rng: np.random.Generator) -> bool:
    for N in (8, 16, 32):
        h = 2.0 / N
        vol = h * h
        for _ in range(10):
            r = rng.standard_normal((N, N))
            v = rng.standard_normal((2, N, N))
            lhs = _inner(r, ops.div_h_vec(v, h), vol)
            rhs = -_inner(v, ops.grad_h(r, h), vol)
            scale = vol * math.fsum(np.abs(r * ops.div_h_vec(v, h)).ravel())
            if abs(lhs - rhs) > 1e-12 * scale:
                return False
    return True


def check_constants(rng: np.random.Generator) -> bool:
    N, h = 16, 0.125
    c = np.full((N, N), rng.standard_normal())
    w = np.full((2, N, N), rng.standard_normal())
    return (not np.any(ops.grad_h(c, h)) and not np.any(ops.div_h_vec(w, h))
            and not np.any(ops.upwind_div_scalar(c, w, h, 0.6)))


def check_conservativity(rng: np.random.Generator) -> bool:
    N, h = 16, 0.125
    r = rng.random((N, N)) + 0.5
    v = rng.standard_normal((2, N, N))
    div = ops.upwind_div_scalar(r, v, h, 0.6)
    scale = math.fsum(np.abs(div).ravel())
    return abs(math.fsum(div.ravel())) <= 1e-13 * scale


def check_upwind_example(rng: np.random.Generator) -> bool:
    r = np.array([1.0, 2.0, 3.0, 4.0])
    v = np.ones((1, 4))
    return np.array_equal(ops.upwind_div_scalar(r, v, 1.0, 0.6), [-7.0, 1.0, 1.0, 5.0])


def check_equilibrium(rng: np.random.Generator) -> bool:
    grid = build_grid(16)
    sc = equilibrium()
    params = make_params(sc, grid, epsilon=1e-2, dt=1e-5)
    s0 = project_initial(sc, grid, params.gas)
    s = s0
    for _ in range(20):
        s = euler_step(s, params)
    return (np.array_equal(s.rho, s0.rho) and np.array_equal(s.mom, s0.mom)
            and np.array_equal(s.rho_e, s0.rho_e))


def check_mass(rng: np.random.Generator) -> bool:
    grid = build_grid(16)
    sc = experiment1()
    params = make_params(sc, grid, epsilon=1e-2, dt=1e-5)
    s = project_initial(sc, grid, params.gas)
    m0 = math.fsum(s.rho.ravel())
    for _ in range(50):
        s = euler_step(s, params)
    return abs(math.fsum(s.rho.ravel()) - m0) <= 1e-12 * m0


CHECKS: dict[str, Callable[[np.random.Generator], bool]] = {
    "adjointness": check_adjointness,
    "constants annihilated": check_constants,
    "flux conservativity": check_conservativity,
    "upwind worked example": check_upwind_example,
    "equilibrium fixed point": check_equilibrium,
    "mass conservation": check_mass,
}


def run_checks(seed: int = 0) -> dict[str, bool]:
    rng = np.random.default_rng(seed)
    return {name: bool(fn(rng)) for name, fn in CHECKS.items()}
