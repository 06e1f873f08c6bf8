"""
Acceptance criteria. Each test reports one PASS/FAIL line, collected in the
terminal summary, and asserts the same condition.

The convergence runs are shared through a module-level cache so that the
mesh, penalty and damping criteria reuse the same simulations.
"""

import math
import time

import numpy as np
import pytest

import oracles
from acceptance_log import report
from nsfpen import operators as ops
from nsfpen.analysis import Solution, compute_E, compute_P, eoc
from nsfpen.cli import cmd_run, cmd_sweep
from nsfpen.config import RunConfig
from nsfpen.grid import build_grid
from nsfpen.io import read_csv, read_diagnostics, read_vtk, write_csv, write_diagnostics, write_vtk
from nsfpen.physics import friction_penalty
from nsfpen.scenarios import equilibrium, experiment1, project_initial
from nsfpen.solver import euler_step, make_params, run

pytestmark = pytest.mark.slow

FIELDS = ("rho", "u", "theta")
_RUNS: dict = {}


def _conv_run(N, epsilon, t_final=0.02, dt=1e-5):
    """Experiment 1 run, cached by its parameters."""
    key = (N, epsilon, t_final, dt)
    if key not in _RUNS:
        sc = experiment1()
        grid = build_grid(N)
        params = make_params(sc, grid, epsilon=epsilon, dt=dt, t_final=t_final, diag_every=100)
        res = run(sc, grid, params)
        for rec in res.series:
            assert max(rec.advisory_adv, rec.advisory_diff, rec.advisory_pen) <= 0.5
        sol = Solution.from_state(res.state, params.gas, experiment="exp1", N=N,
                                  epsilon=epsilon, time=res.time)
        _RUNS[key] = (sol, res)
    return _RUNS[key]


def _fmt_rates(rates):
    return ", ".join(f"{name} {' '.join(f'{r:.3f}' for r in rs)}" for name, rs in rates.items())


# {{{ 1. operator properties


def test_c1_operator_properties():
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    worst_adj = worst_tensor = worst_cons = 0.0
    constants_ok = True
    for N in (8, 16, 32):
        h = 2.0 / N
        vol = h * h
        for _ in range(50):
            r = rng.standard_normal((N, N))
            v = rng.standard_normal((2, N, N))
            lhs = vol * np.sum(r * ops.div_h_vec(v, h))
            rhs = -vol * np.sum(v * ops.grad_h(r, h))
            scale = vol * (np.sum(np.abs(r * ops.div_h_vec(v, h))) + np.sum(np.abs(v * ops.grad_h(r, h))))
            worst_adj = max(worst_adj, abs(lhs - rhs) / scale)

            T = rng.standard_normal((2, 2, N, N))
            w = rng.standard_normal((2, N, N))
            lhs = vol * np.sum(w * ops.div_h_tensor(T, h))
            G = ops.grad_h_vec(w, h)
            rhs = -vol * np.sum(T * G)
            scale = vol * (np.sum(np.abs(w * ops.div_h_tensor(T, h))) + np.sum(np.abs(T * G)))
            worst_tensor = max(worst_tensor, abs(lhs - rhs) / scale)

            d = ops.upwind_div_scalar(1.0 + rng.random((N, N)), v, h, 0.6)
            worst_cons = max(worst_cons, abs(vol * math.fsum(d.ravel())) / (vol * np.sum(np.abs(d))))

        c = float(rng.standard_normal())
        const = np.full((N, N), c)
        constants_ok &= not np.any(ops.grad_h(const, h))
        constants_ok &= not np.any(ops.div_h_vec(np.full((2, N, N), c), h))
        constants_ok &= not np.any(ops.sym_grad(np.full((2, N, N), c), h))
        constants_ok &= not np.any(ops.upwind_div_scalar(const, np.full((2, N, N), c), h, 0.6))
    elapsed = time.perf_counter() - start
    ok = (worst_adj <= 1e-12 and worst_tensor <= 1e-12 and constants_ok
          and worst_cons <= 1e-13 and elapsed < 5.0)
    report("C1 operator properties", ok,
           f"adjoint {worst_adj:.1e}, tensor {worst_tensor:.1e}, conservativity {worst_cons:.1e}, "
           f"constants {'bitwise 0' if constants_ok else 'nonzero'}, {elapsed:.2f} s")
    assert ok


# }}}


# {{{ 2. upwind oracle


def test_c2_upwind_oracle():
    rng = np.random.default_rng(2)
    mismatches = 0
    cases = 0
    for N in range(2, 9):
        for sign in (1.0, -1.0):
            for h, diffusion in ((1.0, None), (0.5, 0.25)):
                for _ in range(10):
                    r = rng.integers(-9, 10, N).astype(float)
                    v = np.full((1, N), sign * float(rng.integers(1, 4)))
                    dif = 1.0 if diffusion is None else diffusion
                    got = ops.upwind_div_scalar(r, v, h, 0.6, diffusion=diffusion)
                    want = oracles.upwind_div(r, v, h, dif)
                    mismatches += not np.array_equal(got, want)
                    cases += 1
    worked = ops.upwind_div_scalar(np.array([1.0, 2.0, 3.0, 4.0]), np.ones((1, 4)), 1.0, 0.6)
    worked_ok = np.array_equal(worked, [-7.0, 1.0, 1.0, 5.0]) and worked.sum() == 0.0
    ok = mismatches == 0 and worked_ok
    report("C2 upwind oracle", ok,
           f"{cases - mismatches}/{cases} exact matches, worked example {worked.tolist()}")
    assert ok


# }}}


# {{{ 3. conservation


def test_c3_conservation():
    start = time.perf_counter()
    sc = experiment1()
    grid = build_grid(32)
    params = make_params(sc, grid, epsilon=1e-2, dt=1e-5, t_final=1e-2)
    vol = grid.cell_volume
    state = project_initial(sc, grid, params.gas)
    m0 = vol * math.fsum(state.rho.ravel())
    worst_mass = worst_budget = 0.0
    for n in range(1, 1001):
        new = euler_step(state, params, (n - 1) * params.dt, step=n)
        src = friction_penalty(state.velocity, params.penalty)
        for c in range(2):
            change = vol * math.fsum((new.mom[c] - state.mom[c]).ravel())
            expected = params.dt * vol * math.fsum(src[c].ravel())
            magnitude = params.dt * vol * math.fsum(np.abs(src[c]).ravel())
            resid = abs(change - expected)
            if magnitude > 0.0:
                worst_budget = max(worst_budget, resid / magnitude)
            elif resid != 0.0:
                worst_budget = math.inf
        state = new
        worst_mass = max(worst_mass, abs(vol * math.fsum(state.rho.ravel()) - m0) / m0)
    elapsed = time.perf_counter() - start
    ok = worst_mass <= 1e-12 and worst_budget <= 1e-12 and elapsed < 30.0
    report("C3 conservation", ok,
           f"mass drift {worst_mass:.1e}, momentum budget {worst_budget:.1e}, {elapsed:.1f} s")
    assert ok


# }}}


# {{{ 4. equilibrium


def test_c4_equilibrium():
    sc = equilibrium()
    grid = build_grid(32)
    params = make_params(sc, grid, epsilon=1e-2, dt=1e-5, t_final=1e-2)
    s0 = project_initial(sc, grid, params.gas)
    res = run(sc, grid, params)
    ok = (res.steps == 1000 and res.state.rho.tobytes() == s0.rho.tobytes()
          and res.state.mom.tobytes() == s0.mom.tobytes()
          and res.state.rho_e.tobytes() == s0.rho_e.tobytes())
    report("C4 equilibrium", ok, f"{res.steps} steps, state bitwise {'unchanged' if ok else 'changed'}")
    assert ok


# }}}


# {{{ 5-7. convergence and damping


def test_c5_eoc_mesh():
    start = time.perf_counter()
    ref, _ = _conv_run(128, 1e-3)
    errors = {name: [] for name in FIELDS}
    for N in (16, 32, 64):
        E = compute_E(_conv_run(N, 1e-3)[0], ref)
        for name in FIELDS:
            errors[name].append((2.0 / N, E[name]))
    rates = {name: eoc(errs) for name, errs in errors.items()}
    elapsed = time.perf_counter() - start
    ok = all(0.6 <= rs[-1] <= 1.4 for rs in rates.values()) and elapsed < 900.0
    report("C5 EOC in h", ok, f"{_fmt_rates(rates)} (window [0.6, 1.4] on finest pair)")
    assert ok


def test_c6_eoc_penalty():
    ref, _ = _conv_run(64, 1e-3)
    errors = {name: [] for name in FIELDS}
    for eps in (1e-1, 1e-2):
        P = compute_P(_conv_run(64, eps)[0], ref)
        for name in FIELDS:
            errors[name].append((eps, P[name]))
    rates = {name: eoc(errs) for name, errs in errors.items()}
    ok = all(0.5 <= rs[0] <= 1.5 for rs in rates.values())
    report("C6 EOC in epsilon", ok, f"{_fmt_rates(rates)} (window [0.5, 1.5])")
    assert ok


def test_c6_supplementary_asymptotic_penalty_rate():
    """Not a criterion: the same measurement once epsilon is well below T."""
    ref, _ = _conv_run(32, 1e-4)
    errors = {name: [] for name in FIELDS}
    for eps in (1e-2, 1e-3):
        P = compute_P(_conv_run(32, eps)[0], ref)
        for name in FIELDS:
            errors[name].append((eps, P[name]))
    rates = {name: eoc(errs) for name, errs in errors.items()}
    ok = all(0.5 <= rs[0] <= 1.5 for rs in rates.values())
    report("C6+ supplementary EOC in epsilon (N=32, eps 1e-2/1e-3 vs 1e-4)", ok,
           _fmt_rates(rates))
    assert ok


def test_c7_damping_trend():
    integrals = [_conv_run(64, eps)[1].solid_kinetic_integral for eps in (1e-1, 1e-2, 1e-3)]
    ok = integrals[0] > integrals[1] > integrals[2]
    report("C7 damping trend", ok,
           "integrated solid kinetic " + " > ".join(f"{v:.3e}" for v in integrals))
    assert ok


# }}}


# {{{ 8. robustness and formats


def _files(root):
    return {p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def _round_trips(root):
    """Re-emit every file through the readers and compare bytes."""
    for path in root.rglob("*.vtk"):
        t, data = read_vtk(path)
        N = data["rho"].shape[0]
        copy = path.with_suffix(".copy")
        write_vtk(copy, N, t, data)
        same = copy.read_bytes() == path.read_bytes()
        copy.unlink()
        if not same:
            return False
    for path in root.rglob("*.csv"):
        copy = path.with_suffix(".copy")
        if path.name == "diagnostics.csv":
            write_diagnostics(copy, read_diagnostics(path))
        else:
            rows = read_csv(path)
            write_csv(copy, list(rows[0]), [list(r.values()) for r in rows])
        same = copy.read_bytes() == path.read_bytes()
        copy.unlink()
        if not same:
            return False
    return True


def test_c8_robustness_and_formats(tmp_path):
    notes = []
    ok = True
    for exp in ("exp2", "exp3", "exp4"):
        cfgs = [RunConfig(exp, 32, 1e-2, dt=1e-5, t_final=5e-3, output_dir=str(tmp_path / exp / k),
                          dump_every=250, diag_every=50) for k in ("a", "b")]
        status = [cmd_run(c) for c in cfgs]
        a, b = tmp_path / exp / "a", tmp_path / exp / "b"
        finite = all(np.all(np.isfinite(v)) for p in a.glob("*.vtk") for v in read_vtk(p)[1].values())
        identical = _files(a) == _files(b)
        trips = _round_trips(a)
        good = status == [0, 0] and finite and identical and trips
        ok &= good
        notes.append(f"{exp} {'ok' if good else 'bad'}")

    sweeps = []
    for workers in (1, 4):
        root = tmp_path / f"sweep{workers}"
        cfg = RunConfig("exp4", 16, 1e-2, dt=1e-5, t_final=2e-3, output_dir=str(root),
                        workers=workers, diag_every=50, N_list=[8, 16],
                        epsilon_list=[1e-1, 1e-2], N_ref=32, epsilon_ref=1e-3)
        ok &= cmd_sweep(cfg) == 0
        sweeps.append(root)
    same_workers = _files(sweeps[0]) == _files(sweeps[1])
    trips = _round_trips(sweeps[0])
    ok &= same_workers and trips
    notes.append(f"sweep workers 1 vs 4 {'identical' if same_workers else 'differ'}")
    report("C8 robustness/format", ok, ", ".join(notes))
    assert ok


# }}}
