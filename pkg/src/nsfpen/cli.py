"""
Command line entry point::

    nsfpen run --config run.toml
    nsfpen sweep --config sweep.toml
    nsfpen check

The output directory of ``run`` and ``sweep`` is ``output_dir`` from the
configuration unless the ``NSFPEN_OUTPUT_DIR`` environment variable is set.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from nsfpen.analysis import FIELDS, ErrorRecord, Solution, eoc, error_records
from nsfpen.config import ConfigError, RunConfig, parse_config
from nsfpen.grid import build_grid
from nsfpen.io import state_fields, write_csv, write_diagnostics, write_vtk
from nsfpen.scenarios import get_scenario, project_initial
from nsfpen.solver import SchemeFailure, diagnostics, integrate, make_params, step_schedule

logger = logging.getLogger("nsfpen")

OUTPUT_DIR_ENV = "NSFPEN_OUTPUT_DIR"

#: cell-steps above which a sweep is reported as long-running
LONG_RUN_WORK = 1e9

ERRORS_HEADER = ["experiment", "field", "N", "h", "epsilon", "error_E", "error_P"]
EOC_HEADER = ["experiment", "field", "pair", "rate_h", "rate_eps"]
FAILED = "failed"
UNDEFINED = "undefined"


def output_dir(cfg: RunConfig) -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV) or cfg.output_dir)


def _run_one(cfg: RunConfig, N: int, epsilon: float, outdir: Path):
    """Run a single configuration, writing dumps and diagnostics to *outdir*.

    Returns the final :class:`~nsfpen.analysis.Solution`; raises
    :class:`~nsfpen.solver.SchemeFailure` on blow-up.
    """
    scenario = get_scenario(cfg.experiment)
    grid = build_grid(N)
    params = make_params(scenario, grid, epsilon=epsilon, dt=cfg.dt, t_final=cfg.t_final,
                         alpha=cfg.alpha, gamma=cfg.gamma, mu=cfg.mu, lam=cfg.lam,
                         kappa=cfg.kappa, k=cfg.k, diag_every=cfg.diag_every)
    mask = params.penalty.mask
    outdir.mkdir(parents=True, exist_ok=True)

    state = project_initial(scenario, grid, params.gas)
    nsteps = len(step_schedule(params.t_final, params.dt))

    def dump(step, time, st):
        write_vtk(outdir / f"fields_{step:07d}.vtk", N, time, state_fields(st, params.gas, mask))

    def callback(step, time, st):
        if step == nsteps or (cfg.dump_every and step % cfg.dump_every == 0):
            dump(step, time, st)

    dump(0, 0.0, state)
    series = [diagnostics(state, params, 0, 0.0)]
    result = integrate(state, params, callback)
    series.extend(result.series)
    write_diagnostics(outdir / "diagnostics.csv", series)
    return Solution.from_state(result.state, params.gas, experiment=cfg.experiment, N=N,
                               epsilon=epsilon, time=result.time)


def cmd_run(cfg: RunConfig) -> int:
    out = output_dir(cfg)
    try:
        _run_one(cfg, cfg.N, cfg.epsilon, out)
    except SchemeFailure as exc:
        logger.error("scheme failure: %s", exc)
        return 2
    logger.info("run finished, output in %s", out)
    return 0


# {{{ sweep


def sweep_jobs(cfg: RunConfig) -> list[tuple[int, float]]:
    """Distinct ``(N, epsilon)`` runs of a sweep, references included."""
    jobs = {(n, e) for n in cfg.N_list for e in cfg.epsilon_list}
    jobs |= {(cfg.N_ref, e) for e in cfg.epsilon_list}
    jobs |= {(n, cfg.epsilon_ref) for n in cfg.N_list}
    return sorted(jobs)


def _job_dir(root: Path, N: int, epsilon: float) -> Path:
    return root / "runs" / f"N{N}_eps{epsilon:.6g}"


def _sweep_job(args):
    cfg, N, epsilon, root = args
    try:
        return (N, epsilon), _run_one(cfg, N, epsilon, _job_dir(root, N, epsilon)), None
    except SchemeFailure as exc:
        return (N, epsilon), None, str(exc)


def _fmt_error(value):
    return FAILED if value is None else value


def _fmt_rate(value):
    return UNDEFINED if value is None else value


def eoc_rows(cfg: RunConfig, records: list[ErrorRecord]) -> list[list]:
    table = {(r.field, r.N, r.epsilon): r for r in records}
    Ns = sorted(set(cfg.N_list))
    epss = sorted(set(cfg.epsilon_list), reverse=True)
    rows = []
    for name in FIELDS:
        for eps in epss:
            for n0, n1 in zip(Ns[:-1], Ns[1:]):
                e0, e1 = table[name, n0, eps].error_E, table[name, n1, eps].error_E
                rate = None if e0 is None or e1 is None else eoc([(2.0 / n0, e0), (2.0 / n1, e1)])[0]
                rows.append([cfg.experiment, name, f"N={n0}->{n1}@eps={eps:.6g}",
                             _fmt_rate(rate), ""])
        for n in Ns:
            for e0, e1 in zip(epss[:-1], epss[1:]):
                p0, p1 = table[name, n, e0].error_P, table[name, n, e1].error_P
                rate = None if p0 is None or p1 is None else eoc([(e0, p0), (e1, p1)])[0]
                rows.append([cfg.experiment, name, f"eps={e0:.6g}->{e1:.6g}@N={n}", "",
                             _fmt_rate(rate)])
    return rows


def cmd_sweep(cfg: RunConfig) -> int:
    if not cfg.has_sweep:
        logger.error("sweep: configuration has no N_list/epsilon_list/N_ref/epsilon_ref")
        return 1
    root = output_dir(cfg)
    root.mkdir(parents=True, exist_ok=True)
    jobs = sweep_jobs(cfg)

    t_final = cfg.t_final if cfg.t_final is not None else get_scenario(cfg.experiment).t_final
    work = sum(n * n for n, _ in jobs) * t_final / cfg.dt
    if work > LONG_RUN_WORK:
        logger.warning("sweep of %d runs needs about %.2g cell-steps; expect a long run",
                       len(jobs), work)

    tasks = [(cfg, n, e, root) for n, e in jobs]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_sweep_job, tasks))
    else:
        results = [_sweep_job(t) for t in tasks]

    solutions = {}
    for key, sol, err in results:
        if err is not None:
            logger.error("run N=%d epsilon=%g failed: %s", key[0], key[1], err)
        solutions[key] = sol

    mesh_refs = {e: solutions[cfg.N_ref, e] for e in cfg.epsilon_list}
    eps_refs = {n: solutions[n, cfg.epsilon_ref] for n in cfg.N_list}
    main = [(n, e) for n in sorted(set(cfg.N_list)) for e in sorted(set(cfg.epsilon_list))]
    records = error_records([solutions[k] for k in main if solutions[k] is not None],
                            mesh_refs, eps_refs)
    for n, e in main:
        if solutions[n, e] is None:
            records.extend(ErrorRecord(cfg.experiment, name, n, 2.0 / n, e, None, None, t_final)
                           for name in FIELDS)
    records.sort(key=lambda r: (r.experiment, r.field, r.N, r.epsilon))

    write_csv(root / "errors.csv", ERRORS_HEADER,
              ([r.experiment, r.field, r.N, r.h, r.epsilon, _fmt_error(r.error_E),
                _fmt_error(r.error_P)] for r in records))
    write_csv(root / "eoc.csv", EOC_HEADER, eoc_rows(cfg, records))
    failed = sum(sol is None for sol in solutions.values())
    logger.info("sweep finished: %d runs, %d failed, tables in %s", len(jobs), failed, root)
    return 0 if failed == 0 else 3


# }}}


def cmd_check() -> int:
    from nsfpen.selfcheck import run_checks

    results = run_checks()
    for name, ok in results.items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return 0 if all(results.values()) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nsfpen",
        description="Volume-penalized Navier-Stokes-Fourier finite volume simulations")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path)
    sub.add_parser("check")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "check":
        return cmd_check()
    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        logger.error("configuration error: %s", exc)
        return 1
    if args.command == "run":
        return cmd_run(cfg)
    return cmd_sweep(cfg)


if __name__ == "__main__":
    sys.exit(main())
