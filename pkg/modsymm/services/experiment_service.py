import contextvars
import csv
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, Iterable, Optional, Sequence, TextIO, TypeVar

import numpy as np

from modsymm.bie.densities import get_density
from modsymm.bie.kernel import KernelParts, build_kernel_parts
from modsymm.bie.potential import (
    ExteriorField,
    ensure_exterior,
    err_grid,
    evaluate,
    far_field,
    near_boundary_grid,
)
from modsymm.bie.quadrature import DiscreteOperator, assemble
from modsymm.bie.solvers import Problem, build_problem, solve
from modsymm.bie.trig import TrigPoly
from modsymm.config import settings
from modsymm.core.exceptions import ConfigurationError, SolverFailure
from modsymm.core.logging import logger, run_context
from modsymm.geometry.registry import make_builtin
from modsymm.schemas.experiment_schema import ExperimentConfig, FarFieldRecord, RunRecord
from modsymm.schemas.solve_schema import MethodKind, SolveReport
from modsymm.utils.ids import generate_run_id
from modsymm.utils.system import get_host_snapshot

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_DIRECTIONS = ((1.0, 0.0),)
DEFAULT_RADII = (1e2, 1e4, 1e6, 1e8, 1e10)


class ExperimentRunner:
    """
    Shared state of one sweep.

    The curve, kernel parts, assembled operators and clean boundary data
    are built once per degree and reused read-only by every row.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.run_id = generate_run_id()
        self.curve = make_builtin(config.curve, config.curve_params)
        density = get_density(config.density)
        relative = config.convention.relative
        # Densities are named in the doubled scaling; the classic density of the
        # same boundary data is larger by 1/relative
        self.exact_density = (
            density if relative == 1.0 else (lambda t: density(t) / relative)
        )
        first = config.n_values[0] if config.n_values else 16
        self.parts: KernelParts = build_kernel_parts(self.curve, config.convention, first)
        self._operators: Dict[int, DiscreteOperator] = {}
        self._clean_rhs: Dict[int, TrigPoly] = {}
        self._lock = threading.Lock()

    def operator(self, n: int) -> DiscreteOperator:
        with self._lock:
            operator = self._operators.get(n)
            if operator is None:
                operator = assemble(self.parts, n)
                self._operators[n] = operator
            return operator

    def problem(self, n: int, delta: float) -> Problem:
        with self._lock:
            clean = self._clean_rhs.get(n)
        problem = build_problem(
            self.parts,
            n,
            exact_density=self.exact_density,
            delta=delta,
            rhs_degree=self.config.rhs_degree,
            clean_rhs=clean,
        )
        with self._lock:
            self._clean_rhs.setdefault(n, problem.clean_rhs)
        return problem

    def solve(self, method: MethodKind, n: int, delta: float) -> SolveReport:
        return solve(self.problem(n, delta), method, n, operator=self.operator(n))

    def field(self, report: SolveReport) -> ExteriorField:
        return ExteriorField(self.parts, report.density)

    def map(self, fn: Callable[[T], R], tasks: Sequence[T]) -> list[R]:
        """Run ``fn`` over ``tasks``; results keep task order."""
        workers = max(1, settings.SWEEP_WORKERS)
        if workers == 1 or len(tasks) < 2:
            return [fn(task) for task in tasks]
        # worker threads start from an empty context; carry the run id over
        contexts = [contextvars.copy_context() for _ in tasks]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda ctx, task: ctx.run(fn, task), contexts, tasks))

    def log_start(self, kind: str, rows: int):
        logger.info(
            {
                "event": f"{kind}_start",
                "run_id": self.run_id,
                "curve": self.curve.label,
                "convention": self.config.convention.value,
                "density": self.config.density,
                "rows": rows,
                "host": get_host_snapshot(),
            }
        )

    def log_finish(self, kind: str, failures: int):
        logger.info(
            {"event": f"{kind}_finish", "run_id": self.run_id, "failed_rows": failures}
        )


def _sweep_tasks(config: ExperimentConfig) -> list[tuple[MethodKind, int, float]]:
    """Rows in table order: method, then noise level, then degree."""
    return [
        (method, n, delta)
        for method in config.methods
        for delta in config.deltas
        for n in config.n_values
    ]


def _failed_record(
    runner: ExperimentRunner, task: tuple[MethodKind, int, float], error: SolverFailure
) -> RunRecord:
    method, n, delta = task
    logger.warning(
        {
            "event": "solve_failed",
            "run_id": runner.run_id,
            "method": method.value,
            "n": n,
            "delta": delta,
            "condition": error.condition,
            "message": error.message,
        }
    )
    return RunRecord(
        curve=runner.config.curve,
        method=method,
        n=n,
        delta=delta,
        condition=error.condition,
        failed=True,
    )


def _solved_record(
    runner: ExperimentRunner, task: tuple[MethodKind, int, float]
) -> RunRecord:
    method, n, delta = task
    report = runner.solve(method, n, delta)
    return RunRecord(
        curve=runner.config.curve,
        method=method,
        n=n,
        delta=delta,
        r=report.r,
        residual=report.residual,
        condition=report.condition,
        elapsed_s=report.elapsed,
        u_inf=far_field(runner.field(report)),
    )


def run_solve(config: ExperimentConfig) -> list[RunRecord]:
    """Like run_convergence, but the first SolverFailure propagates."""
    tasks = _sweep_tasks(config)
    if not tasks:
        return []
    runner = ExperimentRunner(config)
    with run_context(runner.run_id):
        runner.log_start("solve", len(tasks))
        records = [_solved_record(runner, task) for task in tasks]
        runner.log_finish("solve", 0)
    return records


def run_convergence(config: ExperimentConfig) -> list[RunRecord]:
    """One record per (method, n, delta); solver failures become 'failed' rows."""
    tasks = _sweep_tasks(config)
    if not tasks:
        return []
    runner = ExperimentRunner(config)

    def row(task: tuple[MethodKind, int, float]) -> RunRecord:
        try:
            return _solved_record(runner, task)
        except SolverFailure as e:
            return _failed_record(runner, task, e)

    with run_context(runner.run_id):
        runner.log_start("convergence", len(tasks))
        records = runner.map(row, tasks)
        runner.log_finish("convergence", sum(r.failed for r in records))
    return records


def run_farfield(
    config: ExperimentConfig,
    directions: Optional[Sequence[Sequence[float]]] = None,
    radii: Optional[Sequence[float]] = None,
) -> list[FarFieldRecord]:
    """u at radius * direction for every solve, next to the limit u_inf."""
    directions = [tuple(map(float, d)) for d in (directions or DEFAULT_DIRECTIONS)]
    radii = [float(r) for r in (radii or DEFAULT_RADII)]
    if any(len(d) != 2 or d == (0.0, 0.0) for d in directions):
        raise ConfigurationError("Far-field directions must be non-zero plane vectors.")
    if any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ConfigurationError("Far-field radii must be positive and ascending.")

    tasks = _sweep_tasks(config)
    if not tasks:
        return []
    runner = ExperimentRunner(config)

    def rows(task: tuple[MethodKind, int, float]) -> list[FarFieldRecord]:
        method, n, delta = task
        common = dict(curve=config.curve, method=method, n=n, delta=delta)
        try:
            field = runner.field(runner.solve(method, n, delta))
        except SolverFailure as e:
            _failed_record(runner, task, e)
            return [
                FarFieldRecord(
                    **common, direction_x=d[0], direction_y=d[1], radius=radius, failed=True
                )
                for d in directions
                for radius in radii
            ]
        limit = far_field(field)
        out = []
        for d in directions:
            points = np.outer(radii, d)
            values = np.atleast_1d(evaluate(field, points))
            out.extend(
                FarFieldRecord(
                    **common,
                    direction_x=d[0],
                    direction_y=d[1],
                    radius=radius,
                    u=float(u),
                    u_inf=limit,
                )
                for radius, u in zip(radii, values)
            )
        return out

    with run_context(runner.run_id):
        runner.log_start("farfield", len(tasks) * len(directions) * len(radii))
        records = [record for group in runner.map(rows, tasks) for record in group]
        runner.log_finish("farfield", sum(r.failed for r in records))
    return records


def _errgrid_references(
    runner: ExperimentRunner,
) -> Dict[MethodKind, ExteriorField | SolverFailure]:
    """Noise-free reference field per method, or the failure that prevented it."""
    references: Dict[MethodKind, ExteriorField | SolverFailure] = {}
    degree = settings.ERRGRID_REFERENCE_DEGREE
    for method in runner.config.methods:
        try:
            references[method] = runner.field(runner.solve(method, degree, 0.0))
        except SolverFailure as e:
            logger.warning(
                {
                    "event": "errgrid_reference_failed",
                    "method": method.value,
                    "n": degree,
                    "condition": e.condition,
                }
            )
            references[method] = e
    return references


def run_errgrid(config: ExperimentConfig) -> list[RunRecord]:
    """
    Err = max over the 20x20 grid of |u_n - u_ref|.

    The reference is the same method at ERRGRID_REFERENCE_DEGREE without
    noise; if that solve fails, every row of the method is marked failed.
    Any grid point inside the curve aborts the sweep.
    """
    tasks = _sweep_tasks(config)
    if not tasks:
        return []
    runner = ExperimentRunner(config)
    grid = ensure_exterior(runner.curve, near_boundary_grid())

    def row(task: tuple[MethodKind, int, float]) -> RunRecord:
        method, n, delta = task
        reference = references[method]
        if isinstance(reference, SolverFailure):
            return _failed_record(runner, task, reference)
        try:
            report = runner.solve(method, n, delta)
        except SolverFailure as e:
            return _failed_record(runner, task, e)
        field = runner.field(report)
        return RunRecord(
            curve=config.curve,
            method=method,
            n=n,
            delta=delta,
            r=report.r,
            residual=report.residual,
            condition=report.condition,
            elapsed_s=report.elapsed,
            u_inf=far_field(field),
            err_grid=err_grid(reference, field, grid),
        )

    with run_context(runner.run_id):
        runner.log_start("errgrid", len(tasks))
        references = _errgrid_references(runner)
        records = runner.map(row, tasks)
        runner.log_finish("errgrid", sum(r.failed for r in records))
    return records


def write_table(
    header: Iterable[str],
    records: Iterable,
    target: Optional[Path | TextIO] = None,
):
    """Write records as UTF-8 CSV to a path, an open stream or stdout."""
    if target is None:
        target = sys.stdout
    if isinstance(target, Path):
        with target.open("w", encoding="utf-8", newline="") as stream:
            write_table(header, records, stream)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(list(header))
    for record in records:
        writer.writerow(record.to_row())
