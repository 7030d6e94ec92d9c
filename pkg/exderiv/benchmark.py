"""Replication benchmark on the simulated models and error table output."""

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from exderiv.ede_types import TableFormat
from exderiv.estimators import fit
from exderiv.exceptions import ExteriorDerivativeException
from exderiv.models.bench_spec import COLUMNS, BenchSpec, ErrorRow, ErrorTable
from exderiv.models.estimator_config import EstimatorConfig
from exderiv.models.simulated_instance import SimulatedInstance
from exderiv.selection import select_sequential
from exderiv.simdata import generate

logger = logging.getLogger(__name__)

Outcome = tuple[Optional[float], Optional[float]]


def squared_error(instance: SimulatedInstance, config: EstimatorConfig) -> tuple[float, float]:
    """
    Fit one estimator and measure its squared estimation error at the instance's x0.

    Local kinds are fitted at x0; the intercept of global fits is translated to x0.

    Args:
        instance: Simulated instance with known coefficients.
        config: Estimator configuration.

    Raises:
        ExteriorDerivativeException: If the fit fails.

    Returns:
        ||beta_hat - beta_true||^2 and the fit time in seconds.
    """
    x0 = instance.x0 if config.kind.is_local else None
    start = time.perf_counter()
    estimate = fit(instance.data, config, x0=x0)
    elapsed = time.perf_counter() - start
    beta_hat = np.concatenate(([estimate.value_at(instance.x0)], estimate.dxf_hat))
    difference = beta_hat - instance.beta_true
    return float(difference @ difference), elapsed


def run_replication(spec: BenchSpec, replication: int) -> list[Outcome]:
    """
    Draw one instance and fit every estimator on it.

    Args:
        spec: Benchmark specification.
        replication: Replication number r, the instance uses seed base_seed + r.

    Returns:
        (error, time) per estimator, (None, None) for a failed fit.
    """
    seed = spec.base_seed + replication
    instance = generate(spec.model, spec.p, spec.n, spec.sigma_nu2, spec.sigma2, seed)
    outcomes: list[Outcome] = []
    for config in spec.estimators:
        try:
            if spec.grid is not None:
                x0 = instance.x0 if config.kind.is_local else None
                selected = select_sequential(instance.data, spec.grid, config.kind, seed, x0=x0, base_config=config)
                config = selected.apply(config)
            outcomes.append(squared_error(instance, config))
        except ExteriorDerivativeException as exc:
            logger.warning("Replication %d: %s failed: %s", replication, config.kind.value, exc)
            outcomes.append((None, None))
    logger.info("Finished replication %d of %d", replication, spec.replications)
    return outcomes


def _moments(values: list[float]) -> tuple[float, float]:
    if not values:
        return float("nan"), float("nan")
    array = np.asarray(values, dtype=np.float64)
    sd = float(np.std(array, ddof=1)) if array.size > 1 else 0.0
    return float(np.mean(array)), sd


def run_replications(spec: BenchSpec) -> ErrorTable:
    """
    Run every replication and aggregate per estimator.

    Replications are reduced in replication order whatever the number of workers.

    Args:
        spec: Benchmark specification.

    Returns:
        ErrorTable with one row per estimator.
    """
    replications = range(1, spec.replications + 1)
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as executor:
            results = list(executor.map(run_replication, [spec] * spec.replications, replications))
    else:
        results = [run_replication(spec, replication) for replication in replications]

    rows = []
    for index, config in enumerate(spec.estimators):
        errors = [result[index][0] for result in results if result[index][0] is not None]
        times = [result[index][1] for result in results if result[index][1] is not None]
        mean_err, sd_err = _moments(errors)
        mean_time, sd_time = _moments(times)
        rows.append(
            ErrorRow(
                estimator=config.kind.value,
                mean_err=mean_err,
                sd_err=sd_err,
                mean_time_s=mean_time,
                sd_time_s=sd_time,
                failures=spec.replications - len(errors),
            )
        )
    return ErrorTable(rows=tuple(rows), replications=spec.replications, description=spec.description)


def render_table(table: ErrorTable, table_format: TableFormat) -> str:
    """
    Render an error table.

    Args:
        table: Table to render.
        table_format: Output format.

    Returns:
        Rendered text with a trailing newline.
    """
    if table_format is TableFormat.json:
        return json.dumps(table.to_dict(), indent=2) + "\n"
    frame = pd.DataFrame([[getattr(row, column) for column in COLUMNS] for row in table.rows], columns=COLUMNS)
    if table_format is TableFormat.csv:
        return frame.to_csv(index=False, lineterminator="\n")
    lines = [
        f"Square-loss estimation error over {table.replications} replications ({table.description})",
        "",
        "| " + " | ".join(COLUMNS) + " |",
        "|" + "|".join(["---"] + ["---:"] * (len(COLUMNS) - 1)) + "|",
    ]
    for row in table.rows:
        cells = [row.estimator] + [f"{getattr(row, column):.4g}" for column in COLUMNS[1:5]] + [str(row.failures)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def emit_table(table: ErrorTable, table_format: TableFormat, path: Union[str, Path]) -> None:
    """
    Write an error table to a file.

    Args:
        table: Table to write.
        table_format: csv, json or markdown.
        path: Destination path.

    Raises:
        OSError: If the path cannot be written.
    """
    Path(path).write_text(render_table(table, table_format), encoding="utf-8")
    logger.info("Wrote %s table to %s", table_format.value, path)
