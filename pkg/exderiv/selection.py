"""Sequential bootstrap selection of the regularization parameters."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, Optional, Sequence

import numpy as np

from exderiv.ede_types import EstimatorKind
from exderiv.estimators import fit
from exderiv.exceptions import ExteriorDerivativeException, InvalidArgumentException, SelectionException
from exderiv.models.data_set import DataSet
from exderiv.models.estimate import Estimate
from exderiv.models.estimator_config import EstimatorConfig
from exderiv.models.param_grid import ParamGrid, SelectedParams

logger = logging.getLogger(__name__)

MAX_REDRAWS = 100
TIE_RTOL = 1e-12

FitFunction = Callable[[DataSet, EstimatorConfig, Optional[np.ndarray]], Estimate]

_UNTHRESHOLDED_ADAPTIVE = {
    EstimatorKind.NALEDEP: EstimatorKind.NALEDE,
    EstimatorKind.ALEDEP: EstimatorKind.ALEDE,
}


def _resample(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    for _ in range(MAX_REDRAWS):
        rows = rng.integers(0, n, size=n)
        out_of_bag = np.ones(n, dtype=bool)
        out_of_bag[rows] = False
        if out_of_bag.any():
            return rows, np.flatnonzero(out_of_bag)
    raise InvalidArgumentException(f"No out-of-bag rows after {MAX_REDRAWS} resamples of n={n} rows")


def bootstrap_risk(
    data: DataSet,
    fit_fn: FitFunction,
    config: EstimatorConfig,
    B: int,
    seed: int,
    x0=None,
    workers: int = 1,
) -> float:
    """
    Out-of-bag squared prediction error averaged over bootstrap replicates.

    Resamples are drawn in order from one PCG64 stream, so the result does not
    depend on workers.

    Args:
        data: Data to resample.
        fit_fn: Called as fit_fn(resample, config, x0) and returning an Estimate.
        config: Configuration passed to fit_fn.
        B: Number of replicates.
        seed: Seed of the resampling stream.
        x0: Evaluation point for local fits.
        workers: Threads fitting replicates concurrently.

    Raises:
        InvalidArgumentException: If B < 2 or no out-of-bag rows can be drawn.
        ExteriorDerivativeException: Whatever a replicate's fit raises.

    Returns:
        Mean over replicates of the mean squared out-of-bag residual.
    """
    if B < 2:
        raise InvalidArgumentException(f"B must be at least 2, got {B}")
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = [_resample(rng, data.n) for _ in range(B)]

    def replicate(draw: tuple[np.ndarray, np.ndarray]) -> float:
        rows, out_of_bag = draw
        estimate = fit_fn(data.subset(rows), config, x0)
        residual = data.Y[out_of_bag] - estimate.predict(data.X[out_of_bag])
        return float(np.mean(residual * residual))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            errors = list(executor.map(replicate, draws))
    else:
        errors = [replicate(draw) for draw in draws]
    return float(np.mean(errors))


def _fit_with_point(data: DataSet, config: EstimatorConfig, x0) -> Estimate:
    return fit(data, config, x0=x0)


class _Stages:
    def __init__(self, data: DataSet, grid: ParamGrid, seed: int, x0, fit_fn: FitFunction, workers: int) -> None:
        self.data = data
        self.grid = grid
        self.seed = seed
        self.x0 = x0
        self.fit_fn = fit_fn
        self.workers = workers
        self.curves: dict[str, tuple[tuple[float, float], ...]] = {}
        self.order: list[str] = []
        self.fit_count = 0

    def risk(self, config: EstimatorConfig) -> float:
        try:
            return bootstrap_risk(self.data, self.fit_fn, config, self.grid.B, self.seed, self.x0, self.workers)
        except ExteriorDerivativeException as exc:
            logger.warning("Fit failed for %s: %s", config.to_dict(), exc)
            return float("inf")

    def run(
        self,
        name: str,
        values: Sequence[float],
        make_config: Callable[[float], EstimatorConfig],
        prefer_large: bool,
    ):
        risks = [self.risk(make_config(value)) for value in values]
        self.fit_count += len(values) * self.grid.B
        self.order.append(name)
        self.curves[name] = tuple(zip(values, risks))
        best = min(risks)
        if not np.isfinite(best):
            raise SelectionException(f"Every fit failed in the {name} selection stage")
        tied = [value for value, risk in zip(values, risks) if np.isclose(risk, best, rtol=TIE_RTOL, atol=0.0)]
        chosen = max(tied) if prefer_large else min(tied)
        logger.info("Selected %s=%s with bootstrap risk %.6g", name, chosen, best)
        return chosen


def select_sequential(
    data: DataSet,
    grid: ParamGrid,
    target_kind: EstimatorKind,
    seed: int,
    x0=None,
    base_config: Optional[EstimatorConfig] = None,
    fit_fn: FitFunction = _fit_with_point,
    workers: int = 1,
) -> SelectedParams:
    """
    Select kappa, lambda, d, mu and t one stage at a time.

    Stages in order: kappa for local fits (Ridge at the first lambda), lambda (Ridge),
    d (the projection estimator, or PCR), mu (the adaptive variant, or the elastic net
    with lambda2 set to the chosen lambda) and t (thresholded kinds). Each stage fixes
    the values chosen before it. Risks within a relative TIE_RTOL of the best count as
    ties, which go to the larger lambda, kappa, mu or t and the smaller d.

    Args:
        data: Training data.
        grid: Candidate values and bootstrap count.
        target_kind: Estimator whose parameters are selected.
        seed: Seed shared by every stage's resampling.
        x0: Evaluation point, required for local kinds.
        base_config: Fixed settings such as sigma_nu2, gamma, kernel or h.
        fit_fn: Fit function handed to bootstrap_risk.
        workers: Threads per bootstrap evaluation.

    Raises:
        InvalidArgumentException: If a local kind has no x0 or a grid does not fit the data.
        SelectionException: If every fit of a stage failed.

    Returns:
        SelectedParams with the risk curve of every stage.
    """
    if target_kind.is_local and x0 is None:
        raise InvalidArgumentException(f"Selecting {target_kind.value} needs an evaluation point x0")
    base = EstimatorConfig(kind=target_kind) if base_config is None else replace(base_config, kind=target_kind)
    base = replace(base, kernel=base.resolved_kernel)
    stages = _Stages(data, grid, seed, x0, fit_fn, workers)
    ridge = replace(base, kind=EstimatorKind.Ridge)

    kappa = None
    if x0 is not None and base.h is None:
        kappa = stages.run(
            "kappa", grid.kappas, lambda value: replace(ridge, kappa=value, lambda_=grid.lambdas[0]), True
        )
        ridge = replace(ridge, kappa=kappa)
        base = replace(base, kappa=kappa)

    lambda_ = stages.run("lambda", grid.lambdas, lambda value: replace(ridge, lambda_=value), True)
    base = replace(base, lambda_=lambda_)

    d = None
    if not target_kind.is_baseline or target_kind is EstimatorKind.PCR:
        dimension_kind = target_kind.projection_kind
        d = stages.run(
            "d",
            grid.dims_for(data.p),
            lambda value: replace(base, kind=dimension_kind, d=int(value), mu=0.0, t=0.0),
            False,
        )
        base = replace(base, d=d)

    mu = 0.0
    if target_kind.is_adaptive or target_kind is EstimatorKind.ElasticNet:
        lasso_kind = _UNTHRESHOLDED_ADAPTIVE.get(target_kind, target_kind)
        mu = stages.run(
            "mu",
            grid.mus,
            lambda value: replace(base, kind=lasso_kind, mu=value, lambda2=lambda_, t=0.0),
            True,
        )
        base = replace(base, mu=mu)

    t = 0.0
    if target_kind.is_thresholded:
        t = stages.run("t", grid.ts, lambda value: replace(base, t=value), True)

    return SelectedParams(
        lambda_=lambda_,
        d=d,
        mu=mu,
        t=t,
        kappa=kappa,
        risk_curve=stages.curves,
        stage_order=tuple(stages.order),
        fit_count=stages.fit_count,
    )
