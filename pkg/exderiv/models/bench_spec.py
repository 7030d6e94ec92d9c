"""Benchmark specification and error table models."""

from dataclasses import dataclass
from typing import Any, Mapping, Optional

from exderiv.ede_types import ModelKind
from exderiv.exceptions import InvalidArgumentException
from exderiv.models.estimator_config import EstimatorConfig
from exderiv.models.param_grid import ParamGrid


@dataclass(frozen=True)
class BenchSpec:
    """
    Replication experiment on a simulated model.

    Attributes:
        model: Simulated model to draw from.
        n: Samples per replication.
        estimators: Estimators fitted on every replication.
        p: Number of predictors.
        sigma_nu2: Predictor noise variance.
        sigma2: Response noise variance.
        replications: Number of replications R.
        base_seed: Replication r uses seed base_seed + r.
        grid: When set, every replication selects each estimator's parameters before fitting.
        workers: Processes running replications.
    """

    model: ModelKind
    n: int
    estimators: tuple[EstimatorConfig, ...]
    p: int = 8
    sigma_nu2: float = 0.01
    sigma2: float = 1.0
    replications: int = 100
    base_seed: int = 0
    grid: Optional[ParamGrid] = None
    workers: int = 1

    def __post_init__(self) -> None:
        """
        Validate the specification.

        Raises:
            InvalidArgumentException: On R < 1, no estimators or invalid sizes.
        """
        object.__setattr__(self, "estimators", tuple(self.estimators))
        if not self.estimators:
            raise InvalidArgumentException("A benchmark needs at least one estimator")
        if self.replications < 1:
            raise InvalidArgumentException(f"replications must be at least 1, got {self.replications}")
        if self.p < 2 or self.n < 1:
            raise InvalidArgumentException(f"Need p >= 2 and n >= 1, got p={self.p}, n={self.n}")
        if self.sigma_nu2 < 0 or self.sigma2 < 0:
            raise InvalidArgumentException("Noise variances must be nonnegative")
        if self.workers < 1:
            raise InvalidArgumentException(f"workers must be at least 1, got {self.workers}")

    @property
    def description(self) -> str:
        """
        Property for a one-line summary of the experiment.

        Returns:
            description as a string.
        """
        mode = ", selected parameters" if self.grid is not None else ""
        return (
            f"{self.model.value} model, p={self.p}, n={self.n}, sigma_nu2={self.sigma_nu2:g}, "
            f"sigma2={self.sigma2:g}, base_seed={self.base_seed}{mode}"
        )


@dataclass(frozen=True)
class ErrorRow:
    """
    Aggregated errors of one estimator.

    Attributes:
        estimator: Estimator label.
        mean_err: Mean squared estimation error.
        sd_err: Sample standard deviation of the error, 0 for one replication.
        mean_time_s: Mean fit time in seconds.
        sd_time_s: Sample standard deviation of the fit time.
        failures: Replications in which the fit failed.
    """

    estimator: str
    mean_err: float
    sd_err: float
    mean_time_s: float
    sd_time_s: float
    failures: int


COLUMNS = ("estimator", "mean_err", "sd_err", "mean_time_s", "sd_time_s", "failures")


@dataclass(frozen=True)
class ErrorTable:
    """
    Benchmark result, one row per estimator in spec order.

    Attributes:
        rows: Aggregated rows.
        replications: Number of replications R.
        description: Summary of the experiment.
    """

    rows: tuple[ErrorRow, ...]
    replications: int
    description: str

    @property
    def failures(self) -> int:
        """
        Property for the total failure count.

        Returns:
            failures as an int.
        """
        return sum(row.failures for row in self.rows)

    def to_dict(self) -> dict[str, Any]:
        """
        Serialize the table.

        Returns:
            Dictionary with replications, description and rows.
        """
        return {
            "replications": self.replications,
            "description": self.description,
            "rows": [{column: getattr(row, column) for column in COLUMNS} for row in self.rows],
        }

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "ErrorTable":
        """
        Rebuild a table from to_dict output.

        Args:
            values: Serialized table.

        Returns:
            ErrorTable.
        """
        rows = tuple(
            ErrorRow(
                estimator=str(row["estimator"]),
                mean_err=float(row["mean_err"]),
                sd_err=float(row["sd_err"]),
                mean_time_s=float(row["mean_time_s"]),
                sd_time_s=float(row["sd_time_s"]),
                failures=int(row["failures"]),
            )
            for row in values["rows"]
        )
        return cls(rows=rows, replications=int(values["replications"]), description=str(values["description"]))
