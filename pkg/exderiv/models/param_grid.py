"""Selection grid and selection result models."""

import json
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from exderiv.ede_types import EstimatorKind
from exderiv.exceptions import DataParseException, InvalidArgumentException
from exderiv.models.estimator_config import EstimatorConfig

LARGE_GRID = 25
DEFAULT_BOOTSTRAP = 50


def _as_grid(name: str, values, integer: bool = False) -> tuple:
    try:
        values = tuple(int(value) if integer else float(value) for value in values)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentException(f"{name} must be a list of numbers") from exc
    if not values:
        raise InvalidArgumentException(f"{name} must not be empty")
    if any(value < 0 for value in values):
        raise InvalidArgumentException(f"{name} must be nonnegative, got {values}")
    if len(values) > LARGE_GRID:
        warnings.warn(
            f"{name} has {len(values)} entries; bootstrap selection is meant for a small grid",
            UserWarning,
            stacklevel=4,
        )
    return values


@dataclass(frozen=True)
class ParamGrid:
    """
    Candidate values for sequential bootstrap selection.

    Attributes:
        lambdas: Tikhonov strengths.
        dims: Manifold dimensions, None means every integer 0..p.
        mus: l1 strengths.
        ts: Covariance thresholds, only 0 unless thresholding is opted into.
        kappas: Bandwidth constants for local fits.
        B: Bootstrap replicates per grid point.
    """

    lambdas: tuple[float, ...]
    dims: Optional[tuple[int, ...]] = None
    mus: tuple[float, ...] = (0.0,)
    ts: tuple[float, ...] = (0.0,)
    kappas: tuple[float, ...] = (1.0,)
    B: int = DEFAULT_BOOTSTRAP

    def __post_init__(self) -> None:
        """
        Normalize every grid to a tuple and validate it.

        Raises:
            InvalidArgumentException: On an empty grid, a negative value or B < 2.
        """
        object.__setattr__(self, "lambdas", _as_grid("lambdas", self.lambdas))
        if self.dims is not None:
            object.__setattr__(self, "dims", _as_grid("dims", self.dims, integer=True))
        object.__setattr__(self, "mus", _as_grid("mus", self.mus))
        object.__setattr__(self, "ts", _as_grid("ts", self.ts))
        object.__setattr__(self, "kappas", _as_grid("kappas", self.kappas))
        if any(kappa == 0 for kappa in self.kappas):
            raise InvalidArgumentException("kappas must be positive")
        if self.B < 2:
            raise InvalidArgumentException(f"B must be at least 2, got {self.B}")

    def dims_for(self, p: int) -> tuple[int, ...]:
        """
        Dimensions to try for p predictors.

        Args:
            p: Number of predictors.

        Raises:
            InvalidArgumentException: If a dimension exceeds p.

        Returns:
            The configured dimensions, or 0..p.
        """
        if self.dims is None:
            return tuple(range(p + 1))
        if max(self.dims) > p:
            raise InvalidArgumentException(f"dims must lie in 0..{p}, got {self.dims}")
        return self.dims

    @classmethod
    def from_dict(cls, values: Mapping[str, Any], B: Optional[int] = None) -> "ParamGrid":
        """
        Build a grid from the grid.json layout.

        Args:
            values: Mapping with lambdas and optional dims, mus, ts, kappas and B.
            B: Bootstrap count overriding the mapping.

        Raises:
            InvalidArgumentException: On unknown keys or invalid values.

        Returns:
            ParamGrid.
        """
        unknown = set(values) - {"lambdas", "dims", "mus", "ts", "kappas", "B"}
        if unknown:
            raise InvalidArgumentException(f"Unknown grid keys: {', '.join(sorted(unknown))}")
        if "lambdas" not in values:
            raise InvalidArgumentException("Grid needs a lambdas list")
        kwargs = {key: values[key] for key in ("lambdas", "dims", "mus", "ts", "kappas", "B") if key in values}
        if B is not None:
            kwargs["B"] = B
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path: Union[str, Path], B: Optional[int] = None) -> "ParamGrid":
        """
        Read a grid.json file.

        Args:
            path: Path of the JSON file.
            B: Bootstrap count overriding the file.

        Raises:
            DataParseException: If the file is missing or is not a JSON object.

        Returns:
            ParamGrid.
        """
        path = Path(path)
        try:
            values = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise DataParseException(f"{path}: file not found") from exc
        except json.JSONDecodeError as exc:
            raise DataParseException(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(values, dict):
            raise DataParseException(f"{path}: expected a JSON object")
        return cls.from_dict(values, B=B)


@dataclass(frozen=True)
class SelectedParams:
    """
    Outcome of sequential selection.

    Attributes:
        lambda_: Chosen Tikhonov strength.
        d: Chosen dimension, None when no dimension stage ran.
        mu: Chosen l1 strength.
        t: Chosen threshold.
        kappa: Chosen bandwidth constant, None for global fits.
        risk_curve: Per stage, (value, bootstrap risk) pairs in grid order.
        stage_order: Names of the stages in the order they ran.
        fit_count: Number of fits the stages scheduled.
    """

    lambda_: float
    d: Optional[int]
    mu: float
    t: float
    kappa: Optional[float]
    risk_curve: dict[str, tuple[tuple[float, float], ...]] = field(default_factory=dict)
    stage_order: tuple[str, ...] = ()
    fit_count: int = 0

    def apply(self, config: EstimatorConfig) -> EstimatorConfig:
        """
        Copy a configuration with the selected values.

        Args:
            config: Configuration to update.

        Returns:
            New EstimatorConfig.
        """
        changes: dict[str, Any] = {"lambda_": self.lambda_, "mu": self.mu, "t": self.t}
        if self.d is not None:
            changes["d"] = self.d
        if self.kappa is not None:
            changes.update(kappa=self.kappa, h=None)
        if config.kind is EstimatorKind.ElasticNet:
            changes["lambda2"] = self.lambda_
        return replace(config, **changes)

    def to_dict(self) -> dict[str, Any]:
        """
        Serialize the selection.

        Returns:
            Dictionary suitable for JSON output.
        """
        return {
            "lambda": self.lambda_,
            "d": self.d,
            "mu": self.mu,
            "t": self.t,
            "kappa": self.kappa,
            "stage_order": list(self.stage_order),
            "fit_count": self.fit_count,
            "risk_curve": {
                stage: [{"value": value, "risk": risk} for value, risk in curve]
                for stage, curve in self.risk_curve.items()
            },
        }
