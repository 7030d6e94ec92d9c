"""Command line interface: simulate, fit, select-params and benchmark."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import numpy as np
import pandas as pd

from exderiv.benchmark import emit_table, render_table, run_replications
from exderiv.ede_types import EstimatorKind, KernelKind, ModelKind, TableFormat
from exderiv.estimators import fit, fit_at_points
from exderiv.exceptions import DataParseException, ExteriorDerivativeException, InvalidArgumentException
from exderiv.kernelization import default_threshold
from exderiv.models.bench_spec import BenchSpec
from exderiv.models.data_set import DataSet
from exderiv.models.estimator_config import EstimatorConfig
from exderiv.models.param_grid import ParamGrid
from exderiv.selection import select_sequential
from exderiv.simdata import design_spec, generate, load_csv, save_csv, save_truth

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAILURES = 2
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
AUTO_THRESHOLD = "auto"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _threshold(text: str) -> Union[float, str]:
    if text.strip().lower() == AUTO_THRESHOLD:
        return AUTO_THRESHOLD
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a number or '{AUTO_THRESHOLD}', got '{text}'") from exc


def _add_estimator_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kernel", type=KernelKind, choices=list(KernelKind), help="Kernel for local fits")
    parser.add_argument("--h", "--bandwidth", dest="h", type=float, help="Bandwidth for local fits")
    parser.add_argument("--kappa", type=float, help="Bandwidth constant, h = kappa n^(-1/(d+4))")
    parser.add_argument("--lambda", dest="lambda_", type=float, default=0.0, help="Tikhonov strength")
    parser.add_argument("--d", "--dim", dest="d", type=int, help="Manifold dimension")
    parser.add_argument("--mu", type=float, default=0.0, help="Lasso strength")
    parser.add_argument("--gamma", type=float, default=1.0, help="Adaptive lasso exponent")
    parser.add_argument(
        "--t", type=_threshold, default=0.0, help='Covariance threshold, or "auto" for K sqrt(log p / n)'
    )
    parser.add_argument("--threshold-k", type=float, default=1.0, help="Constant K of --t auto")
    parser.add_argument("--lambda2", type=float, default=0.0, help="Elastic net ridge strength")


def _add_data_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="CSV file with a header row")
    parser.add_argument("--response", default="y", help="Response column")


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser.

    Returns:
        Parser with the four subcommands.
    """
    parser = _Parser(prog="exderiv", description="Exterior derivative regression on manifolds")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    simulate = commands.add_parser("simulate", help="Draw a simulated data set")
    simulate.add_argument("--model", type=ModelKind, choices=list(ModelKind), default=ModelKind.linear)
    simulate.add_argument("--p", type=int, default=8)
    simulate.add_argument("--n", type=int, required=True)
    simulate.add_argument("--sigma-nu2", type=float, default=0.01)
    simulate.add_argument("--sigma2", type=float, default=1.0)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--response", default="y")
    simulate.add_argument("--out", required=True)
    simulate.add_argument("--truth-out")

    fit_parser = commands.add_parser("fit", help="Fit one estimator")
    fit_parser.add_argument("--estimator", type=EstimatorKind, choices=list(EstimatorKind), required=True)
    _add_data_options(fit_parser)
    points = fit_parser.add_mutually_exclusive_group()
    points.add_argument("--x0", help='Comma-separated point or "means"')
    points.add_argument("--x0-file", help="CSV of evaluation points with a header row")
    fit_parser.add_argument("--sigma-nu2", type=float, default=0.0, help="Predictor noise variance to correct for")
    _add_estimator_options(fit_parser)
    fit_parser.add_argument("--out", help="Output JSON, standard output when omitted")

    select = commands.add_parser("select-params", help="Select parameters by sequential bootstrap")
    select.add_argument("--estimator", type=EstimatorKind, choices=list(EstimatorKind), required=True)
    _add_data_options(select)
    select.add_argument("--grid", required=True, help="grid.json")
    select.add_argument("--bootstrap", type=int, help="Bootstrap replicates, overrides the grid")
    select.add_argument("--seed", type=int, default=0)
    select.add_argument("--x0", help='Comma-separated point or "means"')
    select.add_argument("--sigma-nu2", type=float, default=0.0)
    _add_estimator_options(select)
    select.add_argument("--out", help="Output JSON, standard output when omitted")

    bench = commands.add_parser("benchmark", help="Replicate a simulation experiment")
    bench.add_argument("--model", type=ModelKind, choices=list(ModelKind), default=ModelKind.linear)
    bench.add_argument("--p", type=int, default=8)
    bench.add_argument("--n", type=int, required=True)
    bench.add_argument("--sigma-nu2", type=float, default=0.01)
    bench.add_argument("--sigma2", type=float, default=1.0)
    bench.add_argument("--replications", type=int, default=100)
    bench.add_argument("--estimators", default="ols,ridge,pcr,en,ede,alede,edep,aledep")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--format", type=TableFormat, choices=list(TableFormat), default=TableFormat.csv)
    bench.add_argument("--out", help="Output table, standard output when omitted")
    bench.add_argument("--grid", help="grid.json, select parameters in every replication")
    bench.add_argument("--bootstrap", type=int, help="Bootstrap replicates, overrides the grid")
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--correct-noise", action="store_true", help="Subtract sigma_nu2 in the global estimators")
    _add_estimator_options(bench)
    return parser


def _config(kind: EstimatorKind, args: argparse.Namespace, sigma_nu2: float) -> EstimatorConfig:
    return EstimatorConfig(
        kind=kind,
        h=args.h,
        kappa=args.kappa,
        kernel=args.kernel,
        lambda_=args.lambda_,
        d=args.d,
        mu=args.mu,
        gamma=args.gamma,
        t=args.t,
        sigma_nu2=sigma_nu2 if kind.is_global else 0.0,
        lambda2=args.lambda2,
    )


def _resolve_threshold(args: argparse.Namespace, n: int, p: int) -> None:
    if args.t == AUTO_THRESHOLD:
        args.t = default_threshold(n, p, args.threshold_k)
        logger.info("Using threshold t=%.6g for n=%d, p=%d", args.t, n, p)


def parse_point(text: Optional[str], data: DataSet) -> Optional[np.ndarray]:
    """
    Parse an evaluation point.

    Args:
        text: Comma-separated coordinates, "means", or None.
        data: Data the point refers to.

    Raises:
        InvalidArgumentException: If the point is malformed or has the wrong length.

    Returns:
        Length p array, or None.
    """
    if text is None:
        return None
    if text.strip().lower() == "means":
        return data.X.mean(axis=0)
    try:
        point = np.array([float(value) for value in text.split(",")])
    except ValueError as exc:
        raise InvalidArgumentException(f"Cannot parse x0 '{text}'") from exc
    if point.shape != (data.p,):
        raise InvalidArgumentException(f"x0 needs {data.p} coordinates, got {point.size}")
    return point


def _read_points(path: str, p: int) -> np.ndarray:
    try:
        points = pd.read_csv(Path(path), encoding="utf-8").to_numpy(dtype=np.float64)
    except FileNotFoundError as exc:
        raise DataParseException(f"{path}: file not found") from exc
    except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise DataParseException(f"{path}: cannot read numeric points ({exc})") from exc
    if points.ndim != 2 or points.shape[1] != p or not np.all(np.isfinite(points)):
        raise DataParseException(f"{path}: expected finite points with {p} columns")
    return points


def _write_json(values: Any, out: Optional[str]) -> None:
    text = json.dumps(values, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _simulate(args: argparse.Namespace) -> int:
    instance = generate(args.model, args.p, args.n, args.sigma_nu2, args.sigma2, args.seed)
    save_csv(instance.data, args.out, response_column=args.response)
    if args.truth_out:
        save_truth(instance, args.truth_out)
    logger.info("Wrote %d samples to %s", args.n, args.out)
    return EXIT_OK


def _fit(args: argparse.Namespace) -> int:
    data = load_csv(args.data, args.response)
    _resolve_threshold(args, data.n, data.p)
    config = _config(args.estimator, args, args.sigma_nu2)
    if args.x0_file:
        estimates = fit_at_points(data, _read_points(args.x0_file, data.p), config)
        _write_json([estimate.to_dict() for estimate in estimates], args.out)
    else:
        estimate = fit(data, config, x0=parse_point(args.x0, data))
        _write_json(estimate.to_dict(), args.out)
    return EXIT_OK


def _select(args: argparse.Namespace) -> int:
    data = load_csv(args.data, args.response)
    _resolve_threshold(args, data.n, data.p)
    grid = ParamGrid.from_json(args.grid, B=args.bootstrap)
    base = _config(args.estimator, args, args.sigma_nu2)
    selected = select_sequential(
        data, grid, args.estimator, args.seed, x0=parse_point(args.x0, data), base_config=base
    )
    _write_json(selected.to_dict(), args.out)
    return EXIT_OK


def _benchmark(args: argparse.Namespace) -> int:
    kinds = []
    for name in args.estimators.split(","):
        try:
            kinds.append(EstimatorKind(name.strip()))
        except ValueError as exc:
            raise InvalidArgumentException(f"Unknown estimator '{name}'") from exc
    if args.d is None:
        args.d = design_spec(args.p).d_design
    if args.h is None and args.kappa is None:
        args.kappa = 1.0
    _resolve_threshold(args, args.n, args.p)
    noise = args.sigma_nu2 if args.correct_noise else 0.0
    spec = BenchSpec(
        model=args.model,
        n=args.n,
        estimators=tuple(_config(kind, args, noise) for kind in kinds),
        p=args.p,
        sigma_nu2=args.sigma_nu2,
        sigma2=args.sigma2,
        replications=args.replications,
        base_seed=args.seed,
        grid=ParamGrid.from_json(args.grid, B=args.bootstrap) if args.grid else None,
        workers=args.workers,
    )
    table = run_replications(spec)
    if args.out is None:
        sys.stdout.write(render_table(table, args.format))
    else:
        emit_table(table, args.format, args.out)
    if table.failures:
        logger.warning("%d fits failed", table.failures)
        return EXIT_FAILURES
    return EXIT_OK


_COMMANDS = {
    "simulate": _simulate,
    "fit": _fit,
    "select-params": _select,
    "benchmark": _benchmark,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line interface.

    Args:
        argv: Arguments without the program name, defaults to sys.argv[1:].

    Returns:
        Exit code: 0 on success, 1 on a configuration or input error, 2 when benchmark fits failed.
    """
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT)
    try:
        return _COMMANDS[args.command](args)
    except (ExteriorDerivativeException, OSError) as exc:
        print(f"exderiv {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
