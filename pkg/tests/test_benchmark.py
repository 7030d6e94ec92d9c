import json
import math

import numpy as np
import pytest

from exderiv.benchmark import emit_table, render_table, run_replications, squared_error
from exderiv.ede_types import EstimatorKind, KernelKind, ModelKind, TableFormat
from exderiv.exceptions import InvalidArgumentException
from exderiv.estimators import fit
from exderiv.models.bench_spec import BenchSpec, ErrorTable
from exderiv.models.estimator_config import EstimatorConfig
from exderiv.models.param_grid import ParamGrid
from exderiv.simdata import generate, generate_linear, generate_nonlinear

RIDGE = EstimatorConfig(kind=EstimatorKind.Ridge, lambda_=0.05)
EDE = EstimatorConfig(kind=EstimatorKind.EDE, lambda_=0.05, d=6)


def small_spec(**changes):
    values = dict(model=ModelKind.linear, n=150, estimators=(RIDGE, EDE), replications=3, base_seed=40)
    values.update(changes)
    return BenchSpec(**values)


def test_single_replication_has_zero_sd():
    spec = small_spec(replications=1)
    table = run_replications(spec)
    instance = generate(spec.model, spec.p, spec.n, spec.sigma_nu2, spec.sigma2, spec.base_seed + 1)
    error, _ = squared_error(instance, RIDGE)
    assert table.rows[0].mean_err == error
    assert table.rows[0].sd_err == 0.0
    assert table.rows[0].sd_time_s == 0.0


def test_two_replications_aggregate():
    spec = small_spec(replications=2)
    table = run_replications(spec)
    errors = [
        squared_error(generate(spec.model, spec.p, spec.n, spec.sigma_nu2, spec.sigma2, spec.base_seed + r), EDE)[0]
        for r in (1, 2)
    ]
    assert table.rows[1].mean_err == pytest.approx((errors[0] + errors[1]) / 2, rel=1e-12)
    assert table.rows[1].sd_err == pytest.approx(abs(errors[0] - errors[1]) / math.sqrt(2), rel=1e-12)


def test_noiseless_data_has_no_error():
    spec = BenchSpec(
        model=ModelKind.linear,
        n=50,
        p=6,
        sigma_nu2=0.0,
        sigma2=0.0,
        estimators=(EstimatorConfig(kind=EstimatorKind.EDE, lambda_=1.0, d=5),),
        replications=2,
    )
    row = run_replications(spec).rows[0]
    assert row.mean_err < 1e-12
    assert row.failures == 0


def test_error_columns_are_deterministic_and_order_free():
    first = run_replications(small_spec())
    again = run_replications(small_spec())
    reordered = run_replications(small_spec(estimators=(EDE, RIDGE)))
    assert [row.mean_err for row in first.rows] == [row.mean_err for row in again.rows]
    assert [row.sd_err for row in first.rows] == [row.sd_err for row in again.rows]
    assert first.rows[0].mean_err == reordered.rows[1].mean_err
    assert first.rows[1].mean_err == reordered.rows[0].mean_err


def test_streaming_aggregation_agrees():
    spec = small_spec(replications=4)
    table = run_replications(spec)
    count, mean, squares = 0, 0.0, 0.0
    for r in range(1, 5):
        instance = generate(spec.model, spec.p, spec.n, spec.sigma_nu2, spec.sigma2, spec.base_seed + r)
        error, _ = squared_error(instance, RIDGE)
        count += 1
        delta = error - mean
        mean += delta / count
        squares += delta * (error - mean)
    assert table.rows[0].mean_err == pytest.approx(mean, abs=1e-12)
    assert table.rows[0].sd_err == pytest.approx(math.sqrt(squares / (count - 1)), abs=1e-12)


def test_failures_are_counted():
    broken = EstimatorConfig(kind=EstimatorKind.NEDE, h=1e-6, kernel=KernelKind.biweight)
    table = run_replications(small_spec(estimators=(RIDGE, broken), replications=2))
    assert table.rows[0].failures == 0
    assert table.rows[1].failures == 2
    assert math.isnan(table.rows[1].mean_err)
    assert table.failures == 2


def test_global_intercept_is_translated_to_the_origin():
    instance = generate_linear(p=8, n=300, sigma_nu2=0.01, sigma2=0.25, seed=3)
    estimate = fit(instance.data, EDE)
    error, elapsed = squared_error(instance, EDE)
    beta_hat = np.concatenate(([estimate.value_at(np.zeros(8))], estimate.dxf_hat))
    assert error == pytest.approx(float(np.sum((beta_hat - instance.beta_true) ** 2)))
    assert elapsed >= 0.0


def test_workers_do_not_change_errors():
    serial = run_replications(small_spec())
    parallel = run_replications(small_spec(workers=2))
    assert [row.mean_err for row in serial.rows] == [row.mean_err for row in parallel.rows]


def test_auto_mode_selects_per_replication():
    grid = ParamGrid(lambdas=(0.01, 0.1), dims=(5, 6), B=3)
    table = run_replications(small_spec(estimators=(EDE,), replications=2, grid=grid))
    assert table.rows[0].failures == 0
    assert "selected parameters" in table.description


def test_bench_spec_validation():
    with pytest.raises(InvalidArgumentException):
        small_spec(replications=0)
    with pytest.raises(InvalidArgumentException):
        small_spec(estimators=())


def test_csv_header(tmp_path):
    path = tmp_path / "table.csv"
    emit_table(run_replications(small_spec(replications=1)), TableFormat.csv, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "estimator,mean_err,sd_err,mean_time_s,sd_time_s,failures"
    assert lines[1].startswith("ridge,")
    assert len(lines) == 3


def test_json_round_trip(tmp_path):
    table = run_replications(small_spec(replications=2))
    path = tmp_path / "table.json"
    emit_table(table, TableFormat.json, path)
    assert ErrorTable.from_dict(json.loads(path.read_text(encoding="utf-8"))) == table


def test_markdown_caption():
    table = run_replications(small_spec(replications=3))
    lines = render_table(table, TableFormat.markdown).splitlines()
    assert lines[0] == (
        "Square-loss estimation error over 3 replications "
        "(linear model, p=8, n=150, sigma_nu2=0.01, sigma2=1, base_seed=40)"
    )
    assert lines[2] == "| estimator | mean_err | sd_err | mean_time_s | sd_time_s | failures |"
    assert lines[4].startswith("| ridge | ")
    assert len(lines) == 6


def test_unwritable_path(tmp_path):
    table = run_replications(small_spec(replications=1))
    with pytest.raises(OSError):
        emit_table(table, TableFormat.csv, tmp_path / "missing" / "table.csv")


@pytest.mark.slow
def test_linear_model_error_pattern():
    estimators = (
        EstimatorConfig(kind=EstimatorKind.OLS_MP),
        EstimatorConfig(kind=EstimatorKind.Ridge, lambda_=0.005),
        EstimatorConfig(kind=EstimatorKind.EDE, lambda_=0.005, d=6),
        EstimatorConfig(kind=EstimatorKind.ALEDE, lambda_=0.005, d=6, mu=0.1),
        EstimatorConfig(kind=EstimatorKind.EDEP, lambda_=0.005, d=6, t=0.001),
    )
    spec = BenchSpec(
        model=ModelKind.linear, n=1000, estimators=estimators, sigma_nu2=0.01, sigma2=1.0, replications=100, base_seed=7
    )
    ols, ridge, ede, alede, edep = (row.mean_err for row in run_replications(spec).rows)
    assert ols > ridge
    assert abs(ede - ridge) / ridge < 0.15
    assert alede < 0.5 * ridge
    assert abs(edep - ede) / ede < 0.10


@pytest.mark.slow
def test_nonlinear_error_decreases_with_n():
    config = EstimatorConfig(kind=EstimatorKind.NEDE, kappa=1.0)

    def median_error(n):
        errors = []
        for seed in range(20):
            instance = generate_nonlinear(p=4, n=n, sigma_nu2=0.01, sigma2=0.25, seed=seed)
            estimate = fit(instance.data, config, x0=instance.x0)
            errors.append(float(np.sum((estimate.dxf_hat - instance.beta_true[1:]) ** 2)))
        return float(np.median(errors))

    assert median_error(4000) < median_error(500)


@pytest.mark.slow
def test_alede_sign_recovery_improves_with_n():
    config = EstimatorConfig(kind=EstimatorKind.ALEDE, lambda_=0.005, d=6, mu=0.1)

    def sign_match_rate(n):
        matches = 0
        for seed in range(50):
            instance = generate_linear(p=8, n=n, sigma_nu2=0.01, sigma2=1.0, seed=seed)
            estimate = fit(instance.data, config)
            matches += np.array_equal(np.sign(estimate.dxf_hat), np.sign(np.round(instance.beta_true[1:], 12)))
        return matches / 50

    large = sign_match_rate(1000)
    assert large > sign_match_rate(100)
    assert large >= 0.6
