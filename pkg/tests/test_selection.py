import json

import numpy as np
import pytest

from exderiv.ede_types import EstimatorKind
from exderiv.estimators import fit
from exderiv.exceptions import DataParseException, InvalidArgumentException, SelectionException
from exderiv.models.data_set import DataSet
from exderiv.models.estimate import Diagnostics, Estimate
from exderiv.models.estimator_config import EstimatorConfig
from exderiv.models.param_grid import ParamGrid, SelectedParams
from exderiv.selection import bootstrap_risk, select_sequential
from exderiv.simdata import generate_linear


def fit_with_point(data, config, x0):
    return fit(data, config, x0=x0)


def constant_fit(data, config, x0):
    beta = np.zeros(data.p + 1)
    beta[0] = data.Y.mean()
    diagnostics = Diagnostics(config=config, eigenvalues=np.zeros(data.p), spectral_gap=None, effective_n=data.n)
    return Estimate(beta=beta, x0=np.zeros(data.p), diagnostics=diagnostics)


def test_interpolating_estimator_has_no_risk(rank_deficient):
    data = rank_deficient(n=60, p=3, rank=3, seed=1)
    risk = bootstrap_risk(data, fit_with_point, EstimatorConfig(kind=EstimatorKind.OLS_MP), B=10, seed=3)
    assert risk < 1e-10


def test_constant_predictor_risk_is_the_variance(rng):
    data = DataSet(rng.standard_normal((500, 2)), 2.0 * rng.standard_normal(500))
    risk = bootstrap_risk(data, constant_fit, EstimatorConfig(kind=EstimatorKind.OLS_MP), B=20, seed=4)
    assert risk == pytest.approx(4.0, rel=0.3)


def test_bootstrap_risk_is_deterministic(small_data):
    config = EstimatorConfig(kind=EstimatorKind.Ridge, lambda_=0.1)
    first = bootstrap_risk(small_data, fit_with_point, config, B=8, seed=12)
    assert first == bootstrap_risk(small_data, fit_with_point, config, B=8, seed=12)
    assert first == bootstrap_risk(small_data, fit_with_point, config, B=8, seed=12, workers=3)
    assert first != bootstrap_risk(small_data, fit_with_point, config, B=8, seed=13)


def test_bootstrap_risk_needs_two_replicates(small_data):
    with pytest.raises(InvalidArgumentException):
        bootstrap_risk(small_data, fit_with_point, EstimatorConfig(kind=EstimatorKind.Ridge), B=1, seed=0)


def test_bootstrap_risk_single_row_has_no_out_of_bag_rows():
    data = DataSet(np.ones((1, 2)), np.ones(1))
    with pytest.raises(InvalidArgumentException):
        bootstrap_risk(data, constant_fit, EstimatorConfig(kind=EstimatorKind.Ridge), B=2, seed=0)


def test_singleton_grids_pass_through(linear_instance):
    grid = ParamGrid(lambdas=(0.5,), dims=(2,), mus=(0.3,), ts=(0.01,), B=2)
    selected = select_sequential(linear_instance.data, grid, EstimatorKind.ALEDEP, seed=1)
    assert (selected.lambda_, selected.d, selected.mu, selected.t) == (0.5, 2, 0.3, 0.01)
    assert selected.kappa is None
    assert selected.stage_order == ("lambda", "d", "mu", "t")
    assert selected.fit_count == 4 * 2


def test_local_selection_starts_with_kappa(small_data):
    grid = ParamGrid(lambdas=(0.1,), dims=(3,), kappas=(1.5, 3.0), B=2)
    selected = select_sequential(small_data, grid, EstimatorKind.NEDE, seed=2, x0=np.zeros(small_data.p))
    assert selected.stage_order == ("kappa", "lambda", "d")
    assert selected.kappa in (1.5, 3.0)
    assert selected.fit_count == (2 + 1 + 1) * 2


def test_local_selection_needs_a_point(small_data):
    with pytest.raises(InvalidArgumentException):
        select_sequential(small_data, ParamGrid(lambdas=(0.1,), B=2), EstimatorKind.NEDE, seed=0)


def test_risk_curves_match_choices(linear_instance):
    grid = ParamGrid(lambdas=(0.0, 0.01, 0.1, 1.0), dims=(4, 5, 6, 7), mus=(0.0, 0.05, 0.5), B=5)
    selected = select_sequential(linear_instance.data, grid, EstimatorKind.ALEDE, seed=7)
    chosen = {"lambda": selected.lambda_, "d": selected.d, "mu": selected.mu}
    for stage, value in chosen.items():
        curve = selected.risk_curve[stage]
        best = min(risk for _, risk in curve)
        assert dict(curve)[value] == best
    assert selected.fit_count == (4 + 4 + 3) * 5


def test_elastic_net_selection_uses_the_lambda_stage(small_data):
    grid = ParamGrid(lambdas=(0.01, 1.0), mus=(0.0, 0.1), B=3)
    selected = select_sequential(small_data, grid, EstimatorKind.ElasticNet, seed=3)
    assert selected.stage_order == ("lambda", "mu")
    assert selected.d is None
    config = selected.apply(EstimatorConfig(kind=EstimatorKind.ElasticNet))
    assert config.lambda2 == selected.lambda_


def test_ties_prefer_stronger_regularization(small_data):
    grid = ParamGrid(lambdas=(0.1,), dims=(4,), ts=(0.0, 1e-12, 1e-11), B=2)
    selected = select_sequential(small_data, grid, EstimatorKind.EDEP, seed=5)
    assert selected.t == 1e-11


def test_stage_where_every_fit_fails(rank_deficient):
    data = rank_deficient(n=40, p=4, rank=2, seed=6)
    grid = ParamGrid(lambdas=(0.1,), dims=(4,), B=2)
    with pytest.raises(SelectionException, match="d selection stage"):
        select_sequential(data, grid, EstimatorKind.EDE, seed=0)


def test_selection_is_deterministic(small_data):
    grid = ParamGrid(lambdas=(0.01, 0.1, 1.0), B=4)
    first = select_sequential(small_data, grid, EstimatorKind.EDE, seed=9)
    second = select_sequential(small_data, grid, EstimatorKind.EDE, seed=9)
    assert first == second


def test_regularization_is_not_selected_when_it_hurts():
    instance = generate_linear(p=8, n=200, sigma_nu2=0.01, sigma2=1.0, seed=17)
    grid = ParamGrid(lambdas=(0.0, 0.001, 0.01, 0.1, 1.0), B=10)
    selected = select_sequential(instance.data, grid, EstimatorKind.EDE, seed=17)
    curve = dict(selected.risk_curve["lambda"])
    assert curve[selected.lambda_] <= curve[0.0]


@pytest.mark.slow
def test_recovers_the_rank_of_noiseless_data(rank_deficient):
    grid = ParamGrid(lambdas=(0.001, 0.01, 0.1, 1.0), dims=range(1, 7), B=10)
    recovered = 0
    for seed in range(20):
        data = rank_deficient(n=100, p=6, rank=3, seed=seed)
        recovered += select_sequential(data, grid, EstimatorKind.EDE, seed=seed).d == 3
    assert recovered >= 18


def test_param_grid_validation():
    with pytest.raises(InvalidArgumentException):
        ParamGrid(lambdas=())
    with pytest.raises(InvalidArgumentException):
        ParamGrid(lambdas=(-1.0,))
    with pytest.raises(InvalidArgumentException):
        ParamGrid(lambdas=(1.0,), B=1)
    with pytest.raises(InvalidArgumentException):
        ParamGrid(lambdas=(1.0,), dims=(9,)).dims_for(8)
    assert ParamGrid(lambdas=(1.0,)).dims_for(3) == (0, 1, 2, 3)


def test_param_grid_warns_on_large_grid():
    with pytest.warns(UserWarning, match="small grid"):
        ParamGrid(lambdas=tuple(np.linspace(0.0, 1.0, 30)))


def test_param_grid_from_json(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps({"lambdas": [0.1, 1], "dims": [2, 3], "mus": [0], "ts": [0], "kappas": [1]}))
    grid = ParamGrid.from_json(path, B=7)
    assert grid.lambdas == (0.1, 1.0)
    assert grid.dims == (2, 3)
    assert grid.B == 7
    path.write_text("[1, 2]")
    with pytest.raises(DataParseException):
        ParamGrid.from_json(path)
    path.write_text(json.dumps({"lambdas": [1], "alpha": [2]}))
    with pytest.raises(InvalidArgumentException, match="alpha"):
        ParamGrid.from_json(path)


def test_selected_params_to_dict():
    selected = SelectedParams(
        lambda_=0.1, d=3, mu=0.0, t=0.0, kappa=None, risk_curve={"lambda": ((0.1, 2.0),)}, stage_order=("lambda",),
        fit_count=5,
    )
    values = selected.to_dict()
    assert values["lambda"] == 0.1
    assert values["risk_curve"]["lambda"] == [{"value": 0.1, "risk": 2.0}]


def test_risks_within_rounding_count_as_ties(small_data):
    def scaled_constant_fit(data, config, x0):
        estimate = constant_fit(data, config, x0)
        beta = estimate.coefficients.copy()
        beta[0] *= 1.0 + config.t
        return Estimate(beta=beta, x0=estimate.x0, diagnostics=estimate.diagnostics)

    grid = ParamGrid(lambdas=(0.1,), dims=(4,), ts=(0.0, 1e-15, 2e-15), B=3)
    selected = select_sequential(small_data, grid, EstimatorKind.EDEP, seed=2, fit_fn=scaled_constant_fit)
    assert selected.t == 2e-15
    risks = [risk for _, risk in selected.risk_curve["t"]]
    assert max(risks) - min(risks) <= 1e-12 * min(risks)
