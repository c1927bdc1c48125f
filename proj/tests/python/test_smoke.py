import os

import numpy as np
import pytest

import larscp

DATA = os.path.join(os.environ.get("LARSCP_DATA_DIR", "data"), "diabetes.csv")


@pytest.fixture(scope="module")
def diabetes():
    return larscp.load_csv(DATA, "Y")


def test_fit_and_select(diabetes):
    path = larscp.lars_path(diabetes)
    sel = larscp.select_by_cp(path)
    assert sel.selected == ["BMI", "S5", "BP", "S3", "SEX", "S6", "S1"]
    assert path.to_dict()["entry_order"][:2] == ["BMI", "S5"]


def test_lasso_path_reaches_least_squares(diabetes):
    path = larscp.lars_path(diabetes, "lasso")
    info = larscp.full_model_info(diabetes)
    assert len(path.steps[-1].active_set) == 10
    assert np.allclose(path.steps[-1].mu_hat, info.y_hat, atol=1e-6)


def test_case_cp_sums_to_cp(diabetes):
    path = larscp.lars_path(diabetes)
    info = larscp.full_model_info(diabetes)
    step = path.steps[7]
    records = larscp.case_cp(step, info)
    assert records["sum_c_pi"] == pytest.approx(step.cp, rel=1e-10)
    assert larscp.cp_total(step.mu_hat, step.df_surrogate, info) == pytest.approx(step.cp)


def test_numpy_dataset_and_errors():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(30, 3))
    y = x @ np.array([2.0, 0.0, -1.0]) + rng.normal(size=30)
    d = larscp.Dataset(["a", "b", "c"], x, y)
    path = larscp.lars_path(d)
    assert len(path.steps) == 4
    with pytest.raises(larscp.LarsCpError):
        larscp.load_csv(DATA, "NOPE")
    with pytest.raises(ValueError):
        larscp.lars_path(d, "ridge")


def test_sir_and_chi_square(diabetes):
    assert larscp.sir(diabetes)["estimated_d"] == 1
    assert larscp.chi_sq_upper_tail(2 * np.log(2), 2) == pytest.approx(0.5)


def test_stress_reports(diabetes):
    aug = larscp.round_augment(diabetes, 2.2, ["SEX"])
    assert len(aug.predictor_names) == 19
    rounded = larscp.stress_round(diabetes, 2.2, ["SEX"])
    assert len(rounded["perturbed"][0]["selection"]["selected"]) == 8
    a = larscp.stress_marginal(diabetes, "S3", "S4", 0.0, 5, 11)
    b = larscp.stress_marginal(diabetes, "S3", "S4", 0.0, 5, 11)
    assert a == b
    assert abs(a["tilted_corr"]) < 0.02


def test_simulate_cov_is_seeded():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(25, 3))
    d = larscp.Dataset(["a", "b", "c"], x, x[:, 0] + rng.normal(size=25))
    one = larscp.simulate_cov(d, step_count=2, replicates=120, seed=4)
    two = larscp.simulate_cov(d, step_count=2, replicates=120, seed=4)
    assert np.array_equal(one["estimates"], two["estimates"])
    assert one["used"] == 120
    with pytest.raises(larscp.LarsCpError):
        larscp.simulate_cov(d, step_count=2, replicates=120, generator="uniform")
