import json
import math

import numpy as np
import pytest

import gwlab

CASE2 = {
    "offspring_type1": {
        "kind": "independent",
        "first": {"kind": "poisson", "mean": 1},
        "second": {"kind": "poisson", "mean": 0.5},
    },
    "offspring_type2": {
        "kind": "independent",
        "first": {"kind": "deterministic", "value": 0},
        "second": {"kind": "poisson", "mean": 1},
    },
    "immigration": {
        "kind": "independent",
        "first": {"kind": "poisson", "mean": 1},
        "second": {"kind": "poisson", "mean": 1},
    },
}


def test_classify():
    assert gwlab.classify(1.0, 0.7, 1.0) == "Case2"
    assert gwlab.classify(0.5, 0.0, 0.5).startswith("NotCovered")


def test_model_moments():
    m = gwlab.model_from_dict(CASE2)
    assert m.case_number == 2
    assert m.mean(20) == pytest.approx([20.0, 115.0])
    assert m.mean_generic(20) == pytest.approx(m.mean(20))
    cov = np.array(m.cov(10))
    assert np.allclose(cov, cov.T)
    assert json.loads(m.to_json())["case"] == "Case2"


def test_simulate_shape_and_determinism():
    m = gwlab.Model.archetype(2)
    a = m.simulate(K=25, seed=4, reps=30, threads=1)
    b = m.simulate(K=25, seed=4, reps=30, threads=4)
    assert a.shape == (30, 26, 2)
    assert a.dtype == np.int64
    assert (a[:, 0, :] == 0).all()
    assert np.array_equal(a, b)


def test_transforms_agree():
    closed = gwlab.laplace_joint_case2(0.5, 0.5, 1.0, 1.0, 1.0, 0.5)
    integral = gwlab.laplace_joint_fosterney(0.5, 0.5, 1.0, 1.0, 0.5)
    assert closed == pytest.approx(integral, abs=1e-9)
    assert gwlab.laplace_sbp(0.5, 0.0, 2.0, 1.0) == pytest.approx(1.0 / 9.0)
    assert gwlab.sbp_marginal_cdf(1.0, 1.0, 2.0, 1.0) == pytest.approx(1.0 - math.exp(-1.0))


def test_stationary_pmf():
    pmf = gwlab.stationary_pmf({"kind": "bernoulli", "p": 0.5}, {"kind": "poisson", "mean": 1}, N=40, M=256)
    expected = [math.exp(-2.0) * 2.0**k / math.factorial(k) for k in range(41)]
    assert np.allclose(pmf, expected, atol=1e-13)


def test_run_command_in_memory():
    files = gwlab.run_command("moments", case=1, k=5)
    rows = [r for r in files["moments.csv"].splitlines() if not r.startswith("#")]
    assert rows[0] == "k,mean1,mean2,var11,var12,var22"
    assert rows[-1].split(",")[1:3] == ["5", "5"]


def test_errors_are_python_exceptions():
    with pytest.raises(ValueError):
        gwlab.model_from_dict({"offspring_type1": {}})
    with pytest.raises(ValueError):
        gwlab.run_command("experiment", case=1, reps=1)
    with pytest.raises(gwlab.ValidationError):
        gwlab.Model.archetype(9)


def test_acceptance_subset():
    results = gwlab.run_acceptance(only=[3])
    assert len(results) == 1
    assert results[0]["pass"]
