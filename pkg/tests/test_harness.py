import math

import numpy as np
import pytest

from fracwave import __version__
from fracwave.errors import ConfigurationError
from fracwave.harness import (RunResult, Scenario, continuous_dependence, cubic_scenario, fmt, fmt_float,
                              global_scenario, make_problem, run_convergence, run_global_smalldata,
                              run_smoothing, run_stability_pair, run_uniqueness, stability_scenario,
                              theorem_constants)
from fracwave.solver import SolverConfig
from fracwave.spectral import DomainSpec, SpectralField


def small_smoothing(**knobs):
    base = {"families": "E,R", "pairs": [(1.0, 0.0)], "n_t": 6, "n_bound": 8,
            "domain": DomainSpec.interval(20.0, 8192)}
    base.update(knobs)
    return Scenario("smoothing", knobs=base)


def test_fmt_round_trips():
    for x in (0.1, 1.0 / 3.0, math.pi, 2.718281828459045, 1e-300, -5e20):
        assert float(fmt_float(x)) == x
    assert fmt_float(math.e) == "2.718281828459045"
    assert fmt(True) == "1" and fmt(np.int64(7)) == "7" and fmt("E") == "E"


def test_csv_layout():
    res = RunResult("demo", 4, ["a", "b"], [(1, 0.5), (2, 0.25)], {"k": 1.5})
    lines = res.to_csv().split("\n")
    assert lines[0] == f"# scenario=demo seed=4 version={__version__}"
    assert lines[1] == "a,b"
    assert lines[2:4] == ["1,0.5", "2,0.25"]
    assert lines[4:7] == ["# k=1.5", "# passed=1", ""]


def test_smoothing_header_and_slopes():
    res = run_smoothing(small_smoothing())
    assert res.to_csv().split("\n")[1] == "family,alpha,beta,theta,t,norm"
    assert abs(res.summary["slope[E:alpha=1.5:beta=1:theta=0]"]) <= 0.05
    assert res.summary["slope[R:alpha=1.5:beta=1:theta=0]"] == pytest.approx(0.5, abs=0.05)
    assert res.passed


def test_smoothing_rejects_bad_pairs():
    with pytest.raises(ConfigurationError):
        run_smoothing(small_smoothing(pairs=[(0.5, 0.5)]))
    with pytest.raises(ConfigurationError):
        run_smoothing(small_smoothing(n_t=3))


def test_runs_are_byte_identical():
    a = run_uniqueness(cubic_scenario(n_steps=32)).to_csv()
    b = run_uniqueness(cubic_scenario(n_steps=32)).to_csv()
    assert a == b
    assert a.startswith("# scenario=cubic seed=1 ")


def test_theorem_constants_consistent():
    c = theorem_constants(1.5, 7.0 / 3.0, 1.0 / 7.0)
    assert c["M"] == max(c["M_E"], c["M_S"], c["M_R"])
    assert c["r"] == c["mu"] / (4.0 * c["M"])
    assert theorem_constants(1.5, 7.0 / 3.0, 1.0 / 7.0, c_scale=2.0)["mu"] < c["mu"]


def test_global_zero_data_is_zero():
    prob = make_problem(alpha=1.5, rho=7.0 / 3.0, N=3, eps=1.0 / 7.0, modes=16)
    res = run_global_smalldata(Scenario("zero", prob, SolverConfig(5.0, 32), 0, {"n_samples": 0}))
    assert res.passed
    assert all(row[1] == 0.0 for row in res.rows)


def test_global_rejects_large_data():
    with pytest.raises(ConfigurationError) as err:
        run_global_smalldata(global_scenario(n_steps=16, fill=4.0))
    assert str(err.value).startswith("data")


def test_global_extension():
    res = run_global_smalldata(global_scenario(t_end=5.0, n_steps=64, extend_T=5.0, n_samples=10))
    assert res.summary["t_final"] == pytest.approx(10.0)
    assert res.passed


def test_stability_zero_perturbation():
    sc = stability_scenario(t_end=5.0, n_steps=32, length=50.0, modes=64, amplitude=0.0)
    res = run_stability_pair(sc)
    assert all(r[1] == 0.0 and r[2] == 0.0 for r in res.rows)


def test_stability_swap_invariance():
    kw = dict(t_end=10.0, n_steps=64, length=100.0, modes=128, fit_t_min=1.0)
    a = run_stability_pair(stability_scenario(**kw))
    b = run_stability_pair(stability_scenario(swap=True, **kw))
    np.testing.assert_allclose([r[1] for r in a.rows], [r[1] for r in b.rows], rtol=1e-12, atol=1e-15)
    np.testing.assert_array_equal([r[2] for r in a.rows], [r[2] for r in b.rows])
    assert all(r[1] >= 0.0 and r[2] >= 0.0 for r in a.rows)


def test_stability_rejects_inadmissible_beta():
    with pytest.raises(ConfigurationError):
        run_stability_pair(stability_scenario(n_steps=8, modes=16, beta=0.5))


def test_convergence_ladder_validation():
    sc = cubic_scenario(ladder=(16, 32))
    with pytest.raises(ConfigurationError):
        run_convergence(sc)
    with pytest.raises(ConfigurationError):
        run_convergence(cubic_scenario(ladder=(16, 32, 48)))


def test_linear_uniqueness_is_exact():
    prob = make_problem(kind="zero", eps=0.1, modes=16, u0=lambda d: SpectralField.mode(d, 2))
    res = run_uniqueness(Scenario("lin", prob, SolverConfig(1.0, 32), 0))
    assert res.summary["max_difference"] == 0.0


def test_continuous_dependence_fixture():
    res = continuous_dependence(cubic_scenario(amplitude=0.5, n_steps=64))
    assert res.passed
    assert res.summary["C"] == pytest.approx(0.7344650653633991, rel=1e-9)
    assert [r[1] for r in res.rows] == pytest.approx(
        [0.007344650653633991, 0.0036722922716908965, 0.001836137991639163], rel=1e-9)
