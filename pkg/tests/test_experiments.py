import numpy as np
import pytest

from rwa_rg.core import Method, MethodTag, Model, ModelParams, TimeGrid
from rwa_rg.experiments import (
    PRESETS,
    ConfigurationError,
    ExperimentSpec,
    figure_preset,
    run,
    sweep_epsilon,
)


def tags(*names):
    return tuple(MethodTag.parse(n) for n in names)


def rabi_spec(methods, eps=0.1, t_max=5.0, n=500, delta=0.0):
    return ExperimentSpec(Model.RABI, tags(*methods),
                          ModelParams(delta, 1 / eps), TimeGrid.uniform(t_max, n))


def test_empty_methods_rejected():
    with pytest.raises(ConfigurationError):
        run(rabi_spec([]))


def test_series_needs_resonance():
    with pytest.raises(ConfigurationError):
        run(rabi_spec(["rwa", "numeric"], delta=0.2))
    # The numeric method alone is fine off resonance.
    res = run(rabi_spec(["numeric"], delta=0.2))
    assert res.report is not None and res.report.errors == {}


def test_jc_rejects_rabi_only_methods():
    spec = ExperimentSpec(Model.JAYNES_CUMMINGS, tags("two_scale"),
                          ModelParams(0.0, 10.0, Model.JAYNES_CUMMINGS), TimeGrid.uniform(1.0, 5))
    with pytest.raises(ConfigurationError):
        run(spec)


def test_no_numeric_means_no_report():
    res = run(rabi_spec(["rwa", "renormalized"]))
    assert res.report is None
    assert set(res.trajectories) == {"rwa", "renormalized"}


def test_fig1_rwa_tracks_numeric():
    res = run(figure_preset(1))
    assert res.spec.grid.t_end == 10.0 and res.spec.params.big_delta == 50.0
    assert res.report["rwa"].max_error_a < 0.05


def test_fig4_two_scale_diverges_renormalized_bounded():
    res = run(figure_preset(4))
    ts = res.trajectories["two_scale(2)"]
    rn = res.trajectories["renormalized"]
    assert np.max(ts.prob_a) > 1.5
    assert np.max(rn.prob_a) < 1.1
    assert res.report["two_scale(2)"].max_error_a > 3 * res.report["renormalized"].max_error_a


def test_fig5_default_and_override():
    assert figure_preset(5).params.big_delta == 10.0
    assert figure_preset(5, big_delta=50.0).params.big_delta == 50.0
    with pytest.raises(ConfigurationError):
        figure_preset(9)


def test_jc_report_uses_channels():
    spec = ExperimentSpec(Model.JAYNES_CUMMINGS, tags("rwa", "renormalized", "numeric"),
                          ModelParams(0.0, 10.0, Model.JAYNES_CUMMINGS), TimeGrid.uniform(20.0, 400))
    res = run(spec)
    assert res.report["renormalized"].max_error_b is None
    assert res.report["rwa"].max_error_b is not None
    assert res.report["renormalized"].max_error_a < res.report["rwa"].max_error_a
    assert res.trajectories["numeric"].meta["n_max"] == 15


def test_all_presets_run_and_errors_non_negative(quiet):
    for n in PRESETS:
        res = run(figure_preset(n, n_samples=200))
        for err in res.report.errors.values():
            assert err.max_error_a is None or err.max_error_a >= 0
            assert err.max_error_b is None or err.max_error_b >= 0


def test_riccati_numeric_error_tiny():
    res = run(figure_preset(8))
    assert res.report["riccati_numeric"].max_error_a < 1e-6


def test_sweep_ratio_in_range():
    table = sweep_epsilon(rabi_spec(["renormalized"], t_max=5.0, n=2000), [0.1, 0.05])
    (ratio,) = table.ratios("renormalized")
    assert 4 <= ratio <= 16
    assert len(table.rows) == 2 and table.rows[-1].ratio_to_next is None


def test_sweep_identical_eps_ratio_one():
    table = sweep_epsilon(rabi_spec(["renormalized", "numeric"]), [0.1, 0.1])
    assert table.ratios("renormalized") == [1.0]


def test_sweep_needs_two_values():
    spec = ExperimentSpec(Model.JAYNES_CUMMINGS, tags("renormalized"),
                          ModelParams(0.0, 2.0, Model.JAYNES_CUMMINGS), TimeGrid.uniform(1.0, 5))
    with pytest.raises(ConfigurationError):
        sweep_epsilon(spec, [0.5])


def test_sweep_parallel_is_deterministic():
    spec = rabi_spec(["two_scale(1)", "renormalized"], t_max=3.0)
    eps = [0.2, 0.1, 0.05, 0.025]
    serial = sweep_epsilon(spec, eps)
    parallel = sweep_epsilon(spec, eps, jobs=4)
    assert serial == parallel
    assert [r.epsilon for r in serial.rows] == eps + eps
