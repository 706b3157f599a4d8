import numpy as np
import pytest

from urysohn import ConfigError, FixedProbe, IdentConfig, UrysohnOperator, identify_cascade, identify_single
from urysohn.experiments import build_dataset, build_object, resolve, run_experiment, run_trial
from urysohn.identify import cascade_template
from urysohn.kernel import PLK
from urysohn.objects import Wiener, gen_dataset
from urysohn.signals import Dataset, with_split, write_csv


def test_wiener_gap_between_single_operator_and_cascade():
    wiener = Wiener([1.0, 0.7, 0.4, 0.2], lambda y: y * y)
    floor = 0.02
    for seed in range(2):
        data = with_split(gen_dataset(wiener, 12000, 0, 1, seed), 0.5, 4)
        single = identify_single(data, UrysohnOperator.zeros(4, 20, 0, 1, PLK), IdentConfig(alpha=0.05, epochs=3))
        template = cascade_template(data, 4, 20, 1, 20)
        template.first = UrysohnOperator.zeros(4, 20, 0, 1, PLK)
        step = 0.005 * (template.second.x_max - template.second.x_min)
        cfg = IdentConfig(alpha=0.5, epochs=8, init="single", seed=seed, strategy=FixedProbe(step))
        cascade = identify_cascade(data, template, cfg)
        assert single.val_E > floor > cascade.val_E


def test_trials_are_reproducible_and_distinct():
    cfg = resolve("rectifier", samples=3000, trials=2)
    a, b = run_trial(cfg, 0), run_trial(cfg, 0)
    assert a.report.model.first.U.tobytes() == b.report.model.first.U.tobytes()
    assert build_dataset(cfg, 0).inputs.tolist() != build_dataset(cfg, 1).inputs.tolist()


def test_relay_dataset_outputs_are_signs():
    cfg = resolve("relay", samples=1000)
    assert set(build_dataset(cfg).outputs.tolist()) == {-1.0, 1.0}


def test_noise_is_added_on_request():
    clean = build_dataset(resolve("single", samples=2000))
    noisy = build_dataset(resolve("single", samples=2000, sigma_noise=0.05))
    assert clean.inputs.tolist() == noisy.inputs.tolist()
    assert np.std(noisy.outputs - clean.outputs) == pytest.approx(0.05 * np.ptp(clean.outputs), rel=0.1)


def test_benchmark_on_recorded_file(tmp_path):
    rng = np.random.default_rng(0)
    u = rng.standard_normal(6000)
    y = np.convolve(u, 0.6 ** np.arange(6))[:6000]
    z = np.convolve(np.tanh(y), 0.5 ** np.arange(4))[:6000]
    path = tmp_path / "wh.csv"
    write_csv(path, Dataset(u, z))
    cfg = resolve("benchmark", data_path=str(path), m=8, n=10, epochs=2, restarts=1, trials=2)
    result = run_experiment(cfg)
    assert len(result.trials) == 2
    assert result.online_stats is not None and result.baseline_stats is not None
    assert result.trials[0].baseline_val_E == result.trials[1].baseline_val_E
    assert result.stats.mean < 0.1


def test_benchmark_without_file_is_rejected():
    with pytest.raises(ConfigError, match="external dataset required"):
        build_dataset(resolve("benchmark"))
    with pytest.raises(ConfigError):
        build_object(resolve("benchmark"))


@pytest.mark.parametrize("bad", [dict(m=0), dict(alpha=0.0), dict(n=1), dict(mode="sometimes"), dict(kernel="X")])
def test_invalid_experiment_values(bad):
    with pytest.raises(ConfigError):
        resolve("single", **bad)
