"""End-to-end identification experiments with documented default sizes.

Each experiment builds a ground-truth object (or reads a recorded dataset),
splits the data in half, identifies a model on the first half and scores it
on the second.  ``run_experiment`` repeats this for ``trials`` seeds and
aggregates the validation errors.

Default sizes per experiment are in :data:`DEFAULTS`; every field can be
overridden and the resolved configuration is echoed into reports.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .errors import ConfigError, InputError
from .identify import (
    ALTERNATING,
    REALTIME,
    FixedProbe,
    IdentConfig,
    RectifierInvert,
    RelayInvert,
    RunReport,
    cascade_template,
    identify_cascade,
    identify_single,
    predict_online,
)
from .kernel import PCK, PLK, CascadeModel, UrysohnOperator
from .metrics import TrialStats, aggregate_trials, error_E
from .objects import (
    ReferenceObject,
    SingleUrysohn,
    TwoUrysohn,
    UrysohnRectifier,
    UrysohnRelay,
    gen_dataset,
    gen_sign_changing_kernel,
    gen_smooth_kernel,
    gen_two_urysohn,
)
from .signals import Dataset, add_output_noise, read_csv, with_split

EXPERIMENTS = ("single", "two_urysohn", "rectifier", "relay", "benchmark")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment run.

    ``delta`` is the probe step as a fraction of the intermediate range
    (two_urysohn, benchmark).  ``n_object`` is the grid of the generated
    object when it differs from the model grid.  ``second_cycles`` caps the
    oscillation of the generated second block.
    """

    experiment: str = "two_urysohn"
    m: int = 5
    n: int = 20
    p: int = 1
    n_second: int = 20
    n_object: int = 20
    kernel: str = PLK
    alpha: float = 1.0
    delta: float = 0.01
    sigma_noise: float = 0.0
    second_cycles: float = 1.5
    samples: int = 20000
    train_fraction: float = 0.5
    epochs: int = 1
    trials: int = 10
    restarts: int = 1
    seed: int = 0
    mode: str = REALTIME
    init: str = "random"
    data_path: str | None = None
    model_out: str | None = None
    report_out: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        for name in ("m", "p", "samples", "epochs", "trials", "restarts"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        for name in ("n", "n_second", "n_object"):
            if getattr(self, name) < 2:
                raise ConfigError(f"{name} must be >= 2, got {getattr(self, name)}")
        if self.kernel not in (PCK, PLK):
            raise ConfigError(f"unknown kernel mode {self.kernel!r}")
        if not 0 < self.alpha <= 1:
            raise ConfigError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.delta > 0:
            raise ConfigError("delta must be positive")
        if self.sigma_noise < 0:
            raise ConfigError("sigma_noise must be >= 0")
        if not 0 < self.train_fraction < 1:
            raise ConfigError("train_fraction must lie in (0, 1)")
        if self.mode not in (REALTIME, ALTERNATING):
            raise ConfigError(f"unknown mode {self.mode!r}")

    @property
    def memory(self) -> int:
        return self.m + (self.p - 1 if self.experiment in ("two_urysohn", "benchmark") else 0)

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULTS = {
    # one smooth PLK operator identified by plain projection descent
    "single": dict(m=5, n=20, n_object=20, kernel=PLK, alpha=1.0, samples=50000, epochs=1),
    # smooth two-Urysohn object, second block with memory 2
    "two_urysohn": dict(m=5, n=20, p=2, n_second=20, n_object=20, kernel=PLK, alpha=0.5, delta=0.005,
                        second_cycles=1.5, samples=20000, epochs=10, restarts=3, init="single"),
    # Urysohn block + |y|; object on a finer grid than the model
    "rectifier": dict(m=5, n=20, n_second=21, n_object=50, kernel=PLK, alpha=0.5, samples=20000, epochs=2),
    # Urysohn block + sgn(y); PCK canonical model on the object's grid
    "relay": dict(m=4, n=5, n_second=20, n_object=5, kernel=PCK, alpha=1.0, samples=40000, epochs=80,
                  mode=ALTERNATING),
    # recorded input/output file, canonical PLK model
    "benchmark": dict(m=30, n=12, p=1, n_second=30, kernel=PLK, alpha=0.3, delta=0.005, epochs=6,
                      restarts=2, trials=2, init="single"),
}


def resolve(experiment="two_urysohn", **overrides) -> ExperimentConfig:
    """Experiment defaults with ``overrides`` applied (``None`` values ignored)."""
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(overrides) - known
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
    values = dict(DEFAULTS[experiment])
    values.update({k: v for k, v in overrides.items() if v is not None})
    values["experiment"] = experiment
    return ExperimentConfig(**values)


@dataclass
class TrialResult:
    val_E: float
    train_E: float
    report: RunReport
    baseline_val_E: float | None = None
    online_val_E: float | None = None


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    trials: list = field(default_factory=list)

    @property
    def stats(self) -> TrialStats:
        return _stats([t.val_E for t in self.trials])

    @property
    def baseline_stats(self) -> TrialStats | None:
        vals = [t.baseline_val_E for t in self.trials if t.baseline_val_E is not None]
        return _stats(vals) if vals else None

    @property
    def online_stats(self) -> TrialStats | None:
        vals = [t.online_val_E for t in self.trials if t.online_val_E is not None]
        return _stats(vals) if vals else None

    @property
    def best(self) -> TrialResult:
        return min(self.trials, key=lambda t: t.train_E)


def _stats(values) -> TrialStats:
    if len(values) == 1:
        return TrialStats((float(values[0]),), float(values[0]), 0.0)
    return aggregate_trials(values)


def trial_seeds(cfg: ExperimentConfig, trial: int) -> tuple[int, int, int]:
    """(object seed, data seed, identification seed) of a trial."""
    base = cfg.seed * 10007 + trial * 3
    return base, base + 1, base + 2


# ------------------------------------------------------------ objects


def build_object(cfg: ExperimentConfig, trial: int = 0) -> ReferenceObject:
    """Ground-truth object of a synthetic experiment."""
    obj_seed = trial_seeds(cfg, trial)[0]
    if cfg.experiment == "single":
        return SingleUrysohn(gen_smooth_kernel(cfg.m, cfg.n_object, obj_seed, mode=cfg.kernel))
    if cfg.experiment == "two_urysohn":
        return gen_two_urysohn(cfg.m, cfg.n_object, cfg.p, cfg.n_second, obj_seed, mode=cfg.kernel,
                               second_cycles=cfg.second_cycles)
    if cfg.experiment == "rectifier":
        return UrysohnRectifier(gen_sign_changing_kernel(cfg.m, cfg.n_object, obj_seed, mode=cfg.kernel))
    if cfg.experiment == "relay":
        return UrysohnRelay(gen_sign_changing_kernel(cfg.m, cfg.n_object, obj_seed, mode=cfg.kernel))
    raise ConfigError("the benchmark experiment needs an external dataset (set data_path)")


def build_dataset(cfg: ExperimentConfig, trial: int = 0, obj: ReferenceObject | None = None) -> Dataset:
    """Half/half split dataset of a trial (read from ``data_path`` for the benchmark)."""
    if cfg.experiment == "benchmark":
        if not cfg.data_path:
            raise ConfigError("external dataset required: the benchmark experiment needs data_path")
        data = read_csv(cfg.data_path)
    else:
        obj = obj or build_object(cfg, trial)
        if cfg.samples < obj.memory:
            raise ConfigError(f"samples={cfg.samples} is smaller than the object memory {obj.memory}")
        data = gen_dataset(obj, cfg.samples, 0.0, 1.0, trial_seeds(cfg, trial)[1])
        if cfg.sigma_noise > 0:
            noisy = add_output_noise(data.outputs, cfg.sigma_noise, trial_seeds(cfg, trial)[1] + 7)
            data = Dataset(data.inputs, noisy)
    return with_split(data, cfg.train_fraction, cfg.memory)


# ------------------------------------------------------------ identification


def ident_config(cfg: ExperimentConfig, trial: int = 0, template: CascadeModel | None = None) -> IdentConfig:
    seed = trial_seeds(cfg, trial)[2]
    common = dict(alpha=cfg.alpha, epochs=cfg.epochs, mode=cfg.mode, seed=seed, restarts=cfg.restarts,
                  stop_window=10 ** 9)
    if cfg.experiment == "single":
        return IdentConfig(**common)
    if cfg.experiment == "rectifier":
        return IdentConfig(strategy=RectifierInvert(), learn_second=False, **common)
    if cfg.experiment == "relay":
        return IdentConfig(strategy=RelayInvert(), **common)
    span = template.second.x_max - template.second.x_min
    return IdentConfig(strategy=FixedProbe(cfg.delta * span), init=cfg.init, **common)


def model_template(cfg: ExperimentConfig, data: Dataset, x_range=None):
    """Starting structure of the identified model.

    The first block covers ``x_range``; by default that is the training input
    range for the benchmark and the excitation range [0, 1] otherwise.
    """
    if x_range is None:
        x_range = data.train.x_range if cfg.experiment == "benchmark" else (0.0, 1.0)
    x_lo, x_hi = x_range
    if cfg.experiment == "single":
        return UrysohnOperator.zeros(cfg.m, cfg.n, x_lo, x_hi, cfg.kernel)
    if cfg.experiment == "rectifier":
        # the rectifier is known: |y| tabulated on an odd grid so 0 is a node
        y_max = 1.1 * data.train.z_range[1]
        n2 = cfg.n_second if cfg.n_second % 2 else cfg.n_second + 1
        second = UrysohnOperator([np.abs(np.linspace(-y_max, y_max, n2))], -y_max, y_max, PLK)
        return CascadeModel(UrysohnOperator.zeros(cfg.m, cfg.n, x_lo, x_hi, cfg.kernel), second)
    if cfg.experiment == "relay":
        # even grid: zero is a cell boundary, so the table can hold sgn exactly
        n2 = cfg.n_second if cfg.n_second % 2 == 0 else cfg.n_second + 1
        first = UrysohnOperator.zeros(cfg.m, cfg.n, x_lo, x_hi, cfg.kernel)
        second = UrysohnOperator.zeros(1, n2, -1.2, 1.2, PCK)
        return CascadeModel(first, second)
    template = cascade_template(data, cfg.m, cfg.n, cfg.p, cfg.n_second, mode=cfg.kernel)
    template.first = UrysohnOperator.zeros(cfg.m, cfg.n, x_lo, x_hi, cfg.kernel)
    return template


def baseline_single(data: Dataset, cfg: ExperimentConfig, x_range=None) -> RunReport:
    """Best single-operator fit (used as the reference the cascade must beat)."""
    if x_range is None:
        x_range = data.train.x_range if cfg.experiment == "benchmark" else (0.0, 1.0)
    x_lo, x_hi = x_range
    template = UrysohnOperator.zeros(cfg.m + cfg.p - 1, cfg.n, x_lo, x_hi, cfg.kernel)
    return identify_single(data, template, IdentConfig(alpha=0.05, epochs=3, stop_window=10 ** 9))


def run_trial(cfg: ExperimentConfig, trial: int = 0, data: Dataset | None = None,
              baseline: float | None = None) -> TrialResult:
    data = data if data is not None else build_dataset(cfg, trial)
    template = model_template(cfg, data)
    if cfg.experiment == "single":
        report = identify_single(data, template, ident_config(cfg, trial))
    else:
        report = identify_cascade(data, template, ident_config(cfg, trial, template))
    result = TrialResult(val_E=report.val_E, train_E=report.train_E, report=report)
    if cfg.experiment in ("two_urysohn", "benchmark"):
        result.baseline_val_E = baseline if baseline is not None else baseline_single(data, cfg).val_E
    if cfg.experiment == "benchmark":
        result.online_val_E = online_error(report.model, data, report.config)
    return result


def online_error(model, data: Dataset, cfg: IdentConfig) -> float:
    """Validation error when the model keeps learning after each prediction."""
    val = data.validation
    if val is None:
        raise InputError("dataset has no validation part")
    mem = model.m if isinstance(model, UrysohnOperator) else model.memory
    preds, _ = predict_online(model.copy(), val.inputs, val.outputs, replace(cfg, epochs=1))
    return error_E(val.outputs[mem - 1:], preds)


def run_experiment(cfg: ExperimentConfig, progress=None) -> ExperimentResult:
    """All trials of an experiment.  The benchmark reuses one dataset."""
    result = ExperimentResult(cfg)
    shared = build_dataset(cfg) if cfg.experiment == "benchmark" else None
    for t in range(cfg.trials):
        # the single-operator fit is deterministic, so on shared data it is computed once
        baseline = result.trials[0].baseline_val_E if shared is not None and t else None
        result.trials.append(run_trial(cfg, t, shared, baseline))
        if progress:
            progress(t, result.trials[-1])
    return result


def identify_dataset(cfg: ExperimentConfig, data: Dataset) -> ExperimentResult:
    """Identify a model of the configured kind on a user-supplied dataset.

    The first block spans the training input range of ``data``.
    """
    if data.split_index is None:
        data = with_split(data, cfg.train_fraction, cfg.memory)
    x_range = data.train.x_range
    result = ExperimentResult(cfg)
    for t in range(cfg.trials):
        template = model_template(cfg, data, x_range)
        if cfg.experiment == "single":
            report = identify_single(data, template, ident_config(cfg, t))
        else:
            report = identify_cascade(data, template, ident_config(cfg, t, template))
        result.trials.append(TrialResult(val_E=report.val_E, train_E=report.train_E, report=report))
    return result
