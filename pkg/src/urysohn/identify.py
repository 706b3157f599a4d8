"""Projection-descent identification of single operators and cascades.

Every update distributes the current residual over the matrix cells that
produced the prediction, so with ``alpha = 1`` the updated operator fits the
sample it has just seen exactly (a Kaczmarz projection).  Cascades are
identified by choosing, per sample, an intermediate value that explains the
observed output better than the current one and then updating both blocks
as single operators towards it.

The per-sample loops run on flat Python lists: the matrices are small and
the updates are strictly sequential, so this beats per-sample numpy calls
by a wide margin.  They perform the same float operations, in the same
order, as :func:`update_pck` / :func:`update_plk`.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import ConfigError, InputError, MetricError, NumericError
from .kernel import PCK, PLK, CascadeModel, UrysohnOperator, cells, count_clamped, evaluate, grid_positions
from .metrics import error_E
from .signals import Dataset

REALTIME = "realtime"
ALTERNATING = "alternating"


@dataclass(frozen=True)
class FixedProbe:
    """Try ``y``, ``y + delta`` and ``y - delta``; keep the best.

    ``delta=None`` means 1% of the second block's input range.
    """

    delta: float | None = None

    def __post_init__(self):
        if self.delta is not None and not self.delta > 0:
            raise ConfigError(f"probe step must be positive, got {self.delta}")


@dataclass(frozen=True)
class RectifierInvert:
    """The output is ``|y|``: jump to whichever of ``+z``, ``-z`` is closer."""


@dataclass(frozen=True)
class RelayInvert:
    """The output is ``sgn(y)``: cross zero by ``margin`` when the sign is wrong.

    ``margin=None`` means one grid step of the second block.
    """

    margin: float | None = None

    def __post_init__(self):
        if self.margin is not None and not self.margin > 0:
            raise ConfigError(f"relay margin must be positive, got {self.margin}")


@dataclass(frozen=True)
class IdentConfig:
    """Settings shared by both identifiers.

    ``mode`` is ``"realtime"`` (every sample updates every block) or
    ``"alternating"`` (passes alternate between the first and the second
    block of a cascade; the pass that updates the second block uses the
    unmodified intermediate value).  ``epochs`` is the number of passes over
    the training data in either mode.  ``stop_residual=None`` resolves to
    1e-4 of the training output range.  ``learn_second=False`` keeps the
    second block of the template fixed (a known nonlinearity).  ``init`` is
    ``"random"``, ``"single"`` or ``"template"``; see :func:`initial_cascade`.
    """

    alpha: float = 1.0
    strategy: FixedProbe | RectifierInvert | RelayInvert = field(default_factory=FixedProbe)
    mode: str = REALTIME
    epochs: int = 1
    stop_residual: float | None = None
    stop_window: int = 1000
    seed: int = 0
    restarts: int = 1
    learn_second: bool = True
    init: str = "random"
    init_scale: float = 0.1

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ConfigError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.mode not in (REALTIME, ALTERNATING):
            raise ConfigError(f"unknown run mode {self.mode!r}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.stop_residual is not None and not self.stop_residual > 0:
            raise ConfigError("stop_residual must be positive")
        if self.stop_window < 1:
            raise ConfigError("stop_window must be >= 1")
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if self.init not in ("random", "single", "template"):
            raise ConfigError(f"unknown init {self.init!r}")
        if not self.init_scale > 0:
            raise ConfigError("init_scale must be positive")

    def describe(self) -> dict:
        d = asdict(self)
        s = self.strategy
        d["strategy"] = type(s).__name__
        for name in ("delta", "margin"):
            if hasattr(s, name):
                d[name] = getattr(s, name)
        return d


@dataclass
class RunReport:
    """Outcome of one identification.

    ``residual_trace`` holds per-sample absolute residuals in real-time mode
    and per-pass RMS residuals in alternating mode.  ``train_E`` and
    ``val_E`` are ``None`` when the scored outputs are constant (or, for
    ``val_E``, when there is no validation part).
    """

    model: UrysohnOperator | CascadeModel
    residual_trace: np.ndarray
    train_E: float | None
    val_E: float | None
    clamp_count: int
    iterations: int
    epochs_run: int
    stopped_early: bool
    restart: int = 0
    restart_train_E: tuple = ()
    config: IdentConfig | None = None


# ---------------------------------------------------------------- updates


def _check_target(target):
    target = float(target)
    if not math.isfinite(target):
        raise InputError(f"non-finite target {target}")
    return target


def update_pck(op: UrysohnOperator, window, target, alpha=1.0) -> float:
    """Add ``alpha * D / m`` to every cell used by ``window``; return ``D``.

    ``D`` is the residual before the update.  ``op`` is modified in place.
    """
    if op.mode != PCK:
        raise ConfigError("update_pck needs a PCK operator")
    target = _check_target(target)
    D = target - evaluate(op, window)
    inc = alpha * D / op.m
    U = op.U
    for j, k, _ in cells(op, window):
        U[j, k] += inc
    return D


def update_plk(op: UrysohnOperator, window, target, alpha=1.0) -> float:
    """PLK projection update; return the residual before the update.

    Each row spreads its share over the two bracketing cells in proportion
    to their interpolation weights, normalized by the sum of squared
    weights, which is at least ``m / 2``.
    """
    if op.mode != PLK:
        raise ConfigError("update_plk needs a PLK operator")
    target = _check_target(target)
    D = target - evaluate(op, window)
    touched = cells(op, window)
    norm = 0.0
    for j in range(0, len(touched), 2):
        w = touched[j + 1][2]
        norm += (1.0 - w) ** 2 + w ** 2
    g = alpha * D / norm
    U = op.U
    for j, k, w in touched:
        U[j, k] += g * w
    return D


def update(op: UrysohnOperator, window, target, alpha=1.0) -> float:
    return update_pck(op, window, target, alpha) if op.mode == PCK else update_plk(op, window, target, alpha)


# ------------------------------------------------------- intermediate probe


def _resolve_delta(strategy, second: UrysohnOperator):
    if isinstance(strategy, FixedProbe):
        return strategy.delta if strategy.delta is not None else 0.01 * (second.x_max - second.x_min)
    if isinstance(strategy, RelayInvert):
        return strategy.margin if strategy.margin is not None else second.step
    return 0.0


def probe_intermediate(model: CascadeModel, y_hat, z_target, strategy=None, history=()) -> float:
    """Choose the intermediate value the first block should move towards.

    ``history`` holds the ``p - 1`` previous intermediate values
    (newest first) needed when the second block has memory.
    """
    strategy = FixedProbe() if strategy is None else strategy
    y_hat = float(y_hat)
    z_target = float(z_target)
    if not math.isfinite(y_hat):
        raise InputError(f"non-finite intermediate value {y_hat}")
    if isinstance(strategy, RectifierInvert):
        return z_target if abs(z_target - y_hat) <= abs(-z_target - y_hat) else -z_target
    if isinstance(strategy, RelayInvert):
        if z_target not in (-1.0, 1.0):
            raise InputError(f"relay output must be -1 or +1, got {z_target}")
        if (y_hat > 0 and z_target > 0) or (y_hat < 0 and z_target < 0):
            return y_hat
        return z_target * _resolve_delta(strategy, model.second)
    if not isinstance(strategy, FixedProbe):
        raise ConfigError(f"unknown probe strategy {strategy!r}")
    second = model.second
    history = [float(h) for h in history]
    if len(history) != second.m - 1:
        raise InputError(f"need {second.m - 1} previous intermediate values, got {len(history)}")
    delta = _resolve_delta(strategy, second)
    best, best_err = y_hat, None
    for c in (y_hat, y_hat + delta, y_hat - delta):
        err = abs(z_target - evaluate(second, [c] + history))
        if best_err is None or err < best_err:
            best, best_err = c, err
    return best


# ------------------------------------------------------------ inner loops


class _Block:
    """Flat-list view of one operator used by the sample loops."""

    def __init__(self, op: UrysohnOperator):
        self.m, self.n = op.m, op.n
        self.plk = op.mode == PLK
        self.x_min, self.x_max = op.x_min, op.x_max
        self.scale = op.n - 1
        self.width = op.x_max - op.x_min
        self.u = op.U.ravel().tolist()
        self.mode = op.mode

    def operator(self) -> UrysohnOperator:
        return UrysohnOperator(np.array(self.u).reshape(self.m, self.n), self.x_min, self.x_max, self.mode)

    def precompute(self, x: np.ndarray):
        """Cell lists for every full window of ``x`` (row r = sample r+m-1)."""
        m, n, N = self.m, self.n, len(x)
        b = grid_positions(x, self.x_min, self.x_max, n)
        rows = np.arange(m) * n
        if not self.plk:
            k = np.floor(b + 0.5).astype(np.intp) - 1
            idx = np.stack([rows[j] + k[m - 1 - j:N - j] for j in range(m)], axis=1)
            return idx.tolist(), None, None
        lo = np.floor(b).astype(np.intp)
        psi = b - lo
        hi = np.ceil(b).astype(np.intp) - 1
        lo -= 1
        lo_idx = np.stack([rows[j] + lo[m - 1 - j:N - j] for j in range(m)], axis=1)
        hi_idx = np.stack([rows[j] + hi[m - 1 - j:N - j] for j in range(m)], axis=1)
        w = np.stack([psi[m - 1 - j:N - j] for j in range(m)], axis=1)
        return lo_idx.tolist(), hi_idx.tolist(), w.tolist()

    def position(self, y):
        if y < self.x_min:
            y = self.x_min
        elif y > self.x_max:
            y = self.x_max
        return 1.0 + self.scale * ((y - self.x_min) / self.width)

    def row_term(self, j, y):
        """Contribution of row ``j`` for input ``y`` and the cells it uses."""
        b = self.position(y)
        base = j * self.n
        if not self.plk:
            c = base + math.floor(b + 0.5) - 1
            return self.u[c], c, c, 0.0
        lo = math.floor(b)
        w = b - lo
        c_lo = base + lo - 1
        c_hi = base + math.ceil(b) - 1
        u = self.u
        return (1.0 - w) * u[c_lo] + w * u[c_hi], c_lo, c_hi, w


def _single_pass(block: _Block, lo_rows, hi_rows, w_rows, targets, alpha, stop_res, stop_window, residuals, predictions=None):
    """One sequential pass; returns (iterations, stopped)."""
    u, m = block.u, block.m
    run = 0
    it = 0
    if not block.plk:
        for cells_, z in zip(lo_rows, targets):
            y = 0.0
            for c in cells_:
                y += u[c]
            D = z - y
            if predictions is not None:
                predictions.append(y)
            inc = alpha * D / m
            for c in cells_:
                u[c] += inc
            a = abs(D)
            residuals.append(a)
            it += 1
            run = run + 1 if a < stop_res else 0
            if run >= stop_window:
                return it, True
        return it, False
    for lo, hi, ws, z in zip(lo_rows, hi_rows, w_rows, targets):
        y = 0.0
        norm = 0.0
        for c0, c1, w in zip(lo, hi, ws):
            y += (1.0 - w) * u[c0] + w * u[c1]
        for w in ws:
            norm += (1.0 - w) ** 2 + w ** 2
        D = z - y
        if predictions is not None:
            predictions.append(y)
        g = alpha * D / norm
        for c0, c1, w in zip(lo, hi, ws):
            u[c0] += g * (1.0 - w)
            u[c1] += g * w
        a = abs(D)
        residuals.append(a)
        it += 1
        run = run + 1 if a < stop_res else 0
        if run >= stop_window:
            return it, True
    return it, False


def _apply(block: _Block, lo, hi, ws, D, alpha):
    """Distribute residual ``D`` over cells ``lo``/``hi`` of ``block``."""
    u = block.u
    if not block.plk:
        inc = alpha * D / block.m
        for c in lo:
            u[c] += inc
        return
    norm = 0.0
    for w in ws:
        norm += (1.0 - w) ** 2 + w ** 2
    g = alpha * D / norm
    for c0, c1, w in zip(lo, hi, ws):
        u[c0] += g * (1.0 - w)
        u[c1] += g * w


class _CascadePass:
    """State for streaming a cascade over one data segment."""

    def __init__(self, first: _Block, second: _Block, strategy, alpha, delta):
        self.first, self.second = first, second
        self.alpha = alpha
        self.delta = delta
        self.fixed = isinstance(strategy, FixedProbe)
        self.rectifier = isinstance(strategy, RectifierInvert)
        self.relay = isinstance(strategy, RelayInvert)
        self.clamps = 0

    def run(self, x, z, update_first, update_second, stop_res, stop_window, residuals, predictions=None, probe=True):
        """Stream one pass; returns (iterations, stopped)."""
        first, second = self.first, self.second
        m1, p = first.m, second.m
        lo_rows, hi_rows, w_rows = first.precompute(x)
        if hi_rows is None:
            hi_rows = lo_rows
            w_rows = [None] * len(lo_rows)
        fu = first.u
        ylo, yhi = second.x_min, second.x_max
        alpha = self.alpha
        delta = self.delta
        history = []  # previous chosen intermediates, newest first
        run = 0
        it = 0
        for r in range(len(lo_rows)):
            lo, hi, ws = lo_rows[r], hi_rows[r], w_rows[r]
            y_hat = 0.0
            if ws is None:
                for c in lo:
                    y_hat += fu[c]
            else:
                for c0, c1, w in zip(lo, hi, ws):
                    y_hat += (1.0 - w) * fu[c0] + w * fu[c1]
            y_raw = y_hat
            if y_hat < ylo or y_hat > yhi:
                self.clamps += 1
                y_hat = ylo if y_hat < ylo else yhi
            if len(history) < p - 1:
                history.insert(0, y_hat)
                continue
            zi = z[r + m1 - 1]

            # older intermediates contribute a fixed part of the output
            rest = 0.0
            old = []
            for j in range(1, p):
                t, c0, c1, w = second.row_term(j, history[j - 1])
                rest += t
                old.append((c0, c1, w))
            t0, c0, c1, w0 = second.row_term(0, y_hat)
            z_hat = t0 + rest
            if predictions is not None:
                predictions.append(z_hat)

            y_star = y_hat
            if probe:
                if self.fixed:
                    best_err = abs(zi - z_hat)
                    for cand in (y_hat + delta, y_hat - delta):
                        if cand < ylo or cand > yhi:
                            cand = ylo if cand < ylo else yhi
                        e = abs(zi - (second.row_term(0, cand)[0] + rest))
                        if e < best_err:
                            best_err = e
                            y_star = cand
                elif self.rectifier:
                    y_star = zi if abs(zi - y_hat) <= abs(-zi - y_hat) else -zi
                elif self.relay:
                    if not ((y_hat > 0 and zi > 0) or (y_hat < 0 and zi < 0)):
                        y_star = delta if zi > 0 else -delta
                if y_star < ylo or y_star > yhi:
                    self.clamps += 1
                    y_star = ylo if y_star < ylo else yhi

            # a chosen move is applied to the raw, unclamped output
            if update_first and y_star != y_hat:
                _apply(first, lo, hi, ws, y_star - y_raw, alpha)
            if update_second:
                if y_star != y_hat:
                    t0, c0, c1, w0 = second.row_term(0, y_star)
                D2 = zi - (t0 + rest)
                if D2 != 0.0:
                    s_lo = [c0] + [o[0] for o in old]
                    s_hi = [c1] + [o[1] for o in old]
                    s_w = [w0] + [o[2] for o in old]
                    _apply(second, s_lo, s_hi, s_w, D2, alpha)

            a = abs(zi - z_hat)
            residuals.append(a)
            it += 1
            if p > 1:
                history.insert(0, y_star)
                del history[p - 1:]
            run = run + 1 if a < stop_res else 0
            if run >= stop_window:
                return it, True
        return it, False


# ------------------------------------------------------------- identifiers


def _training_arrays(data: Dataset, memory: int):
    train = data.train
    if len(train) < memory:
        raise InputError(f"need at least {memory} training samples, got {len(train)}")
    return train.inputs, train.outputs


def _score(model, data: Dataset):
    """(train_E, val_E) of ``model`` with warm-up samples excluded."""
    mem = model.m if isinstance(model, UrysohnOperator) else model.memory
    train = data.train
    train_E = _safe_E(train.outputs[mem - 1:], model.predict(train.inputs))
    val = data.validation
    val_E = None
    if val is not None and len(val) >= mem:
        val_E = _safe_E(val.outputs[mem - 1:], model.predict(val.inputs))
    return train_E, val_E


def _safe_E(actual, predicted):
    """E of a segment, or ``None`` when its actual output is constant."""
    if not np.all(np.isfinite(predicted)):
        raise NumericError("model produced non-finite outputs")
    try:
        return error_E(actual, predicted)
    except MetricError:
        return None


def _stop_level(cfg: IdentConfig, z):
    if cfg.stop_residual is not None:
        return cfg.stop_residual
    span = float(np.max(z) - np.min(z)) if len(z) else 0.0
    return 1e-4 * span if span > 0 else 1e-12


def identify_single(data: Dataset, template: UrysohnOperator, cfg: IdentConfig | None = None) -> RunReport:
    """Fit one Urysohn operator to the training part of ``data``.

    ``template`` fixes mode, dimensions, range and the starting matrix
    (all zeros is fine).  Samples are visited in order; a pass ends early
    once ``stop_window`` consecutive residuals fall below the stopping level.
    """
    cfg = cfg or IdentConfig()
    x, z = _training_arrays(data, template.m)
    block = _Block(template)
    lo, hi, w = block.precompute(x)
    targets = z[template.m - 1:].tolist()
    stop_res = _stop_level(cfg, z)
    residuals: list[float] = []
    epoch_rms = []
    iterations = 0
    stopped = False
    epochs_run = 0
    for _ in range(cfg.epochs):
        start = len(residuals)
        it, stopped = _single_pass(block, lo, hi, w, targets, cfg.alpha, stop_res, cfg.stop_window, residuals)
        iterations += it
        epochs_run += 1
        seg = np.asarray(residuals[start:])
        epoch_rms.append(float(np.sqrt(np.mean(seg ** 2))) if len(seg) else 0.0)
        if not math.isfinite(epoch_rms[-1]):
            raise NumericError("residuals became non-finite")
        if stopped:
            break
    model = block.operator()
    train_E, val_E = _score(model, data)
    trace = np.asarray(epoch_rms if cfg.mode == ALTERNATING else residuals)
    return RunReport(
        model=model,
        residual_trace=trace,
        train_E=train_E,
        val_E=val_E,
        clamp_count=count_clamped(x, template.x_min, template.x_max),
        iterations=iterations,
        epochs_run=epochs_run,
        stopped_early=stopped,
        config=cfg,
    )


WARM_ALPHA = 0.05
WARM_EPOCHS = 2


def _warm_first(data: Dataset, template: CascadeModel) -> UrysohnOperator:
    """Single-operator fit of the output, used as the ``"single"`` warm start."""
    start = UrysohnOperator.zeros(template.first.m, template.first.n, template.first.x_min,
                                  template.first.x_max, template.first.mode)
    cfg = IdentConfig(alpha=WARM_ALPHA, epochs=WARM_EPOCHS, stop_residual=None)
    return identify_single(Dataset(data.train.inputs, data.train.outputs), start, cfg).model


def initial_cascade(template: CascadeModel, data: Dataset, cfg: IdentConfig, restart: int,
                    warm: UrysohnOperator | None = None) -> CascadeModel:
    """Starting point of restart number ``restart``.

    ``"random"`` draws every entry uniformly from ``+-init_scale`` times the
    training output range.  ``"single"`` starts the first block from a
    single-operator fit of the output (plus a seeded perturbation of
    ``init_scale / m`` of the output range per entry, so restarts differ) and
    the second block from the identity line over the intermediate range.
    """
    z_lo, z_hi = data.train.z_range
    span = z_hi - z_lo if z_hi > z_lo else 1.0
    f, s = template.first, template.second
    if cfg.init == "template":
        model = template.copy()
    else:
        rng = np.random.default_rng([cfg.seed, restart])
        if cfg.init == "single":
            warm = warm if warm is not None else _warm_first(data, template)
            a = cfg.init_scale * span / f.m
            first = f.with_matrix(warm.U + rng.uniform(-a, a, size=f.U.shape))
        else:
            a = cfg.init_scale * span
            first = f.with_matrix(rng.uniform(-a, a, size=f.U.shape))
        if not cfg.learn_second:
            second = s.copy()
        elif cfg.init == "single":
            U = np.zeros(s.U.shape)
            U[0] = s.nodes()
            second = s.with_matrix(U)
        else:
            a = cfg.init_scale * span
            second = s.with_matrix(rng.uniform(-a, a, size=s.U.shape))
        model = CascadeModel(first, second)
    if not (np.any(model.first.U) or np.any(model.second.U)):
        raise ConfigError("cascade identification needs a starting point that is not all zero")
    return model


def _cascade_once(data: Dataset, start: CascadeModel, cfg: IdentConfig, restart: int) -> RunReport:
    x, z = _training_arrays(data, start.memory)
    first, second = _Block(start.first), _Block(start.second)
    delta = _resolve_delta(cfg.strategy, start.second)
    runner = _CascadePass(first, second, cfg.strategy, cfg.alpha, delta)
    stop_res = _stop_level(cfg, z)
    residuals: list[float] = []
    epoch_rms = []
    iterations = 0
    stopped = False
    epochs_run = 0
    for epoch in range(cfg.epochs):
        if cfg.mode == REALTIME:
            up1, up2, probe = True, cfg.learn_second, True
        elif epoch % 2 == 0:
            up1, up2, probe = True, False, True
        else:
            if not cfg.learn_second:
                continue
            up1, up2, probe = False, True, False
        start_len = len(residuals)
        it, stopped = runner.run(x, z, up1, up2, stop_res, cfg.stop_window, residuals, probe=probe)
        iterations += it
        epochs_run += 1
        seg = np.asarray(residuals[start_len:])
        epoch_rms.append(float(np.sqrt(np.mean(seg ** 2))) if len(seg) else 0.0)
        if not math.isfinite(epoch_rms[-1]):
            raise NumericError("residuals became non-finite")
        if stopped:
            break
    model = CascadeModel(first.operator(), second.operator())
    train_E, val_E = _score(model, data)
    trace = np.asarray(epoch_rms if cfg.mode == ALTERNATING else residuals)
    return RunReport(
        model=model,
        residual_trace=trace,
        train_E=train_E,
        val_E=val_E,
        clamp_count=runner.clamps + count_clamped(x, start.first.x_min, start.first.x_max),
        iterations=iterations,
        epochs_run=epochs_run,
        stopped_early=stopped,
        restart=restart,
        config=cfg,
    )


def identify_cascade(data: Dataset, template: CascadeModel, cfg: IdentConfig | None = None) -> RunReport:
    """Fit a two-block cascade from input/output data only.

    Runs ``cfg.restarts`` independent identifications from seeded starting
    points and returns the one with the lowest training error; validation
    data never influences the choice.
    """
    cfg = cfg or IdentConfig()
    _training_arrays(data, template.memory)
    warm = _warm_first(data, template) if cfg.init == "single" else None
    reports = [
        _cascade_once(data, initial_cascade(template, data, cfg, r, warm), cfg, r)
        for r in range(cfg.restarts)
    ]
    best = min(reports, key=lambda rep: math.inf if rep.train_E is None else rep.train_E)
    return replace(best, restart_train_E=tuple(rep.train_E for rep in reports))


# --------------------------------------------------------- online scoring


def predict_online(model, inputs, outputs, cfg: IdentConfig | None = None):
    """Predict each sample, then update the model with it (test-then-train).

    Every prediction is made before the sample is used, so the errors are
    still measured on unseen data.  Returns ``(predictions, updated_model)``
    where prediction ``r`` belongs to sample ``r + memory - 1``.
    """
    cfg = cfg or IdentConfig()
    x = np.asarray(inputs, dtype=float)
    z = np.asarray(outputs, dtype=float)
    preds: list[float] = []
    residuals: list[float] = []
    if isinstance(model, UrysohnOperator):
        if len(x) < model.m:
            raise InputError(f"need at least {model.m} samples")
        block = _Block(model)
        lo, hi, w = block.precompute(x)
        _single_pass(block, lo, hi, w, z[model.m - 1:].tolist(), cfg.alpha, -1.0, 1, residuals, preds)
        return np.asarray(preds), block.operator()
    if len(x) < model.memory:
        raise InputError(f"need at least {model.memory} samples")
    first, second = _Block(model.first), _Block(model.second)
    runner = _CascadePass(first, second, cfg.strategy, cfg.alpha, _resolve_delta(cfg.strategy, model.second))
    runner.run(x, z, True, cfg.learn_second, -1.0, 1, residuals, preds)
    return np.asarray(preds), CascadeModel(first.operator(), second.operator())


def cascade_template(data: Dataset, m, n, p=1, n_second=None, mode=PLK, second_mode=None, margin=0.1) -> CascadeModel:
    """All-zero cascade whose ranges are read off the training data.

    The first block spans the observed input range; the intermediate
    variable gets the output range widened by ``margin`` on either side.
    """
    train = data.train
    x_lo, x_hi = train.x_range
    z_lo, z_hi = train.z_range
    if not x_hi > x_lo or not z_hi > z_lo:
        raise InputError("training data must have non-degenerate input and output ranges")
    pad = margin * (z_hi - z_lo)
    first = UrysohnOperator.zeros(m, n, x_lo, x_hi, mode)
    second = UrysohnOperator.zeros(p, n_second or n, z_lo - pad, z_hi + pad, second_mode or mode)
    return CascadeModel(first, second)
