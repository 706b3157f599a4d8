"""Command-line entry point: ``urysohn {gen,identify,eval,bench}``.

Settings come from experiment defaults, then an optional ``--config`` file of
``key=value`` lines, then command-line flags (highest priority).

Exit codes: 0 success, 2 usage or validation error, 3 data or format error,
4 numeric failure.
"""
from __future__ import annotations

import argparse
import os
import sys
import typing
from dataclasses import fields

import numpy as np

from . import modelfile
from .errors import ConfigError, FormatError, InputError, MetricError, NumericError
from .experiments import DEFAULTS, EXPERIMENTS, ExperimentConfig, ExperimentResult, build_dataset, \
    build_object, identify_dataset, resolve, run_experiment
from .kernel import CascadeModel
from .metrics import error_E
from .objects import save_object
from .signals import Dataset, read_csv, write_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4
TRACE_BLOCK = 1000

_FIELD_TYPES = typing.get_type_hints(ExperimentConfig)
_FLAGGED = {"seed", "data_path"}  # exposed as --seed / --data


def _scalar_type(name):
    t = _FIELD_TYPES[name]
    if t in (int, float, str):
        return t
    return str  # optional paths


def _convert(name, text):
    typ = _scalar_type(name)
    try:
        return typ(text)
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {text!r} as {typ.__name__}") from None


def read_config(path) -> dict:
    """Parse a ``key=value`` file; ``#`` starts a comment."""
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _convert(key, value)
    return values


def _defaults_help():
    lines = ["experiment defaults (fields not listed use the ExperimentConfig default):"]
    for name, d in DEFAULTS.items():
        lines.append(f"  {name}: " + " ".join(f"{k}={v}" for k, v in d.items()))
    base = ExperimentConfig()
    lines.append("  common: " + " ".join(f"{f.name}={getattr(base, f.name)}" for f in fields(base)
                                          if f.name not in ("experiment",)))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of key=value lines (flags override it)")
    common.add_argument("--seed", type=int, help="base seed of every random draw (default 0)")
    common.add_argument("--out", help="output directory (default: current directory)")
    common.add_argument("--data", dest="data_path", help="input,output CSV file")
    common.add_argument("--experiment", choices=EXPERIMENTS, help="experiment preset (default two_urysohn)")
    for f in fields(ExperimentConfig):
        if f.name in _FLAGGED or f.name == "experiment":
            continue
        common.add_argument("--" + f.name.replace("_", "-"), dest=f.name, type=_scalar_type(f.name),
                            help=f"(default {f.default}; see experiment presets below)")

    parser = argparse.ArgumentParser(
        prog="urysohn",
        description="Identify discrete-time Urysohn models and rerun the reference experiments.",
        epilog=_defaults_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    kw = dict(parents=[common], epilog=_defaults_help(), formatter_class=argparse.RawDescriptionHelpFormatter)
    sub.add_parser("gen", help="generate a reference object and a CSV dataset", **kw)
    sub.add_parser("identify", help="identify a model from a CSV dataset", **kw)
    p_eval = sub.add_parser("eval", help="score a model file on a CSV dataset", **kw)
    p_eval.add_argument("--model", required=True, help="model file to evaluate")
    sub.add_parser("bench", help="run an experiment end to end over several trials", **kw)
    return parser


def resolve_args(args) -> ExperimentConfig:
    values = read_config(args.config) if args.config else {}
    for f in fields(ExperimentConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    experiment = values.pop("experiment", "two_urysohn")
    return resolve(experiment, **values)


# ------------------------------------------------------------ output


def _out_path(args, name):
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    return os.path.join(out, name)


def _fmt(v):
    return repr(v) if isinstance(v, float) else str(v)


def report_lines(command, cfg: ExperimentConfig, result: ExperimentResult | None = None, extra=()):
    lines = [f"command={command}"]
    lines += [f"config.{k}={_fmt(v)}" for k, v in cfg.as_dict().items()]
    lines += [f"{k}={_fmt(v)}" for k, v in extra]
    if result is None:
        return lines
    for t, trial in enumerate(result.trials):
        r = trial.report
        lines += [
            f"trial.{t}.val_E={_fmt(trial.val_E)}",
            f"trial.{t}.train_E={_fmt(trial.train_E)}",
            f"trial.{t}.iterations={r.iterations}",
            f"trial.{t}.epochs_run={r.epochs_run}",
            f"trial.{t}.clamp_count={r.clamp_count}",
            f"trial.{t}.restart={r.restart}",
        ]
        if trial.baseline_val_E is not None:
            lines.append(f"trial.{t}.single_val_E={_fmt(trial.baseline_val_E)}")
        if trial.online_val_E is not None:
            lines.append(f"trial.{t}.online_val_E={_fmt(trial.online_val_E)}")
    for label, stats in (("val_E", result.stats), ("single_val_E", result.baseline_stats),
                         ("online_val_E", result.online_stats)):
        if stats is not None:
            lines += [f"{label}.mean={_fmt(stats.mean)}", f"{label}.half_width={_fmt(stats.half_width)}",
                      f"{label}.count={stats.count}"]
    lines.append(f"best_trial={result.trials.index(result.best)}")
    return lines


def write_trace(path, result: ExperimentResult):
    """Residual traces as block RMS values (one row per block of samples)."""
    rows = ["trial,start,end,rms"]
    for t, trial in enumerate(result.trials):
        trace = np.asarray(trial.report.residual_trace, dtype=float)
        for s in range(0, len(trace), TRACE_BLOCK):
            block = trace[s:s + TRACE_BLOCK]
            rows.append(f"{t},{s},{s + len(block)},{float(np.sqrt(np.mean(block ** 2)))!r}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")


def _write_report(args, cfg, lines, result=None):
    path = cfg.report_out or _out_path(args, "report.txt")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    if result is not None:
        write_trace(os.path.splitext(path)[0] + "_trace.csv", result)
    return path


def _load_data(cfg: ExperimentConfig) -> Dataset:
    if not cfg.data_path:
        raise ConfigError("no dataset given (use --data)")
    if not os.path.isfile(cfg.data_path):
        raise ConfigError(f"data file not found: {cfg.data_path}")
    return read_csv(cfg.data_path)


# ------------------------------------------------------------ commands


def cmd_gen(args, cfg: ExperimentConfig) -> int:
    if cfg.experiment == "benchmark":
        raise ConfigError("the benchmark experiment uses an external dataset; nothing to generate")
    obj = build_object(cfg)
    if cfg.samples < obj.memory:
        raise ConfigError(f"samples={cfg.samples} is smaller than the object memory {obj.memory}")
    data = build_dataset(cfg, 0, obj)
    model_path = cfg.model_out or _out_path(args, "object.txt")
    data_path = _out_path(args, "data.csv")
    save_object(obj, model_path)
    write_csv(data_path, data)
    _write_report(args, cfg, report_lines("gen", cfg, extra=[("object_file", model_path),
                                                             ("data_file", data_path),
                                                             ("split_index", data.split_index)]))
    print(f"wrote {model_path} and {data_path} ({len(data)} samples)")
    return EXIT_OK


def cmd_identify(args, cfg: ExperimentConfig) -> int:
    data = _load_data(cfg)
    result = identify_dataset(cfg, data)
    model_path = cfg.model_out or _out_path(args, "model.txt")
    modelfile.save(result.best.report.model, model_path)
    path = _write_report(args, cfg, report_lines("identify", cfg, result, [("model_file", model_path)]), result)
    print(f"validation E {result.stats}; model {model_path}, report {path}")
    return EXIT_OK


def cmd_eval(args, cfg: ExperimentConfig) -> int:
    data = _load_data(cfg)
    if not os.path.isfile(args.model):
        raise ConfigError(f"model file not found: {args.model}")
    model = modelfile.load(args.model)
    memory = model.memory if isinstance(model, CascadeModel) else model.m
    if len(data) < memory:
        raise InputError(f"dataset has {len(data)} samples, model needs {memory}")
    E = error_E(data.outputs[memory - 1:], model.predict(data.inputs))
    lines = report_lines("eval", cfg, extra=[("model_file", args.model), ("E", E),
                                             ("scored_samples", len(data) - memory + 1)])
    if args.out or cfg.report_out:
        _write_report(args, cfg, lines)
    print(f"E={E!r}")
    return EXIT_OK


def cmd_bench(args, cfg: ExperimentConfig) -> int:
    if cfg.experiment == "benchmark":
        if not cfg.data_path:
            raise ConfigError("external dataset required: pass the benchmark CSV with --data")
        if not os.path.isfile(cfg.data_path):
            raise ConfigError(f"data file not found: {cfg.data_path}")

    def progress(t, trial):
        print(f"trial {t}: validation E {100 * trial.val_E:.4f}%", file=sys.stderr)

    result = run_experiment(cfg, progress)
    extra = []
    if cfg.model_out:
        modelfile.save(result.best.report.model, cfg.model_out)
        extra.append(("model_file", cfg.model_out))
    path = _write_report(args, cfg, report_lines("bench", cfg, result, extra), result)
    print(f"{cfg.experiment}: validation E {result.stats}")
    if result.baseline_stats is not None:
        print(f"single-operator fit: validation E {result.baseline_stats}")
    if result.online_stats is not None:
        print(f"online-updating validation E {result.online_stats}")
    print(f"report {path}")
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "identify": cmd_identify, "eval": cmd_eval, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_args(args)
        return COMMANDS[args.command](args, cfg)
    except (MetricError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConfigError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
