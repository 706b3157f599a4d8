"""Excitation, noise, input quantization and dataset handling."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, FormatError, InputError
from .kernel import grid_positions


@dataclass(frozen=True, eq=False)
class Dataset:
    """Aligned input/output samples with an optional train/validation boundary.

    Samples before ``split_index`` are for training, the rest for
    validation.  ``split_index=None`` means everything is training data.
    """

    inputs: np.ndarray
    outputs: np.ndarray
    split_index: int | None = None

    def __post_init__(self):
        x = np.asarray(self.inputs, dtype=float)
        z = np.asarray(self.outputs, dtype=float)
        if x.ndim != 1 or z.ndim != 1 or len(x) != len(z):
            raise InputError(f"inputs and outputs must be 1-D of equal length, got {x.shape} and {z.shape}")
        if self.split_index is not None and not 0 < self.split_index <= len(x):
            raise InputError(f"split index {self.split_index} outside (0, {len(x)}]")
        object.__setattr__(self, "inputs", x)
        object.__setattr__(self, "outputs", z)

    def __len__(self):
        return len(self.inputs)

    @property
    def x_range(self) -> tuple[float, float]:
        return float(self.inputs.min()), float(self.inputs.max())

    @property
    def z_range(self) -> tuple[float, float]:
        return float(self.outputs.min()), float(self.outputs.max())

    @property
    def train(self) -> "Dataset":
        end = len(self) if self.split_index is None else self.split_index
        return Dataset(self.inputs[:end], self.outputs[:end])

    @property
    def validation(self) -> "Dataset | None":
        if self.split_index is None or self.split_index == len(self):
            return None
        s = self.split_index
        return Dataset(self.inputs[s:], self.outputs[s:])


def gen_uniform_input(length, x_min, x_max, seed) -> np.ndarray:
    """I.i.d. uniform samples on ``[x_min, x_max]``."""
    if length < 1:
        raise ConfigError(f"length must be >= 1, got {length}")
    if not (math.isfinite(x_min) and math.isfinite(x_max)) or not x_min < x_max:
        raise ConfigError(f"invalid input range [{x_min}, {x_max}]")
    return np.random.default_rng(seed).uniform(x_min, x_max, size=int(length))


def add_output_noise(outputs, sigma_fraction, seed) -> np.ndarray:
    """Add Gaussian noise whose std is ``sigma_fraction`` of the output range."""
    z = np.asarray(outputs, dtype=float)
    if sigma_fraction < 0:
        raise ConfigError(f"noise fraction must be >= 0, got {sigma_fraction}")
    if sigma_fraction == 0 or len(z) == 0:
        return z.copy()
    sigma = sigma_fraction * (z.max() - z.min())
    return z + np.random.default_rng(seed).normal(0.0, sigma, size=len(z))


def quantize_signal(inputs, n, x_min, x_max) -> np.ndarray:
    """Snap every input to its nearest grid node (inputs are clamped first)."""
    if n < 2:
        raise ConfigError(f"need at least 2 grid points, got {n}")
    if not x_min < x_max:
        raise ConfigError(f"invalid input range [{x_min}, {x_max}]")
    x = np.asarray(inputs, dtype=float)
    if not np.all(np.isfinite(x)):
        raise InputError("inputs contain non-finite values")
    # same arithmetic as quantize_index, so both agree on every tie
    k = np.floor(grid_positions(x, x_min, x_max, n) + 0.5) - 1
    return x_min + k * ((x_max - x_min) / (n - 1))


def _split_point(n_samples, fraction, memory):
    if not 0 < fraction < 1:
        raise InputError(f"split fraction must lie in (0, 1), got {fraction}")
    s = int(math.floor(fraction * n_samples))
    if s < memory or n_samples - s < memory:
        raise InputError(
            f"fraction {fraction} of {n_samples} samples leaves fewer than {memory} samples on one side"
        )
    return s


def split(dataset: Dataset, fraction, memory=1) -> tuple[Dataset, Dataset]:
    """Contiguous prefix/suffix split, no shuffling.

    The validation part keeps its own first ``memory - 1`` samples as warm-up,
    so it yields ``len(validation) - memory + 1`` scored outputs and never
    reads training samples.
    """
    s = _split_point(len(dataset), fraction, memory)
    return (
        Dataset(dataset.inputs[:s], dataset.outputs[:s]),
        Dataset(dataset.inputs[s:], dataset.outputs[s:]),
    )


def with_split(dataset: Dataset, fraction, memory=1) -> Dataset:
    return replace(dataset, split_index=_split_point(len(dataset), fraction, memory))


def scored_count(n_samples, memory) -> int:
    """How many outputs of an ``n_samples`` segment are scored."""
    return max(0, n_samples - memory + 1)


def read_csv(path) -> Dataset:
    """Read ``input,output`` pairs; an optional non-numeric header is skipped."""
    path = os.fspath(path)
    with open(path, "rb") as fh:
        data = fh.read()
    xs, zs = [], []
    pos = 0
    for lineno, raw in enumerate(data.splitlines(keepends=True)):
        text = raw.decode("utf-8", errors="replace").strip()
        off, pos = pos, pos + len(raw)
        if not text:
            continue
        parts = [p.strip() for p in text.split(",")]
        if lineno == 0 and not _numeric(parts[0]):
            continue
        if len(parts) != 2:
            raise FormatError(f"{path}: line {lineno + 1} has {len(parts)} columns, expected 2", off)
        try:
            x, z = float(parts[0]), float(parts[1])
        except ValueError:
            raise FormatError(f"{path}: line {lineno + 1} is not numeric", off) from None
        if not (math.isfinite(x) and math.isfinite(z)):
            raise FormatError(f"{path}: line {lineno + 1} holds a non-finite value", off)
        xs.append(x)
        zs.append(z)
    if not xs:
        raise FormatError(f"{path}: no data rows", pos)
    return Dataset(np.array(xs), np.array(zs))


def _numeric(tok):
    try:
        float(tok)
    except ValueError:
        return False
    return True


def write_csv(path, dataset: Dataset, header=True) -> None:
    lines = ["input,output"] if header else []
    lines += [f"{x!r},{z!r}" for x, z in zip(dataset.inputs.tolist(), dataset.outputs.tolist())]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
