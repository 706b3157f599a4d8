"""Ground-truth systems used to generate identification data."""
from __future__ import annotations

import os
from typing import Callable

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import modelfile
from .errors import ConfigError, InputError
from .kernel import PCK, PLK, CascadeModel, UrysohnOperator
from .signals import Dataset, gen_uniform_input

MAX_EXACT_INT = 2 ** 53


def windows(inputs, m) -> np.ndarray:
    """Newest-first windows of ``inputs``: row r, column j holds ``x[r + m - 1 - j]``."""
    x = np.asarray(inputs, dtype=float)
    if x.ndim != 1:
        raise InputError("inputs must be 1-D")
    if len(x) < m:
        raise InputError(f"need at least m={m} samples, got {len(x)}")
    return sliding_window_view(x, m)[:, ::-1]


class ReferenceObject:
    """A deterministic finite-memory system.

    ``simulate(inputs)`` returns one output per full window, i.e.
    ``len(inputs) - memory + 1`` values; output ``r`` belongs to sample
    ``r + memory - 1``.
    """

    kind = "object"
    memory: int = 1

    def simulate(self, inputs) -> np.ndarray:
        x = np.asarray(inputs, dtype=float)
        if x.ndim != 1:
            raise InputError("inputs must be 1-D")
        if len(x) < self.memory:
            raise InputError(f"{self.kind} needs at least {self.memory} input samples, got {len(x)}")
        if not np.all(np.isfinite(x)):
            raise InputError("inputs contain non-finite values")
        return np.asarray(self._simulate(x), dtype=float)

    def _simulate(self, x):
        raise NotImplementedError


class Wiener(ReferenceObject):
    """Linear FIR block ``h`` followed by a static nonlinearity ``f``."""

    kind = "wiener"

    def __init__(self, h, f: Callable = lambda y: y):
        self.h = np.asarray(h, dtype=float)
        self.f = f
        self.memory = len(self.h)

    def _simulate(self, x):
        return self.f(windows(x, self.memory) @ self.h)


class Hammerstein(ReferenceObject):
    """Static nonlinearity ``u`` followed by a linear FIR block ``h``."""

    kind = "hammerstein"

    def __init__(self, h, u: Callable = lambda x: x):
        self.h = np.asarray(h, dtype=float)
        self.u = u
        self.memory = len(self.h)

    def _simulate(self, x):
        return windows(self.u(x), self.memory) @ self.h

    def as_urysohn(self, n, x_min, x_max, mode=PLK) -> UrysohnOperator:
        """Grid operator with ``g_j = h_j * u`` sampled on ``n`` nodes."""
        nodes = np.linspace(x_min, x_max, n)
        return UrysohnOperator(np.outer(self.h, self.u(nodes)), x_min, x_max, mode)


class TwoUrysohn(ReferenceObject):
    kind = "two_urysohn"

    def __init__(self, first: UrysohnOperator, second: UrysohnOperator):
        self.model = CascadeModel(first, second)
        self.memory = self.model.memory

    @property
    def first(self):
        return self.model.first

    @property
    def second(self):
        return self.model.second

    def _simulate(self, x):
        return self.model.predict(x)


class UrysohnRectifier(ReferenceObject):
    """Urysohn block followed by ``|y|``."""

    kind = "rectifier"

    def __init__(self, first: UrysohnOperator):
        self.first = first
        self.memory = first.m

    def _simulate(self, x):
        return np.abs(self.first.predict(x))


class UrysohnRelay(ReferenceObject):
    """Urysohn block followed by a relay; ``y = 0`` maps to ``+1``."""

    kind = "relay"

    def __init__(self, first: UrysohnOperator):
        self.first = first
        self.memory = first.m

    def _simulate(self, x):
        return np.where(self.first.predict(x) < 0, -1.0, 1.0)


class SingleUrysohn(ReferenceObject):
    """A lone Urysohn operator used as a ground-truth object."""

    kind = "single"

    def __init__(self, first: UrysohnOperator):
        self.first = first
        self.memory = first.m

    def _simulate(self, x):
        return self.first.predict(x)


class GeneralSISO(ReferenceObject):
    """``z_i = F(x_i, ..., x_{i-m+1})``.

    ``F`` receives a 2-D array of newest-first windows (one per row) and
    returns one output per row.
    """

    kind = "general"

    def __init__(self, F: Callable, m: int):
        if m < 1:
            raise ConfigError("memory depth must be >= 1")
        self.F = F
        self.memory = m

    def _simulate(self, x):
        return self.F(windows(x, self.memory))


class Theorem(TwoUrysohn):
    """Quantized-input object realized exactly as theorem kernel + lookup table."""

    kind = "theorem"

    def __init__(self, n, m, F: Callable, x_min=None, x_max=None):
        first = make_theorem_kernel(n, m, x_min, x_max)
        super().__init__(first, make_lookup_second_block(first, F))
        self.n = n
        self.table = self.second.U[0]


# ------------------------------------------------------------ theorem


def _check_capacity(n, m):
    if n < 2 or m < 1:
        raise ConfigError(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    if 2 * n ** m > MAX_EXACT_INT:
        raise ConfigError(f"n^m = {n}^{m} exceeds exact float integer capacity")


def make_theorem_kernel(n, m, x_min=None, x_max=None) -> UrysohnOperator:
    """PCK operator with ``U[j, k] = (k + 1) * n**j`` (0-based ``j``, ``k``).

    Every quantized window maps to a distinct integer.  The default input
    range ``[1, n]`` puts grid node ``k`` at input value ``k + 1``.
    """
    _check_capacity(n, m)
    x_min = 1.0 if x_min is None else x_min
    x_max = float(n) if x_max is None else x_max
    U = [[float((k + 1) * n ** j) for k in range(n)] for j in range(m)]
    return UrysohnOperator(U, x_min, x_max, PCK)


def theorem_offset(n, m) -> int:
    """Smallest theorem-kernel output, ``1 + n + ... + n**(m-1)``."""
    return sum(n ** j for j in range(m))


def make_lookup_second_block(first: UrysohnOperator, F: Callable) -> UrysohnOperator:
    """Lookup table turning theorem-kernel outputs into ``F`` values.

    The grid of the returned operator has one node per possible
    intermediate integer; node ``c`` holds ``F`` evaluated on the quantized
    window whose code is ``c``.  ``F`` gets a 2-D array of newest-first
    windows, one per row.
    """
    n, m = first.n, first.m
    _check_capacity(n, m)
    if not np.array_equal(first.U, make_theorem_kernel(n, m).U):
        raise ConfigError("first block is not a theorem kernel")
    size = n ** m
    codes = np.arange(size)
    digits = np.stack([(codes // n ** j) % n for j in range(m)], axis=1)
    levels = first.x_min + digits * first.step
    table = np.asarray(F(levels), dtype=float).reshape(-1)
    if table.shape != (size,):
        raise ConfigError(f"F returned {table.shape[0]} values for {size} windows")
    lo = theorem_offset(n, m)
    return UrysohnOperator(table[None, :], lo, lo + size - 1, PCK)


def miso_map(indices, n) -> int:
    """Mixed-radix code of a tuple of 1-based grid indices, in ``[1, n**d]``."""
    code = 1
    for t, k in enumerate(indices):
        if not 1 <= k <= n or int(k) != k:
            raise InputError(f"index {k} outside [1, {n}]")
        code += (int(k) - 1) * n ** t
    return code


# ----------------------------------------------------------- generators


def _interior_extrema(row) -> int:
    d = np.sign(np.diff(row))
    d = d[d != 0]
    return int(np.count_nonzero(d[1:] != d[:-1]))


def gen_smooth_kernel(m, n, seed, extrema_count=3, x_min=0.0, x_max=1.0, mode=PLK,
                      amplitude=1.0, decay=0.7, max_cycles=None) -> UrysohnOperator:
    """Random smooth kernel with several local extrema per row.

    Row ``j`` is a sum of ``extrema_count`` sinusoids with random phase,
    weight and frequency.  Frequencies run from half a cycle up to
    ``max_cycles`` cycles over the range (default ``extrema_count``) but
    never faster than one cycle per four grid steps.  Each row is rescaled
    so that ``max|row j| = amplitude * decay**j``.  Rows with fewer than two
    interior extrema are redrawn when the grid is fine enough to hold them.
    """
    if extrema_count < 2:
        raise ConfigError("extrema_count must be >= 2")
    if m < 1 or n < 2:
        raise ConfigError(f"invalid kernel size m={m}, n={n}")
    if not 0 < decay <= 1 or not amplitude > 0:
        raise ConfigError("need amplitude > 0 and decay in (0, 1]")
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 1.0, n)
    cycles = float(extrema_count) if max_cycles is None else float(max_cycles)
    f_max = max(0.5, min(cycles, (n - 1) / 4.0))
    need = 2 if n >= 12 and f_max >= 1.5 else 0
    U = np.empty((m, n))
    for j in range(m):
        for _ in range(1000):
            freq = rng.uniform(min(0.5, f_max), f_max, size=extrema_count)
            phase = rng.uniform(0.0, 2 * np.pi, size=extrema_count)
            weight = rng.uniform(0.3, 1.0, size=extrema_count)
            row = (weight[:, None] * np.sin(2 * np.pi * freq[:, None] * t + phase[:, None])).sum(axis=0)
            peak = np.abs(row).max()
            if peak > 0 and _interior_extrema(row) >= need:
                break
        else:
            raise ConfigError("could not draw a kernel row with enough extrema")
        U[j] = row * (amplitude * decay ** j / peak)
    return UrysohnOperator(U, x_min, x_max, mode)


def gen_two_urysohn(m, n, p, n_second, seed, extrema_count=3, mode=PLK, x_min=0.0, x_max=1.0,
                    second_cycles=None) -> TwoUrysohn:
    """Random smooth two-Urysohn object.

    The second block spans exactly the reachable intermediate range (sum of
    per-row minima to sum of per-row maxima of the first block).
    """
    ss = np.random.SeedSequence(seed).spawn(2)
    first = gen_smooth_kernel(m, n, ss[0], extrema_count, x_min, x_max, mode)
    y_lo, y_hi = first.output_bounds()
    second = gen_smooth_kernel(p, n_second, ss[1], extrema_count, y_lo, y_hi, mode, max_cycles=second_cycles)
    return TwoUrysohn(first, second)


def gen_sign_changing_kernel(m, n, seed, extrema_count=3, mode=PLK, x_min=0.0, x_max=1.0) -> UrysohnOperator:
    """Smooth kernel shifted so its output over uniform input is centred on zero.

    Used for the rectifier and relay objects, whose intermediate variable
    must take both signs.
    """
    op = gen_smooth_kernel(m, n, seed, extrema_count, x_min, x_max, mode)
    # mean row value under uniform input is the trapezoidal mean over nodes
    w = np.full(n, 1.0)
    w[0] = w[-1] = 0.5
    U = op.U - (op.U @ w / w.sum())[:, None]
    return op.with_matrix(U)


def gen_dataset(obj: ReferenceObject, length, x_min, x_max, seed) -> Dataset:
    """Simulate ``obj`` on uniform excitation and return ``length`` aligned samples.

    ``memory - 1`` extra leading inputs are drawn so every returned sample
    has a defined output.
    """
    if length < obj.memory:
        raise InputError(f"need at least {obj.memory} samples, got {length}")
    x = gen_uniform_input(length + obj.memory - 1, x_min, x_max, seed)
    z = obj.simulate(x)
    return Dataset(x[obj.memory - 1:], z)


# ----------------------------------------------------------- files


def save_object(obj: ReferenceObject, path) -> None:
    if isinstance(obj, TwoUrysohn):
        text = modelfile.dump_tagged("two_urysohn", [obj.first, obj.second])
    elif isinstance(obj, (SingleUrysohn, UrysohnRectifier, UrysohnRelay)):
        text = modelfile.dump_tagged(obj.kind, [obj.first])
    else:
        raise TypeError(f"{obj.kind} objects have no file representation")
    with open(os.fspath(path), "w", newline="\n") as fh:
        fh.write(text)


def load_object(path) -> ReferenceObject:
    from .errors import FormatError

    with open(os.fspath(path), "rb") as fh:
        kind, ops = modelfile.load_tagged(fh.read())
    builders = {
        "two_urysohn": (2, lambda o: TwoUrysohn(o[0], o[1])),
        "single": (1, lambda o: SingleUrysohn(o[0])),
        "rectifier": (1, lambda o: UrysohnRectifier(o[0])),
        "relay": (1, lambda o: UrysohnRelay(o[0])),
    }
    if kind not in builders:
        raise FormatError(f"unknown object kind {kind!r}", 0)
    count, build = builders[kind]
    if len(ops) != count:
        raise FormatError(f"{kind} object needs {count} operator blocks, found {len(ops)}", 0)
    return build(ops)
