"""Discrete-time Urysohn operators on an equispaced input grid.

An operator with memory depth ``m`` and ``n`` grid points stores the values of
its ``m`` nonlinear functions in an ``m x n`` matrix ``U``.  Row ``j`` (0-based
here) belongs to lag ``j``, i.e. it is applied to ``x[i - j]``; column ``k``
belongs to the grid node ``x_min + k * (x_max - x_min) / (n - 1)``.

Two ways of reading the matrix are supported:

``PCK``
    piecewise-constant kernel, every input is rounded to its nearest node;
``PLK``
    piecewise-linear kernel, linear interpolation between the two nodes that
    bracket the input.

Windows are always ordered newest-first: ``(x[i], x[i-1], ..., x[i-m+1])``.
Inputs outside ``[x_min, x_max]`` are clamped to the range before they are
mapped onto the grid.

The public coordinate helpers (:func:`quantize_index`, :func:`interp_coords`)
report 1-based grid indices so that they read like the usual mathematical
notation; everything else, including matrix access, is 0-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, InputError

PCK = "PCK"
PLK = "PLK"
MODES = (PCK, PLK)


class UrysohnOperator:
    """Grid representation of ``y_i = sum_j g_j(x_{i-j})``.

    Parameters
    ----------
    U : array_like, shape (m, n)
        Kernel values, row = lag, column = grid node.
    x_min, x_max : float
        Input range covered by the grid.
    mode : {"PCK", "PLK"}
        How the grid values are read.
    """

    __slots__ = ("U", "x_min", "x_max", "mode")

    def __init__(self, U, x_min=0.0, x_max=1.0, mode=PCK):
        U = np.array(U, dtype=float)
        if U.ndim != 2:
            raise ConfigError(f"kernel matrix must be 2-D, got shape {U.shape}")
        if mode not in MODES:
            raise ConfigError(f"unknown kernel mode {mode!r}, expected one of {MODES}")
        x_min, x_max = float(x_min), float(x_max)
        _check_grid(U.shape[0], U.shape[1], x_min, x_max)
        if not np.all(np.isfinite(U)):
            raise ConfigError("kernel matrix contains non-finite entries")
        self.U = U
        self.x_min = x_min
        self.x_max = x_max
        self.mode = mode

    @classmethod
    def zeros(cls, m, n, x_min=0.0, x_max=1.0, mode=PCK):
        _check_grid(m, n, float(x_min), float(x_max))
        return cls(np.zeros((m, n)), x_min, x_max, mode)

    @property
    def m(self) -> int:
        return self.U.shape[0]

    @property
    def n(self) -> int:
        return self.U.shape[1]

    @property
    def step(self) -> float:
        """Distance between neighbouring grid nodes."""
        return (self.x_max - self.x_min) / (self.n - 1)

    def nodes(self) -> np.ndarray:
        return self.x_min + np.arange(self.n) * self.step

    def copy(self) -> "UrysohnOperator":
        return UrysohnOperator(self.U.copy(), self.x_min, self.x_max, self.mode)

    def with_matrix(self, U) -> "UrysohnOperator":
        return UrysohnOperator(U, self.x_min, self.x_max, self.mode)

    def output_bounds(self) -> tuple[float, float]:
        """Smallest and largest output any window can produce.

        Exact for both modes: a PLK output is a convex combination of node
        values, so the extremes are attained on nodes.
        """
        return float(self.U.min(axis=1).sum()), float(self.U.max(axis=1).sum())

    def __call__(self, window) -> float:
        return evaluate(self, window)

    def predict(self, inputs) -> np.ndarray:
        """Outputs for every full window of ``inputs`` (oldest sample first).

        Returns ``len(inputs) - m + 1`` values; entry ``r`` is the output at
        sample ``r + m - 1``.  Matches :func:`evaluate` bit for bit.
        """
        x = np.asarray(inputs, dtype=float)
        if x.ndim != 1:
            raise InputError("inputs must be a 1-D sequence")
        if len(x) < self.m:
            raise InputError(f"need at least m={self.m} samples, got {len(x)}")
        if not np.all(np.isfinite(x)):
            raise InputError("inputs contain non-finite values")
        b = grid_positions(x, self.x_min, self.x_max, self.n)
        N, m = len(x), self.m
        out = np.zeros(N - m + 1)
        if self.mode == PCK:
            k = np.floor(b + 0.5).astype(np.intp) - 1
            for j in range(m):
                out += self.U[j, k[m - 1 - j:N - j]]
        else:
            lo = np.floor(b).astype(np.intp)
            psi = b - lo
            lo -= 1
            hi = np.minimum(lo + 1, self.n - 1)
            for j in range(m):
                s = slice(m - 1 - j, N - j)
                out += (1.0 - psi[s]) * self.U[j, lo[s]] + psi[s] * self.U[j, hi[s]]
        return out

    def __eq__(self, other):
        if not isinstance(other, UrysohnOperator):
            return NotImplemented
        return (
            self.mode == other.mode
            and self.x_min == other.x_min
            and self.x_max == other.x_max
            and self.U.shape == other.U.shape
            and bool(np.array_equal(self.U, other.U))
        )

    def __repr__(self):
        return (
            f"UrysohnOperator(mode={self.mode}, m={self.m}, n={self.n}, "
            f"x_min={self.x_min!r}, x_max={self.x_max!r})"
        )


@dataclass(frozen=True)
class GridCoords:
    """Where an input lands on the grid (1-based indices).

    ``k`` is the nearest node (PCK), ``k_lo``/``k_hi`` bracket the input and
    ``psi`` is the weight of ``k_hi`` (PLK).
    """

    b: float
    k: int
    k_lo: int
    k_hi: int
    psi: float


class CascadeModel:
    """Two Urysohn operators in series.

    ``first`` maps the external input to the intermediate variable, ``second``
    maps the last ``p = second.m`` intermediate values to the output.  The
    second operator's input range bounds the intermediate variable; values
    outside it are clamped.  With ``p == 1`` this is the canonical model (an
    Urysohn block followed by a static nonlinearity).
    """

    __slots__ = ("first", "second")

    def __init__(self, first: UrysohnOperator, second: UrysohnOperator):
        self.first = first
        self.second = second

    @property
    def p(self) -> int:
        return self.second.m

    @property
    def memory(self) -> int:
        """Number of external inputs needed for one output."""
        return self.first.m + self.second.m - 1

    @property
    def is_canonical(self) -> bool:
        return self.p == 1

    def copy(self) -> "CascadeModel":
        return CascadeModel(self.first.copy(), self.second.copy())

    def intermediate(self, inputs) -> np.ndarray:
        """Clamped intermediate sequence for every full first-block window."""
        y = self.first.predict(inputs)
        return np.clip(y, self.second.x_min, self.second.x_max)

    def predict(self, inputs) -> np.ndarray:
        """Outputs for every full window; entry ``r`` is sample ``r + memory - 1``."""
        x = np.asarray(inputs, dtype=float)
        if len(x) < self.memory:
            raise InputError(f"need at least {self.memory} samples, got {len(x)}")
        return self.second.predict(self.intermediate(x))

    def __call__(self, window) -> float:
        return evaluate_cascade(self, window)[1]

    def __eq__(self, other):
        if not isinstance(other, CascadeModel):
            return NotImplemented
        return self.first == other.first and self.second == other.second

    def __repr__(self):
        return f"CascadeModel(first={self.first!r}, second={self.second!r})"


def _check_grid(m, n, x_min, x_max):
    if m < 1:
        raise ConfigError(f"memory depth must be >= 1, got {m}")
    if n < 2:
        raise ConfigError(f"need at least 2 grid points, got {n}")
    if not (math.isfinite(x_min) and math.isfinite(x_max)) or not x_min < x_max:
        raise ConfigError(f"invalid input range [{x_min}, {x_max}]")


def grid_positions(x, x_min, x_max, n):
    """Fractional 1-based grid position ``b`` of every (clamped) input."""
    x = np.clip(np.asarray(x, dtype=float), x_min, x_max)
    return 1.0 + (n - 1) * ((x - x_min) / (x_max - x_min))


def grid_position(x: float, op: UrysohnOperator) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise InputError(f"non-finite input {x}")
    if x < op.x_min:
        x = op.x_min
    elif x > op.x_max:
        x = op.x_max
    return 1.0 + (op.n - 1) * ((x - op.x_min) / (op.x_max - op.x_min))


def quantize_index(x: float, op: UrysohnOperator) -> int:
    """Nearest grid node of ``x`` (1-based), ties rounded upwards."""
    return math.floor(grid_position(x, op) + 0.5)


def interp_coords(x: float, op: UrysohnOperator) -> GridCoords:
    b = grid_position(x, op)
    lo = math.floor(b)
    hi = math.ceil(b)
    return GridCoords(b=b, k=math.floor(b + 0.5), k_lo=lo, k_hi=hi, psi=b - lo)


def _check_window(op: UrysohnOperator, window) -> list:
    w = [float(v) for v in window]
    if len(w) != op.m:
        raise InputError(f"window length {len(w)} does not match memory depth {op.m}")
    return w


def cells(op: UrysohnOperator, window) -> list[tuple[int, int, float]]:
    """Matrix cells touched by ``window`` as ``(row, col, weight)`` triples.

    PCK gives one cell of weight 1 per row; PLK gives the two bracketing
    cells of each row weighted ``1 - psi`` and ``psi`` (both entries refer to
    the same cell when the input sits on a node).
    """
    w = _check_window(op, window)
    out = []
    if op.mode == PCK:
        for j, x in enumerate(w):
            out.append((j, quantize_index(x, op) - 1, 1.0))
    else:
        for j, x in enumerate(w):
            c = interp_coords(x, op)
            out.append((j, c.k_lo - 1, 1.0 - c.psi))
            out.append((j, c.k_hi - 1, c.psi))
    return out


def evaluate(op: UrysohnOperator, window: Sequence[float]) -> float:
    """Operator output for one newest-first window of ``m`` inputs."""
    w = _check_window(op, window)
    U = op.U
    y = 0.0
    if op.mode == PCK:
        for j, x in enumerate(w):
            y += U[j, quantize_index(x, op) - 1]
    else:
        for j, x in enumerate(w):
            c = interp_coords(x, op)
            y += (1.0 - c.psi) * U[j, c.k_lo - 1] + c.psi * U[j, c.k_hi - 1]
    return float(y)


def evaluate_cascade(model: CascadeModel, window: Sequence[float]) -> tuple[list[float], float]:
    """Intermediate window and output of a cascade.

    ``window`` holds ``m + p - 1`` newest-first inputs.  Returns the ``p``
    newest-first intermediate values (after clamping) and the final output.
    """
    w = [float(v) for v in window]
    if len(w) != model.memory:
        raise InputError(f"window length {len(w)} does not match cascade memory {model.memory}")
    m, lo, hi = model.first.m, model.second.x_min, model.second.x_max
    ys = [min(max(evaluate(model.first, w[r:r + m]), lo), hi) for r in range(model.p)]
    return ys, evaluate(model.second, ys)


def count_clamped(x, x_min, x_max) -> int:
    x = np.asarray(x, dtype=float)
    return int(np.count_nonzero((x < x_min) | (x > x_max)))
