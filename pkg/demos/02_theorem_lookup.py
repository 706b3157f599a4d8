"""Any quantized finite-memory system is a theorem kernel plus a lookup table.

Run with ``python demos/02_theorem_lookup.py``.
"""
import itertools

import numpy as np

from urysohn.kernel import evaluate
from urysohn.objects import GeneralSISO, Theorem, make_theorem_kernel, miso_map
from urysohn.signals import quantize_signal

# %% The coding kernel
# U[j, k] = k * n**j (1-based) gives every window of grid inputs its own
# integer, and the integers are consecutive.
n, m = 4, 3
op = make_theorem_kernel(n, m)
print(op.U)
outs = sorted(evaluate(op, w) for w in itertools.product(range(1, n + 1), repeat=m))
print(f"{len(outs)} windows -> outputs {outs[0]:.0f} .. {outs[-1]:.0f}, all distinct: {len(set(outs)) == len(outs)}")

# %% A lookup table on top reproduces an arbitrary function exactly
F = lambda w: np.sin(w[:, 0]) * w[:, 1] - np.abs(w[:, 2] - 2)
obj = Theorem(n, m, F)
grid_windows = np.array(list(itertools.product(range(1, n + 1), repeat=m)), dtype=float)
exact = all(obj.model(w) == v for w, v in zip(grid_windows, F(grid_windows)))
print("cascade matches F on every grid window:", exact)

# %% Continuous inputs: quantize first
# Rounding the input to the grid changes the output of a smooth system by
# less and less as the grid gets finer.
smooth = GeneralSISO(lambda w: np.sin(3 * w[:, 0]) + w[:, 0] * w[:, 1], 2)
x = np.random.default_rng(0).uniform(0, 1, 5000)
z = smooth.simulate(x)
for levels in (8, 16, 32, 64):
    dev = np.abs(smooth.simulate(quantize_signal(x, levels, 0, 1)) - z).max()
    print(f"n={levels:3d}: max output change from quantizing {dev:.4f}")

# %% Several inputs folded into one index
print("codes of all 3x3 index pairs:", sorted(miso_map(p, 3) for p in itertools.product(range(1, 4), repeat=2)))
