"""Single Urysohn operator: evaluation, one projection step, identification.

Run with ``python demos/01_single_operator.py``.
"""
import numpy as np

from urysohn import IdentConfig, UrysohnOperator, identify_single, update, with_split
from urysohn.kernel import PCK, PLK, evaluate, interp_coords, quantize_index
from urysohn.objects import SingleUrysohn, gen_dataset, gen_smooth_kernel

# %% Grid coordinates
# Five nodes on [0, 1].  0.3 sits at fractional position 2.2, so PCK rounds
# it to node 2 while PLK mixes nodes 2 and 3 with weights 0.8 / 0.2.
op = UrysohnOperator.zeros(1, 5, 0.0, 1.0, PLK)
print("nearest node of 0.3:", quantize_index(0.3, op))
print("PLK coordinates of 0.3:", interp_coords(0.3, op))

# %% Evaluating a small operator
# Rows are lags (row 0 = newest sample), columns are grid nodes.
U = [[1.0, 2.0], [3.0, 4.0]]
print("PCK output for window (0, 1):", evaluate(UrysohnOperator(U, 0, 1, PCK), [0.0, 1.0]))

# %% One projection step
# With alpha = 1 the updated operator reproduces the target exactly on the
# window it was updated with; with alpha = 0.25 only a quarter of the
# residual is removed.
rng = np.random.default_rng(0)
op = UrysohnOperator(rng.normal(size=(3, 6)), 0, 1, PLK)
window = [0.12, 0.5, 0.97]
for alpha in (1.0, 0.25):
    trial = op.copy()
    D = update(trial, window, 2.0, alpha)
    print(f"alpha={alpha}: residual before {D:+.4f}, after {2.0 - evaluate(trial, window):+.4f}")

# %% Identifying an operator from data
# Generate a smooth random operator, simulate it on uniform noise, learn it
# back from an all-zero start and score on the unseen second part.  The
# matrix itself is only determined up to constants moved between rows
# (they cancel in the output sum), so the comparison removes row means.
# The run stops early once 1000 consecutive residuals are negligible.
for mode in (PCK, PLK):
    truth = gen_smooth_kernel(5, 20, seed=1, mode=mode)
    data = with_split(gen_dataset(SingleUrysohn(truth), 50000, 0.0, 1.0, seed=2), 0.8, memory=5)
    rep = identify_single(data, UrysohnOperator.zeros(5, 20, 0, 1, mode), IdentConfig(alpha=1.0))
    centred = lambda U: U - U.mean(axis=1, keepdims=True)
    gap = np.abs(centred(rep.model.U) - centred(truth.U)).max()
    print(f"{mode}: validation E = {100 * rep.val_E:.2e}%, max deviation of row shapes {gap:.1e}, "
          f"{rep.iterations} updates")
