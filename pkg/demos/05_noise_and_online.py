"""Relaxation against measurement noise, and learning while predicting.

Run with ``python demos/05_noise_and_online.py``.
"""
import numpy as np

from urysohn import Dataset, IdentConfig, UrysohnOperator, error_E, identify_single, predict_online
from urysohn.experiments import build_dataset, resolve, run_trial
from urysohn.kernel import PLK

# %% Smaller steps average the noise out
# Outputs carry Gaussian noise with std 5% of their range.  Full steps
# (alpha = 1) chase every noisy sample; alpha = 0.1 averages over ~10.
for alpha in (1.0, 0.3, 0.1):
    cfg = resolve("single", alpha=alpha, sigma_noise=0.05, samples=20000, trials=5)
    errors = [run_trial(cfg, t).val_E for t in range(cfg.trials)]
    print(f"alpha={alpha}: median validation E {100 * np.median(errors):.2f}%")

# %% Test-then-train scoring
# Each validation sample is predicted first and used for an update after,
# so a model that keeps learning still never sees an output before
# predicting it.  Start from a model trained on only 300 samples.
cfg = resolve("single", samples=20000)
data = build_dataset(cfg, 0)
start = UrysohnOperator.zeros(5, 20, 0, 1, PLK)
short = identify_single(Dataset(data.inputs[:300], data.outputs[:300]), start, IdentConfig(alpha=1.0))
val = data.validation
static = error_E(val.outputs[4:], short.model.predict(val.inputs))
preds, _ = predict_online(short.model, val.inputs, val.outputs, IdentConfig(alpha=1.0))
print(f"model trained on 300 samples: static E {100 * static:.3f}%, "
      f"online E {100 * error_E(val.outputs[4:], preds):.3f}%")
