"""Known output nonlinearities: an absolute value and a relay.

When the final nonlinearity is known, the wanted intermediate value can be
read off the output directly instead of probed.  Run with
``python demos/04_rectifier_relay.py``.
"""
import numpy as np

from urysohn import RectifierInvert, RelayInvert, probe_intermediate
from urysohn.experiments import build_object, resolve, run_experiment
from urysohn.kernel import CascadeModel, UrysohnOperator

# %% How the target intermediate value is chosen
model = CascadeModel(UrysohnOperator.zeros(1, 2), UrysohnOperator.zeros(1, 20, -1.2, 1.2))
print("rectifier, z=2, y_hat=-1.5 ->", probe_intermediate(model, -1.5, 2.0, RectifierInvert()))
print("relay, z=+1, y_hat=0.7 ->", probe_intermediate(model, 0.7, 1.0, RelayInvert()))
print("relay, z=-1, y_hat=0.7 ->", probe_intermediate(model, 0.7, -1.0, RelayInvert()))

# %% Rectifier: |Urysohn block|, learned in real time
cfg = resolve("rectifier", trials=5)
print("rectifier:", run_experiment(cfg).stats)

# %% Relay: sgn(Urysohn block), learned in alternating passes
cfg = resolve("relay", trials=3)
x = np.random.default_rng(0).uniform(0, 1, 1000)
print("relay outputs take the values", np.unique(build_object(cfg).simulate(x)))
print("relay:", run_experiment(cfg).stats)
