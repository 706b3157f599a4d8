"""Cascade identification from input/output data only.

The intermediate signal between the two blocks is never observed; the
first block is steered by probing which small change of it would reduce
the output error.  Run with ``python demos/03_two_urysohn.py`` (about fifteen
seconds).
"""
import numpy as np

from urysohn import FixedProbe, IdentConfig, UrysohnOperator, cascade_template, identify_cascade, identify_single
from urysohn.experiments import resolve, run_experiment
from urysohn.kernel import PLK
from urysohn.objects import Wiener, gen_dataset
from urysohn.signals import with_split

# %% A Wiener system is out of reach for one operator
# A squared FIR output contains products of lagged inputs, which a sum of
# per-lag functions cannot express.
wiener = Wiener([1.0, 0.7, 0.4, 0.2], lambda y: y * y)
data = with_split(gen_dataset(wiener, 20000, 0, 1, seed=0), 0.5, memory=4)
single = identify_single(data, UrysohnOperator.zeros(4, 20, 0, 1, PLK), IdentConfig(alpha=0.05, epochs=3))

template = cascade_template(data, 4, 20, p=1, n_second=20)
template.first = UrysohnOperator.zeros(4, 20, 0, 1, PLK)
step = 0.005 * (template.second.x_max - template.second.x_min)
cascade = identify_cascade(data, template, IdentConfig(alpha=0.5, epochs=10, init="single", restarts=2,
                                                       strategy=FixedProbe(step)))
print(f"Wiener object: single operator E = {100 * single.val_E:.2f}%, cascade E = {100 * cascade.val_E:.2f}%")

# %% Random smooth two-Urysohn objects
# Default sizes: first block m=5, n=20; second block memory 2 on 20 nodes;
# 20000 samples split in half.
result = run_experiment(resolve("two_urysohn", trials=3))
for t, trial in enumerate(result.trials):
    print(f"trial {t}: cascade E {100 * trial.val_E:.2f}%, single operator E {100 * trial.baseline_val_E:.2f}%")
print("mean:", result.stats)
