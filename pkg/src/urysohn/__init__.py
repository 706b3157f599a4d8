"""Discrete-time Urysohn operators and their identification from data."""
from .errors import ConfigError, FormatError, InputError, MetricError, NumericError, UrysohnError
from .identify import (
    ALTERNATING,
    REALTIME,
    FixedProbe,
    IdentConfig,
    RectifierInvert,
    RelayInvert,
    RunReport,
    cascade_template,
    identify_cascade,
    identify_single,
    predict_online,
    probe_intermediate,
    update,
    update_pck,
    update_plk,
)
from .kernel import (
    PCK,
    PLK,
    CascadeModel,
    GridCoords,
    UrysohnOperator,
    evaluate,
    evaluate_cascade,
    interp_coords,
    quantize_index,
)
from .metrics import TrialStats, aggregate_trials, error_E
from .modelfile import deserialize, serialize
from .signals import Dataset, add_output_noise, gen_uniform_input, quantize_signal, read_csv, split, with_split, write_csv

__version__ = "0.1.0"
