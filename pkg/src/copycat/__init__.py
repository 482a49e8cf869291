"""copycat: copy trained black-box classifiers into interpretable models.

The workflow: sample the feature space uniformly, label the samples with
the trained model's own predictions, and fit an unconstrained decision
tree to that synthetic set. The resulting copy reproduces the original's
decision behavior while staying readable, and its feature importances
attach to the raw input attributes.

Modules: data (CSV/encoding/standardize/split), models (LR, CART, GBT,
MLP, pipelines, persistence), sampling (uniform box sampling + oracle
labeling), copying (single copies, repeated studies, sample-size sweeps),
metrics (accuracy/agreement/importance comparison), scenarios (bundled
end-to-end studies), cli (the `copycat` command).
"""

from . import _kernels, copying, data, metrics, models, sampling, scenarios
from ._kernels import active_backend, available_backends, set_backend
from .copying import CopyConfig, CopyResult, CopyStudy, build_copy, fidelity_vs_n_sweep, run_study
from .data import (
    FeatureSpec,
    LabeledDataset,
    SplitConfig,
    Standardizer,
    apply_standardizer,
    encode_nominals,
    fit_standardizer,
    load_csv,
    stratified_split,
)
from .errors import ConfigError, CopycatError, CopyIntegrityError, DataError, TrainingError
from .metrics import ImportanceReport, accuracy, agreement, compare_importances, concentration_index
from .models import *  # noqa: F401,F403 -- curated in models.__all__
from .sampling import SamplerConfig, SamplingRegion, fit_region, label_with_oracle, sample_uniform
from .scenarios import (
    CreditGenConfig,
    ScenarioConfig,
    ScenarioReport,
    generate_credit_like,
    generate_interleaved_arcs,
    run_scenario1,
    run_scenario2,
    run_toy,
)

__version__ = "0.1.0"
