"""Two-qubit coherence / predictability / concurrence ("triality") simulator.

Typical use::

    from triality import PrepParams, prepare_state, density_from_pure, evaluate

    rho = density_from_pure(prepare_state(PrepParams(alpha, theta)))
    record = evaluate(rho)
    record.sum_a  # V_A^2 + P_A^2 + C^2, equal to 1 for pure states
"""

from .errors import (
    InsufficientData,
    InvalidNoiseModel,
    InvalidProbabilities,
    InvalidState,
    MissingSetting,
    NotHermitian,
    NotPSD,
    TrialityError,
)
from .experiments import (
    SweepConfig,
    ellipsoid_stats,
    measured_and_noise_sim,
    normalize_against_noise_sim,
    purity_study,
    random_scan,
    ratio_relative_std,
    run_sweep,
    slice_study,
    thirteen_states,
)
from .metrics import (
    TrialityRecord,
    c_max,
    coherence,
    concurrence_mixed,
    concurrence_pure,
    evaluate,
    evaluate_pure,
    predictability,
)
from .noise import CountsTable, NoiseModel, damp, depolarize, load_noise_model, preset, run_noisy_prep, sample_counts
from .states import (
    BELL_PARAMS,
    DensityMatrix,
    PrepParams,
    PureTwoQubitState,
    density_from_pure,
    partial_trace,
    prepare_state,
    prepare_state_circuit,
    purity,
    werner_state,
)
from .tomography import (
    ExpectationSet,
    estimate_expectations,
    linear_inversion,
    project_to_physical,
    tomography_pipeline,
)

__version__ = "0.1.0"
