"""ringqed: collective photon emission of cold atoms near a microring.

Simulates N two-level atoms coupled simultaneously to free-space vacuum
modes and to a single whispering-gallery mode of a microring resonator,
in the single-excitation weak-drive limit. Provides decay-rate metrics,
bus transmission spectra, and subradiance studies for stochastic clouds
and tweezer arrays, cross-checked against independent master-equation
propagators.
"""

__version__ = "0.1.0"

from .units import (
    GAMMA0,
    K0,
    LAMBDA0,
    Calibration,
    from_physical,
    to_physical,
)
from .errors import (
    CalibrationError,
    ConfigError,
    ConsistencyError,
    DarkPoleError,
    DefectiveMatrixError,
    EnsembleError,
    GenerationError,
    NearCoincidenceError,
    RingQEDError,
    StepSizeError,
    UndefinedTransmissionError,
)
from .geometry import (
    ArrayParams,
    AtomConfig,
    CloudParams,
    Z_FLOOR,
    build_array,
    sample_cloud,
    spawn_seeds,
)
from .free_space import (
    COINCIDENCE_THRESHOLD,
    build_free_matrix,
    dissipative_matrix,
    greens_pair,
    polarization_coefficient,
)
from .cavity import (
    CavityMatrix,
    CavityParams,
    build_cavity_matrix,
    bus_transmission,
    cavity_field,
    cooperativity,
    coupling_at,
    default_evanescent_length,
    drive_vector,
    empty_transmission,
)
from .dynamics import (
    DecayMetrics,
    EigenSystem,
    EmissionRecord,
    ExcitationState,
    build_evolution_matrix,
    channel_rate_matrices,
    decay_metrics,
    eigendecompose,
    emission_rates,
    emission_record,
    evolve,
    excite_ss,
    excite_tds,
    photon_budget,
    steady_state_sigma,
    weights_ss,
    weights_tds,
)
from .master_equation import (
    ModelComparison,
    Trajectory,
    atomic_density,
    compare_models,
    photon_density,
    propagate_eliminated,
    propagate_full_cavity,
)
from .stats import EnsembleStats, StreamingStats, histogram_edges
from .experiments import (
    FitResult,
    SpectrumResult,
    SweepGrid,
    calibrated_for_cloud,
    compare_line_ring,
    compute_spectrum,
    coupling_calibration_factor,
    decay_ratio_sweep,
    default_detuning_grid,
    fit_lorentzian,
    run_cloud_ensemble,
    sweep_array_map,
    sweep_disorder,
)
