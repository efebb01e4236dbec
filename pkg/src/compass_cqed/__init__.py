"""Compass states of a cavity field: preparation, phase-space structure, decay and probing."""
from .decoherence import DecayParams, coherence_factor, compass_lifetime, decohere_compass, purity
from .errors import (
    CompassError,
    CutoffTooSmall,
    DegenerateState,
    DimensionMismatch,
    GridTooCoarse,
    NoRevivalFound,
    NotNormalized,
    PhaseConditionViolated,
    StepTooLarge,
    ZeroAmplitude,
    ZeroDetuning,
)
from .probe import resonant_detection_probs, revival_time_estimate, revival_trace
from .protocol import AtomState, ProtocolConfig, joint_probability, make_compass, outcome_probabilities
from .states import (
    CoherentSuperposition,
    DensityMatrixFock,
    FockVector,
    cat,
    coherent,
    compass,
    fidelity,
    normalize,
    overlap,
    photon_distribution,
    to_fock,
)
from .wigner import GridSpec, PhaseSpaceGrid, central_tile_metrics, wigner_compass, wigner_grid, wigner_superposition

__version__ = "0.1.0"
