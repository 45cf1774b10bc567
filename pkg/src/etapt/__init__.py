"""Truncated-Fock-space checks for a non-Hermitian coupled-oscillator model.

The package builds the two-mode Hamiltonian with an imaginary bilinear
coupling, the positive metric generated by a boost-like mode-mixing
operator, and the antilinear symmetry obtained by composing the metric
with parity and conjugation.  On top of those sit quantitative checks:
spectral reality against the analytic ladder, every operator identity
the construction promises, bilinear pairing tables, and a phase-boundary
sweep.  The ``etapt`` console script exposes the same checks from the
command line.
"""

from .fock import (
    DimensionError,
    DimensionMismatchError,
    TruncatedOperator,
    commutator,
    embed_mode1,
    embed_mode2,
    identity_op,
    ladder,
    momentum_op,
    position_op,
    state_labels,
    total_quanta,
    two_mode_xp,
)
from .model import (
    BrokenPhaseError,
    DecoupledSpec,
    DegenerateFrequenciesError,
    EigenState,
    OscillatorParams,
    TruncationLimitError,
    analytic_energy,
    decoupled_frequencies,
    decoupled_hamiltonian,
    hamiltonian,
    lowest_levels,
    mode_frequencies,
    model_eigensystem,
    theta_of,
)
from .symm import (
    AntilinearMap,
    DegenerateEigenbasisError,
    MetricDecompositionError,
    MetricPair,
    boost_generator,
    charge_from_eigenbasis,
    eta_tilde,
    metric,
    parity,
    pt_conjugate,
    pt_map,
    time_reversal,
)
from .verify import (
    GramReport,
    IllConditionedNormalizationError,
    LevelMatch,
    ResidualReport,
    SpectrumReport,
    SweepPoint,
    SweepReport,
    bilinear_eta_tilde,
    bulk_projector,
    dyson_decoupling_residual,
    eta_tilde_commutator,
    eta_tilde_involution,
    gram,
    identity_suite,
    matched_eigenpairs,
    metric_conjugation_residual,
    normalize_bilinear,
    phase_sweep,
    pseudo_hermiticity_residual,
    pseudo_pt_residual,
    spectrum_report,
    transform_rules_check,
)

__version__ = "0.1.0"
