from qds_lab._channels import (
    Channel,
    PositivityProbe,
    QdsReport,
    Representation,
    additive_perturbation,
    adjoint,
    apply,
    certify_qds,
    channel_zoo,
    choi_to_kraus,
    compose,
    damped_pinching,
    depolarizing,
    identity_channel,
    kraus_to_choi,
    linear_combination,
    mixed_unitary,
    pinching,
    positivity_probe,
    random_kraus_map,
    random_mixed_unitary,
    shift_average,
    to_superop,
    transpose_map,
    unitary_conjugation,
)
from qds_lab._config import AscentSettings, Tolerances
from qds_lab._entropy import (
    EntropyReport,
    entropy_monotonicity_check,
    unitarity_probe,
    von_neumann_entropy,
)
from qds_lab._exceptions import (
    BadExponentError,
    BadParameterError,
    BadRankError,
    DecompositionStalledError,
    DimensionMismatchError,
    DomainError,
    InvalidDensityError,
    MalformedInputError,
    NonHermitianInputError,
    NotCompletelyPositiveError,
    NotMajorizedError,
    NotQdsError,
    NotTracePreservingError,
    PropertyViolation,
    QdsLabError,
    UnknownExampleError,
    UsageError,
    ValidationError,
)
from qds_lab._majorization import (
    BirkhoffDecomposition,
    ConvexFunctionReport,
    DoublyStochasticMatrix,
    MajorizationCertificate,
    birkhoff_decompose,
    build_ds_matrix,
    check_majorization,
    convex_function_test,
    realize_channel,
)
from qds_lab._matcore import (
    Spectrum,
    eig_hermitian,
    gell_mann_basis,
    schatten_dual,
    schatten_norm,
    spectral_apply,
    trace,
    unvec,
    vec,
)
from qds_lab._norms import (
    ContractionProbe,
    InducedNormResult,
    NormMethod,
    contraction_coefficient,
    diagonal_contraction_probe,
    induced_norm,
    interpolation_sweep,
    traceless_norm,
)
from qds_lab._perturbation import (
    PerturbationReport,
    PerturbationSweep,
    deviation_metrics,
    distance_p2,
    perturbation_sweep,
    sampled_trace_deviation,
)
from qds_lab._random import (
    random_density,
    random_doubly_stochastic,
    random_pure_state,
    random_unitary,
)
from qds_lab._selftest import SelftestReport, run_selftest
from qds_lab._serialization import (
    channel_from_json,
    channel_to_json,
    matrix_from_json,
    matrix_to_json,
)
from qds_lab._truncation import TailScan, scan, tail_norm

__version__ = "0.1.0"

__all__ = [
    "AscentSettings",
    "BadExponentError",
    "BadParameterError",
    "BadRankError",
    "BirkhoffDecomposition",
    "Channel",
    "ContractionProbe",
    "ConvexFunctionReport",
    "DecompositionStalledError",
    "DimensionMismatchError",
    "DomainError",
    "DoublyStochasticMatrix",
    "EntropyReport",
    "InducedNormResult",
    "InvalidDensityError",
    "MajorizationCertificate",
    "MalformedInputError",
    "NonHermitianInputError",
    "NormMethod",
    "NotCompletelyPositiveError",
    "NotMajorizedError",
    "NotQdsError",
    "NotTracePreservingError",
    "PerturbationReport",
    "PerturbationSweep",
    "PositivityProbe",
    "PropertyViolation",
    "QdsLabError",
    "QdsReport",
    "Representation",
    "SelftestReport",
    "Spectrum",
    "TailScan",
    "Tolerances",
    "UnknownExampleError",
    "UsageError",
    "ValidationError",
    "additive_perturbation",
    "adjoint",
    "apply",
    "birkhoff_decompose",
    "build_ds_matrix",
    "certify_qds",
    "channel_from_json",
    "channel_to_json",
    "channel_zoo",
    "check_majorization",
    "choi_to_kraus",
    "compose",
    "contraction_coefficient",
    "convex_function_test",
    "damped_pinching",
    "depolarizing",
    "deviation_metrics",
    "diagonal_contraction_probe",
    "distance_p2",
    "eig_hermitian",
    "entropy_monotonicity_check",
    "gell_mann_basis",
    "identity_channel",
    "induced_norm",
    "interpolation_sweep",
    "kraus_to_choi",
    "linear_combination",
    "matrix_from_json",
    "matrix_to_json",
    "mixed_unitary",
    "perturbation_sweep",
    "pinching",
    "positivity_probe",
    "random_density",
    "random_doubly_stochastic",
    "random_kraus_map",
    "random_mixed_unitary",
    "random_pure_state",
    "random_unitary",
    "realize_channel",
    "run_selftest",
    "sampled_trace_deviation",
    "scan",
    "schatten_dual",
    "schatten_norm",
    "shift_average",
    "spectral_apply",
    "tail_norm",
    "to_superop",
    "trace",
    "traceless_norm",
    "transpose_map",
    "unitarity_probe",
    "unitary_conjugation",
    "unvec",
    "vec",
    "von_neumann_entropy",
]
