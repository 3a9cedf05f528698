"""Quantum-noise force-sensitivity spectra and limit bounds for linear detectors."""

from .bounds import (
    CouplingSusceptibilities,
    chi_cav,
    chi_mech,
    coupling_susceptibilities,
    generalized_uql,
    inverse_chi_mech,
    optimal_uql,
    sql,
    uql,
)
from .linresp import (
    CombinedProofQuantities,
    GenericDetector,
    UncertaintyReport,
    combined_quantities,
    combined_sensitivity,
    extract_detector,
    feedback_added_noise,
    g_optimized_bound,
    sensitivity,
    sprime_f,
    uncertainty_check,
)
from .linsys import (
    DriftMatrix,
    FrequencyResponse,
    LinearModel,
    NoiseChannel,
    solve_frequency,
    stability_check,
    transfer,
)
from .noise import (
    AddedNoiseCoeffs,
    SensitivitySpectrum,
    added_noise,
    noise_budget,
    power_density,
    sensitivity_at,
    sensitivity_spectrum,
)
from .schemes import (
    ANCILLA,
    MECHANICAL,
    READOUT,
    DetectorParams,
    SchemeConfig,
    build,
    closed_form_transfer,
)
from .spectra import QuadratureSpectrum, squeeze_spectrum, thermal, vacuum

__version__ = "0.1.0"
