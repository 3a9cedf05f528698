"""Generic linear-response detector layer.

Any linear detector is summarized at one frequency by the input operator's
self-susceptibility chi_FF, the noise spectra (S_FF, S_ZZ, S_ZF) of the
unperturbed input/rescaled-output pair, the coupling g, and the oscillator
susceptibilities (chi_qq, chi_qx) of the coupling operator q.  The rescaled
output is normalized so its response to the input drive is one, the output
commutes with itself at different times, and causality forbids any response
of the input to the output; those conventions are built into the extraction
and are not rechecked at runtime.

Direct feedback of the output onto the oscillator enters only through the
composite gain (raw gain times the constant commutator with the control
operator), which is the `lambda_prime` argument below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray

from . import bounds
from .errors import (
    DegenerateReadout,
    InvalidConfig,
    ZeroCoupling,
    ZeroFrequencyFeedback,
)
from .linsys import resolvent, transfer
from .schemes import DetectorParams, SchemeConfig, build
from .spectra import QuadratureSpectrum

_TINY = 1e-300


@dataclass(frozen=True)
class GenericDetector:
    """One-frequency summary of a linear force detector."""

    omega: float
    chi_FF: complex
    S_FF: float
    S_ZZ: float
    S_ZF: complex
    chi_qq: complex
    chi_qx: complex
    g: float


def sprime_f(det: GenericDetector) -> float:
    """Scaled added-noise power S'_f = S_f |chi_qx|^2 at the detector's coupling."""
    if det.g == 0.0:
        raise ZeroCoupling("added noise is undefined at g = 0")
    g_f = det.g * det.chi_qq
    g_z = (1.0 - det.g * det.g * det.chi_qq * det.chi_FF) / det.g
    return float(
        abs(g_f) ** 2 * det.S_FF
        + abs(g_z) ** 2 * det.S_ZZ
        + 2.0 * (g_f.conjugate() * g_z * det.S_ZF).real
    )


def sensitivity(det: GenericDetector) -> float:
    """Force-referred added noise S_f = S'_f / |chi_qx|^2."""
    return sprime_f(det) / abs(det.chi_qx) ** 2


def g_optimized_bound(det: GenericDetector) -> float:
    """Exact minimum of S'_f over the coupling strength.

    S'_f is alpha*g^2 + beta/g^2 + const with alpha, beta >= 0, so the
    minimum is const + 2*sqrt(alpha*beta); the coupling-independent term is
    2 Re(chi_qq* S_ZF) - 2 S_ZZ Re(chi_qq chi_FF).
    """
    cqq = det.chi_qq
    const = 2.0 * (
        (cqq.conjugate() * det.S_ZF).real - det.S_ZZ * (cqq * det.chi_FF).real
    )
    bracket = (
        det.S_FF
        + abs(det.chi_FF) ** 2 * det.S_ZZ
        - 2.0 * (det.chi_FF * det.S_ZF).real
    )
    return const + 2.0 * abs(cqq) * math.sqrt(max(det.S_ZZ * bracket, 0.0))


def spectral_matrix(
    s: NDArray[np.complex128], chi: NDArray[np.complex128]
) -> NDArray[np.complex128]:
    """Hermitian matrix M = S - i (chi - chi^dagger)/2 whose positivity encodes
    the spectral uncertainty relations of an operator pair."""
    s = np.asarray(s, dtype=complex)
    chi = np.asarray(chi, dtype=complex)
    return s - 1j * (chi - chi.conj().T) / 2.0


def _detector_spectral_matrix(det: GenericDetector) -> NDArray[np.complex128]:
    # pair (F, Z) with chi_ZF = 1 and chi_ZZ = chi_FZ = 0 by convention
    s = np.array(
        [[det.S_FF, det.S_ZF.conjugate()], [det.S_ZF, det.S_ZZ]], dtype=complex
    )
    chi = np.array([[det.chi_FF, 0.0], [1.0, 0.0]], dtype=complex)
    return spectral_matrix(s, chi)


@dataclass(frozen=True)
class UncertaintyReport:
    holds: bool
    slack: float
    matrix_positive: bool
    min_eigenvalue: float


def uncertainty_check(det: GenericDetector, tol: float = 1e-9) -> UncertaintyReport:
    """Evaluate the combined input/output uncertainty relation.

    slack = S_FF S_ZZ - |S_ZF|^2 - |B| - 1/4 with B = Im(chi_FF) S_ZZ +
    Im(S_ZF); the relation holds when slack >= -tol.  The eigenvalue
    positivity of the (F, Z) spectral matrix is reported alongside.
    """
    b = det.chi_FF.imag * det.S_ZZ + det.S_ZF.imag
    slack = det.S_FF * det.S_ZZ - abs(det.S_ZF) ** 2 - abs(b) - 0.25
    eigenvalues = np.linalg.eigvalsh(_detector_spectral_matrix(det))
    min_eig = float(eigenvalues.min())
    return UncertaintyReport(
        holds=bool(slack >= -tol),
        slack=float(slack),
        matrix_positive=bool(min_eig >= -tol),
        min_eigenvalue=min_eig,
    )


@dataclass(frozen=True)
class CombinedProofQuantities:
    """Building blocks of the combined readout-angle/squeezing/detuning bound."""

    D: float
    E: float
    X: float
    Y: float
    C: complex
    H: float
    K: float
    L: float


def combined_quantities(
    params: DetectorParams,
    omega: float,
    xi: float,
    uvw: QuadratureSpectrum,
    g: float,
) -> CombinedProofQuantities:
    """Closed-form quantities of the combined scheme at one frequency.

    They satisfy E*X - D*Y = |C|^2 and K*L - H^2 = u*v - w^2, from which
    S_f = 2 Re(1/chi_mech) H + K + |1/chi_mech|^2 L dominates the
    dissipation bound for any readout angle, squeezing and detuning.
    """
    gamma, delta = params.gamma, params.Delta
    r = gamma / 2.0 - 1j * omega
    r2 = gamma * gamma / 4.0 + omega * omega  # |r|^2
    d = xi * (r2 - delta * delta) - gamma * delta
    e = g * g * (gamma + xi * delta)
    x = r2 - delta * delta + xi * gamma * delta
    y = g * g * delta
    c = g * math.sqrt(gamma) * (r + xi * delta)
    c2 = abs(c) ** 2
    if c2 < _TINY:
        raise DegenerateReadout("readout normalization C vanished")
    u, v, w = uvw.u, uvw.v, uvw.w
    h = (d * e * u + e * x * w + d * y * w + x * y * v) / c2
    k = (e * e * u + 2.0 * e * y * w + y * y * v) / c2
    ell = (d * d * u + 2.0 * d * x * w + x * x * v) / c2
    return CombinedProofQuantities(D=d, E=e, X=x, Y=y, C=c, H=h, K=k, L=ell)


def combined_sensitivity(
    params: DetectorParams, omega: float, cq: CombinedProofQuantities
) -> float:
    """S_f reassembled from the combined-scheme quantities."""
    inv_chi = bounds.inverse_chi_mech(params, omega)
    return 2.0 * inv_chi.real * cq.H + cq.K + abs(inv_chi) ** 2 * cq.L


def _conjugate_drive(f_vector: NDArray[np.float64]) -> NDArray[np.float64]:
    """Drive vector produced by perturbing the Hamiltonian with -h*F.

    States come in canonical pairs (even, odd) with commutator i, so an
    x-like component of F drives its partner's row with +1 and a p-like
    component drives its partner's row with -1.
    """
    drive = np.zeros_like(f_vector)
    for k in range(0, len(f_vector), 2):
        drive[k + 1] += f_vector[k]
        drive[k] -= f_vector[k + 1]
    return drive


def coupling_vector(config: SchemeConfig) -> NDArray[np.float64]:
    """Real state-space vector of the detector's input operator F.

    Only schemes with a single product coupling -g*F*q map exactly onto the
    generic layer; the backaction-cancelling scheme has a second coupling
    (cavity to ancilla) that also scales with g, so it is rejected here.
    """
    if config.variant == "cqnc":
        raise InvalidConfig(
            "the ancilla scheme has two couplings and no single input operator"
        )
    if config.variant == "toy":
        return np.array([0.0, 0.0, 1.0, 1.0])  # F = b1 + b2
    return np.array([0.0, 0.0, 1.0, 0.0])  # F = b1


def extract_detector(
    config: SchemeConfig,
    omega: float,
    input_spectrum: QuadratureSpectrum | None = None,
) -> GenericDetector:
    """Map a concrete scheme onto a GenericDetector at one frequency.

    chi_FF, S_FF, S_ZZ and S_ZF come from the unperturbed dynamics (the same
    model with the coupling switched off) driven by the readout channel's
    input state; chi_qq and chi_qx are the analytic susceptibilities of the
    scheme's coupling operator.
    """
    params = config.params
    spectrum = config.input_spectrum if input_spectrum is None else input_spectrum
    eta = config.eta if config.variant == "toy" else 0.0

    bare = replace(config, params=replace(params, g=0.0))
    model0 = build(bare)
    readout = model0.readout
    r0, r1 = readout.rows
    sqrt_rr = math.sqrt(readout.rate)
    d = np.array([math.sin(config.readout_angle), math.cos(config.readout_angle)])

    response = resolvent(model0, omega)

    f_vector = coupling_vector(config)
    drive_response = response @ _conjugate_drive(f_vector)
    chi_ff = complex(f_vector @ drive_response)
    chi_zf_raw = complex(
        sqrt_rr * (d[0] * drive_response[r0] + d[1] * drive_response[r1])
    )
    if abs(chi_zf_raw) < _TINY:
        raise DegenerateReadout(
            f"output does not respond to the input operator at omega = {omega!r}"
        )

    f_coeffs = np.array(
        [f_vector @ (sqrt_rr * response[:, row]) for row in readout.rows]
    )
    z_coeffs = (d @ transfer(model0, omega).M) / chi_zf_raw

    s = spectrum.matrix()
    s_ff = float((f_coeffs @ s @ f_coeffs.conj()).real)
    s_zz = float((z_coeffs @ s @ z_coeffs.conj()).real)
    s_zf = complex(z_coeffs @ s @ f_coeffs.conj())

    q = bounds.coupling_susceptibilities(params, eta, omega)
    return GenericDetector(
        omega=omega, chi_FF=chi_ff, S_FF=s_ff, S_ZZ=s_zz, S_ZF=s_zf,
        chi_qq=q.chi_qq, chi_qx=q.chi_qx, g=params.g,
    )


def feedback_added_noise(
    det: GenericDetector, lambda_prime: float, omega: float | None = None
) -> float:
    """Force-referred added noise with direct output feedback of gain lambda_prime.

    Solves the three coupled frequency-domain equations for (q, F, Z) with
    the feedback term i*lambda_prime*Z/omega added to the oscillator
    equation, then normalizes the output by its force response.  The result
    is independent of lambda_prime.
    """
    w = det.omega if omega is None else omega
    if w == 0.0:
        raise ZeroFrequencyFeedback("feedback transform undefined at omega = 0")
    if det.g == 0.0:
        raise ZeroCoupling("added noise is undefined at g = 0")

    g = det.g
    system = np.array(
        [
            [1.0, -g * det.chi_qq, -1j * lambda_prime / w],
            [-g * det.chi_FF, 1.0, 0.0],
            [-g, 0.0, 1.0],
        ],
        dtype=complex,
    )
    # right-hand sides: unit drives of f, F0 and Z0
    drives = np.array(
        [[det.chi_qx, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], dtype=complex
    )
    z_row = np.linalg.solve(system, drives)[2, :]
    z_f, z_f0, z_z0 = z_row
    if abs(z_f) < _TINY:
        raise ZeroCoupling("output carries no force signal")
    c_f = z_f0 / z_f
    c_z = z_z0 / z_f
    return float(
        abs(c_f) ** 2 * det.S_FF
        + abs(c_z) ** 2 * det.S_ZZ
        + 2.0 * (c_z * c_f.conjugate() * det.S_ZF).real
    )
