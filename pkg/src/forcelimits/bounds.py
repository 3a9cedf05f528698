"""Analytic susceptibilities and the quantum-limit bound family.

All rates and frequencies share one arbitrary unit (hbar = 1).  The Fourier
convention everywhere in the package is d/dt -> -i*omega, which makes the
cavity susceptibility (gamma/2 - i*omega)^(-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import MechanicalResonanceSingularity, ZeroResponseSusceptibility

if TYPE_CHECKING:
    from .schemes import DetectorParams

_TINY = 1e-300


def chi_mech(params: DetectorParams, omega: float) -> complex:
    """Mechanical susceptibility Omega / ((Gamma/2 - i w)^2 + Omega^2)."""
    d = params.Gamma / 2.0 - 1j * omega
    denom = d * d + params.Omega * params.Omega
    if abs(denom) < _TINY:
        raise MechanicalResonanceSingularity(
            f"undamped oscillator driven on resonance (omega = {omega!r})"
        )
    return params.Omega / denom


def chi_cav(params: DetectorParams, omega: float) -> complex:
    """Cavity susceptibility 1 / (gamma/2 - i w)."""
    return 1.0 / (params.gamma / 2.0 - 1j * omega)


def inverse_chi_mech(params: DetectorParams, omega: float) -> complex:
    """1/chi_mech, whose imaginary part -w*Gamma/Omega sets the dissipation bound."""
    d = params.Gamma / 2.0 - 1j * omega
    return (d * d + params.Omega * params.Omega) / params.Omega


def sql(params: DetectorParams, omega: float) -> float:
    """Standard quantum limit 1/|chi_mech|: the optimal shot/backaction tradeoff."""
    return 1.0 / abs(chi_mech(params, omega))


def uql(params: DetectorParams, omega: float) -> float:
    """Dissipation-set quantum limit |Im(1/chi_mech)| = w*Gamma/Omega."""
    return abs(omega) * params.Gamma / params.Omega


@dataclass(frozen=True)
class CouplingSusceptibilities:
    """Self- and cross-susceptibility of the coupling operator q = x + eta*p."""

    omega: float
    chi_qq: complex
    chi_qx: complex


def coupling_susceptibilities(
    params: DetectorParams, eta: float, omega: float
) -> CouplingSusceptibilities:
    """Susceptibilities of the mixed coupling operator q = x + eta*p.

    chi_qq is the response of q to a drive conjugate to q itself, chi_qx the
    response of q to a force on x.  At eta = 0 both reduce to chi_mech.
    """
    ca = chi_mech(params, omega)
    d = params.Gamma / 2.0 - 1j * omega
    chi_qq = (1.0 + eta * eta) * ca
    chi_qx = (1.0 + eta * d / params.Omega) * ca
    return CouplingSusceptibilities(omega=omega, chi_qq=chi_qq, chi_qx=chi_qx)


def generalized_uql(q: CouplingSusceptibilities) -> float:
    """Lower bound |Im chi_qq| / |chi_qx|^2 for a detector coupled through q."""
    mag = abs(q.chi_qx)
    if mag < math.sqrt(_TINY):
        raise ZeroResponseSusceptibility(
            f"chi_qx vanished at omega = {q.omega!r}"
        )
    return abs(q.chi_qq.imag) / (mag * mag)


def optimal_uql(params: DetectorParams, omega: float) -> float:
    """Generalized bound minimized over all linear couplings q = x + eta*p.

    Equal to (Gamma/(2 w Omega)) * [Gamma^2/4 + w^2 + Omega^2
    - sqrt((Gamma^2/4 + w^2 - Omega^2)^2 + Gamma^2 Omega^2)], evaluated here
    in the rationalized form 2 Gamma Omega w / (a + sqrt(b^2 + c)), which is
    algebraically identical but avoids the cancellation that destroys the
    direct form for w >> Omega.
    """
    if omega == 0.0:
        return 0.0
    w2 = omega * omega
    om2 = params.Omega * params.Omega
    quarter_g2 = params.Gamma * params.Gamma / 4.0
    a = quarter_g2 + w2 + om2
    b = quarter_g2 + w2 - om2
    c = params.Gamma * params.Gamma * om2
    return 2.0 * params.Gamma * params.Omega * abs(omega) / (a + math.sqrt(b * b + c))
