"""Added-noise coefficients and the force-sensitivity power spectral density.

The estimator divides the measured output quadrature by its force response,
so every input quadrature contributes a normalized complex coefficient to the
added force noise; S_f is the quadratic form of those coefficients with the
per-channel input spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from numpy.typing import NDArray

from . import bounds
from .errors import ZeroResponse
from .linsys import FrequencyResponse, LinearModel, transfer
from .schemes import ANCILLA, SchemeConfig, build
from .spectra import QuadratureSpectrum, squeeze_spectrum, thermal, vacuum

__all__ = [
    "QuadratureSpectrum",
    "vacuum",
    "thermal",
    "squeeze_spectrum",
    "AddedNoiseCoeffs",
    "added_noise",
    "power_density",
    "noise_budget",
    "sensitivity_at",
    "SensitivitySpectrum",
    "sensitivity_spectrum",
]

_RESPONSE_FLOOR = 1e-14


@dataclass(frozen=True)
class AddedNoiseCoeffs:
    """Force-normalized added-noise coefficients, one complex pair per channel."""

    omega: float
    coeffs: Mapping[str, tuple[complex, complex]]
    norm: complex


def added_noise(resp: FrequencyResponse, phi: float) -> AddedNoiseCoeffs:
    """Normalize every input's transfer by the force response at angle phi."""
    d = np.array([math.sin(phi), math.cos(phi)])
    norm = complex(d @ resp.v)
    if abs(norm) <= _RESPONSE_FLOOR:
        raise ZeroResponse(resp.omega)
    coeffs = {resp.readout_id: tuple((d @ resp.M) / norm)}
    for cid, block in resp.cross.items():
        coeffs[cid] = tuple((d @ block) / norm)
    return AddedNoiseCoeffs(omega=resp.omega, coeffs=coeffs, norm=norm)


def power_density(
    coeffs: AddedNoiseCoeffs, spectra: Mapping[str, QuadratureSpectrum]
) -> float:
    """Added-noise power summed over the channels present in `spectra`.

    Channels without an entry in `spectra` (the oscillator's own thermal
    bath, by default) are left out of the budget.
    """
    total = 0.0
    for cid, (c1, c2) in coeffs.coeffs.items():
        spec = spectra.get(cid)
        if spec is None:
            continue
        total += (
            abs(c1) ** 2 * spec.u
            + abs(c2) ** 2 * spec.v
            + 2.0 * (c1 * c2.conjugate()).real * spec.w
        )
    return total


def noise_budget(
    config: SchemeConfig, model: LinearModel | None = None
) -> dict[str, QuadratureSpectrum]:
    """Channel spectra entering S_f: readout always, the cqnc ancilla too.

    The mechanical bath is deliberately absent: intrinsic oscillator noise is
    not part of the detection-noise budget.
    """
    if model is None:
        model = build(config)
    budget = {model.readout.id: config.input_spectrum}
    for ch in model.channels:
        if ch.id == ANCILLA:
            budget[ch.id] = ch.spectrum
    return budget


def sensitivity_at(
    config: SchemeConfig, omega: float, model: LinearModel | None = None
) -> float:
    """S_f of the configured scheme at a single frequency."""
    if model is None:
        model = build(config)
    budget = noise_budget(config, model)
    coeffs = added_noise(transfer(model, omega), config.readout_angle)
    return power_density(coeffs, budget)


@dataclass(frozen=True)
class SensitivitySpectrum:
    """Force-sensitivity spectrum with the analytic bound columns."""

    omegas: NDArray[np.float64]
    s_f: NDArray[np.float64]
    sql: NDArray[np.float64]
    uql: NDArray[np.float64]
    guql: NDArray[np.float64]
    opt_uql: NDArray[np.float64]

    columns = ("omega", "s_f", "sql", "uql", "guql", "opt_uql")

    def __post_init__(self):
        lengths = {
            len(self.omegas), len(self.s_f), len(self.sql),
            len(self.uql), len(self.guql), len(self.opt_uql),
        }
        if len(lengths) != 1:
            raise ValueError("all spectrum columns must have the same length")
        if np.any(self.omegas <= 0.0) or np.any(np.diff(self.omegas) <= 0.0):
            raise ValueError("frequency grid must be strictly increasing and positive")

    def rows(self):
        return zip(self.omegas, self.s_f, self.sql, self.uql, self.guql, self.opt_uql)


def sensitivity_spectrum(
    config: SchemeConfig, grid: NDArray[np.float64]
) -> SensitivitySpectrum:
    """Evaluate S_f and the bound columns of a scheme over a frequency grid.

    The generalized bound column uses the scheme's own coupling mix: eta for
    the toy detector, position coupling (eta = 0) for everything else.
    """
    omegas = np.asarray(grid, dtype=float)
    if omegas.ndim != 1 or omegas.size == 0:
        raise ValueError("grid must be a nonempty 1-d array")
    if np.any(omegas <= 0.0) or np.any(np.diff(omegas) <= 0.0):
        raise ValueError("grid must be strictly increasing and positive")

    model = build(config)
    budget = noise_budget(config, model)
    params = config.params
    eta = config.eta if config.variant == "toy" else 0.0

    s_f = np.empty_like(omegas)
    col_sql = np.empty_like(omegas)
    col_uql = np.empty_like(omegas)
    col_guql = np.empty_like(omegas)
    col_opt = np.empty_like(omegas)
    for i, omega in enumerate(omegas):
        coeffs = added_noise(transfer(model, omega), config.readout_angle)
        s_f[i] = power_density(coeffs, budget)
        col_sql[i] = bounds.sql(params, omega)
        col_uql[i] = bounds.uql(params, omega)
        col_guql[i] = bounds.generalized_uql(
            bounds.coupling_susceptibilities(params, eta, omega)
        )
        col_opt[i] = bounds.optimal_uql(params, omega)

    return SensitivitySpectrum(
        omegas=omegas, s_f=s_f, sql=col_sql, uql=col_uql,
        guql=col_guql, opt_uql=col_opt,
    )
