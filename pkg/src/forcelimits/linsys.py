"""Frequency-domain machinery for linear stochastic detector models.

A model is dx/dt = A x + w with a real drift matrix A and white-noise inputs
entering pairs of quadrature rows at rate sqrt(kappa).  Stationary spectra
follow from x(w) = -(A + i w I)^(-1) w(w); outgoing fields obey the
input-output relation out = sqrt(kappa) * (intracavity) - in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

import numpy as np
from numpy.typing import NDArray

from .errors import SingularAtFrequency

if TYPE_CHECKING:
    from .spectra import QuadratureSpectrum

#: eigenvalue real parts up to this value still count as (marginally) stable
STABILITY_TOL = 1e-12

#: condition-number estimate beyond which a solve is treated as singular
_COND_LIMIT = 1e14


@dataclass(frozen=True)
class DriftMatrix:
    """Real drift matrix with named state quadratures."""

    entries: NDArray[np.float64]
    labels: tuple[str, ...]

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", entries)
        n = entries.shape[0]
        if entries.ndim != 2 or entries.shape != (n, n):
            raise ValueError("drift matrix must be square")
        if n == 0 or n % 2 != 0:
            raise ValueError("state dimension must be a positive even number")
        if len(self.labels) != n:
            raise ValueError("need one label per state variable")
        if not np.all(np.isfinite(entries)):
            raise ValueError("drift entries must be finite")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class NoiseChannel:
    """One dissipation channel driving a pair of quadrature rows."""

    id: str
    rate: float
    rows: tuple[int, int]
    spectrum: "QuadratureSpectrum"
    is_readout: bool = False

    def __post_init__(self):
        if self.rate < 0.0:
            raise ValueError("channel rate must be nonnegative")
        if self.rows[0] == self.rows[1]:
            raise ValueError("channel rows must be distinct")


@dataclass(frozen=True)
class LinearModel:
    """Drift matrix plus noise-channel wiring and readout for one scheme."""

    drift: DriftMatrix
    channels: tuple[NoiseChannel, ...]
    force_row: int
    readout_angle: float = 0.0

    def __post_init__(self):
        n = self.drift.n
        if not 0 <= self.force_row < n:
            raise ValueError("force_row out of range")
        readouts = [ch for ch in self.channels if ch.is_readout]
        if len(readouts) != 1:
            raise ValueError("exactly one channel must be the readout")
        for ch in self.channels:
            if not all(0 <= r < n for r in ch.rows):
                raise ValueError(f"channel {ch.id!r} rows out of range")

    @property
    def readout(self) -> NoiseChannel:
        return next(ch for ch in self.channels if ch.is_readout)


@dataclass(frozen=True)
class FrequencyResponse:
    """Per-frequency transfer blocks from every input to the readout output."""

    omega: float
    M: NDArray[np.complex128]          # readout channel in -> readout out, 2x2
    v: NDArray[np.complex128]          # classical force -> readout out, 2-vector
    cross: Mapping[str, NDArray[np.complex128]]  # other channel in -> readout out
    readout_id: str

    def __post_init__(self):
        blocks = [self.M, self.v, *self.cross.values()]
        if not all(np.all(np.isfinite(b.view(float))) for b in blocks):
            raise SingularAtFrequency(self.omega, "non-finite transfer entries")


def stability_check(drift: DriftMatrix) -> tuple[bool, NDArray[np.complex128]]:
    """Return (stable, eigenvalues); stable means all real parts <= tolerance."""
    eigenvalues = np.linalg.eigvals(drift.entries)
    stable = bool(np.max(eigenvalues.real) <= STABILITY_TOL)
    return stable, eigenvalues


def _system_matrix(model: LinearModel, omega: float) -> NDArray[np.complex128]:
    m = model.drift.entries + 1j * omega * np.eye(model.drift.n)
    if np.linalg.cond(m) > _COND_LIMIT:
        raise SingularAtFrequency(omega)
    return m


def _refined_solve(
    m: NDArray[np.complex128], b: NDArray[np.complex128]
) -> NDArray[np.complex128]:
    """Direct solve plus mixed-precision iterative refinement.

    The schemes cancel large internal paths exactly; refining with the
    residual accumulated in extended precision keeps that cancellation at
    working precision instead of at the magnitude of the intermediates.
    """
    x = np.linalg.solve(m, b)
    m_hi = m.astype(np.clongdouble)
    b_hi = b.astype(np.clongdouble)
    for _ in range(2):
        residual = b_hi - m_hi @ x.astype(np.clongdouble)
        x = x + np.linalg.solve(m, residual.astype(np.complex128))
    return x


def solve_frequency(
    model: LinearModel, omega: float, w: NDArray[np.complex128]
) -> NDArray[np.complex128]:
    """Solve (A + i w I) x = -w for the stationary response x."""
    m = _system_matrix(model, omega)
    return _refined_solve(m, -np.asarray(w, dtype=complex))


def resolvent(model: LinearModel, omega: float) -> NDArray[np.complex128]:
    """Full response matrix -(A + i w I)^(-1); column k is the response to e_k."""
    m = _system_matrix(model, omega)
    return _refined_solve(m, -np.eye(model.drift.n, dtype=complex))


def transfer(model: LinearModel, omega: float) -> FrequencyResponse:
    """Assemble the input-output transfer blocks by column-wise solves.

    Each input quadrature of each channel is driven with a unit amplitude
    (scaled by sqrt(rate)); the readout channel's two output quadratures are
    read back through out = sqrt(rate)*state - in.  The classical force
    drives its row with unit coefficient.
    """
    response = resolvent(model, omega)

    readout = model.readout
    r0, r1 = readout.rows
    sqrt_rr = np.sqrt(readout.rate)

    def output_of(state: NDArray[np.complex128]) -> NDArray[np.complex128]:
        return sqrt_rr * np.array([state[r0], state[r1]])

    v = output_of(response[:, model.force_row])

    blocks: dict[str, NDArray[np.complex128]] = {}
    M = np.zeros((2, 2), dtype=complex)
    for ch in model.channels:
        block = np.zeros((2, 2), dtype=complex)
        for k, row in enumerate(ch.rows):
            state = np.sqrt(ch.rate) * response[:, row]
            col = output_of(state)
            if ch.is_readout:
                col = col - np.eye(2, dtype=complex)[:, k]
            block[:, k] = col
        if ch.is_readout:
            M = block
        else:
            blocks[ch.id] = block

    return FrequencyResponse(
        omega=omega, M=M, v=v, cross=blocks, readout_id=readout.id
    )
