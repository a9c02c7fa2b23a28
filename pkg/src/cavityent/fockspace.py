"""Truncated single-mode Fock-space primitives.

States of one cavity mode are complex amplitude vectors over photon
numbers 0..n_max.  The truncation bound follows the 10-sigma rule
``n_max = ceil(alpha^2 + 10*alpha)``: every protocol step shifts the
photon number by at most one per atom passage, so the edge amplitude
stays below 1e-12 and truncation never silently corrupts a run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

EDGE_TOL = 1e-12


class TruncationError(ValueError):
    """Raised when a Fock-space truncation is too small for the state."""


def default_n_max(alpha: float) -> int:
    """Truncation bound for coherent amplitude ``alpha`` (>= 10 sigma)."""
    return max(16, math.ceil(alpha**2 + 10 * alpha))


@dataclass(frozen=True)
class FieldState:
    """Pure state of one cavity mode on the truncated Fock space."""

    amplitudes: np.ndarray
    n_max: int

    def __post_init__(self):
        if self.amplitudes.shape != (self.n_max + 1,):
            raise ValueError("amplitude vector must have length n_max+1")

    @property
    def dim(self) -> int:
        return self.n_max + 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "FieldState":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return FieldState(self.amplitudes / n, self.n_max)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def edge_mass(self) -> float:
        """Probability weight sitting on the truncation edge |n_max>."""
        return float(abs(self.amplitudes[-1]) ** 2)

    def mean_photon_number(self) -> float:
        p = self.probabilities()
        return float(np.dot(np.arange(self.dim), p) / p.sum())


def coherent_amplitudes(alpha: float, n_max: int) -> np.ndarray:
    """Poisson-weighted amplitudes of |alpha> on 0..n_max, renormalized."""
    if alpha == 0:
        amp = np.zeros(n_max + 1)
        amp[0] = 1.0
        return amp.astype(complex)
    n = np.arange(n_max + 1)
    # log-space to avoid overflow in alpha^n / sqrt(n!)
    log_amp = -alpha**2 / 2 + n * np.log(alpha) - 0.5 * gammaln(n + 1)
    amp = np.exp(log_amp)
    return (amp / np.linalg.norm(amp)).astype(complex)


def coherent_state(alpha: float, n_max: int | None = None) -> FieldState:
    """Coherent state of real amplitude ``alpha`` on the truncated space.

    Raises TruncationError if ``n_max`` is below the adequacy bound.
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if n_max is None:
        n_max = default_n_max(alpha)
    elif n_max < math.ceil(alpha**2 + 10 * alpha):
        raise TruncationError(
            f"n_max={n_max} below adequacy bound {math.ceil(alpha**2 + 10 * alpha)}"
        )
    return FieldState(coherent_amplitudes(alpha, n_max), n_max)


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), 1).astype(complex)


def creation(n_max: int) -> np.ndarray:
    return annihilation(n_max).conj().T


def displacement(alpha: complex, n_max: int) -> np.ndarray:
    """Displacement operator exp(alpha a^dag - alpha* a) on the truncated space.

    Unitary up to edge effects; exact on the low-photon block.
    """
    a = annihilation(n_max)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def displaced_vacuum_probability(state: FieldState, alpha: float) -> float:
    """Probability |<alpha|state>|^2 of finding the displaced field in vacuum.

    Equivalent to displacing by -alpha and detecting the vacuum.
    """
    if abs(state.norm() - 1.0) > 1e-6:
        raise ValueError("state must be normalized")
    ref = coherent_amplitudes(alpha, state.n_max)
    return float(abs(np.vdot(ref, state.amplitudes)) ** 2)


def distribution_width(probs: np.ndarray, epsilon: float) -> int:
    """Length of the smallest contiguous interval carrying mass >= 1 - epsilon."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must be in (0, 1)")
    p = np.asarray(probs, dtype=float)
    p = p / p.sum()
    target = 1.0 - epsilon
    csum = np.concatenate([[0.0], np.cumsum(p)])
    best = len(p)
    j = 0
    for i in range(len(p)):
        if j < i:
            j = i
        while j < len(p) and csum[j + 1] - csum[i] < target:
            j += 1
        if j == len(p):
            break
        best = min(best, j - i + 1)
    return best


def photon_width(state: FieldState, epsilon: float) -> int:
    """Width of the photon-number distribution of a pure field state."""
    if abs(state.norm() - 1.0) > 1e-6:
        raise ValueError("state must be normalized")
    return distribution_width(state.probabilities(), epsilon)


def assert_truncation_adequate(amplitudes: np.ndarray, what: str = "state") -> None:
    """Check the edge amplitude of a field axis; raise TruncationError if hot."""
    edge = float(np.abs(amplitudes) ** 2) if np.isscalar(amplitudes) else float(
        np.sum(np.abs(amplitudes) ** 2)
    )
    if edge > EDGE_TOL:
        raise TruncationError(f"{what}: edge probability {edge:.3e} exceeds {EDGE_TOL}")
