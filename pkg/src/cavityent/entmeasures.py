"""Entanglement and information measures used across the protocols."""
from __future__ import annotations

import numpy as np

from .quantstate import CompositeState


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy of a density matrix in bits (log base 2)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)))


def entanglement_entropy(state: CompositeState, part: list[str]) -> float:
    """Entropy of the reduced state of ``part``, in ebits for a pure split."""
    return von_neumann_entropy(state.density_matrix(part))


def mutual_information(state: CompositeState, part_a: list[str],
                       part_b: list[str]) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) for subsystems of a pure joint state."""
    sa = von_neumann_entropy(state.density_matrix(part_a))
    sb = von_neumann_entropy(state.density_matrix(part_b))
    sab = von_neumann_entropy(state.density_matrix(part_a + part_b))
    return sa + sb - sab


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("concurrence needs a 4x4 density matrix")
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    r = rho @ yy @ rho.conj() @ yy
    w = np.linalg.eigvals(r)
    w = np.sqrt(np.abs(np.real(w)))
    w.sort()
    return float(max(0.0, w[-1] - w[-2] - w[-3] - w[-4]))


def fidelity_pure(psi: np.ndarray, phi: np.ndarray) -> float:
    """|<psi|phi>|^2 for normalized pure states."""
    psi = np.asarray(psi).ravel()
    phi = np.asarray(phi).ravel()
    return float(abs(np.vdot(psi, phi)) ** 2)


def fidelity_to_pure(rho: np.ndarray, psi: np.ndarray) -> float:
    """<psi|rho|psi> for a density matrix against a normalized pure target."""
    psi = np.asarray(psi, dtype=complex).ravel()
    return float(np.real(np.vdot(psi, rho @ psi)))


def haar_qubits(samples: int, seed: int) -> np.ndarray:
    """Haar-uniform pure qubits as a (samples, 2) array, deterministic per seed."""
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((samples, 2)) + 1j * rng.standard_normal((samples, 2))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def average_fidelity(channel, samples: int, seed: int) -> float:
    """Probability-weighted mean teleportation fidelity over Haar inputs.

    ``channel`` maps an input qubit vector to (output qubit vector,
    probability); the mean is sum(p_i F_i) / sum(p_i), i.e. fidelities
    are renormalized by the overall success probability.
    """
    inputs = haar_qubits(samples, seed)
    num = 0.0
    den = 0.0
    for psi in inputs:
        out, prob = channel(psi)
        num += prob * fidelity_pure(psi, out)
        den += prob
    if den == 0:
        raise ValueError("channel never succeeds on the sampled inputs")
    return num / den


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability must lie in [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))
