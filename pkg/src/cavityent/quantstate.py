"""Composite quantum states on mixed atom/field tensor factors.

A CompositeState keeps a flat complex amplitude array shaped by ``dims``
with one human-readable label per subsystem.  Atoms are dimension-2
factors with basis order {|e>, |g>} (index 0 = excited); fields are
truncated Fock modes.  Projective measurements return the conditional
state together with the outcome probability.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fockspace import coherent_amplitudes

ATOM_E = 0
ATOM_G = 1


@dataclass
class CompositeState:
    amplitudes: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(self.dims)
        if len(self.dims) != len(self.labels):
            raise ValueError("need one label per subsystem")

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "CompositeState":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return CompositeState(self.amplitudes / n, self.dims, self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"no subsystem labeled {label!r}") from None

    def density_matrix(self, keep: list[str]) -> np.ndarray:
        """Reduced density matrix of the listed subsystems (in listed order)."""
        axes_keep = [self.index_of(lb) for lb in keep]
        axes_out = [i for i in range(self.n_subsystems) if i not in axes_keep]
        psi = np.transpose(self.amplitudes, axes_keep + axes_out)
        dk = int(np.prod([self.dims[i] for i in axes_keep]))
        psi = psi.reshape(dk, -1)
        return psi @ psi.conj().T


def atom_state(a_e: complex, a_g: complex) -> np.ndarray:
    return np.array([a_e, a_g], dtype=complex)


def tensor(*parts: CompositeState) -> CompositeState:
    """Tensor product of composite states, labels concatenated."""
    amps = parts[0].amplitudes
    for p in parts[1:]:
        amps = np.tensordot(amps, p.amplitudes, axes=0)
    dims = tuple(d for p in parts for d in p.dims)
    labels = tuple(lb for p in parts for lb in p.labels)
    if len(set(labels)) != len(labels):
        raise ValueError("subsystem labels must be unique")
    return CompositeState(amps, dims, labels)


def single(vec: np.ndarray, label: str) -> CompositeState:
    vec = np.asarray(vec, dtype=complex)
    return CompositeState(vec, (len(vec),), (label,))


def apply_operator(state: CompositeState, op: np.ndarray, labels: list[str]) -> CompositeState:
    """Apply a matrix acting on the listed subsystems (row-major joint index)."""
    axes = [state.index_of(lb) for lb in labels]
    rest = [i for i in range(state.n_subsystems) if i not in axes]
    d_act = int(np.prod([state.dims[i] for i in axes]))
    psi = np.transpose(state.amplitudes, axes + rest).reshape(d_act, -1)
    psi = op @ psi
    new_dims_perm = [state.dims[i] for i in axes + rest]
    psi = psi.reshape(new_dims_perm)
    inv = np.argsort(axes + rest)
    psi = np.transpose(psi, inv)
    return CompositeState(psi, state.dims, state.labels)


@dataclass
class MeasurementRecord:
    """Outcome of a projective measurement: label, probability, post-state."""

    outcome: str
    probability: float
    state: CompositeState | None = None
    meta: dict = field(default_factory=dict)


def project(state: CompositeState, label: str, vec: np.ndarray,
            outcome: str = "") -> MeasurementRecord:
    """Project one subsystem onto ``vec`` and drop it from the state.

    ``vec`` must be normalized.  The returned post-measurement state is
    normalized; its norm^2 before normalization is the outcome probability.
    """
    vec = np.asarray(vec, dtype=complex)
    if abs(np.linalg.norm(vec) - 1.0) > 1e-9:
        raise ValueError("projection vector must be normalized")
    ax = state.index_of(label)
    amps = np.tensordot(vec.conj(), state.amplitudes, axes=([0], [ax]))
    prob = float(np.sum(np.abs(amps) ** 2))
    dims = state.dims[:ax] + state.dims[ax + 1:]
    labels = state.labels[:ax] + state.labels[ax + 1:]
    if prob < 1e-300:
        return MeasurementRecord(outcome, 0.0, None)
    post = CompositeState(amps / np.sqrt(prob), dims, labels)
    return MeasurementRecord(outcome, prob, post)


def project_coherent(state: CompositeState, label: str, alpha: float,
                     outcome: str = "") -> MeasurementRecord:
    """Condition a field subsystem on the coherent state |alpha>."""
    ax = state.index_of(label)
    vec = coherent_amplitudes(alpha, state.dims[ax] - 1)
    return project(state, label, vec, outcome)


def lowdin(vectors: np.ndarray) -> np.ndarray:
    """Symmetric (Loewdin) orthonormalization of the columns of ``vectors``.

    Returns W = V (V^dag V)^(-1/2), the orthonormal frame closest to V
    in least-squares sense.
    """
    v = np.asarray(vectors, dtype=complex)
    g = v.conj().T @ v
    w, u = np.linalg.eigh(g)
    if np.min(w) <= 1e-14:
        raise ValueError("vectors are numerically linearly dependent")
    g_inv_half = u @ np.diag(w**-0.5) @ u.conj().T
    return v @ g_inv_half


def gram_residual(vectors: np.ndarray) -> float:
    """How far the columns are from orthonormal: max|V^dag V - I|."""
    v = np.asarray(vectors, dtype=complex)
    g = v.conj().T @ v
    return float(np.max(np.abs(g - np.eye(g.shape[0]))))
