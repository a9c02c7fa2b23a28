"""Resonant Jaynes-Cummings propagator for a two-level atom and one mode.

The evolution for interaction angle theta = lambda*t splits into four
operator blocks in the atomic basis {|e>, |g>}:

    u11 |n> = cos(theta sqrt(n+1)) |n>
    u12 |n> = -i sin(theta sqrt(n)) |n-1>      (annihilates |0>)
    u21 |n> = -i sin(theta sqrt(n+1)) |n+1>
    u22 |n> = cos(theta sqrt(n)) |n>

so U = [[u11, u12], [u21, u22]] with the atom index outermost.  The
blocks are diagonal or single-shift matrices, which the fast application
path exploits instead of forming the dense 2(n_max+1) unitary.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quantstate import CompositeState, apply_operator


@dataclass(frozen=True)
class JcBlocks:
    """Diagonals of the four propagator blocks for one interaction angle."""

    theta: float
    n_max: int
    c_np1: np.ndarray  # cos(theta sqrt(n+1)), n = 0..n_max
    c_n: np.ndarray    # cos(theta sqrt(n))
    s_np1: np.ndarray  # sin(theta sqrt(n+1))
    s_n: np.ndarray    # sin(theta sqrt(n))


def jc_blocks(theta: float, n_max: int) -> JcBlocks:
    n = np.arange(n_max + 1)
    return JcBlocks(
        theta=theta,
        n_max=n_max,
        c_np1=np.cos(theta * np.sqrt(n + 1)),
        c_n=np.cos(theta * np.sqrt(n)),
        s_np1=np.sin(theta * np.sqrt(n + 1)),
        s_n=np.sin(theta * np.sqrt(n)),
    )


def block_matrices(theta: float, n_max: int) -> dict[str, np.ndarray]:
    """Dense matrices of the four blocks, keyed 'u11', 'u12', 'u21', 'u22'."""
    b = jc_blocks(theta, n_max)
    d = n_max + 1
    u11 = np.diag(b.c_np1).astype(complex)
    u22 = np.diag(b.c_n).astype(complex)
    u12 = np.zeros((d, d), dtype=complex)
    u21 = np.zeros((d, d), dtype=complex)
    for n in range(1, d):
        u12[n - 1, n] = -1j * b.s_n[n]
    for n in range(d - 1):
        u21[n + 1, n] = -1j * b.s_np1[n]
    return {"u11": u11, "u12": u12, "u21": u21, "u22": u22}


def block_unitary(theta: float, n_max: int) -> np.ndarray:
    """Full propagator on atom x field, joint index atom-major."""
    m = block_matrices(theta, n_max)
    return np.block([[m["u11"], m["u12"]], [m["u21"], m["u22"]]])


def apply_block(name: str, theta: float, psi: np.ndarray) -> np.ndarray:
    """Apply a single block to a field amplitude vector (last axis = Fock)."""
    d = psi.shape[-1]
    b = jc_blocks(theta, d - 1)
    out = np.zeros_like(psi, dtype=complex)
    if name == "u11":
        out[...] = b.c_np1 * psi
    elif name == "u22":
        out[...] = b.c_n * psi
    elif name == "u12":
        out[..., :-1] = -1j * b.s_n[1:] * psi[..., 1:]
    elif name == "u21":
        out[..., 1:] = -1j * b.s_np1[:-1] * psi[..., :-1]
    else:
        raise ValueError(f"unknown block {name!r}")
    return out


def apply_jc(state: CompositeState, atom: str, field: str, theta: float,
             check_norm: bool = True) -> CompositeState:
    """Evolve one atom-field pair for interaction angle ``theta``.

    Uses the structured block action (two diagonal multiplies and two
    index shifts) so the cost is linear in the total state size.
    """
    ia = state.index_of(atom)
    ifld = state.index_of(field)
    if state.dims[ia] != 2:
        raise ValueError(f"subsystem {atom!r} is not an atom")
    perm = [ia, ifld] + [k for k in range(state.n_subsystems) if k not in (ia, ifld)]
    psi = np.transpose(state.amplitudes, perm)
    d = psi.shape[1]
    rest = psi.shape[2:]
    psi = psi.reshape(2, d, -1)
    b = jc_blocks(theta, d - 1)
    ce = b.c_np1[:, None]
    cg = b.c_n[:, None]
    se = b.s_np1[:, None]
    sn = b.s_n[:, None]
    pe, pg = psi[0], psi[1]
    new_e = ce * pe
    new_e[:-1] += -1j * sn[1:] * pg[1:]
    new_g = cg * pg
    new_g[1:] += -1j * se[:-1] * pe[:-1]
    out = np.stack([new_e, new_g]).reshape((2, d) + rest)
    out = np.transpose(out, np.argsort(perm))
    result = CompositeState(out, state.dims, state.labels)
    if check_norm:
        n0, n1 = state.norm(), result.norm()
        if abs(n1 - n0) > 1e-9 * max(1.0, n0):
            raise RuntimeError(f"propagator lost norm: {n0} -> {n1}")
    return result
