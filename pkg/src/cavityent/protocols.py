"""Entanglement accumulation, retrieval, and concentration protocols.

Two remote cavities start in |alpha>|alpha>.  Partially entangled atomic
pairs lam|e,g> + lam'|g,e> deposit their entanglement into the field
modes through resonant passages, atomic post-selection conditions the
fields, and fresh ground-state pairs retrieve the entanglement by
conditioning both cavities back on |alpha>.

Timing rule for stacking two pairs: the second pair interacts twice as
long (theta2 = 2*theta1), which keeps the two deposited excitation
patterns approximately orthogonal.  Retrieval has to undo the passages
in reverse: the fresh pair interacting for 2*theta1 goes through first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import quantstate as qs
from .fockspace import coherent_state, default_n_max
from .jcmodel import apply_block, apply_jc
from .quantstate import CompositeState, single, tensor

OUTCOMES = ("gg", "eg", "ge", "ee")

# amplitude the field block picks up when the atom is projected:
# row label is the post-selected atomic state, column the initial one
_BLOCK_FOR = {
    ("e", "e"): "u11",
    ("e", "g"): "u12",
    ("g", "e"): "u21",
    ("g", "g"): "u22",
}

_ATOM_VEC = {"e": np.array([1.0, 0.0], dtype=complex),
             "g": np.array([0.0, 1.0], dtype=complex)}


@dataclass(frozen=True)
class PairSpec:
    """One atomic pair: weight lam of |e,g> and its passage angle."""

    lambda_coeff: float
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.lambda_coeff <= 1.0:
            raise ValueError("lambda_coeff must lie in [0, 1]")

    @property
    def lam(self) -> float:
        return self.lambda_coeff

    @property
    def lam_prime(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.lambda_coeff**2))

    def entropy(self) -> float:
        from .entmeasures import binary_entropy
        return binary_entropy(self.lambda_coeff**2)


@dataclass
class ProtocolResult:
    """Conditioned state, its total branch probability, and the path taken."""

    state: CompositeState
    probability: float
    branch: tuple[str, ...] = ()
    step_probabilities: tuple[float, ...] = ()
    meta: dict = dc_field(default_factory=dict)


def initial_fields(alpha: float, n_max: int | None = None) -> CompositeState:
    """|alpha>|alpha> over labels (field-A, field-B)."""
    if n_max is None:
        n_max = default_n_max(alpha)
    amp = coherent_state(alpha, n_max).amplitudes
    return tensor(single(amp, "field-A"), single(amp, "field-B"))


def pair_state(lam: float, label_a: str, label_b: str) -> CompositeState:
    """The atomic pair lam|e,g> + lam'|g,e>."""
    lamp = math.sqrt(max(0.0, 1.0 - lam**2))
    amp = np.zeros((2, 2), dtype=complex)
    amp[0, 1] = lam
    amp[1, 0] = lamp
    return CompositeState(amp, (2, 2), (label_a, label_b))


def _project_atoms(state: CompositeState, labels: tuple[str, str],
                   outcome: str) -> tuple[CompositeState, float]:
    if outcome not in OUTCOMES:
        raise ValueError(f"outcome must be one of {OUTCOMES}, got {outcome!r}")
    prob = 1.0
    for lb, letter in zip(labels, outcome):
        rec = qs.project(state, lb, _ATOM_VEC[letter], outcome=letter)
        if rec.state is None:
            raise ValueError(f"outcome {outcome!r} has vanishing probability")
        prob *= rec.probability
        state = rec.state
    return state, prob


def accumulate_pair(fields: CompositeState, pair: PairSpec,
                    outcome: str = "gg") -> ProtocolResult:
    """Deposit one atomic pair's entanglement into the field modes.

    Both atoms pass their cavity for angle pair.theta; the atoms are then
    projected onto the requested two-letter outcome and discarded.
    """
    joint = tensor(pair_state(pair.lam, "atom-A", "atom-B"), fields)
    joint = apply_jc(joint, "atom-A", "field-A", pair.theta)
    joint = apply_jc(joint, "atom-B", "field-B", pair.theta)
    out, prob = _project_atoms(joint, ("atom-A", "atom-B"), outcome)
    return ProtocolResult(out, prob, branch=(outcome,), step_probabilities=(prob,))


def retrieve_pair(fields: CompositeState, theta: float, alpha: float) -> ProtocolResult:
    """Pull one ebit back out of the fields with a fresh ground-state pair.

    The atoms interact for ``theta`` and both cavities are conditioned on
    |alpha>; the surviving branch carries the atomic pair state.
    """
    atoms = tensor(single(_ATOM_VEC["g"], "atom-A"), single(_ATOM_VEC["g"], "atom-B"))
    joint = tensor(atoms, fields)
    joint = apply_jc(joint, "atom-A", "field-A", theta)
    joint = apply_jc(joint, "atom-B", "field-B", theta)
    prob = 1.0
    for fl in ("field-A", "field-B"):
        rec = qs.project_coherent(joint, fl, alpha, outcome="alpha")
        if rec.state is None:
            raise ValueError("retrieval branch has vanishing probability")
        prob *= rec.probability
        joint = rec.state
    return ProtocolResult(joint, prob, branch=("alpha", "alpha"),
                          step_probabilities=(prob,))


def accumulate_two_pairs(pair1: PairSpec, pair2: PairSpec, alpha: float,
                         outcomes: tuple[str, str] = ("gg", "gg"),
                         n_max: int | None = None) -> ProtocolResult:
    """Stack two pairs into the fields: pair1 at theta1, then pair2.

    pair2.theta should be 2*pair1.theta except when deliberately scanning
    the timing ratio.
    """
    fields = initial_fields(alpha, n_max)
    r1 = accumulate_pair(fields, pair1, outcomes[0])
    r2 = accumulate_pair(r1.state, pair2, outcomes[1])
    return ProtocolResult(r2.state, r1.probability * r2.probability,
                          branch=outcomes,
                          step_probabilities=(r1.probability, r2.probability))


def retrieve_two_pairs(fields: CompositeState, theta1: float,
                       alpha: float) -> ProtocolResult:
    """Retrieve both deposited ebits onto four fresh ground-state atoms.

    The pair interacting for 2*theta1 passes first, then the theta1 pair;
    undoing the accumulation order this way is what disentangles the two
    pairs from each other.  Labels: atoms ending in 1 form the pair that
    carries the theta1 deposit.
    """
    atoms = [single(_ATOM_VEC["g"], lb)
             for lb in ("atom-A2", "atom-B2", "atom-A1", "atom-B1")]
    joint = tensor(*atoms, fields)
    joint = apply_jc(joint, "atom-A2", "field-A", 2 * theta1)
    joint = apply_jc(joint, "atom-B2", "field-B", 2 * theta1)
    joint = apply_jc(joint, "atom-A1", "field-A", theta1)
    joint = apply_jc(joint, "atom-B1", "field-B", theta1)
    prob = 1.0
    for fl in ("field-A", "field-B"):
        rec = qs.project_coherent(joint, fl, alpha, outcome="alpha")
        if rec.state is None:
            raise ValueError("retrieval branch has vanishing probability")
        prob *= rec.probability
        joint = rec.state
    return ProtocolResult(joint, prob, branch=("alpha", "alpha"),
                          step_probabilities=(prob,))


def concentrate(pair1: PairSpec, pair2: PairSpec, alpha: float,
                n_max: int | None = None,
                outcomes: tuple[str, str] = ("gg", "gg")) -> ProtocolResult:
    """Accumulate two partially entangled pairs, retrieve one better one.

    After both deposits a single fresh ground pair interacts for theta1
    and the cavities are conditioned on |alpha>.  The reported probability
    is that of this final retrieval step; the deposit-step probabilities
    are kept in ``step_probabilities``.  The designed operating point is
    pair2.theta = 2*pair1.theta; other ratios are allowed so the timing
    robustness can be scanned.
    """
    acc = accumulate_two_pairs(pair1, pair2, alpha, outcomes, n_max)
    ret = retrieve_pair(acc.state, pair1.theta, alpha)
    return ProtocolResult(ret.state, ret.probability,
                          branch=acc.branch + ret.branch,
                          step_probabilities=acc.step_probabilities
                          + ret.step_probabilities,
                          meta={"accumulation_probability": acc.probability})


def analytic_concentrated_state(lam: float, gam: float) -> tuple[float, float]:
    """Normalized coefficients (theta, theta_prime) of the concentrated pair."""
    if not (0.0 <= lam <= 1.0 and 0.0 <= gam <= 1.0):
        raise ValueError("coefficients must lie in [0, 1]")
    lamp = math.sqrt(1.0 - lam**2)
    gamp = math.sqrt(1.0 - gam**2)
    t = lam * gamp + lamp * gam
    tp = lam * gam + lamp * gamp
    n = math.hypot(t, tp)
    if n == 0:
        raise ValueError("degenerate input pair coefficients")
    return t / n, tp / n


def concentrated_target(lam: float, gam: float) -> np.ndarray:
    """Two-qubit vector theta|e,e> + theta'|g,g> in the (e,g) x (e,g) basis."""
    t, tp = analytic_concentrated_state(lam, gam)
    amp = np.zeros(4, dtype=complex)
    amp[0] = t   # |e,e>
    amp[3] = tp  # |g,g>
    return amp


def schmidt_projection_state(lam: float, gam: float) -> np.ndarray:
    """Pair produced by a Schmidt projection of the two input pairs."""
    lamp = math.sqrt(1.0 - min(1.0, lam**2))
    gamp = math.sqrt(1.0 - min(1.0, gam**2))
    c_eg = lam * gamp
    c_ge = lamp * gam
    n = math.hypot(c_eg, c_ge)
    if n == 0:
        raise ValueError("degenerate Schmidt projection: both coefficients vanish")
    amp = np.zeros(4, dtype=complex)
    amp[1] = c_eg / n  # |e,g>
    amp[2] = c_ge / n  # |g,e>
    return amp


def procrustean_state(lam: float, cos_phi: float) -> np.ndarray:
    """Success branch of Procrustean filtering with reflector angle phi.

    Same functional form as the Schmidt projection with the second pair's
    weight replaced by cos(phi); maximal exactly at cos(phi) = lam.
    """
    return schmidt_projection_state(lam, cos_phi)


def operator_accumulated_fields(pairs: list[PairSpec], outcomes: list[str],
                                alpha: float,
                                n_max: int | None = None) -> CompositeState:
    """Conditioned field state built directly from the operator products.

    For each deposited pair the post-selected branch is a sum of two block
    products acting on |alpha>|alpha>; this bypasses the atom simulation
    entirely and serves as an independent oracle for accumulate_pair and
    accumulate_two_pairs.
    """
    if len(pairs) != len(outcomes):
        raise ValueError("need one outcome per pair")
    if n_max is None:
        n_max = default_n_max(alpha)
    amp = coherent_state(alpha, n_max).amplitudes
    terms = [np.tensordot(amp, amp, axes=0)]
    for pair, outcome in zip(pairs, outcomes):
        if outcome not in OUTCOMES:
            raise ValueError(f"invalid outcome {outcome!r}")
        ba = _BLOCK_FOR[(outcome[0], "e")]
        bb = _BLOCK_FOR[(outcome[1], "g")]
        ba2 = _BLOCK_FOR[(outcome[0], "g")]
        bb2 = _BLOCK_FOR[(outcome[1], "e")]
        new_terms = []
        for t in terms:
            # lam |e,g> branch: atom A starts excited, atom B ground
            x = apply_block(ba, pair.theta, t.T).T
            x = apply_block(bb, pair.theta, x)
            # lam' |g,e> branch
            y = apply_block(ba2, pair.theta, t.T).T
            y = apply_block(bb2, pair.theta, y)
            new_terms.append(pair.lam * x + pair.lam_prime * y)
        terms = [sum(new_terms)]
    out = terms[0]
    norm = np.linalg.norm(out)
    if norm < 1e-12:
        raise ValueError("conditioned branch has vanishing amplitude")
    return CompositeState(out / norm, (n_max + 1, n_max + 1),
                          ("field-A", "field-B"))
