import numpy as np
import pytest

from cavityent.entmeasures import entanglement_entropy
from cavityent.protocols import (OUTCOMES, PairSpec, accumulate_pair,
                                 accumulate_two_pairs,
                                 analytic_concentrated_state, concentrate,
                                 concentrated_target, initial_fields,
                                 operator_accumulated_fields, pair_state,
                                 procrustean_state, retrieve_pair,
                                 retrieve_two_pairs, schmidt_projection_state)

MAXIMAL = 1 / np.sqrt(2)


@pytest.fixture(scope="module")
def single_deposit():
    """Maximal pair deposited at alpha = 3 on the gg branch."""
    fields = initial_fields(3.0)
    return accumulate_pair(fields, PairSpec(MAXIMAL, np.pi), "gg")


def test_pair_spec_validation():
    with pytest.raises(ValueError):
        PairSpec(1.2, np.pi)


def test_pair_state_coefficients():
    st = pair_state(0.3, "a", "b")
    assert abs(st.norm() - 1.0) < 1e-12
    # |e,g> carries lam, |g,e> carries lam'
    assert abs(st.amplitudes[0, 1] - 0.3) < 1e-12
    assert abs(st.amplitudes[1, 0] - np.sqrt(1 - 0.09)) < 1e-12


def test_accumulate_probability_near_quarter(single_deposit):
    assert abs(single_deposit.probability - 0.25) < 0.01


def test_accumulate_outcomes_sum_to_one():
    fields = initial_fields(3.0)
    pair = PairSpec(0.4, np.pi)
    total = sum(accumulate_pair(fields, pair, oc).probability for oc in OUTCOMES)
    assert abs(total - 1.0) < 1e-10


def test_deposit_transfers_entropy(single_deposit):
    s = entanglement_entropy(single_deposit.state, ["field-A"])
    assert abs(s - 1.0) < 0.01


def test_deposit_entropy_matches_pair_entropy():
    fields = initial_fields(3.0)
    pair = PairSpec(0.3, np.pi)
    r = accumulate_pair(fields, pair, "gg")
    s = entanglement_entropy(r.state, ["field-A"])
    assert abs(s - pair.entropy()) < 0.01


def test_retrieve_round_trip(single_deposit):
    r = retrieve_pair(single_deposit.state, np.pi, 3.0)
    assert abs(r.probability - 0.25) < 0.01
    rho = r.state.density_matrix(["atom-A", "atom-B"])
    target = pair_state(MAXIMAL, "x", "y").amplitudes.reshape(-1)
    fid = float(np.real(np.vdot(target, rho @ target)))
    assert fid > 0.999


def test_two_pair_accumulation_probability():
    p1 = PairSpec(MAXIMAL, np.pi)
    p2 = PairSpec(MAXIMAL, 2 * np.pi)
    acc = accumulate_two_pairs(p1, p2, 10.0)
    assert abs(acc.probability - 1 / 16) < 0.005
    assert len(acc.step_probabilities) == 2


def test_double_retrieval_recovers_both_pairs():
    p1 = PairSpec(MAXIMAL, np.pi)
    p2 = PairSpec(MAXIMAL, 2 * np.pi)
    acc = accumulate_two_pairs(p1, p2, 10.0)
    r = retrieve_two_pairs(acc.state, np.pi, 10.0)
    assert abs(r.probability - 1 / 16) < 0.005
    for pair, labels in ((p1, ["atom-A1", "atom-B1"]),
                         (p2, ["atom-A2", "atom-B2"])):
        rho = r.state.density_matrix(labels)
        target = pair_state(pair.lam, "x", "y").amplitudes.reshape(-1)
        fid = float(np.real(np.vdot(target, rho @ target)))
        assert fid > 0.999


def test_concentrate_partial_pairs():
    lam, gam = 0.3, 0.5
    r = concentrate(PairSpec(lam, np.pi), PairSpec(gam, 2 * np.pi), 10.0)
    rho = r.state.density_matrix(["atom-A", "atom-B"])
    target = concentrated_target(lam, gam)
    fid = float(np.real(np.vdot(target, rho @ target)))
    assert fid > 0.95
    s_out = entanglement_entropy(r.state, ["atom-A"])
    s_in = max(PairSpec(lam, np.pi).entropy(), PairSpec(gam, np.pi).entropy())
    assert s_out > s_in - 0.02
    assert "accumulation_probability" in r.meta


def test_concentrate_maximal_probability():
    r = concentrate(PairSpec(MAXIMAL, np.pi), PairSpec(MAXIMAL, 2 * np.pi), 10.0)
    assert abs(r.probability - 1 / 8) < 0.01


def test_analytic_concentrated_state_normalized():
    for lam, gam in ((0.1, 0.9), (0.3, 0.5), (MAXIMAL, MAXIMAL)):
        t, tp = analytic_concentrated_state(lam, gam)
        assert abs(t**2 + tp**2 - 1.0) < 1e-12
    t, tp = analytic_concentrated_state(MAXIMAL, MAXIMAL)
    assert abs(t - MAXIMAL) < 1e-12


def test_analytic_concentrated_state_symmetric():
    assert analytic_concentrated_state(0.2, 0.7) == \
        analytic_concentrated_state(0.7, 0.2)


def test_schmidt_projection_state():
    v = schmidt_projection_state(0.3, 0.5)
    assert abs(np.linalg.norm(v) - 1.0) < 1e-12
    assert v[0] == 0 and v[3] == 0


def test_procrustean_state_is_maximal_at_matched_angle():
    v = procrustean_state(0.3, 0.3)
    assert abs(abs(v[1]) - MAXIMAL) < 1e-12
    assert abs(abs(v[2]) - MAXIMAL) < 1e-12


def test_operator_oracle_matches_simulation():
    rng = np.random.default_rng(21)
    for _ in range(3):
        lam = float(rng.uniform(0, 1))
        theta = float(rng.uniform(0.5, 1.5) * np.pi)
        outcome = OUTCOMES[int(rng.integers(4))]
        pair = PairSpec(lam, theta)
        sim = accumulate_pair(initial_fields(3.0), pair, outcome)
        oracle = operator_accumulated_fields([pair], [outcome], 3.0)
        overlap = abs(np.vdot(oracle.amplitudes.reshape(-1),
                              sim.state.amplitudes.reshape(-1))) ** 2
        assert overlap > 1 - 1e-8
