import math

import numpy as np
import pytest
from scipy.stats import poisson

from cavityent.fockspace import (FieldState, TruncationError, coherent_state,
                                 default_n_max, displacement,
                                 displaced_vacuum_probability,
                                 distribution_width, photon_width)


def test_vacuum_limit():
    st = coherent_state(0, 16)
    assert st.amplitudes[0] == 1.0
    assert np.allclose(st.amplitudes[1:], 0.0)


def test_coherent_mean_photon_number():
    st = coherent_state(3, 60)
    assert abs(st.mean_photon_number() - 9.0) < 1e-6 * 9.0


def test_truncated_tail_against_poisson_cdf():
    # independent oracle: the neglected tail of the photon distribution
    # is the Poisson survival function beyond the truncation bound
    tail = poisson.sf(60, 9.0)
    assert tail < 1e-12
    st = coherent_state(3, 60)
    assert abs(st.norm() - 1.0) < 1e-12


def test_truncation_bound_enforced():
    with pytest.raises(TruncationError):
        coherent_state(3, 30)


def test_default_n_max_rule():
    assert default_n_max(3) == math.ceil(9 + 30)
    assert default_n_max(10) == 200


def test_displacement_identity_at_zero():
    d = displacement(0.0, 20)
    assert np.allclose(d, np.eye(21))


def test_displacement_inverts_coherent_state():
    st = coherent_state(3, 60)
    d = displacement(-3.0, 60)
    displaced = d @ st.amplitudes
    assert abs(displaced[0]) ** 2 > 1 - 1e-8


def test_displacement_group_property_low_photon_block():
    prod = displacement(3.0, 60) @ displacement(-3.0, 60)
    block = math.ceil(9 + 15)
    err = np.max(np.abs(prod[:block, :block] - np.eye(61)[:block, :block]))
    assert err < 1e-8


def test_displacement_generates_coherent_state():
    for alpha in (1.0, 3.0, 10.0):
        n_max = default_n_max(alpha)
        vac = np.zeros(n_max + 1, dtype=complex)
        vac[0] = 1.0
        got = displacement(alpha, n_max) @ vac
        ref = coherent_state(alpha, n_max).amplitudes
        assert abs(np.vdot(ref, got)) ** 2 > 1 - 1e-8


def test_displaced_vacuum_probability_on_coherent_states():
    st = coherent_state(3, 60)
    assert abs(displaced_vacuum_probability(st, 3.0) - 1.0) < 1e-9
    vac = coherent_state(0, 60)
    assert abs(displaced_vacuum_probability(vac, 3.0) - math.exp(-9)) < 1e-9


def test_displaced_vacuum_requires_normalized_input():
    st = coherent_state(3, 60)
    bad = FieldState(2.0 * st.amplitudes, st.n_max)
    with pytest.raises(ValueError):
        displaced_vacuum_probability(bad, 3.0)


def test_photon_width_fock_state():
    amp = np.zeros(21, dtype=complex)
    amp[5] = 1.0
    assert photon_width(FieldState(amp, 20), 1e-3) == 1


def test_photon_width_coherent_alpha3():
    st = coherent_state(3)
    assert photon_width(st, 1e-3) <= 20


def test_photon_width_monotone_in_epsilon():
    st = coherent_state(3)
    widths = [photon_width(st, eps) for eps in (1e-4, 1e-3, 1e-2, 1e-1)]
    assert widths == sorted(widths, reverse=True)


def test_distribution_width_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        distribution_width(np.ones(4) / 4, 0.0)
