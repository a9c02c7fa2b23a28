"""End-to-end acceptance checks, one test per criterion.

Each test prints a single "criterion NN: PASS/FAIL" line and asserts all
of its sub-checks, so a verbose pytest run doubles as the acceptance
report.  Operating points (alpha per protocol) follow the package
defaults; the slowest tests stay under a couple of minutes combined.
"""
import time

import numpy as np
import pytest

from cavityent.entmeasures import (binary_entropy, concurrence,
                                   entanglement_entropy, fidelity_pure,
                                   mutual_information)
from cavityent.noise import (concentrate_mixed, concentration_map,
                             noisy_concentration_study, pair_density)
from cavityent.protocols import (OUTCOMES, PairSpec, accumulate_pair,
                                 accumulate_two_pairs,
                                 analytic_concentrated_state, concentrate,
                                 concentrated_target, initial_fields,
                                 operator_accumulated_fields, pair_state,
                                 retrieve_pair, retrieve_two_pairs,
                                 schmidt_projection_state)
from cavityent.teleport import (OUTCOME_LABELS, channel_average_fidelity_exact,
                                ideal_average_fidelity, maximal_resource,
                                outcome_probabilities, teleport_channel,
                                teleport_qubit)
from cavityent.verify import run_suite

MAXIMAL = 1 / np.sqrt(2)


def _finish(num, failures):
    print(f"criterion {num:02d}: {'FAIL' if failures else 'PASS'}")
    assert not failures, "; ".join(failures)


def _formation_entropy(c):
    """Entanglement of formation (ebits) from a concurrence value."""
    return binary_entropy((1 + np.sqrt(max(0.0, 1 - c * c))) / 2)


def test_criterion_01_single_pair_transfer():
    failures = []
    t0 = time.monotonic()
    fields = initial_fields(3.0)
    pair = PairSpec(MAXIMAL, np.pi)
    r_gg = accumulate_pair(fields, pair, "gg")
    if abs(r_gg.probability - 0.25) > 0.03:
        failures.append(f"gg probability {r_gg.probability:.4f}")
    s_gg = entanglement_entropy(r_gg.state, ["field-A"])
    if abs(s_gg - 1.0) > 0.07:
        failures.append(f"gg entropy {s_gg:.4f}")
    for oc in OUTCOMES:
        s = entanglement_entropy(accumulate_pair(fields, pair, oc).state,
                                 ["field-A"])
        if s < 0.93:
            failures.append(f"{oc} entropy {s:.4f}")
    elapsed = time.monotonic() - t0
    if elapsed >= 5.0:
        failures.append(f"runtime {elapsed:.1f}s")
    _finish(1, failures)


def test_criterion_02_two_pair_accumulation_and_double_retrieval():
    failures = []
    t0 = time.monotonic()
    p1 = PairSpec(MAXIMAL, np.pi)
    p2 = PairSpec(MAXIMAL, 2 * np.pi)
    acc = accumulate_two_pairs(p1, p2, 10.0)
    s = entanglement_entropy(acc.state, ["field-A"])
    if abs(s - 2.0) > 0.1:
        failures.append(f"field entropy {s:.4f}")
    r = retrieve_two_pairs(acc.state, np.pi, 10.0)
    if abs(r.probability - 1 / 16) > 0.02:
        failures.append(f"retrieval probability {r.probability:.4f}")
    for labels in (["atom-A1", "atom-B1"], ["atom-A2", "atom-B2"]):
        ebits = _formation_entropy(concurrence(r.state.density_matrix(labels)))
        if ebits < 0.9:
            failures.append(f"{labels[0]} pair {ebits:.4f} ebit")
    mi = mutual_information(r.state, ["atom-A1", "atom-B1"],
                            ["atom-A2", "atom-B2"])
    if mi >= 0.1:
        failures.append(f"inter-pair mutual information {mi:.4f}")
    elapsed = time.monotonic() - t0
    if elapsed >= 120.0:
        failures.append(f"runtime {elapsed:.1f}s")
    _finish(2, failures)


def test_criterion_03_concentration_grid():
    # the grid starts at 0.1: a zero coefficient degenerates one input
    # into an unentangled product, outside the two-pair protocol
    failures = []
    grid = np.linspace(0.1, MAXIMAL, 7)
    worst_fid, worst_mono = 1.0, 1.0
    for lam in grid:
        for gam in grid:
            r = concentrate(PairSpec(float(lam), np.pi),
                            PairSpec(float(gam), 2 * np.pi), 20.0)
            rho = r.state.density_matrix(["atom-A", "atom-B"])
            target = concentrated_target(float(lam), float(gam))
            fid = float(np.real(np.vdot(target, rho @ target)))
            worst_fid = min(worst_fid, fid)
            e_out = entanglement_entropy(r.state, ["atom-A"])
            e_in = max(binary_entropy(float(lam) ** 2),
                       binary_entropy(float(gam) ** 2))
            worst_mono = min(worst_mono, e_out - e_in)
    if worst_fid <= 0.98:
        failures.append(f"worst fidelity {worst_fid:.4f}")
    if worst_mono < -0.02:
        failures.append(f"worst entropy gain {worst_mono:.4f}")
    r = concentrate(PairSpec(MAXIMAL, np.pi), PairSpec(MAXIMAL, 2 * np.pi),
                    10.0)
    if abs(r.probability - 0.125) > 0.02:
        failures.append(f"maximal probability {r.probability:.4f}")
    _finish(3, failures)


def test_criterion_04_field_entropy_additivity():
    failures = []
    for gam in (0.2, 0.5):
        for lam in np.linspace(0.0, MAXIMAL, 6):
            acc = accumulate_two_pairs(PairSpec(float(lam), np.pi),
                                       PairSpec(gam, 2 * np.pi), 10.0)
            s = entanglement_entropy(acc.state, ["field-A"])
            want = binary_entropy(float(lam) ** 2) + binary_entropy(gam**2)
            if abs(s - want) > 0.1:
                failures.append(f"lam={lam:.3f} gam={gam}: {s:.3f} vs {want:.3f}")
    _finish(4, failures)


def test_criterion_05_striking_concentration_case():
    failures = []
    lam, gam = 0.05, MAXIMAL
    r = concentrate(PairSpec(lam, np.pi), PairSpec(gam, 2 * np.pi), 30.0)
    s = entanglement_entropy(r.state, ["atom-A"])
    if s < 0.99:
        failures.append(f"concentrated entropy {s:.4f}")
    sp = schmidt_projection_state(lam, gam)
    s_schmidt = binary_entropy(float(abs(sp[1]) ** 2))
    if s_schmidt > 0.2:
        failures.append(f"schmidt-projection entropy {s_schmidt:.4f}")
    _finish(5, failures)


def test_criterion_06_teleportation_tables():
    failures = []
    report = run_suite("tables")
    for check in report["checks"]:
        if not check["pass"]:
            failures.append(f"{check['name']} {check['measured']:.4f}")
    resource = maximal_resource(10.0, np.pi)
    runs = {oc: teleport_qubit(0.6, 0.8, 10.0, outcome=oc, resource=resource)
            for oc in OUTCOME_LABELS}
    probs = outcome_probabilities(lambda oc: runs[oc])
    for oc, want in (("e0", 0.25), ("g0", 0.25), ("e1", 0.125),
                     ("g1", 0.125), ("e2", 0.125), ("g2", 0.125)):
        if abs(probs[oc] - want) > 0.03:
            failures.append(f"{oc} probability {probs[oc]:.4f}")
    target = np.array([0.6, 0.8], dtype=complex)
    for oc, r in runs.items():
        fid = fidelity_pure(target, r.atom)
        if abs(fid - 1.0) > 0.02:
            failures.append(f"{oc} corrected fidelity {fid:.4f}")
    _finish(6, failures)


def test_criterion_07_partial_resource_equivalence():
    failures = []
    grid = (0.15, 0.3, 0.45, 0.6, MAXIMAL)
    inputs = [(1.0, 0.0), (0.0, 1.0), (MAXIMAL, MAXIMAL), (0.6, 0.8)]
    points = 0
    for lam in grid:
        for gam in grid:
            ch = teleport_channel(lam, gam, 20.0)
            t, tp = analytic_concentrated_state(lam, gam)
            for a, b in inputs:
                points += 1
                vec = np.array([a, b], dtype=complex)
                out, _ = ch(vec)
                ideal = np.array([a * t, b * tp], dtype=complex)
                ideal /= np.linalg.norm(ideal)
                f_sim = fidelity_pure(vec, out)
                f_ideal = fidelity_pure(vec, ideal)
                if abs(f_sim - f_ideal) > 0.02:
                    failures.append(
                        f"lam={lam} gam={gam} in=({a},{b}): "
                        f"{f_sim:.4f} vs {f_ideal:.4f}")
            f_avg = channel_average_fidelity_exact(ch.matrix)
            for single in (lam, gam):
                sp = np.sqrt(1 - single**2)
                f_pair = 2 / 3 + 2 * single * sp / 3
                if f_avg < f_pair - 0.02:
                    failures.append(f"lam={lam} gam={gam}: average "
                                    f"{f_avg:.4f} below pair {f_pair:.4f}")
            if binary_entropy(t**2) > 0.01 and f_avg <= 2 / 3:
                failures.append(f"lam={lam} gam={gam}: average {f_avg:.4f} "
                                "at classical bound")
    if points < 100:
        failures.append(f"only {points} grid points")
    _finish(7, failures)


def test_criterion_08_widths_and_overlap():
    failures = []
    for suite in ("widths", "overlap"):
        report = run_suite(suite)
        for check in report["checks"]:
            if not check["pass"]:
                failures.append(f"{check['name']} {check['measured']:.4f}")
    _finish(8, failures)


def test_criterion_09_timing_robustness():
    failures = []
    report = run_suite("timing")
    for check in report["checks"]:
        if not check["pass"]:
            failures.append(f"{check['name']} {check['measured']:.4f}")
    _finish(9, failures)


def test_criterion_10_operator_oracle_equivalence():
    failures = []
    rng = np.random.default_rng(42)
    for i in range(20):
        theta1 = float(rng.uniform(0.5, 1.5) * np.pi)
        n_pairs = 1 + int(rng.integers(2))
        pairs = [PairSpec(float(rng.uniform(0, 1)), theta1)]
        outcomes = [OUTCOMES[int(rng.integers(4))]]
        if n_pairs == 2:
            pairs.append(PairSpec(float(rng.uniform(0, 1)), 2 * theta1))
            outcomes.append(OUTCOMES[int(rng.integers(4))])
        if n_pairs == 1:
            sim = accumulate_pair(initial_fields(3.0), pairs[0], outcomes[0])
        else:
            sim = accumulate_two_pairs(pairs[0], pairs[1], 3.0,
                                       tuple(outcomes))
        try:
            oracle = operator_accumulated_fields(pairs, outcomes, 3.0)
        except ValueError:
            failures.append(f"set {i}: vanishing oracle branch")
            continue
        overlap = abs(np.vdot(oracle.amplitudes.reshape(-1),
                              sim.state.amplitudes.reshape(-1))) ** 2
        if overlap <= 1 - 1e-8:
            failures.append(f"set {i}: overlap {overlap:.10f}")
    _finish(10, failures)


def test_criterion_11_appendix_identities():
    failures = []
    report = run_suite("appendix")
    for check in report["checks"]:
        if not check["pass"]:
            failures.append(f"{check['name']} {check['measured']:.4f}")
    _finish(11, failures)


def test_criterion_12_noise_study():
    failures = []
    m = concentration_map(np.pi, 20.0)
    rho, _ = concentrate_mixed(pair_density(0.3), pair_density(0.5), m)
    target = concentrated_target(0.3, 0.5)
    fid = float(np.real(np.vdot(target, rho @ target)))
    if fid <= 0.98:
        failures.append(f"noiseless fidelity {fid:.4f}")
    rows = noisy_concentration_study(0.3, 0.5, "depolarizing",
                                     [0.0, 0.02], 20.0)
    ideal_c = concurrence(np.outer(target, target.conj()))
    if abs(rows[0].output_concurrence - ideal_c) > 0.02:
        failures.append(f"noiseless concurrence {rows[0].output_concurrence:.4f}")
    for row in rows:
        if not row.enhanced:
            failures.append(f"no enhancement at strength {row.strength}")
    _finish(12, failures)
