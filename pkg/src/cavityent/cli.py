"""Command-line runner: figure data, verification suites, protocol runs."""
from __future__ import annotations

import json
import math
import sys

import click
import numpy as np

from .entmeasures import (entanglement_entropy, fidelity_pure,
                          mutual_information)
from .figures import figure_data, render_png, write_csv
from .protocols import (PairSpec, accumulate_pair, accumulate_two_pairs,
                        analytic_concentrated_state, concentrate,
                        concentrated_target, initial_fields, pair_state,
                        retrieve_pair, retrieve_two_pairs)
from .teleport import (expected_partial_atom, teleport_partial, teleport_qubit,
                       teleport_qudit)
from .verify import SUITES, run_suite

SQRT2 = math.sqrt(2.0)


def _sig12(obj):
    """Round floats to 12 significant digits for stable output."""
    if isinstance(obj, float):
        return float(format(obj, ".12g"))
    if isinstance(obj, dict):
        return {k: _sig12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sig12(v) for v in obj]
    return obj


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(_sig12(payload), indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _amplitude_dump(state) -> list[list[float]]:
    flat = np.asarray(state.amplitudes).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


@click.group()
def main():
    """Simulator for entanglement accumulation in two remote cavities."""


@main.command()
@click.argument("name", type=click.Choice(["fig2a", "fig2b", "fig3", "fig4"]))
@click.option("--alpha", type=float, default=10.0, show_default=True)
@click.option("--theta1", type=float, default=math.pi)
@click.option("--points", type=int, default=50, show_default=True)
@click.option("--samples", type=int, default=2000, show_default=True)
@click.option("--seed", type=int, default=1234, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--plot/--no-plot", default=True, show_default=True,
              help="Also render the curves to a PNG next to the table.")
def figure(name, alpha, theta1, points, samples, seed, out_path, plot):
    """Write one figure's data as CSV, plus a rendered PNG by default."""
    header, rows = figure_data(name, alpha, theta1, points, samples, seed)
    write_csv(out_path, header, rows)
    if plot:
        png = out_path.rsplit(".", 1)[0] + ".png"
        render_png(png, name, header, rows)
        click.echo(f"wrote {out_path} and {png}")
    else:
        click.echo(f"wrote {out_path}")


@main.command()
@click.argument("suite", type=click.Choice(sorted(SUITES) + ["all"]))
@click.option("--out", "out_path", type=click.Path(), default=None)
def verify(suite, out_path):
    """Run a verification suite and report each check as JSON."""
    names = sorted(SUITES) if suite == "all" else [suite]
    reports = [run_suite(n) for n in names]
    payload = {"reports": reports,
               "passed": all(r["passed"] for r in reports)}
    _emit(payload, out_path)
    for r in reports:
        for c in r["checks"]:
            status = "pass" if c["pass"] else "FAIL"
            click.echo(f"{r['suite']}.{c['name']}: {status} "
                       f"(measured {c['measured']:.6g}, "
                       f"threshold {c['threshold']:.6g})", err=True)
    if not payload["passed"]:
        sys.exit(1)


@main.command()
@click.argument("protocol", type=click.Choice([
    "accumulate", "retrieve", "accumulate2", "retrieve2", "concentrate",
    "teleport", "teleport-qudit", "teleport-partial"]))
@click.option("--alpha", type=float, default=None,
              help="Coherent amplitude; defaults to 3 for single-pair "
                   "protocols and 10 otherwise.")
@click.option("--theta1", type=float, default=math.pi)
@click.option("--t2-ratio", type=float, default=2.0, show_default=True)
@click.option("--nmax", type=int, default=None)
@click.option("--lambda", "lam", type=float, default=1 / SQRT2)
@click.option("--gamma", type=float, default=1 / SQRT2)
@click.option("--outcome", type=str, default=None)
@click.option("--a", "amp_a", type=float, default=1 / SQRT2)
@click.option("--b", "amp_b", type=float, default=1 / SQRT2)
@click.option("--c", "amp_c", type=float, default=0.0)
@click.option("--d", "amp_d", type=float, default=0.0)
@click.option("--samples", type=int, default=2000)
@click.option("--seed", type=int, default=1234)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="json", show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--dump-amplitudes", is_flag=True, default=False)
def run(protocol, alpha, theta1, t2_ratio, nmax, lam, gamma, outcome,
        amp_a, amp_b, amp_c, amp_d, samples, seed, fmt, out_path,
        dump_amplitudes):
    """Run one protocol and summarize the conditioned state."""
    single_pair = protocol in ("accumulate", "retrieve")
    if alpha is None:
        alpha = 3.0 if single_pair else 10.0
    result = _dispatch(protocol, alpha, theta1, t2_ratio, nmax, lam, gamma,
                       outcome, (amp_a, amp_b, amp_c, amp_d))
    state = result.pop("_state", None)
    if dump_amplitudes and state is not None:
        result["amplitudes"] = _amplitude_dump(state)
    if fmt == "csv":
        scalars = {k: v for k, v in result.items()
                   if isinstance(v, (int, float, str))}
        text = (",".join(scalars) + "\n"
                + ",".join(format(v, ".12g") if isinstance(v, float) else str(v)
                           for v in scalars.values()) + "\n")
        if out_path:
            with open(out_path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(result, out_path)


def _dispatch(protocol, alpha, theta1, t2_ratio, nmax, lam, gamma, outcome,
              amps):
    a, b, c, d = amps
    theta2 = t2_ratio * theta1
    base = {"protocol": protocol, "alpha": alpha, "theta1": theta1}
    if protocol == "accumulate":
        oc = outcome or "gg"
        r = accumulate_pair(initial_fields(alpha, nmax),
                            PairSpec(lam, theta1), oc)
        return dict(base, outcome=oc, lam=lam, probability=r.probability,
                    field_entropy=entanglement_entropy(r.state, ["field-A"]),
                    _state=r.state)
    if protocol == "retrieve":
        oc = outcome or "gg"
        acc = accumulate_pair(initial_fields(alpha, nmax),
                              PairSpec(lam, theta1), oc)
        r = retrieve_pair(acc.state, theta1, alpha)
        target = pair_state(lam, "atom-A", "atom-B")
        fid = fidelity_pure(target.amplitudes, r.state.amplitudes)
        return dict(base, outcome=oc, lam=lam,
                    accumulation_probability=acc.probability,
                    retrieval_probability=r.probability,
                    atom_entropy=entanglement_entropy(r.state, ["atom-A"]),
                    fidelity_to_input_pair=fid, _state=r.state)
    if protocol == "accumulate2":
        ocs = tuple((outcome or "gg,gg").split(","))
        r = accumulate_two_pairs(PairSpec(lam, theta1),
                                 PairSpec(gamma, theta2), alpha, ocs, nmax)
        e1 = PairSpec(lam, theta1).entropy()
        e2 = PairSpec(gamma, theta2).entropy()
        return dict(base, lam=lam, gamma=gamma, outcomes=",".join(ocs),
                    probability=r.probability,
                    field_entropy=entanglement_entropy(r.state, ["field-A"]),
                    pair_entropy_sum=e1 + e2, _state=r.state)
    if protocol == "retrieve2":
        ocs = tuple((outcome or "gg,gg").split(","))
        acc = accumulate_two_pairs(PairSpec(lam, theta1),
                                   PairSpec(gamma, theta2), alpha, ocs, nmax)
        r = retrieve_two_pairs(acc.state, theta1, alpha)
        return dict(base, lam=lam, gamma=gamma,
                    compound_probability=acc.probability * r.probability,
                    pair1_entropy=entanglement_entropy(r.state, ["atom-A1"]),
                    pair2_entropy=entanglement_entropy(r.state, ["atom-A2"]),
                    interpair_mutual_information=mutual_information(
                        r.state, ["atom-A1", "atom-B1"],
                        ["atom-A2", "atom-B2"]),
                    _state=r.state)
    if protocol == "concentrate":
        r = concentrate(PairSpec(lam, theta1), PairSpec(gamma, theta2),
                        alpha, nmax)
        fid = fidelity_pure(concentrated_target(lam, gamma),
                            r.state.amplitudes)
        return dict(base, lam=lam, gamma=gamma, probability=r.probability,
                    output_entropy=entanglement_entropy(r.state, ["atom-A"]),
                    input_entropy_1=PairSpec(lam, theta1).entropy(),
                    input_entropy_2=PairSpec(gamma, theta2).entropy(),
                    fidelity_to_analytic=fid, _state=r.state)
    if protocol == "teleport":
        oc = outcome or "e0"
        norm = math.hypot(a, b)
        r = teleport_qubit(a / norm, b / norm, alpha, theta1, oc, nmax)
        fid = fidelity_pure(np.array([a / norm, b / norm]), r.atom)
        return dict(base, outcome=oc, a=a / norm, b=b / norm,
                    probability=r.probability,
                    retrieval_probability=r.retrieval_probability,
                    correction=r.correction, fidelity=fid,
                    basis_residual=r.basis_residual)
    if protocol == "teleport-qudit":
        v = np.array([a, b, c, d], dtype=complex)
        if np.linalg.norm(v) == 0:
            raise click.UsageError("qudit input must be non-zero")
        v = v / np.linalg.norm(v)
        r = teleport_qudit(v, alpha, theta1, nmax)
        return dict(base, probability=r.probability, fidelity=r.fidelity_to,
                    _state=r.state)
    if protocol == "teleport-partial":
        oc = outcome or "e0"
        norm = math.hypot(a, b)
        r = teleport_partial(a / norm, b / norm, lam, gamma, alpha, theta1,
                             oc, nmax)
        expected = expected_partial_atom(oc, a / norm, b / norm, lam, gamma)
        t, tp_ = analytic_concentrated_state(lam, gamma)
        return dict(base, outcome=oc, lam=lam, gamma=gamma,
                    probability=r.probability,
                    retrieval_probability=r.retrieval_probability,
                    correction=r.correction,
                    fidelity_to_expected=fidelity_pure(expected, r.atom),
                    theta=t, theta_prime=tp_)
    raise click.UsageError(f"unknown protocol {protocol!r}")


if __name__ == "__main__":
    main()
