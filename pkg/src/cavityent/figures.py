"""Figure data: concentration entanglement, probabilities, fidelities.

Each figure is computed as a plain table (header + rows) so the CLI can
write delimited output and optionally render the curves to a PNG.
"""
from __future__ import annotations

import math

import numpy as np

from .entmeasures import average_fidelity, binary_entropy, entanglement_entropy
from .protocols import (PairSpec, analytic_concentrated_state, concentrate,
                        schmidt_projection_state)
from .teleport import teleport_channel

SQRT2 = math.sqrt(2.0)

FIG2_GAMMA = {"fig2a": 0.2, "fig2b": 0.5}
FIG3_GAMMAS = (0.2, 0.5, 0.7, 1 / SQRT2)
FIG4_GAMMAS = (0.0, 0.2, 0.5, 0.7)


def _pair_entropy(c: float) -> float:
    return binary_entropy(min(1.0, c * c))


def fig2_data(gamma: float, points: int = 50) -> tuple[list[str], list[list[float]]]:
    """Entanglement curves of the concentrated pair and its baselines."""
    header = ["lambda", "E_out", "E_field", "E_pair1", "E_pair2",
              "E_schmidt", "E_procrustean"]
    rows = []
    for lam in np.linspace(0.0, 1 / SQRT2, points):
        lam = float(lam)
        t, _ = analytic_concentrated_state(lam, gamma)
        e_out = _pair_entropy(t)
        e1 = _pair_entropy(lam)
        e2 = _pair_entropy(gamma)
        try:
            sp = schmidt_projection_state(lam, gamma)
            e_schmidt = _pair_entropy(abs(sp[1]))
        except ValueError:
            e_schmidt = 0.0
        # Procrustean curve drawn at cos(phi) = gamma, so it coincides
        # with the Schmidt-projection curve on this axis
        rows.append([lam, e_out, e1 + e2, e1, e2, e_schmidt, e_schmidt])
    return header, rows


def fig3_data(alpha: float = 10.0, theta1: float = math.pi,
              points: int = 50,
              gammas=FIG3_GAMMAS) -> tuple[list[str], list[list[float]]]:
    """Simulated retrieval probability of the concentrated state."""
    header = ["lambda"] + [f"p_gamma_{g:.6g}" for g in gammas]
    rows = []
    for lam in np.linspace(0.0, 1 / SQRT2, points):
        lam = float(lam)
        row = [lam]
        for g in gammas:
            r = concentrate(PairSpec(lam, theta1), PairSpec(g, 2 * theta1),
                            alpha)
            row.append(r.probability)
        rows.append(row)
    return header, rows


def fig4_data(alpha: float = 10.0, theta1: float = math.pi,
              points: int = 50, samples: int = 2000, seed: int = 1234,
              gammas=FIG4_GAMMAS) -> tuple[list[str], list[list[float]]]:
    """Haar-averaged teleportation fidelity over the two-pair resource."""
    header = ["lambda"] + [f"F_gamma_{g:.6g}" for g in gammas]
    rows = []
    for lam in np.linspace(0.0, 1.0, points):
        lam = float(lam)
        row = [lam]
        for g in gammas:
            ch = teleport_channel(lam, g, alpha, theta1)
            row.append(average_fidelity(ch, samples, seed))
        rows.append(row)
    return header, rows


def figure_data(name: str, alpha: float = 10.0, theta1: float = math.pi,
                points: int = 50, samples: int = 2000,
                seed: int = 1234) -> tuple[list[str], list[list[float]]]:
    if name in FIG2_GAMMA:
        return fig2_data(FIG2_GAMMA[name], points)
    if name == "fig3":
        return fig3_data(alpha, theta1, points)
    if name == "fig4":
        return fig4_data(alpha, theta1, points, samples, seed)
    raise ValueError(f"unknown figure {name!r}")


def write_csv(path: str, header: list[str], rows: list[list[float]]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format(x, ".12g") for x in row) + "\n")


def render_png(path: str, name: str, header: list[str],
               rows: list[list[float]]) -> None:
    """Draw every column against the first one and save the figure."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.asarray(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for j in range(1, data.shape[1]):
        ax.plot(data[:, 0], data[:, j], label=header[j])
    ax.set_xlabel(header[0])
    ylabel = {"fig2a": "entropy (ebits)", "fig2b": "entropy (ebits)",
              "fig3": "probability", "fig4": "average fidelity"}
    ax.set_ylabel(ylabel.get(name, "value"))
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
