"""Render the CSV outputs of the command-line tool as figures.

Needs matplotlib, which the library itself does not use::

    quadcone hover --phi-range 0 0.78 60 --out hover.csv
    quadcone ft-hover --phi-range 0.02 0.785 40 --out ft.csv
    quadcone simulate --scenario ft-hover --phi 18deg --periods 16 --out ft_trace.csv
    quadcone psd ft_trace.csv --column az --out psd.csv
    quadcone tradeoff --out frontier.csv
    python demos/plot_figures.py
"""
from __future__ import annotations

import csv
import sys

import matplotlib.pyplot as plt


def load(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {k: [float(r[k]) for r in rows] for k in rows[0]}


def main(out="figures.png"):
    fig, ax = plt.subplots(2, 2, figsize=(10, 8))
    h = load("hover.csv")
    ax[0, 0].plot(h["phi_rad"], h["omega_13"], label="arms 1, 3")
    ax[0, 0].plot(h["phi_rad"], h["omega_24"], label="arms 2, 4")
    ax[0, 0].set(xlabel="phi (rad)", ylabel="rotor rate (rad/s)", title="healthy hover")
    ax[0, 0].legend()
    f = load("ft.csv")
    ax[0, 1].plot(f["phi_rad"], f["theta_dot_c"])
    ax[0, 1].set(xlabel="phi (rad)", ylabel="cone rate (rad/s)", title="rotor-off hover")
    s = load("psd.csv")
    ax[1, 0].semilogy(s["frequency_hz"][1:], s["power"][1:])
    ax[1, 0].set(xlabel="frequency (Hz)", ylabel="power ((m/s^2)^2)", xlim=(0, 400),
                 title="vertical acceleration spectrum")
    t = load("frontier.csv")
    ax[1, 1].plot(t["neg_range_m"], t["centripetal_force_n"], "o-", ms=3)
    ax[1, 1].set(xlabel="-range (m)", ylabel="centripetal force (N)", title="cone-angle trade-off")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")


if __name__ == "__main__":
    main(*sys.argv[1:])
