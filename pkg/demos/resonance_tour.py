"""Where gravity drives the rotating trap resonantly.

Tilt the rotation axis away from vertical and the constant lab-frame pull
picks up a component that rotates in the trap frame, forcing the motion at
the rotation rate itself. Resonance happens where the parabola chi = omega^2
crosses a characteristic branch, which singles out two special rates; the
interesting question is which stability region each rate lands in. Three
tilts of the same V = diag(1, 2, 3) trap cover the cases: both rates stable,
one rate inside the exponential window, and the rates split across two
stable regions.
"""

import sys
from pathlib import Path

import numpy as np

from rototrap import OmegaRange, classify_resonances, make_config, stability_scan
from rototrap.cli import emit_plot_data

V = np.diag([1.0, 2.0, 3.0])
TILTS = [("2pi_5", 2.0 * np.pi / 5.0), ("pi_4", np.pi / 4.0), ("pi_60", np.pi / 60.0)]


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_out")
    out.mkdir(parents=True, exist_ok=True)

    for name, theta in TILTS:
        axis = np.array([np.sin(theta), 0.0, np.cos(theta)])
        cfg = make_config(V, axis, 0.5)
        rep = classify_resonances(cfg)
        print(f"tilt {theta:.4f} rad:")
        print(f"  omega_1 = {rep.omega1:.9f}  in {rep.region1}")
        print(f"  omega_2 = {rep.omega2:.9f}  in {rep.region2}")

        table = stability_scan(cfg, OmegaRange(0.0, 2.2, 1101))
        path = out / f"resonance_tilt_{name}.csv"
        path.write_text(emit_plot_data(table, rep), encoding="utf-8")
        print(f"  wrote {path} (chi_parabola column overlays the resonance construction)")


if __name__ == "__main__":
    main()
