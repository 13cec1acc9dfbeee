"""Stationary squeezed states of the rotating trap.

The rotating ground state is a Gaussian exp(-r.K.r / 2) whose complex width
matrix K makes the Riccati right-hand side vanish. K is built two ways: from
the positive-signature normal modes (works for any axis) and from the planar
closed form (rotation about a principal axis), and the two agree to rounding.
Past the first window edge no sign choice works and the construction refuses:
the quantum problem inherits the classical stability regions.
"""

import json
import sys
from pathlib import Path

import numpy as np

from rototrap import (
    InInstabilityRegion,
    make_config,
    normalization_constant,
    planar_stationary_K,
    riccati_rhs,
    stationary_K_from_modes,
)

V = np.diag([1.0, 2.0, 3.0])


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_out")
    out.mkdir(parents=True, exist_ok=True)

    print("rotation about z (planar closed form applies)")
    for om in (0.5, 2.0):
        cfg = make_config(V, [0.0, 0.0, 1.0], om)
        state = stationary_K_from_modes(cfg)
        psk = planar_stationary_K(1.0, 2.0, 3.0, om)
        gap = np.max(np.abs(state.k - psk.matrix3()))
        resid = np.max(np.abs(riccati_rhs(state.k, cfg)))
        print(f"  omega = {om}:")
        print(f"    alpha {psk.alpha:.9f}  beta {psk.beta:.9f}  "
              f"gamma {psk.gamma:+.9f}  kappa {psk.kappa:+.9f}")
        print(f"    modes vs closed form: max gap {gap:.2e}, "
              f"Riccati residual {resid:.2e}")
        print(f"    normalization C = {normalization_constant(state.k):.9f}")

    try:
        stationary_K_from_modes(make_config(V, [0.0, 0.0, 1.0], 1.2))
    except InInstabilityRegion as exc:
        print(f"  omega = 1.2: refused ({exc})")

    theta = 0.1
    cfg = make_config(V, [np.sin(theta), 0.0, np.cos(theta)], 0.5)
    state = stationary_K_from_modes(cfg)
    resid = np.max(np.abs(riccati_rhs(state.k, cfg)))
    print(f"tilted axis ({theta} rad off z), omega = 0.5: "
          f"residual {resid:.2e}, min eig Re K {state.re_min_eig():.6f}")
    path = out / "ground_state_tilted.json"
    path.write_text(json.dumps(state.to_json_obj(), indent=2), encoding="utf-8")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
