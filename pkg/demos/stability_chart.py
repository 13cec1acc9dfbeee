"""Chart the stability landscape of the fully anisotropic rotating trap.

V = diag(1, 2, 3) rotating about the cube diagonal (1,1,1)/sqrt(3) is the
configuration with every qualitative feature at once: sweeping the rotation
rate walks through stable S1, an exponential window I1, stable S2, an
oscillatory window I2, and stable S3. The script prints the window edges
and region table, then writes the chi branches over the sweep as CSV
(plot the chi*_re columns against omega to draw the chart).
"""

import sys
from pathlib import Path

import numpy as np

from rototrap import OmegaRange, make_config, region_map, stability_scan
from rototrap.cli import emit_plot_data

V = np.diag([1.0, 2.0, 3.0])
AXIS = np.ones(3) / np.sqrt(3.0)


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_out")
    out.mkdir(parents=True, exist_ok=True)

    cfg = make_config(V, AXIS, 1.0)
    rmap = region_map(cfg)
    print("V = diag(1, 2, 3), axis = (1,1,1)/sqrt(3)")
    print(f"exponential window  {rmap.om_minus:.9f} .. {rmap.om_plus:.9f}")
    if rmap.oscillatory is not None:
        lo, hi = rmap.oscillatory
        print(f"oscillatory window  {lo:.9f} .. {hi:.9f}")
    for lab in rmap.labels():
        hi = f"{lab.hi:.6f}" if np.isfinite(lab.hi) else "inf"
        print(f"  {lab.label:3s}  omega in [{lab.lo:.6f}, {hi})")

    table = stability_scan(cfg, OmegaRange(0.0, 4.0, 2001))
    path = out / "stability_chart.csv"
    path.write_text(emit_plot_data(table), encoding="utf-8")
    print(f"wrote {path} ({len(table.omegas)} rows)")


if __name__ == "__main__":
    main()
