"""How close each wavepacket gets to the conservation-law error bound.

For short packets (omega_q dt << 1) the ratio of error to bound tends to
2 dw dt: only the minimum-uncertainty Gaussian reaches 1.  For long
packets all shapes give sqrt(2).

    python demos/03_error_vs_bound.py [--plot ratio.png]
"""

import argparse
import math

from waymeter.sweep import LogGrid, RunConfig, run_sweep

parser = argparse.ArgumentParser()
parser.add_argument("--plot", help="save a log-x plot here (needs matplotlib)")
args = parser.parse_args()

points = run_sweep(RunConfig(grid=LogGrid(1e-2, 1e2, 25)))
by_shape = {}
for p in points:
    by_shape.setdefault(p.shape, []).append(p)

print(f"{'wq*dt':>9s} " + " ".join(f"{s:>12s}" for s in by_shape))
for row in zip(*by_shape.values()):
    print(f"{row[0].wq_dt:9.4f} " + " ".join(f"{p.ratio:12.5f}" for p in row))
print("\nshort-packet limit 2*dw*dt: " + ", ".join(f"{s} {pts[0].dw_dt_product * 2:.5f}" for s, pts in by_shape.items()))
print(f"long-packet limit sqrt(2) = {math.sqrt(2):.5f}")

if args.plot:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for s, pts in by_shape.items():
        ax.semilogx([p.wq_dt for p in pts], [p.ratio for p in pts], label=s)
    ax.axhline(1, color="k", lw=0.5)
    ax.axhline(math.sqrt(2), color="k", lw=0.5, ls="--")
    ax.set_xlabel(r"$\omega_q \Delta t$")
    ax.set_ylabel(r"$\varepsilon / \varepsilon_B$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.plot, dpi=150)
    print(f"wrote {args.plot}")
