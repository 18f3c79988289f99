"""Log-log Trotter error sweep: measured signal error vs M for both
schemes and both evolution modes, with the first-order bounds overlaid.

Usage: python plots/trotter.py --in DIR --out FILE.png
"""

import sys

import numpy as np

from csv_schema import FigureSpec, run_figure, standard_args

STYLE = {
    ("gamma", "real_time"): ("tab:blue", "group scheme, real time"),
    ("gamma", "imaginary_time"): ("tab:cyan", "group scheme, imaginary time"),
    ("per_term", "real_time"): ("tab:red", "per-term scheme, real time"),
    ("per_term", "imaginary_time"): ("tab:orange", "per-term scheme, imaginary time"),
}


def draw(spec: FigureSpec, plt):
    table = spec.tables["sweep"]
    fig, ax = plt.subplots(figsize=(7, 5))
    for (scheme, mode), (color, label) in STYLE.items():
        sel = (table["scheme"] == scheme) & (table["mode"] == mode)
        if not np.any(sel):
            continue
        order = np.argsort(table["M"][sel])
        m = table["M"][sel][order]
        ax.loglog(m, table["measured_error"][sel][order], "o-", color=color, label=label)
        bounds = table["bound"][sel][order]
        valid = table["bound_valid"][sel][order] == "True"
        ax.loglog(m[valid], bounds[valid], "--", color=color, alpha=0.6)
    ax.set_xlabel("Trotter variable M")
    ax.set_ylabel("absolute signal error")
    ax.legend(fontsize=8)
    ax.set_title("measured error (solid) and first-order bounds (dashed)")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    args = standard_args(__doc__).parse_args(argv)
    spec = FigureSpec(
        inputs={"sweep": args.in_dir / "trotter_sweep.csv"},
        required={"sweep": ("scheme", "mode", "M", "measured_error", "bound", "bound_valid")},
        output=args.out_file,
    )
    return run_figure(spec, draw)


if __name__ == "__main__":
    sys.exit(main())
