"""Noiseless recovery sweep: estimated decay rates / frequencies vs K,
with the true energies overlaid and recovered points highlighted.

Usage: python plots/figure2.py --in DIR --out FILE.png
"""

import sys
from pathlib import Path

from csv_schema import FigureSpec, run_figure, standard_args

KIND_LABEL = {"imaginary_time": "decaying signal", "real_time": "oscillating signal"}


def draw(spec: FigureSpec, plt):
    est = spec.tables["estimates"]
    true = spec.tables["true"]
    summary = spec.tables["summary"]
    kinds = ["imaginary_time", "real_time"]
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6), sharey=True)
    for ax, kind in zip(axes, kinds):
        sel = est["kind"] == kind
        ax.scatter(est["K"][sel], est["energy"][sel], s=14, color="tab:blue", label="estimates")
        tsel = true["kind"] == kind
        for e in true["energy"][tsel]:
            ax.axhline(e, color="0.6", lw=0.7, zorder=0)
        ssel = (summary["kind"] == kind) & (summary["recovered"] == "True")
        for K in summary["K"][ssel]:
            ax.axvline(K, color="tab:green", lw=0.5, alpha=0.4)
        ax.set_xlabel("K")
        ax.set_title(KIND_LABEL.get(kind, kind))
    axes[0].set_ylabel("energy")
    axes[0].legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    args = standard_args(__doc__).parse_args(argv)
    spec = FigureSpec(
        inputs={
            "estimates": args.in_dir / "figure2_estimates.csv",
            "true": args.in_dir / "figure2_true.csv",
            "summary": args.in_dir / "figure2_summary.csv",
        },
        required={
            "estimates": ("kind", "K", "j", "energy"),
            "true": ("kind", "j", "energy"),
            "summary": ("kind", "K", "recovered"),
        },
        output=args.out_file,
    )
    return run_figure(spec, draw)


if __name__ == "__main__":
    sys.exit(main())
