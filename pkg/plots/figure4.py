"""Spectral estimates vs transverse field over the true spectrum, and
relative recovery errors vs sample size for both pipelines.

Usage: python plots/figure4.py --in DIR --out FILE.png
"""

import sys

import numpy as np

from csv_schema import FigureSpec, run_figure, standard_args

PIPELINES = ["quantum", "mc"]
COLORS = {"quantum": "tab:orange", "mc": "tab:blue"}


def draw(spec: FigureSpec, plt):
    est = spec.tables["estimates"]
    true = spec.tables["true"]
    errors = spec.tables["errors"]
    fig, axes = plt.subplots(3, 2, figsize=(10, 9))
    for col, pipeline in enumerate(PIPELINES):
        ax = axes[0, col]
        for lvl in np.unique(true["level"]):
            sel = true["level"] == lvl
            order = np.argsort(true["g"][sel])
            ax.plot(true["g"][sel][order], true["energy"][sel][order], "-", color="0.75", lw=0.8, zorder=0)
        sel = est["pipeline"] == pipeline
        sc = ax.scatter(est["g"][sel], est["energy"][sel], c=est["K"][sel], s=16, cmap="viridis")
        ax.set_title(f"{pipeline} estimates")
        ax.set_xlabel("g")
        ax.set_ylabel("energy")
        fig.colorbar(sc, ax=ax, label="K")
    for row, level in ((1, "ground_rel_error"), (2, "excited_rel_error")):
        for col, pipeline in enumerate(PIPELINES):
            ax = axes[row, col]
            sel = errors["pipeline"] == pipeline
            sizes, means, spreads = [], [], []
            for num in np.unique(errors["num_samples"][sel]):
                vals = errors[level][sel & (errors["num_samples"] == num)]
                vals = vals[np.isfinite(vals) & (vals > 0)]
                if len(vals):
                    sizes.append(num)
                    means.append(np.mean(vals))
                    spreads.append(np.std(vals))
            if sizes:
                ax.errorbar(sizes, means, yerr=spreads, fmt="o-", color=COLORS[pipeline])
                ax.set_xscale("log")
                ax.set_yscale("log")
            ax.set_xlabel(r"samples $|\Sigma|$")
            ax.set_ylabel(level.replace("_", " "))
            ax.set_title(pipeline)
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    args = standard_args(__doc__).parse_args(argv)
    spec = FigureSpec(
        inputs={
            "estimates": args.in_dir / "figure4_estimates.csv",
            "true": args.in_dir / "figure4_true.csv",
            "errors": args.in_dir / "figure4_errors.csv",
        },
        required={
            "estimates": ("pipeline", "g", "K", "energy"),
            "true": ("g", "level", "energy"),
            "errors": ("pipeline", "num_samples", "ground_rel_error", "excited_rel_error"),
        },
        output=args.out_file,
    )
    return run_figure(spec, draw)


if __name__ == "__main__":
    sys.exit(main())
