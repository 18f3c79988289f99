"""Six-panel evolution traces: imaginary-time decay plus Re/Im of the
real-time overlap signal, for the product-plus and optimal-overlap
input states.

Usage: python plots/figure3.py --in DIR --out FILE.png
"""

import sys

from csv_schema import FigureSpec, run_figure, standard_args

STATES = ["plus_product", "phi_optimal"]
STATE_LABEL = {"plus_product": r"$|+\rangle^{\otimes n}$", "phi_optimal": "optimal-overlap state"}


def draw(spec: FigureSpec, plt):
    fig, axes = plt.subplots(2, 3, figsize=(11, 5.5))
    for row, state in enumerate(STATES):
        imag = spec.tables[f"{state}_imaginary"]
        real = spec.tables[f"{state}_real"]
        step_i = spec.metas[f"{state}_imaginary"].get("step", 1.0)
        step_r = spec.metas[f"{state}_real"].get("step", 1.0)
        tau = imag["k"] * step_i
        t = real["k"] * step_r
        err = imag.get("stderr_proxy")
        axes[row, 0].errorbar(tau, imag["value"], yerr=err, fmt="o-", ms=3, lw=0.8)
        axes[row, 0].set_ylabel(STATE_LABEL[state] + "\nsignal")
        axes[row, 0].set_xlabel(r"imaginary time $\tau$")
        axes[row, 1].plot(t, real["re"], "o-", ms=3, lw=0.8, color="tab:orange")
        axes[row, 1].set_xlabel("time $t$")
        axes[row, 2].plot(t, real["im"], "o-", ms=3, lw=0.8, color="tab:red")
        axes[row, 2].set_xlabel("time $t$")
    axes[0, 0].set_title("imaginary-time signal")
    axes[0, 1].set_title("Re real-time signal")
    axes[0, 2].set_title("Im real-time signal")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    args = standard_args(__doc__).parse_args(argv)
    inputs = {}
    required = {}
    for state in STATES:
        inputs[f"{state}_imaginary"] = args.in_dir / f"figure3_{state}_imaginary.csv"
        required[f"{state}_imaginary"] = ("k", "value")
        inputs[f"{state}_real"] = args.in_dir / f"figure3_{state}_real.csv"
        required[f"{state}_real"] = ("k", "re", "im")
    spec = FigureSpec(inputs=inputs, required=required, output=args.out_file)
    return run_figure(spec, draw)


if __name__ == "__main__":
    sys.exit(main())
