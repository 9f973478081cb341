"""Rendering of sweep results to matplotlib figures on disk."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

# Line styles follow the usual convention for these comparisons: the
# exact curve solid, the approximations dashed.
_STYLES = {
    "exact": dict(color="tab:blue", linestyle="-", label="exact"),
    "scott": dict(color="tab:green", linestyle="-.", label="likelihood averaging"),
    "congdon": dict(color="tab:brown", linestyle="--", label="prior-weighted"),
    "gibbs": dict(color="tab:red", linestyle=":", label="corrected Gibbs"),
    "coupled": dict(color="tab:purple", linestyle="--", label="coupled (CRN)"),
}


def render_sweep_figure(table, path, title=None):
    """Plot P(M=1|y) for every method in a SweepTable and save to `path`."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    y = table.y_values
    for method in table.methods:
        style = _STYLES.get(method, dict(label=method))
        ax.plot(y, table.column(method), **style)
    ax.set_xlabel("y")
    ax.set_ylabel("P(M=1 | y)")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
