"""SVG figure rendering from already-written histogram CSVs.

Rendering is a pure function of the CSV contents and the fit parameters;
it never touches the numeric pipeline.  SVG output is made reproducible by
pinning the hash salt and dropping the date metadata.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .stats import read_histogram_csv  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "cramer-clt"


def _normal_pdf(x, mu, sigma):
    return math.exp(-0.5 * ((x - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))


def render_histogram_svg(csv_path, svg_path, fit_mu: float | None,
                         fit_sigma: float | None, title: str) -> None:
    """Histogram bars with the fitted normal (red) and N(0,1) (blue) overlaid."""
    hist = read_histogram_csv(csv_path)
    edges = hist.edges
    widths = edges[1:] - edges[:-1]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.bar(edges[:-1], hist.density, width=widths, align="edge",
           color="#bfcde0", edgecolor="#7d90ad", linewidth=0.4, label="samples")
    n_pts = 400
    lo, hi = float(edges[0]), float(edges[-1])
    xs = [lo + (hi - lo) * i / (n_pts - 1) for i in range(n_pts)]
    ax.plot(xs, [_normal_pdf(x, 0.0, 1.0) for x in xs], color="tab:blue",
            linewidth=1.2, label="N(0,1)")
    if fit_mu is not None and fit_sigma is not None and fit_sigma > 0:
        ax.plot(xs, [_normal_pdf(x, fit_mu, fit_sigma) for x in xs],
                color="tab:red", linewidth=1.2,
                label=f"fit N({fit_mu:.4g}, {fit_sigma:.4g})")
    ax.set_xlabel("normalized statistic")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(svg_path, format="svg", metadata={"Date": None})
    plt.close(fig)
