"""Optional PNG rendering of the figure tables (requires matplotlib)."""
import io

import numpy as np

_YLABEL = {"fig1": "projection error", "fig2": "runtime [s]", "fig3": "effectivity", "fig4": "effectivity"}


def _parse(text):
    lines = text.strip().splitlines()
    header = lines[0].split()
    data = np.array([[float(x) for x in ln.split()] for ln in lines[1:]], ndmin=2)
    return header, data


def render_table(name, text):
    """PNG bytes of one table: log-log lines, one per series."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    header, data = _parse(text)
    fig, ax = plt.subplots(figsize=(5.0, 3.6), dpi=120)
    x = data[:, 0]
    for j, label in enumerate(header[1:], start=1):
        y = data[:, j]
        ok = np.isfinite(y) & (y > 0)
        if ok.any():
            ax.plot(x[ok], y[ok], marker="o", label=label)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("basis size k")
    ax.set_ylabel(_YLABEL.get(name.split("_")[0], ""))
    ax.set_title(name.rsplit(".", 1)[0], fontsize=9)
    ax.grid(True, which="both", alpha=0.3)
    if ax.lines:
        ax.legend(fontsize=7)
    fig.tight_layout()
    buf = io.BytesIO()
    fig.savefig(buf, format="png", metadata={"Software": None})
    plt.close(fig)
    return buf.getvalue()


def render_tables(tables):
    return {name.rsplit(".", 1)[0] + ".png": render_table(name, text) for name, text in tables.items()}
