"""Figures for suite tables, rendered off-screen to PNG files."""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_table(table, path):
    """Plot the columns named in ``table.plot`` and save to ``path``.

    ``table.plot`` holds x, ys, optional logx/logy, style and title.  With
    ``group`` set to a column name, each distinct value of that column gets
    its own series.  Non-positive values are dropped from log axes.
    """
    spec = table.plot
    cols = {h: i for i, h in enumerate(table.header)}
    gcol = spec.get("group")
    groups = {}
    for row in table.rows:
        key = row[cols[gcol]] if gcol else None
        groups.setdefault(str(key), []).append(row)
    fig, ax = plt.subplots(figsize=(9, 4))
    style = spec.get("style", "-o")
    for key, rows in groups.items():
        x = np.array([float(r[cols[spec["x"]]]) for r in rows])
        for name in spec["ys"]:
            y = np.array([float(r[cols[name]]) for r in rows])
            ok = np.isfinite(x) & np.isfinite(y)
            if spec.get("logy"):
                ok &= y > 0
            if spec.get("logx"):
                ok &= x > 0
            label = name if gcol is None else f"{name} ({gcol}={key})"
            ax.plot(x[ok], y[ok], style, ms=3, label=label)
    if spec.get("logx"):
        ax.set_xscale("log")
    if spec.get("logy"):
        ax.set_yscale("log")
    ax.set_xlabel(spec["x"])
    ax.set_title(spec.get("title", table.name))
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7, loc="upper left", bbox_to_anchor=(1.02, 1.0))
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path
