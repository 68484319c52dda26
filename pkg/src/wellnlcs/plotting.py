"""Figure rendering for squeezing sweeps (non-interactive, Agg backend)."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

LINESTYLES = ("-", "--", ":", "-.")


def plot_squeezing(rows, path, column="s1", title=None, linthresh=0.1):
    """Plot ``column`` against R/a_B, one line per Omega0/Omega1 family.

    Flagged rows appear as gaps in the curves.  Returns the saved path.
    """
    families = {}
    for row in rows:
        families.setdefault(row.omega_ratio, []).append(row)

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for k, (ratio, fam) in enumerate(families.items()):
        x = [r.r_over_ab for r in fam]
        y = [getattr(r, column) if r.ok else math.nan for r in fam]
        ax.plot(x, y, LINESTYLES[k % len(LINESTYLES)], color="k", lw=1.2,
                label=rf"$\Omega_0/\Omega_1={ratio:g}$")
    ax.axhline(0.0, color="0.6", lw=0.6)
    # s spans several decades near small R; symlog keeps the sign visible
    ax.set_yscale("symlog", linthresh=linthresh)
    ax.set_xlabel(r"$R/a_B$")
    ax.set_ylabel(rf"${column[0]}_{column[1:]}$" if column[:1] == "s" else column)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    # fixed metadata keeps PNG bytes reproducible
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path
