"""Optional figures for CLI reports.  matplotlib is imported on first use."""

import math


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)


def shells_figure(verdict, path, title=""):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ks = [k for k, s in verdict["shells"] if s > 0]
    ss = [math.log2(s) for k, s in verdict["shells"] if s > 0]
    ax.plot(ks, ss, "o-", ms=3)
    ax.set_xlabel("shell k  (2^k <= |xi| < 2^(k+1))")
    ax.set_ylabel("log2 S_k")
    ax.set_title(title or f"status: {verdict['status']}")
    _save(fig, path)
    plt.close(fig)


def sweep_figure(points, path):
    plt = _pyplot()
    dims = sorted({p["d"] for p in points})
    fig, axes = plt.subplots(1, len(dims), figsize=(3.6 * len(dims), 3.4), squeeze=False)
    colors = {"finite": "tab:blue", "divergent": "tab:red", "inconclusive": "tab:gray",
              "invalid-parameter": "white"}
    for ax, d in zip(axes[0], dims):
        for p in points:
            if p["d"] != d:
                continue
            c = colors.get(p["status"], "black")
            ax.scatter(p["alpha0"], p["alpha"], c=c, edgecolors="k", s=28, linewidths=0.5)
        ax.plot([0, 1], [3, 2], "k--", lw=0.8)
        ax.set_xlabel("alpha0")
        ax.set_ylabel("alpha")
        ax.set_title(f"d = {d}")
    _save(fig, path)
    plt.close(fig)


def l_sequence_figure(rows, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.loglog([r["n"] for r in rows], [r["n_L"] for r in rows], "o-")
    ax.set_xlabel("n")
    ax.set_ylabel("n L_n")
    _save(fig, path)
    plt.close(fig)


def scaling_figure(rows, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    t = [r["t"] for r in rows]
    ax.errorbar(t, [r["ratio"] for r in rows], yerr=[r["ratio_stderr"] for r in rows], fmt="o",
                label="Monte Carlo")
    ax.plot(t, [r["expected_ratio"] for r in rows], "k+", ms=10, label="t^e")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("norm ratio to t = 1")
    ax.legend()
    _save(fig, path)
    plt.close(fig)


def series_figure(rows, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy([r["n"] for r in rows], [max(r["term"], 1e-300) for r in rows], "o-", label="term")
    ax.semilogy([r["n"] for r in rows], [r["partial_sum"] for r in rows], "s--", label="partial sum")
    ax.set_xlabel("chaos order n")
    ax.legend()
    _save(fig, path)
    plt.close(fig)
