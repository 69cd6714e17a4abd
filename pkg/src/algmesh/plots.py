"""Figure rendering for the report commands.

Each report command drops a PNG next to its CSV: mesh scatter plots,
error-decay curves per test function, Lebesgue-constant curves and the
norming-verification ratios.  Matplotlib runs on the Agg backend so the
figures render identically in headless environments.
"""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_METHOD_STYLE = {
    "afp": dict(color="tab:blue", marker="o", label="AFP interpolation"),
    "dlp": dict(color="tab:red", marker="s", label="DLP interpolation"),
    "ls": dict(color="tab:green", marker="^", label="least squares"),
}


def _is_real(points):
    pts = np.asarray(points)
    return (not np.iscomplexobj(pts)) or np.abs(pts.imag).max(initial=0.0) <= 1e-9 * (
        1.0 + np.abs(pts).max(initial=0.0)
    )


def render_points(points, path, title=""):
    """Scatter a point set: 3-d axes for real sets in R^3, panels otherwise."""
    pts = np.asarray(points)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if _is_real(pts):
        real = pts.real
        if real.shape[1] == 3:
            fig = plt.figure(figsize=(6, 5))
            ax = fig.add_subplot(projection="3d")
            ax.scatter(real[:, 0], real[:, 1], real[:, 2], s=8, c="k")
            ax.set_xlabel("x")
            ax.set_ylabel("y")
            ax.set_zlabel("z")
        elif real.shape[1] == 2:
            fig, ax = plt.subplots(figsize=(5.5, 5))
            ax.scatter(real[:, 0], real[:, 1], s=10, c="k")
            ax.set_aspect("equal")
            ax.set_xlabel("x")
            ax.set_ylabel("y")
        else:
            fig, ax = plt.subplots(figsize=(6, 2.2))
            ax.plot(real[:, 0], np.zeros(len(real)), "k.", ms=6)
            ax.set_yticks([])
            ax.set_xlabel("x")
    else:
        dim = pts.shape[1]
        fig, axes = plt.subplots(1, dim, figsize=(4.2 * dim, 4))
        axes = np.atleast_1d(axes)
        for d, ax in enumerate(axes):
            ax.scatter(pts[:, d].real, pts[:, d].imag, s=10, c="k")
            ax.set_aspect("equal")
            ax.set_xlabel(f"Re coord {d + 1}")
            ax.set_ylabel(f"Im coord {d + 1}")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_errors(rows, path, title=""):
    """Semilog error-decay curves, one panel per test function."""
    tags = sorted({r["f_tag"] for r in rows})
    ncols = min(2, len(tags))
    nrows = -(-len(tags) // ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(5.2 * ncols, 3.8 * nrows), squeeze=False)
    for ax, tag in zip(axes.ravel(), tags):
        for m, style in _METHOD_STYLE.items():
            pts = sorted((r["n"], r["rel_error"]) for r in rows if r["f_tag"] == tag and r["method"] == m)
            if pts:
                ax.semilogy([p[0] for p in pts], [max(p[1], 1e-17) for p in pts], ms=4, **style)
        ax.set_xlabel("degree n")
        ax.set_ylabel("relative 2-norm error")
        ax.set_title(tag)
        ax.grid(True, which="both", alpha=0.3)
    axes[0, 0].legend(fontsize=8)
    for ax in axes.ravel()[len(tags):]:
        ax.set_visible(False)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_lebesgue(rows, path, title=""):
    fig, ax = plt.subplots(figsize=(6, 4.2))
    for m, style in _METHOD_STYLE.items():
        pts = sorted((r["n"], r["lebesgue"]) for r in rows if r["method"] == m)
        if pts:
            ax.semilogy([p[0] for p in pts], [p[1] for p in pts], ms=4, **style)
    ax.set_xlabel("degree n")
    ax.set_ylabel("Lebesgue constant")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_norming(rows, path, title=""):
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ns = [r["n"] for r in rows]
    ax.plot(ns, [r["empirical"] for r in rows], "ko-", ms=4, label="max empirical ratio")
    cert = [(r["n"], r["constant"]) for r in rows if r["constant"] is not None]
    if cert:
        ax.plot([c[0] for c in cert], [c[1] for c in cert], "r--", label="certified constant")
    ax.set_xlabel("degree n")
    ax.set_ylabel("sup-norm ratio")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
