"""Figures written next to the CSV reports.

Uses the object-oriented ``matplotlib.figure.Figure`` API so nothing touches
pyplot's global state; matplotlib is an optional dependency.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def available() -> bool:
    try:
        import matplotlib  # noqa: F401
    except ImportError:
        return False
    return True


def _figure(width=6.0, height=None):
    from matplotlib.figure import Figure

    golden = (np.sqrt(5) - 1) / 2
    fig = Figure(figsize=(width, height or width * golden))
    return fig, fig.add_subplot(111)


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    return path


def plot_matrix(M: np.ndarray, labels, path, title: str = "") -> Path:
    fig, ax = _figure(5.5, 5.0)
    im = ax.imshow(np.abs(M), cmap="viridis", interpolation="nearest")
    fig.colorbar(im, ax=ax, label="|L_ij|")
    ax.set_xticks(range(len(labels)))
    ax.set_yticks(range(len(labels)))
    fontsize = 8 if len(labels) <= 16 else 5
    ax.set_xticklabels(labels, rotation=90, fontsize=fontsize)
    ax.set_yticklabels(labels, fontsize=fontsize)
    ax.set_title(title)
    return _save(fig, path)


def plot_trajectory(times, survival, populations, path, title: str = "") -> Path:
    fig, ax = _figure()
    for k, p in enumerate(populations):
        ax.plot(times, p, lw=1, alpha=0.7, label=f"p{k + 1}")
    if survival is not None:
        ax.plot(times, survival, "k--", lw=1.5, label="survival")
    ax.set_xlabel("t")
    ax.set_ylabel("probability")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False, fontsize=8)
    ax.set_title(title)
    return _save(fig, path)


def plot_zeno_sweep(alphas, leakage, path, tail_exponent=None) -> Path:
    fig, ax = _figure()
    keep = (np.asarray(alphas) > 0) & (np.asarray(leakage) > 0)
    ax.loglog(np.asarray(alphas)[keep], np.asarray(leakage)[keep], "o-")
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel("1 - min survival")
    if tail_exponent is not None:
        ax.set_title(f"tail exponent {tail_exponent:.3f}")
    return _save(fig, path)


def plot_survival_curves(times, curves, alphas, path) -> Path:
    fig, ax = _figure()
    for a, c in zip(alphas, curves):
        ax.plot(times, c, lw=1, label=f"alpha={a:.3g}")
    ax.set_xlabel("t")
    ax.set_ylabel("survival")
    ax.legend(frameon=False, fontsize=7)
    return _save(fig, path)


def plot_choi_scan(times, min_eigs, path, title: str = "") -> Path:
    fig, ax = _figure()
    ax.semilogx(times, min_eigs, "o-", ms=3)
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("t")
    ax.set_ylabel("min eigenvalue of Choi(exp(tL))")
    ax.set_title(title)
    return _save(fig, path)


def plot_defect_scan(rows, path) -> Path:
    """``rows`` are dicts with temperature, delta_omega, defect, trace_distance."""
    fig, ax = _figure()
    for T in sorted({r["temperature"] for r in rows}):
        sel = [r for r in rows if r["temperature"] == T]
        dw = [r["delta_omega"] for r in sel]
        ax.loglog(dw, [r["defect"] for r in sel], "o-", label=f"generator, T={T:.3g}")
        ax.loglog(dw, [r["trace_distance"] for r in sel], "s--", label=f"trajectory, T={T:.3g}")
    ax.set_xlabel(r"$\delta\omega$")
    ax.set_ylabel("defect")
    ax.legend(frameon=False, fontsize=7)
    return _save(fig, path)
