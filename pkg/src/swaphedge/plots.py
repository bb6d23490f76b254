"""Figure rendering for experiment results.

One PNG (or more) per experiment, written next to the CSV.  Rendering is
purely a view of the finished `ExperimentResult`; skipping it never
changes the delimited output.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .experiments import ExperimentResult  # noqa: E402

_DPI = 150


def _column(result: ExperimentResult, name: str) -> np.ndarray:
    pos = result.columns.index(name)
    return np.array([row[pos] for row in result.rows])


def _finite(values: np.ndarray) -> np.ndarray:
    return np.isfinite(values.astype(float))


def _save(fig, out_dir: Path, stem: str) -> Path:
    path = out_dir / f"{stem}.png"
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def _plot_table1(result, out_dir):
    tenors = _column(result, "num_payments").astype(int)
    degrees = _column(result, "degree").astype(int)
    values = _column(result, "v_mean").astype(float)
    fig, ax = plt.subplots(figsize=(5.5, 4))
    for n in np.unique(tenors):
        mask = tenors == n
        ax.semilogy(degrees[mask], values[mask], "o-", label=f"N={n}")
    ax.set_xlabel("truncation degree")
    ax.set_ylabel("v")
    ax.set_title("projection strategy value vs degree")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return [_save(fig, out_dir, "table1")]


def _plot_step_sweep(result, out_dir):
    kind = _column(result, "schedule")
    v1 = _column(result, "v1").astype(float)
    beta = _column(result, "beta")
    steps = _column(result, "steps").astype(int)
    values = _column(result, "v_mean").astype(float)
    counts = np.unique(steps)
    fig, axes = plt.subplots(1, len(counts), figsize=(4.5 * len(counts), 4),
                             sharey=True, squeeze=False)
    for ax, count in zip(axes[0], counts):
        in_panel = steps == count
        labels = sorted({(k, b) for k, b in zip(kind, beta) if k == "power"})
        for k, b in labels:
            mask = in_panel & (kind == k) & (beta == b) & _finite(values)
            if mask.any():
                ax.loglog(v1[mask], values[mask], "o-",
                          label=f"power, beta={b}")
        mask = in_panel & (kind == "constant") & _finite(values)
        if mask.any():
            ax.loglog(v1[mask], values[mask], "s--", label="constant")
        ax.set_title(f"steps={count:g}")
        ax.set_xlabel("v1")
        ax.grid(True, which="both", alpha=0.3)
    axes[0][0].set_ylabel("v after optimization")
    axes[0][-1].legend(fontsize=8)
    return [_save(fig, out_dir, "step_sweep")]


def _plot_trajectory(result, out_dir):
    runs = _column(result, "run")
    step = _column(result, "step").astype(float)
    window = _column(result, "window_mean_sq").astype(float)
    fig, ax = plt.subplots(figsize=(5.5, 4))
    for label in dict.fromkeys(runs):
        mask = (runs == label) & (step > 0) & _finite(window)
        ax.loglog(step[mask], window[mask], label=label, lw=0.9)
    ax.set_xlabel("iteration")
    ax.set_ylabel("windowed mean of W^2")
    ax.set_title("optimizer trajectories")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return [_save(fig, out_dir, "trajectory")]


def _plot_lambda_compare(result, out_dir):
    lam = _column(result, "friction").astype(float)
    fig, ax = plt.subplots(figsize=(5.5, 4))
    series = (("v_projection", "projection strategy", "o-"),
              ("v_null", "zero strategy", "s-"),
              ("v_optimized", "optimized", "d-"))
    for column, label, style in series:
        values = _column(result, column).astype(float)
        mask = _finite(values)
        ax.semilogy(lam[mask], values[mask], style, label=label)
    ax.set_xlabel("proportional friction")
    ax.set_ylabel("v")
    ax.set_title("hedging value vs friction")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return [_save(fig, out_dir, "lambda_compare")]


def _plot_error_distribution(result, out_dir):
    lam = _column(result, "friction").astype(float)
    values = _column(result, "v_mean").astype(float)
    aborted = _column(result, "aborted").astype(int)
    levels = list(dict.fromkeys(lam))
    fig, axes = plt.subplots(1, len(levels), figsize=(4.5 * len(levels), 4),
                             squeeze=False)
    for ax, level in zip(axes[0], levels):
        mask = (lam == level) & (aborted == 0)
        ax.hist(values[mask], bins=30, color="tab:blue", alpha=0.8)
        ax.set_title(f"friction={level:g}")
        ax.set_xlabel("v of final iterate")
    axes[0][0].set_ylabel("replicas")
    fig.suptitle("optimizer value spread across replicas")
    return [_save(fig, out_dir, "error_distribution")]


def _plot_threshold_surface(result, out_dir):
    lam = _column(result, "friction").astype(float)
    free = _column(result, "free_volume").astype(float)
    v_opt = _column(result, "v_optimized").astype(float)
    v_start = _column(result, "v_start").astype(float)
    lam_levels = np.unique(lam)
    free_levels = np.unique(free)
    shape = (len(free_levels), len(lam_levels))
    grid_opt = np.full(shape, np.nan)
    grid_ratio = np.full(shape, np.nan)
    for row_lam, row_free, row_opt, row_start in zip(lam, free, v_opt,
                                                     v_start):
        i = int(np.searchsorted(free_levels, row_free))
        j = int(np.searchsorted(lam_levels, row_lam))
        grid_opt[i, j] = row_opt
        grid_ratio[i, j] = row_opt / row_start if row_start > 0 else np.nan
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    panels = ((grid_opt, "v after optimization", True),
              (grid_ratio, "v optimized / v start", False))
    for ax, (grid, title, log_scale) in zip(axes, panels):
        shown = np.log10(grid) if log_scale else grid
        image = ax.imshow(shown, origin="lower", aspect="auto",
                          cmap="viridis")
        ax.set_xticks(range(len(lam_levels)),
                      [f"{x:g}" for x in lam_levels])
        ax.set_yticks(range(len(free_levels)),
                      [f"{x:g}" for x in free_levels])
        ax.set_xlabel("friction")
        ax.set_ylabel("free volume")
        ax.set_title(f"log10({title})" if log_scale else title)
        fig.colorbar(image, ax=ax)
    return [_save(fig, out_dir, "threshold_surface")]


def _plot_init_compare(result, out_dir):
    lam = _column(result, "friction").astype(float)
    start = _column(result, "start")
    values = _column(result, "v_mean").astype(float)
    fig, ax = plt.subplots(figsize=(5.5, 4))
    for label, style in (("projection", "o-"), ("null", "s-")):
        mask = (start == label) & _finite(values)
        ax.semilogy(lam[mask], values[mask], style,
                    label=f"start: {label}")
    ax.set_xlabel("proportional friction")
    ax.set_ylabel("v after optimization")
    ax.set_title("sensitivity to the starting point")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return [_save(fig, out_dir, "init_compare")]


def _plot_memory_sweep(result, out_dir):
    memory = _column(result, "memory")
    lam = _column(result, "friction").astype(float)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, column, title in ((axes[0], "v_projection", "projection start"),
                              (axes[1], "v_optimized", "after optimization")):
        values = _column(result, column).astype(float)
        for label in dict.fromkeys(memory):
            mask = (memory == label) & _finite(values)
            ax.semilogy(lam[mask], values[mask], "o-",
                        label=f"memory={label}")
        ax.set_xlabel("proportional friction")
        ax.set_title(title)
        ax.grid(True, which="both", alpha=0.3)
    axes[0].set_ylabel("v")
    axes[1].legend()
    return [_save(fig, out_dir, "memory_sweep")]


_RENDERERS = {
    "table1": _plot_table1,
    "step-sweep": _plot_step_sweep,
    "trajectory": _plot_trajectory,
    "lambda-compare": _plot_lambda_compare,
    "error-distribution": _plot_error_distribution,
    "threshold-surface": _plot_threshold_surface,
    "init-compare": _plot_init_compare,
    "memory-sweep": _plot_memory_sweep,
}


def render_figures(result: ExperimentResult, out_dir: Path) -> list[Path]:
    """Render the figures for one experiment result; returns their paths."""
    renderer = _RENDERERS[result.name]
    return renderer(result, Path(out_dir))
