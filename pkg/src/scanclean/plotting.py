"""
Figure rendering for reports.

Uses the object-oriented matplotlib API (``Figure`` + Agg canvas) so nothing
here touches pyplot state or needs a display.
"""
from __future__ import annotations

import contextlib
from pathlib import Path

import numpy as np
from matplotlib import rc_context
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

__all__ = ["STYLE", "style", "plot_isnr_vs_snr", "plot_psd", "plot_denoise"]

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.2,
    "savefig.dpi": 150,
}

GOLDEN = (np.sqrt(5) - 1.0) / 2.0


@contextlib.contextmanager
def style(**overrides):
    with rc_context({**STYLE, **overrides}):
        yield


def _new_figure(width=4.5, height=None, nrows=1, ncols=1, **kw):
    fig = Figure(figsize=(width, height or width * GOLDEN))
    FigureCanvasAgg(fig)
    axes = fig.subplots(nrows, ncols, **kw)
    return fig, axes


def _save(fig, path):
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path)
    return path


def plot_isnr_vs_snr(report, path):
    """Mean ISNR per weighting against input SNR, with spread over the other axes."""
    rows = report.rows if hasattr(report, "rows") else report
    kinds = sorted({r.weighting_kind for r in rows})
    snrs = sorted({r.snr_db_in for r in rows})
    with style():
        fig, ax = _new_figure()
        for i, kind in enumerate(kinds):
            means, stds = [], []
            for snr in snrs:
                vals = [r.isnr_db for r in rows if r.weighting_kind == kind and r.snr_db_in == snr]
                means.append(np.mean(vals))
                stds.append(np.std(vals))
            label = "w = 0" if kind == "zero" else "w(f) = |f|" if kind == "linear" else kind
            ax.errorbar(snrs, means, yerr=stds, marker="os^"[i % 3], capsize=3,
                        color=("0.0", "0.55")[i % 2], label=label)
        ax.set_xlabel("input SNR (dB)")
        ax.set_ylabel("ISNR (dB)")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_psd(freqs, psd, path, label=None, extra=(), fmax=None):
    """PSD in dB; ``extra`` is an iterable of ``(freqs, psd, label)`` overlays."""
    with style():
        fig, ax = _new_figure()
        curves = [(freqs, psd, label)] + list(extra)
        for i, (f, p, lab) in enumerate(curves):
            ax.plot(f, 10 * np.log10(np.maximum(p, 1e-30)), color=("0.0", "0.55", "0.3")[i % 3], label=lab)
        ax.set_xlabel("frequency (Hz)")
        ax.set_ylabel("PSD (dB/Hz)")
        if fmax is not None:
            ax.set_xlim(0, fmax)
        if any(c[2] for c in curves):
            ax.legend(frameon=False)
        return _save(fig, path)


def plot_denoise(y, out, sample_rate, path, fmax=5000.0):
    """Waveforms and spectrograms of input and output, stacked."""
    with style():
        fig, axes = _new_figure(width=7.0, height=4.5, nrows=2, ncols=2, sharex="col")
        t = np.arange(len(y)) / sample_rate
        nfft = int(2 ** np.ceil(np.log2(0.02 * sample_rate)))
        for row, (sig, name) in enumerate(((y, "input"), (out, "output"))):
            axes[row, 0].plot(t, sig, color="0.1", linewidth=0.5)
            axes[row, 0].set_ylabel(name)
            with np.errstate(divide="ignore"):  # silent stretches give log10(0)
                axes[row, 1].specgram(sig, NFFT=nfft, Fs=sample_rate, noverlap=nfft // 2, cmap="Greys")
            axes[row, 1].set_ylim(0, fmax)
            axes[row, 1].set_ylabel("Hz")
        axes[1, 0].set_xlabel("time (s)")
        axes[1, 1].set_xlabel("time (s)")
        return _save(fig, path)
