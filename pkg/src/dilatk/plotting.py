"""Matplotlib figures for reports, orbit profiles and suite summaries, written to files."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import VerificationReport  # noqa: E402
from .wold import OrbitProfile  # noqa: E402

PASS_COLOR, FAIL_COLOR = "#4a8f4a", "#c0392b"


def _save(fig, path) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_report(rep: VerificationReport, path) -> Path:
    """One bar per check: length is the failure count (0 for passing checks)."""
    names = [c.name for c in rep.checks] or ["(no checks)"]
    fails = [c.failures for c in rep.checks] or [0]
    colors = [PASS_COLOR if c.ok else FAIL_COLOR for c in rep.checks] or [PASS_COLOR]
    fig, ax = plt.subplots(figsize=(6, 0.45 * len(names) + 1.5))
    y = range(len(names))
    ax.barh(y, [max(f, 0.05) for f in fails], color=colors)
    ax.set_yticks(list(y))
    ax.set_yticklabels(names)
    ax.invert_yaxis()
    ax.set_xlabel("failures")
    verdict = "PASS" if rep.ok else "FAIL"
    examined = ", ".join(f"{k}={v}" for k, v in sorted(rep.examined.items()))
    ax.set_title(f"{rep.subject}: {verdict}" + (f"\n{examined}" if examined else ""), fontsize=9)
    return _save(fig, path)


def plot_orbit_profile(profile: OrbitProfile, path) -> Path:
    """Orbit counts by type; infinite counts are drawn hatched at the top of the axis."""
    labels, counts = [], []
    for d in sorted(profile.cycles):
        labels.append(f"cycle {d}")
        counts.append(profile.cycles[d])
    labels += ["line", "ray"]
    counts += [profile.lines, profile.rays]
    finite = [c for c in counts if c != math.inf]
    top = max(finite + [1]) + 1
    fig, ax = plt.subplots(figsize=(max(4, 0.8 * len(labels) + 2), 3.5))
    for k, c in enumerate(counts):
        if c == math.inf:
            ax.bar(k, top, color="lightgray", hatch="//", edgecolor="gray")
            ax.text(k, top, "inf", ha="center", va="bottom")
        else:
            ax.bar(k, c, color="steelblue")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylabel("orbits")
    ax.set_title("orbit profile" + ("  (shift)" if profile.is_shift else ""))
    return _save(fig, path)


def plot_suite(rows: Sequence[tuple[str, int, int, float]], path) -> Path:
    """Suite summary from ``(name, cases, failures, seconds)`` rows."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 0.45 * len(rows) + 1.8), sharey=True)
    y = list(range(len(rows)))
    names = [r[0] for r in rows]
    ax1.barh(y, [r[1] for r in rows], color=[FAIL_COLOR if r[2] else PASS_COLOR for r in rows])
    ax1.set_xscale("symlog")
    ax1.set_xlabel("cases examined")
    ax1.set_yticks(y)
    ax1.set_yticklabels(names)
    ax1.invert_yaxis()
    ax2.barh(y, [r[3] for r in rows], color="gray")
    ax2.set_xlabel("seconds")
    return _save(fig, path)
