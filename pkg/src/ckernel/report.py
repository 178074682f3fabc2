"""Report serialization: aligned text, tab-delimited records, and an
optional matplotlib figure rendered next to the delimited output."""
from __future__ import annotations

from typing import Iterable

from .witnesses import CheckResult


def checks_to_text(title: str, checks: Iterable[CheckResult],
                   timings: bool = True) -> str:
    checks = list(checks)
    width = max([len(c.name) for c in checks] + [len("check")])
    lines = [title]
    header = f"{'check'.ljust(width)}  status"
    if timings:
        header += "      ms"
    lines.append(header)
    lines.append("-" * len(header))
    for c in checks:
        line = f"{c.name.ljust(width)}  {c.status.ljust(6)}"
        if timings:
            line += f"{c.millis:8.1f}"
        if c.detail and not c.passed:
            line += f"  {c.detail}"
        lines.append(line)
    verdict = "pass" if all(c.passed for c in checks) else "FAIL"
    lines.append(f"result: {verdict}")
    return "\n".join(lines) + "\n"


def checks_to_tsv(title: str, checks: Iterable[CheckResult],
                  timings: bool = True) -> str:
    lines = []
    for c in checks:
        ms = f"{c.millis:.1f}" if timings else "-"
        lines.append("\t".join([title, c.name, c.status, ms, c.detail]))
    return "\n".join(lines) + "\n"


def render_figure(title: str, checks: Iterable[CheckResult], path: str) -> None:
    """Horizontal bar chart of per-check runtimes, colored by status."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    checks = list(checks)
    names = [c.name for c in checks]
    millis = [max(c.millis, 0.01) for c in checks]
    colors = ["#2a9d48" if c.passed else "#c03221" for c in checks]

    height = max(2.0, 0.32 * len(checks) + 1.2)
    fig, ax = plt.subplots(figsize=(8, height))
    ax.barh(range(len(checks)), millis, color=colors)
    ax.set_yticks(range(len(checks)))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("milliseconds")
    n_fail = sum(1 for c in checks if not c.passed)
    status = "all checks passed" if n_fail == 0 else f"{n_fail} failing"
    ax.set_title(f"{title}: {status}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
