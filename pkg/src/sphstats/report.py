"""Flat key-value report emission.

Reports are plain text, one ``key = value`` per line, snake_case keys,
floats at six significant figures. The optional timestamp header is the only
non-deterministic line and can be suppressed, after which identical inputs
produce byte-identical reports.
"""

import datetime
import sys

import numpy as np

__all__ = ["format_value", "render_report", "emit_report"]


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".6g")
    if value is None:
        return "none"
    return str(value)


def render_report(pairs, timestamp: bool = True) -> str:
    """Render (key, value) pairs; vector values expand to indexed keys."""
    lines = []
    if timestamp:
        now = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        lines.append(f"timestamp = {now}")
    for key, value in pairs:
        if isinstance(value, np.ndarray):
            for axis, component in zip("xyzw", value):
                lines.append(f"{key}_{axis} = {format_value(float(component))}")
        else:
            lines.append(f"{key} = {format_value(value)}")
    return "\n".join(lines) + "\n"


def emit_report(pairs, output=None, timestamp: bool = True) -> str:
    """Render and write a report to a path (or stdout when None)."""
    text = render_report(pairs, timestamp=timestamp)
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
