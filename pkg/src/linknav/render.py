"""SVG rendering of motions: one file per frame, optionally one animated SVG.

The viewBox covers every frame of the motion (5% padding) and is shared
by all files, so frames align when flipped through.  The y axis points
up. Joints render as circles, bars as lines, and the first bar is
highlighted.
"""

from __future__ import annotations

import os

from .geometry import Motion

FRAME_PATTERN = "frame_%05d.svg"


def _bounds(motion: Motion) -> tuple[float, float, float, float]:
    xs: list[float] = []
    ys: list[float] = []
    for frame in motion.all_frames():
        xs.extend(frame.points[:, 0])
        ys.extend(frame.points[:, 1])
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    pad = 0.05 * max(xmax - xmin, ymax - ymin, 1e-9)
    return xmin - pad, xmax + pad, ymin - pad, ymax + pad


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _frame_svg(points, box, highlight_first_bar=True) -> str:
    xmin, xmax, ymin, ymax = box
    width = xmax - xmin
    height = ymax - ymin
    # y-up: flip into SVG's y-down coordinates
    def sx(x):
        return _fmt(x - xmin)

    def sy(y):
        return _fmt(ymax - y)

    n = len(points)
    bars = []
    for i in range(n):
        a = points[i]
        b = points[(i + 1) % n]
        cls = "bar1" if (i == 0 and highlight_first_bar) else "bar"
        bars.append(
            f'  <line class="{cls}" x1="{sx(a[0])}" y1="{sy(a[1])}" '
            f'x2="{sx(b[0])}" y2="{sy(b[1])}"/>'
        )
    joints = [
        f'  <circle class="joint" cx="{sx(p[0])}" cy="{sy(p[1])}" r="{_fmt(0.015 * max(width, height))}"/>'
        for p in points
    ]
    style = (
        "  <style>.bar{stroke:#3a5fa0;stroke-width:%s;stroke-linecap:round}"
        ".bar1{stroke:#c03a2b;stroke-width:%s;stroke-linecap:round}"
        ".joint{fill:#222}</style>"
    ) % (_fmt(0.012 * max(width, height)), _fmt(0.016 * max(width, height)))
    body = "\n".join([style] + bars + joints)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(width)} {_fmt(height)}">\n'
        f"{body}\n</svg>\n"
    )


def render_frames(motion: Motion, out_dir: str) -> list[str]:
    """Write one SVG per frame into out_dir; returns the file names."""
    os.makedirs(out_dir, exist_ok=True)
    box = _bounds(motion)
    names = []
    for i, frame in enumerate(motion.all_frames()):
        name = FRAME_PATTERN % i
        with open(os.path.join(out_dir, name), "w") as fh:
            fh.write(_frame_svg(frame.points, box))
        names.append(name)
    return names


def render_animated(motion: Motion, out_path: str, fps: float = 25.0) -> None:
    """Single SVG animating the polygon through all frames."""
    box = _bounds(motion)
    xmin, xmax, ymin, ymax = box
    frames = list(motion.all_frames())
    dur = max(len(frames) / fps, 1e-3)

    def pts(frame):
        return " ".join(
            f"{_fmt(p[0] - xmin)},{_fmt(ymax - p[1])}" for p in list(frame.points) + [frame.points[0]]
        )

    values = ";".join(pts(f) for f in frames)
    width = xmax - xmin
    height = ymax - ymin
    stroke = _fmt(0.012 * max(width, height))
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(width)} {_fmt(height)}">\n'
        f'  <polyline fill="none" stroke="#3a5fa0" stroke-width="{stroke}" '
        f'stroke-linecap="round" points="{pts(frames[0])}">\n'
        f'    <animate attributeName="points" dur="{dur:.3f}s" repeatCount="indefinite" '
        f'values="{values}"/>\n'
        f"  </polyline>\n</svg>\n"
    )
    with open(out_path, "w") as fh:
        fh.write(svg)
