"""Static SVG figures (with CSV duals) for descents and experiment summaries.

The SVG is written by hand so every element is easy to count: trajectories
are ``<polyline class="trajectory">``, initial sensors ``<circle
class="initial">``, final sensors ``<rect class="final">``, Voronoi cells
``<polygon class="voronoi">`` and density iso-lines ``<polyline
class="contour">``.
"""

from __future__ import annotations

import csv
from pathlib import Path

import contourpy
import numpy as np

from .geometry import ConvexPolygon, voronoi_partition

SIZE = 480
MARGIN = 24
CONTOUR_GRID = 200
CONTOUR_LEVELS = 8


class _Frame:
    """Maps domain coordinates onto the SVG canvas (y axis flipped)."""

    def __init__(self, domain: ConvexPolygon, size=SIZE, margin=MARGIN):
        x0, y0, x1, y1 = domain.bounds
        self.x0, self.y0 = x0, y0
        self.scale = (size - 2 * margin) / max(x1 - x0, y1 - y0)
        self.margin = margin
        self.height = size

    def __call__(self, pts):
        p = np.asarray(pts, dtype=float).reshape(-1, 2)
        x = self.margin + (p[:, 0] - self.x0) * self.scale
        y = self.height - self.margin - (p[:, 1] - self.y0) * self.scale
        return np.column_stack([x, y])


def _points_attr(xy):
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in xy)


def density_contours(field, domain: ConvexPolygon, n=CONTOUR_GRID, levels=CONTOUR_LEVELS):
    """Marching-squares iso-lines of ``field`` on an ``n x n`` grid over the
    bounding box, returned as ``[(level, (m, 2) array), ...]``."""
    x0, y0, x1, y1 = domain.bounds
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    X, Y = np.meshgrid(xs, ys)
    Z = field(np.stack([X, Y], axis=-1).reshape(-1, 2)).reshape(X.shape)
    lo, hi = float(Z.min()), float(Z.max())
    if hi - lo <= 1e-12 * max(1.0, abs(hi)):
        return []
    gen = contourpy.contour_generator(X, Y, Z, line_type=contourpy.LineType.Separate)
    out = []
    for level in np.linspace(lo, hi, levels + 2)[1:-1]:
        for line in gen.lines(level):
            inside = domain.contains(line)
            if inside.any():
                out.append((float(level), line))
    return out


def _svg_open(fh, title):
    fh.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">\n'
    )
    fh.write(f"<title>{title}</title>\n")
    fh.write(f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>\n')


def emit_trace_svg(trace, field, domain: ConvexPolygon, path, title="Lloyd descent", voronoi_of="initial"):
    """Density contours, Voronoi cells, sensor paths and start/end markers.

    Writes ``path`` plus ``<stem>_trajectories.csv``, ``<stem>_voronoi.csv`` and
    ``<stem>_contours.csv`` next to it; returns the list of written paths.
    """
    path = Path(path)
    frame = _Frame(domain)
    iterates = np.asarray(trace.iterates)  # (T, k, 2)
    sites = iterates[0] if voronoi_of == "initial" else iterates[-1]
    cells = voronoi_partition(sites, domain).cells
    contours = density_contours(field, domain)
    with open(path, "w") as fh:
        _svg_open(fh, title)
        fh.write(
            f'<polygon class="domain" points="{_points_attr(frame(domain.vertices))}" '
            'fill="none" stroke="black" stroke-width="1.5"/>\n'
        )
        for level, line in contours:
            fh.write(
                f'<polyline class="contour" data-level="{level:.6g}" points="{_points_attr(frame(line))}" '
                'fill="none" stroke="#7a9cc6" stroke-width="0.8"/>\n'
            )
        for cell in cells:
            fh.write(
                f'<polygon class="voronoi" points="{_points_attr(frame(cell.vertices))}" '
                'fill="none" stroke="#555" stroke-width="0.8" stroke-dasharray="3,2"/>\n'
            )
        for i in range(iterates.shape[1]):
            fh.write(
                f'<polyline class="trajectory" data-sensor="{i}" points="{_points_attr(frame(iterates[:, i]))}" '
                'fill="none" stroke="#333" stroke-width="1"/>\n'
            )
        for x, y in frame(iterates[0]):
            fh.write(f'<circle class="initial" cx="{x:.2f}" cy="{y:.2f}" r="4" fill="none" stroke="blue"/>\n')
        for x, y in frame(iterates[-1]):
            fh.write(
                f'<rect class="final" x="{x - 3.5:.2f}" y="{y - 3.5:.2f}" width="7" height="7" fill="red"/>\n'
            )
        fh.write("</svg>\n")

    stem = path.with_suffix("")
    written = [path]
    p = Path(f"{stem}_trajectories.csv")
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sensor", "iteration", "x", "y"])
        for t in range(iterates.shape[0]):
            for i in range(iterates.shape[1]):
                w.writerow([i, t, repr(float(iterates[t, i, 0])), repr(float(iterates[t, i, 1]))])
    written.append(p)
    p = Path(f"{stem}_voronoi.csv")
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cell", "vertex", "x", "y"])
        for c, cell in enumerate(cells):
            for v, (x, y) in enumerate(cell.vertices):
                w.writerow([c, v, repr(float(x)), repr(float(y))])
    written.append(p)
    p = Path(f"{stem}_contours.csv")
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["line", "level", "x", "y"])
        for n, (level, line) in enumerate(contours):
            for x, y in line:
                w.writerow([n, repr(level), repr(float(x)), repr(float(y))])
    written.append(p)
    return written


def emit_coverage_svg(histories: dict, path, title="Coverage during descent"):
    """Coverage-versus-iteration curves, one per labelled history.

    The CSV dual ``<stem>.csv`` holds one row per (label, iteration).
    """
    path = Path(path)
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    n_max = max(len(h) for h in histories.values())
    h_all = np.concatenate([np.asarray(h, dtype=float) for h in histories.values()])
    h_lo, h_hi = float(h_all.min()), float(h_all.max())
    span = h_hi - h_lo if h_hi > h_lo else 1.0
    w_in = SIZE - 2 * MARGIN - 30

    def xy(it, h):
        x = MARGIN + 30 + w_in * it / max(1, n_max - 1)
        y = SIZE - MARGIN - (SIZE - 2 * MARGIN) * (h - h_lo) / span
        return x, y

    with open(path, "w") as fh:
        _svg_open(fh, title)
        fh.write(
            f'<line class="axis" x1="{MARGIN + 30}" y1="{SIZE - MARGIN}" x2="{SIZE - MARGIN}" '
            f'y2="{SIZE - MARGIN}" stroke="black"/>\n'
            f'<line class="axis" x1="{MARGIN + 30}" y1="{MARGIN}" x2="{MARGIN + 30}" '
            f'y2="{SIZE - MARGIN}" stroke="black"/>\n'
        )
        fh.write(f'<text x="{MARGIN}" y="{MARGIN - 6}" font-size="10">H max {h_hi:.4g}</text>\n')
        fh.write(f'<text x="{MARGIN}" y="{SIZE - 6}" font-size="10">H min {h_lo:.4g}</text>\n')
        for n, (label, hist) in enumerate(histories.items()):
            pts = [xy(i, h) for i, h in enumerate(hist)]
            fh.write(
                f'<polyline class="coverage" data-label="{label}" points="{_points_attr(pts)}" '
                f'fill="none" stroke="{colors[n % len(colors)]}" stroke-width="1.5"/>\n'
            )
            fh.write(
                f'<text x="{SIZE - MARGIN - 110}" y="{MARGIN + 14 * (n + 1)}" font-size="11" '
                f'fill="{colors[n % len(colors)]}">{label}</text>\n'
            )
        fh.write("</svg>\n")
    p = path.with_suffix(".csv")
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label", "iteration", "H"])
        for label, hist in histories.items():
            for i, h in enumerate(hist):
                w.writerow([label, i, repr(float(h))])
    return [path, p]


def emit_plots(trace_or_records, field, domain, out_dir, prefix="run"):
    """Write the figure set for one trace, or for a list of trial records
    (first run of each method: configuration panels plus a shared coverage plot)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if hasattr(trace_or_records, "iterates"):
        trace = trace_or_records
        written += emit_trace_svg(trace, field, domain, out / f"{prefix}_descent.svg")
        written += emit_coverage_svg({prefix: trace.coverage_history}, out / f"{prefix}_coverage.svg")
        return written
    firsts = {}
    for r in trace_or_records:
        if r.trace is not None and r.method not in firsts:
            firsts[r.method] = r
    for method, r in firsts.items():
        written += emit_trace_svg(
            r.trace, field, domain, out / f"{prefix}_{method}_descent.svg", title=f"{method} run {r.run_id}"
        )
    if firsts:
        written += emit_coverage_svg(
            {m: r.trace.coverage_history for m, r in firsts.items()}, out / f"{prefix}_coverage.svg"
        )
    return written
