"""Minimal SVG writers for the scatter and decay figures.

Generated directly (no plotting dependency) and fully deterministic: no
timestamps, no randomness, floats formatted with a fixed precision.
"""

WIDTH = 640
HEIGHT = 480
MARGIN = 50


def _fmt(x):
    return f"{x:.3f}"


def _axis_range(values, pad=0.05):
    lo = min(values)
    hi = max(values)
    span = hi - lo
    if span == 0.0:
        span = 1.0
    return lo - pad * span, hi + pad * span


def _to_px(x, lo, hi, size, invert=False):
    frac = (x - lo) / (hi - lo)
    if invert:
        frac = 1.0 - frac
    return MARGIN + frac * (size - 2 * MARGIN)


def scatter_svg(xs, ys, shades=None, title=""):
    """Scatter plot; optional per-point shade values map to a gray ramp."""
    if len(xs) != len(ys):
        raise ValueError("xs and ys must have equal length")
    xlo, xhi = _axis_range(xs)
    ylo, yhi = _axis_range(ys)
    if shades is not None:
        slo, shi = _axis_range(list(shades), pad=0.0)
        srange = shi - slo if shi > slo else 1.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
        f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="black"/>',
    ]
    for i in range(len(xs)):
        cx = _to_px(xs[i], xlo, xhi, WIDTH)
        cy = _to_px(ys[i], ylo, yhi, HEIGHT, invert=True)
        if shades is None:
            color = "#1f77b4"
        else:
            level = int(round(200 * (1.0 - (shades[i] - slo) / srange)))
            color = f"rgb({level},{level},{level})"
        parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="3" fill="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def line_chart_svg(series, title="", xlabel="", ylabel=""):
    """Overlaid polylines; series is a list of (label, y-values) pairs."""
    if not series:
        raise ValueError("need at least one series")
    all_y = [y for _, ys in series for y in ys]
    max_n = max(len(ys) for _, ys in series)
    ylo, yhi = _axis_range(all_y)
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
        f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="black"/>',
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{xlabel}</text>',
        f'<text x="16" y="{HEIGHT // 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {HEIGHT // 2})">{ylabel}</text>',
    ]
    for s, (label, ys) in enumerate(series):
        color = colors[s % len(colors)]
        pts = []
        for i, y in enumerate(ys):
            px = _to_px(i, 0, max(max_n - 1, 1), WIDTH)
            py = _to_px(y, ylo, yhi, HEIGHT, invert=True)
            pts.append(f"{_fmt(px)},{_fmt(py)}")
        parts.append(
            f'<polyline points="{" ".join(pts)}" fill="none" '
            f'stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 18 + 16 * s}" '
            f'text-anchor="end" font-family="sans-serif" font-size="12" '
            f'fill="{color}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
