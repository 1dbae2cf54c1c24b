"""CSV, JSON and SVG writers with deterministic formatting."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1
TRAJECTORY_HEADER = ("t", "sx", "sy", "sz", "method")
ENTROPY_HEADER = ("t", "entropy", "s_eq", "method")


def fmt(x) -> str:
    """Shortest round-trip decimal, independent of locale."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_csv(path):
    text = Path(path).read_text(encoding="utf-8").splitlines()
    header = text[0].split(",")
    return header, [line.split(",") for line in text[1:]]


def write_trajectory_csv(path, traj, time_scale: float = 1.0):
    rows = zip(traj.times * time_scale, traj.sx, traj.sy, traj.sz, [traj.method] * len(traj))
    return write_csv(path, TRAJECTORY_HEADER, rows)


def write_entropy_csv(path, series, time_scale: float = 1.0):
    n = len(series.times)
    rows = zip(series.times * time_scale, series.s_values, [series.s_eq] * n, [series.method] * n)
    return write_csv(path, ENTROPY_HEADER, rows)


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = {"schema_version": SCHEMA_VERSION, **_clean(payload)}
    path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b")


def write_svg(path, series, title="", xlabel="", ylabel="", width=640, height=400):
    """Static line plot of precomputed ``(label, x, y)`` series."""
    pad_l, pad_r, pad_t, pad_b = 60, 140, 30, 45
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(np.min(xs)), float(np.max(xs))
    y0, y1 = float(np.min(ys)), float(np.max(ys))
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = width - pad_l - pad_r, height - pad_t - pad_b
    sx = lambda x: pad_l + (x - x0) / (x1 - x0) * pw
    sy = lambda y: pad_t + (1 - (y - y0) / (y1 - y0)) * ph
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect x="{pad_l}" y="{pad_t}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>',
        f'<text x="{pad_l + pw / 2:.1f}" y="18" text-anchor="middle">{title}</text>',
        f'<text x="{pad_l + pw / 2:.1f}" y="{height - 8}" text-anchor="middle">{xlabel}</text>',
        f'<text x="14" y="{pad_t + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {pad_t + ph / 2:.1f})">{ylabel}</text>',
    ]
    for v, anchor in ((x0, "start"), (x1, "end")):
        out.append(f'<text x="{sx(v):.1f}" y="{pad_t + ph + 16}" text-anchor="{anchor}">{v:.4g}</text>')
    for v in (y0, y1):
        out.append(f'<text x="{pad_l - 6}" y="{sy(v) + 4:.1f}" text-anchor="end">{v:.4g}</text>')
    for k, (label, x, y) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        ly = pad_t + 14 + 16 * k
        out.append(f'<line x1="{pad_l + pw + 10}" y1="{ly - 4}" x2="{pad_l + pw + 30}" '
                   f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{pad_l + pw + 34}" y="{ly}">{label}</text>')
    out.append("</svg>")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return path
