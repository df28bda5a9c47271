"""SVG and CSV rendering of the prefix path inside the factor strip."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional

from .core import Substitution
from .geometry import gamma_path, phi_strip
from .language import ExcessProfile

UNIT = 8        # pixels per lattice unit
MARGIN = 24
BAND_FILL = "#999999"
TICK_EVERY = 8


@dataclass(frozen=True)
class Figure:
    svg: str
    path_csv: str
    envelope_csv: str


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def export_figure(s: Substitution, J: int, profile: Optional[ExcessProfile] = None) -> Figure:
    path = gamma_path(s, J).points
    if profile is None:
        profile = ExcessProfile(0, (), ())
    strip = phi_strip(profile)

    xs = [x for x, _ in path] + [x for x, _ in strip.lower]
    ys = [y for _, y in path] + [y for _, y in strip.upper]
    xmax = max(xs + [1])
    ymax = max(ys + [1])
    width = 2 * MARGIN + UNIT * xmax
    height = 2 * MARGIN + UNIT * ymax

    def px(x, y):
        return f"{MARGIN + UNIT * x},{MARGIN + UNIT * (ymax - y)}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if profile.N > 0:
        ring = list(strip.upper) + list(reversed(strip.lower))
        pts = " ".join(px(x, y) for x, y in ring)
        lines.append(f'<polygon id="phi" points="{pts}" fill="{BAND_FILL}" stroke="none"/>')
    lines.append(f'<g id="axes" stroke="black" stroke-width="1">')
    lines.append(f'<line x1="{MARGIN}" y1="{MARGIN + UNIT * ymax}" '
                 f'x2="{MARGIN + UNIT * xmax}" y2="{MARGIN + UNIT * ymax}"/>')
    lines.append(f'<line x1="{MARGIN}" y1="{MARGIN + UNIT * ymax}" '
                 f'x2="{MARGIN}" y2="{MARGIN}"/>')
    for x in range(0, xmax + 1, TICK_EVERY):
        X = MARGIN + UNIT * x
        lines.append(f'<line x1="{X}" y1="{MARGIN + UNIT * ymax}" x2="{X}" '
                     f'y2="{MARGIN + UNIT * ymax + 4}"/>')
    for y in range(0, ymax + 1, TICK_EVERY):
        Y = MARGIN + UNIT * (ymax - y)
        lines.append(f'<line x1="{MARGIN - 4}" y1="{Y}" x2="{MARGIN}" y2="{Y}"/>')
    lines.append("</g>")
    if len(path) > 1:
        pts = " ".join(px(x, y) for x, y in path)
        lines.append(f'<polyline id="gamma" points="{pts}" fill="none" '
                     f'stroke="black" stroke-width="2"/>')
    lines.append("</svg>")
    svg = "\n".join(lines) + "\n"

    path_csv = _csv(["j", "x", "y"], [(j, x, y) for j, (x, y) in enumerate(path)])
    env_csv = _csv(["n", "ax", "ay", "bx", "by"],
                   [(n, *strip.upper[n], *strip.lower[n]) for n in range(profile.N + 1)])
    return Figure(svg, path_csv, env_csv)
