"""
SVG rendering of triangular spirals, optionally over a raster underlay.

Output is a pure function of its inputs: fixed number formatting, no
timestamps, no ids that depend on memory addresses.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from xml.sax.saxutils import quoteattr

import numpy as np

from .core import SpiralSpec, _vertex_arrays, growth_rate

__all__ = ["RenderOptions", "chord_count", "write_spiral_svg", "spiral_svg"]


@dataclass(frozen=True)
class RenderOptions:
    """Styling and layout for :func:`write_spiral_svg`.

    ``scale`` maps spiral length units to pixels; ``None`` fits the
    outermost vertex inside the canvas. ``center`` defaults to the canvas
    middle. ``underlay`` is a raster file path that is referenced, never
    read.
    """

    turns: float = 2.0
    width: int = 800
    height: int = 800
    center: tuple[float, float] | None = None
    scale: float | None = None
    spiral_stroke: str = "#1f3b73"
    spiral_width: float = 2.0
    triangle_stroke: str = "#8a8a8a"
    triangle_width: float = 0.75
    envelope_stroke: str = "#c0392b"
    envelope_width: float = 1.0
    guide_stroke: str = "#cccccc"
    guide_width: float = 0.5
    show_triangles: bool = False
    show_envelope: bool = False
    show_guides: bool = False
    underlay: str | None = None
    underlay_opacity: float = 1.0

    def __post_init__(self):
        if not self.turns > 0:
            raise ValueError(f"turns must be positive, got {self.turns}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas size must be positive")
        if self.scale is not None and not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if not 0.0 <= self.underlay_opacity <= 1.0:
            raise ValueError(f"opacity must lie in [0, 1], got {self.underlay_opacity}")


def chord_count(spec: SpiralSpec, turns: float) -> int:
    # tolerance keeps e.g. turns=0.1 * mod=10 from flooring to 0
    return int(math.floor(turns * spec.mod + 1e-9))


def _fmt(x):
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _path(xs, ys):
    parts = [f"M {_fmt(xs[0])} {_fmt(ys[0])}"]
    parts += [f"L {_fmt(x)} {_fmt(y)}" for x, y in zip(xs[1:], ys[1:])]
    return " ".join(parts)


def spiral_svg(spec: SpiralSpec, options: RenderOptions = RenderOptions(), href_base=None) -> str:
    """Return the SVG document as text. See :func:`write_spiral_svg`."""
    opt = options
    chords = chord_count(spec, opt.turns)
    r, ang = _vertex_arrays(spec, chords + 1)
    cx, cy = opt.center if opt.center is not None else (opt.width / 2, opt.height / 2)
    scale = opt.scale
    if scale is None:
        reach = min(cx, cy, opt.width - cx, opt.height - cy)
        scale = 0.95 * reach / r.max() if reach > 0 else 1.0

    def px(rr, aa):
        return cx + scale * rr * np.cos(aa), cy - scale * rr * np.sin(aa)

    vx, vy = px(r, ang)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{opt.width}" height="{opt.height}" '
        f'viewBox="0 0 {opt.width} {opt.height}">',
        f"<desc>triangular spiral mod {spec.mod} seed {spec.seed!r} phase {spec.phase!r} "
        f"{spec.handedness.value} turns {opt.turns!r}</desc>",
    ]
    if opt.underlay is not None:
        if not os.path.isfile(opt.underlay):
            raise FileNotFoundError(f"underlay image not found: {opt.underlay}")
        href = opt.underlay
        if href_base is not None:
            href = os.path.relpath(opt.underlay, href_base)
        href = href.replace(os.sep, "/")
        out.append(
            f'<image id="underlay" href={quoteattr(href)} x="0" y="0" width="{opt.width}" '
            f'height="{opt.height}" opacity="{_fmt(opt.underlay_opacity)}" '
            'preserveAspectRatio="xMidYMid meet"/>'
        )
    if opt.show_guides:
        out.append(f'<g id="guides" fill="none" stroke="{opt.guide_stroke}" '
                   f'stroke-width="{_fmt(opt.guide_width)}">')
        for n in range(0, chords + 1, spec.mod):
            out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(scale * r[n])}"/>')
        out.append("</g>")
    if opt.show_triangles:
        out.append(f'<g id="triangles" stroke="{opt.triangle_stroke}" '
                   f'stroke-width="{_fmt(opt.triangle_width)}">')
        for x, y in zip(vx, vy):
            out.append(f'<line x1="{_fmt(cx)}" y1="{_fmt(cy)}" x2="{_fmt(x)}" y2="{_fmt(y)}"/>')
        out.append("</g>")
    if opt.show_envelope:
        steps = 16 * chords
        local = np.linspace(0.0, chords * spec.phi0, steps + 1)
        er = spec.seed * np.exp(growth_rate(spec.phi0) * local)
        ea = spec.handedness.sign * (local + spec.phase)
        ex, ey = px(er, ea)
        out.append(f'<path id="envelope" fill="none" stroke="{opt.envelope_stroke}" '
                   f'stroke-width="{_fmt(opt.envelope_width)}" d="{_path(ex, ey)}"/>')
    out.append(f'<path id="chords" fill="none" stroke="{opt.spiral_stroke}" '
               f'stroke-width="{_fmt(opt.spiral_width)}" d="{_path(vx, vy)}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_spiral_svg(spec: SpiralSpec, options: RenderOptions = RenderOptions(), sink=None,
                     href_base=None):
    """Render a spiral as a standalone SVG document.

    The chord polyline (``<path id="chords">``, one ``L`` command per chord)
    covers ``floor(turns * mod)`` chords. Optional layers: apex rays of every
    triangle, the smooth envelope, guide circles through each full-turn
    vertex, and an underlay ``<image>`` placed first so it sits beneath all
    geometry. ``href_base`` makes the underlay reference relative to that
    directory (normally the SVG's own folder).

    ``sink`` may be a path or a binary/text stream; with no sink the
    document is returned.
    """
    text = spiral_svg(spec, options, href_base)
    if sink is None:
        return text
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    elif hasattr(sink, "encoding"):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))
