"""Deterministic SVG rendering of planar bodies, coverings and illumination.

All coordinates are printed with six decimals and elements are emitted in a
fixed order, so the same input always yields the byte-identical document.
The y axis is flipped once at the root group so the picture uses mathematical
orientation.
"""

from __future__ import annotations

import numpy as np

from .bodies import Body, DomainError, as_polytope, interior_point
from .covering import CoverConfig
from .geometry import direction_grid_2d, support_points
from .illumination import IlluminationConfig, XrayConfig

BODY_STYLE = 'fill="none" stroke="#1f2430" stroke-width="{w}"'
HOMOTHET_STYLE = ('fill="#4a90d9" fill-opacity="0.22" stroke="#2d6cb0" '
                  'stroke-width="{w}"')
RAY_STYLE = 'stroke="#c2452d" stroke-width="{w}"'
SOURCE_STYLE = 'fill="#c2452d"'
XRAY_STYLE = 'stroke="#3e7d3a" stroke-width="{w}"'


def _fmt(x: float) -> str:
    s = f"{float(x):.6f}"
    return "0.000000" if s == "-0.000000" else s


def _outline(K: Body, n: int = 256) -> np.ndarray:
    P = as_polytope(K)
    if P is not None:
        return P.vertices
    return support_points(K, direction_grid_2d(n))


def _poly_tag(V: np.ndarray, style: str) -> str:
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in V)
    return f'<polygon points="{pts}" {style}/>'


def _arrowhead(tip: np.ndarray, v: np.ndarray, size: float, cls: str, fill: str) -> str:
    u = v / np.linalg.norm(v)
    n = np.array([-u[1], u[0]])
    a = tip - size * u + 0.45 * size * n
    b = tip - size * u - 0.45 * size * n
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (tip, a, b))
    return f'<polygon class="{cls}" points="{pts}" fill="{fill}"/>'


def render_svg(K: Body, overlay=None) -> str:
    """SVG text for a planar body with an optional covering, illumination or
    X-ray overlay; raises for 3D bodies (project to the plane first)."""
    if K.dim == 3:
        raise DomainError("3D rendering is unsupported; render a planar "
                          "projection instead (no projection flag implemented)")
    if K.dim != 2:
        raise DomainError("render_svg draws planar bodies")
    V = _outline(K)
    lo = V.min(axis=0)
    hi = V.max(axis=0)
    span = hi - lo
    pad = 0.2 * float(span.max())
    c = interior_point(K)
    radius = float(np.linalg.norm(V - c, axis=1).max())
    far = 1.45 * radius
    if overlay is not None and not isinstance(overlay, CoverConfig):
        lo = lo - 0.35 * span.max()
        hi = hi + 0.35 * span.max()
        span = hi - lo
    x0, y0 = lo[0] - pad, -(hi[1] + pad)
    w, h = span[0] + 2 * pad, span[1] + 2 * pad
    sw = 0.008 * max(w, h)
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}" '
        'width="640" height="640">',
        '<g transform="scale(1,-1)">',
        _poly_tag(V, BODY_STYLE.format(w=_fmt(sw))),
    ]
    if isinstance(overlay, CoverConfig):
        style = HOMOTHET_STYLE.format(w=_fmt(0.6 * sw))
        for hm in overlay.homothets:
            t = np.asarray(hm.t, dtype=float)
            parts.append(_poly_tag(V * hm.lam + t, style))
    elif isinstance(overlay, IlluminationConfig):
        size = 0.06 * radius
        if overlay.mode == "directions":
            for v in overlay.directions:
                u = np.asarray(v, dtype=float)
                u = u / np.linalg.norm(u)
                tail = c - far * u
                tip = c - 1.12 * radius * u
                parts.append(f'<line class="ray" x1="{_fmt(tail[0])}" '
                             f'y1="{_fmt(tail[1])}" x2="{_fmt(tip[0])}" '
                             f'y2="{_fmt(tip[1])}" {RAY_STYLE.format(w=_fmt(0.8 * sw))}/>')
                parts.append(_arrowhead(tip, u, size, "arrowhead", "#c2452d"))
        else:
            for p in overlay.sources:
                q = np.asarray(p, dtype=float)
                parts.append(f'<circle class="source" cx="{_fmt(q[0])}" '
                             f'cy="{_fmt(q[1])}" r="{_fmt(0.035 * radius)}" '
                             f'{SOURCE_STYLE}/>')
    elif isinstance(overlay, XrayConfig):
        size = 0.06 * radius
        for v in overlay.lines:
            u = np.asarray(v, dtype=float)
            a = c - far * u
            b = c + far * u
            parts.append(f'<line class="xray" x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" '
                         f'x2="{_fmt(b[0])}" y2="{_fmt(b[1])}" '
                         f'{XRAY_STYLE.format(w=_fmt(0.8 * sw))}/>')
            parts.append(_arrowhead(b, u, size, "arrowhead", "#3e7d3a"))
            parts.append(_arrowhead(a, -u, size, "arrowhead", "#3e7d3a"))
    elif overlay is not None:
        raise DomainError(f"unsupported overlay type {type(overlay).__name__}")
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
