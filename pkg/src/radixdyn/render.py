"""Byte-deterministic PPM (P6) and SVG pictures of depth-k tile clouds.

Each point N^-k q is drawn as the cell N^-k (q + B [-1/2, 1/2)^2), B being
a basis of the digit lattice. All numerators lie in one coset of that
lattice, so the cells meet edge to edge without overlap. A pixel with centre
c is painted when round(B^-1 (N^k c - q0)) is the lattice coordinate of a
numerator, which keeps the raster free of per-cell loops.

PPM layout: "P6", one comment line "# radixdyn system=<hash> depth=<k>",
"<width> <height>", "255", then RGB bytes row by row from the top.

SVG element order: XML declaration, the same comment, <svg>, <title>, a
background <rect>, then one <g> per first digit (ascending) holding that
piece's cell polygons in ascending numerator order.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .linalg import mat_pow
from .tiles import TileCloud

PALETTE = [
    (31, 64, 122), (196, 78, 52), (60, 130, 70), (214, 160, 40),
    (120, 72, 150), (40, 150, 160), (150, 60, 90), (90, 90, 90),
]
BACKGROUND = (255, 255, 255)
MARGIN = 4


class RenderError(ValueError):
    pass


def _frame(cloud: TileCloud, size: int):
    pts = np.array([[float(c) for c in p] for p in cloud.points])
    cell = np.array([[float(c) for c in v] for v in cloud.cell()])
    lo = pts.min(axis=0) + cell.min(axis=0)
    hi = pts.max(axis=0) + cell.max(axis=0)
    span = float(max(hi - lo))
    scale = (size - 2 * MARGIN) / span
    # centre the drawing inside the square canvas
    offset = (size - scale * (hi - lo)) / 2 - scale * lo
    return scale, offset


def _header_comment(cloud: TileCloud) -> str:
    return f"radixdyn system={cloud.system.fingerprint} depth={cloud.depth}"


def raster(cloud: TileCloud, size: int = 400) -> np.ndarray:
    """size x size x 3 uint8 image, row 0 at the top."""
    if cloud.system.dim != 2:
        raise RenderError("rendering needs a 2-dimensional system")
    scale, offset = _frame(cloud, size)
    ix = (np.arange(size) + 0.5 - offset[0]) / scale
    iy = (size - (np.arange(size) + 0.5) - offset[1]) / scale
    wx, wy = np.meshgrid(ix, iy)
    basis = np.array(cloud.cell_basis, dtype=float).T
    q0 = np.array(cloud.numerators[0], dtype=float)
    m = np.linalg.inv(basis) @ np.array(mat_pow(cloud.system.matrix, cloud.depth), dtype=float)
    shift = np.linalg.inv(basis) @ q0
    ux = np.floor(m[0, 0] * wx + m[0, 1] * wy - shift[0] + 0.5).astype(np.int64)
    uy = np.floor(m[1, 0] * wx + m[1, 1] * wy - shift[1] + 0.5).astype(np.int64)
    raw = np.array(cloud.numerators, dtype=float) - q0
    nums = np.rint(raw @ np.linalg.inv(basis).T).astype(np.int64)
    x0, y0 = nums[:, 0].min(), nums[:, 1].min()
    width = int(nums[:, 1].max() - y0 + 1)
    keys = (nums[:, 0] - x0) * width + (nums[:, 1] - y0)
    order = np.argsort(keys)
    keys = keys[order]
    colours = np.array([PALETTE[d % len(PALETTE)] for d in cloud.first_digit], dtype=np.uint8)[order]
    probe = (ux - x0) * width + (uy - y0)
    inside = (ux >= x0) & (uy >= y0) & (uy - y0 < width)
    pos = np.clip(np.searchsorted(keys, probe), 0, len(keys) - 1)
    hit = inside & (keys[pos] == probe)
    img = np.empty((size, size, 3), dtype=np.uint8)
    img[:] = BACKGROUND
    img[hit] = colours[pos[hit]]
    return img


def ppm_bytes(cloud: TileCloud, size: int = 400) -> bytes:
    img = raster(cloud, size)
    header = f"P6\n# {_header_comment(cloud)}\n{size} {size}\n255\n".encode("ascii")
    return header + img.tobytes()


def svg_text(cloud: TileCloud, size: int = 400) -> str:
    if cloud.system.dim != 2:
        raise RenderError("rendering needs a 2-dimensional system")
    scale, offset = _frame(cloud, size)
    cell = [(float(a), float(b)) for a, b in cloud.cell()]

    def px(x: float, y: float) -> str:
        return f"{offset[0] + scale * x:.3f},{size - (offset[1] + scale * y):.3f}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- {_header_comment(cloud)} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<title>tile depth {cloud.depth}</title>",
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="rgb{BACKGROUND}"/>',
    ]
    groups: dict[int, list[str]] = {}
    for pt, d in zip(cloud.points, cloud.first_digit):
        x, y = float(pt[0]), float(pt[1])
        corners = " ".join(px(x + cx, y + cy) for cx, cy in cell)
        groups.setdefault(d, []).append(f'<polygon points="{corners}"/>')
    for d in sorted(groups):
        r, g, b = PALETTE[d % len(PALETTE)]
        lines.append(f'<g fill="rgb({r},{g},{b})" stroke="none">')
        lines.extend(groups[d])
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render(cloud: TileCloud, path: str | Path, fmt: str = "ppm", size: int = 400) -> Path:
    path = Path(path)
    if fmt == "ppm":
        path.write_bytes(ppm_bytes(cloud, size))
    elif fmt == "svg":
        path.write_text(svg_text(cloud, size), encoding="utf-8")
    else:
        raise RenderError(f"unknown format {fmt!r}")
    return path
