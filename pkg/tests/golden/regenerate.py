"""Rewrite the golden PPM files. Run only when the rendering contract changes on purpose."""

from pathlib import Path

from radixdyn.catalog import NAMED
from radixdyn.render import ppm_bytes
from radixdyn.tiles import tile_points

SIZE = 256
DEPTHS = {
    "shark": 7,
    "twin-dragon": 12,
    "red-cross": 5,
    "cloud-three": 5,
    "cloud-five": 5,
    "cloud-nine": 5,
}

if __name__ == "__main__":
    here = Path(__file__).parent
    for name, depth in DEPTHS.items():
        data = ppm_bytes(tile_points(NAMED[name](), depth), SIZE)
        (here / f"{name}-d{depth}.ppm").write_bytes(data)
        print(name, depth, len(data))
