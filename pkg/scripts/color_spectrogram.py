"""Colour image as a pure quaternion field: spectrograms and reconstruction.

Reads an RGB PNG (or builds a synthetic test card), maps (R, G, B) to the
(i, j, k) components, computes windowed coefficients and writes magnitude
spectrograms at a few window positions plus the reconstructed image.

    python3 scripts/color_spectrogram.py --output out/ [--image photo.png]
"""
import argparse
from pathlib import Path

import numpy as np
from PIL import Image

from qwolct import GridSpec, OlctParams, QField, WindowSpec, analyze, l2_norm, synthesize
from qwolct.io import read_png_field, write_magnitude_png, write_rgb_png
from qwolct.quat import qnorm


def test_card(grid: GridSpec) -> QField:
    t1, t2 = grid.coords()
    r = np.hypot(t1, t2)
    rgb = np.stack(
        [
            0.5 + 0.5 * np.cos(1.5 * t1),
            np.exp(-((t1 - 2) ** 2 + (t2 + 1) ** 2) / 4),
            (r < 3).astype(float) * 0.8,
        ],
        axis=-1,
    )
    samples = np.zeros(grid.shape + (4,))
    samples[..., 1:] = rgb
    return QField(grid, samples)


def padded(grid: GridSpec, m: int) -> GridSpec:
    """Window positions extending ``m`` samples past every edge of the image.

    Without them pixels near the border are covered by fewer windows and
    synthesis under-weights them.
    """
    return GridSpec(
        grid.n1 + 2 * m, grid.n2 + 2 * m, grid.dt1, grid.dt2, grid.origin1 - m * grid.dt1, grid.origin2 - m * grid.dt2
    )


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--image", type=Path)
    p.add_argument("--output", type=Path, default=Path("spectrogram_out"))
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--pad", type=int, help="extra window positions per edge (default: 3 sigma)")
    args = p.parse_args()
    args.output.mkdir(parents=True, exist_ok=True)
    if args.image:
        w, h = Image.open(args.image).size
        grid = GridSpec.symmetric(h, 16.0 / h, w, 16.0 / w)
        f = read_png_field(args.image, grid)
    else:
        grid = GridSpec.symmetric(args.n, 16.0 / args.n)
        f = test_card(grid)
    write_rgb_png(f, args.output / "input.png")
    A1 = OlctParams(1.0, 2.0, 0.5, 2.0, 0.3, -0.2)
    A2 = OlctParams(0.0, 1.0, -1.0, 0.0)
    g = WindowSpec.gaussian(grid, args.sigma)
    m = args.pad if args.pad is not None else int(np.ceil(3 * args.sigma / min(grid.dt1, grid.dt2)))
    ugrid = padded(grid, m)
    C = analyze(f, g, A1, A2, ugrid=ugrid)
    for frac in (0.25, 0.5, 0.75):
        i, j = m + int(frac * grid.n1), m + int(frac * grid.n2)
        peak = write_magnitude_png(qnorm(C.samples[i, j]), args.output / f"spectrogram_{i}_{j}.png")
        print(f"u = ({ugrid.t1[i]:+.2f}, {ugrid.t2[j]:+.2f}): peak |C| = {peak:.4e}")
    fh = synthesize(C, g)
    write_rgb_png(fh, args.output / "reconstructed.png")
    print(f"relative reconstruction error: {l2_norm(fh - f) / l2_norm(f):.3e}")


if __name__ == "__main__":
    main()
