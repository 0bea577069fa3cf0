"""Regenerate the 128x128 grayscale test fixtures from scikit-image's
bundled photographs (block-averaged, center-cropped, 8-bit PGM)."""

import os
import sys

import numpy as np
from skimage import data

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
from mfpca.pgm import write_pgm  # noqa: E402

OUT = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")
SIDE = 128


def to_fixture(img):
    img = img.astype(float) / 255.0
    h, w = img.shape
    side = min(h, w)
    f = side // SIDE
    crop = f * SIDE
    r0, c0 = (h - crop) // 2, (w - crop) // 2
    img = img[r0 : r0 + crop, c0 : c0 + crop]
    return img.reshape(SIDE, f, SIDE, f).mean(axis=(1, 3))


def main():
    os.makedirs(OUT, exist_ok=True)
    for name in ("camera", "moon", "coins"):
        img = to_fixture(getattr(data, name)())
        path = os.path.join(OUT, "%s_128.pgm" % name)
        write_pgm(path, img)
        print("wrote", path, img.shape)


if __name__ == "__main__":
    main()
