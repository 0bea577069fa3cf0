"""
PGM (portable graymap) reading and writing.

P5 (binary, 8-bit, maxval 255) is the canonical interchange format:
round-trips are bit-exact for 8-bit data.  The P2 (ASCII) variant is
accepted on read for hand-written test fixtures.  Pixel k maps to
intensity k/255.  8-bit grayscale PNG decoding is available when Pillow
is installed.
"""

import numpy as np

__all__ = ["read_pgm", "write_pgm", "read_image", "quantize_to_bytes"]


def _read_tokens(data, n_tokens):
    """Pull whitespace/comment-separated header tokens off the front of
    `data`; returns (tokens, remainder)."""
    tokens = []
    i = 0
    while len(tokens) < n_tokens:
        if i >= len(data):
            raise ValueError("truncated PGM header")
        c = data[i : i + 1]
        if c == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace():
                j += 1
            tokens.append(data[i:j])
            i = j
    return tokens, i


def read_pgm(path):
    """Read a P5 or P2 graymap as a float image in [0, 1]."""
    with open(path, "rb") as fh:
        data = fh.read()
    (magic,), i = _read_tokens(data, 1)
    if magic not in (b"P5", b"P2"):
        raise ValueError("not a PGM file (magic %r)" % magic)
    (w_tok, h_tok, max_tok), j = _read_tokens(data[i:], 3)
    width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    if width < 1 or height < 1:
        raise ValueError("bad PGM dimensions %dx%d" % (width, height))
    if maxval != 255:
        raise ValueError("only 8-bit (maxval 255) PGM supported, got %d" % maxval)
    body = data[i + j :]
    if magic == b"P5":
        body = body[1:]  # single whitespace byte after maxval
        if len(body) < width * height:
            raise ValueError("truncated PGM pixel data")
        raw = np.frombuffer(body[: width * height], dtype=np.uint8)
    else:
        values = body.split()
        if len(values) < width * height:
            raise ValueError("truncated PGM pixel data")
        raw = np.array([int(v) for v in values[: width * height]], dtype=np.uint8)
    return raw.reshape((height, width)).astype(float) / 255.0


def quantize_to_bytes(img):
    """Round intensities to the nearest k/255 level, clipping to [0, 1]."""
    img = np.asarray(img, dtype=float)
    return np.clip(np.rint(np.clip(img, 0.0, 1.0) * 255.0), 0, 255).astype(np.uint8)


def write_pgm(path, img):
    """Write a float image in [0, 1] as binary 8-bit P5."""
    raw = quantize_to_bytes(img)
    if raw.ndim != 2:
        raise ValueError("expected a 2-D image")
    h, w = raw.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(raw.tobytes())


def read_image(path):
    """Read PGM, or 8-bit grayscale PNG when Pillow is available."""
    path = str(path)
    if path.lower().endswith(".png"):
        try:
            from PIL import Image
        except ImportError as exc:
            raise RuntimeError(
                "PNG support requires Pillow (install the 'png' extra)"
            ) from exc
        with Image.open(path) as im:
            if im.mode != "L":
                im = im.convert("L")
            return np.asarray(im, dtype=float) / 255.0
    return read_pgm(path)
