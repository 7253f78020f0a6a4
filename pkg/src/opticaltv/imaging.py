"""Image I/O, degradation, and the non-overlapping patch pipeline.

Images are 2-D float arrays with intensities nominally in [0, 1]
(pixel value k maps to k/255 on load).  Values may leave [0, 1] during
optimization; clamping happens only when writing files.
"""

import importlib.resources
from dataclasses import dataclass

import numpy as np

from . import solvers
from .operators import DifferenceOperator


def _parse_pgm(data, path):
    # binary PGM (P5), maxval 255, with '#' comments allowed in the header
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    tokens = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"{path}: truncated PGM header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    width, height, maxval = (int(t) for t in tokens)
    if maxval != 255:
        raise ValueError(f"{path}: only 8-bit PGM supported (maxval {maxval})")
    pixels = np.frombuffer(data, dtype=np.uint8, count=-1, offset=pos)
    if pixels.size < width * height:
        raise ValueError(f"{path}: truncated PGM pixel data")
    return pixels[: width * height].reshape(height, width)


def load_image(path):
    """Load an 8-bit grayscale PGM (binary P5) or PNG as floats in [0, 1]."""
    path = str(path)
    lower = path.lower()
    if lower.endswith(".pgm"):
        with open(path, "rb") as f:
            raw = _parse_pgm(f.read(), path)
    elif lower.endswith(".png"):
        from PIL import Image

        with Image.open(path) as im:
            if im.mode != "L":
                raise ValueError(f"{path}: expected 8-bit grayscale PNG, got mode {im.mode}")
            raw = np.asarray(im, dtype=np.uint8)
    else:
        raise ValueError(f"{path}: unsupported format (use .pgm or .png)")
    return raw.astype(float) / 255.0


def to_uint8(img):
    """Clamp to [0, 1] and quantize with round-half-away-from-zero."""
    clipped = np.clip(np.asarray(img, dtype=float), 0.0, 1.0)
    return np.floor(clipped * 255.0 + 0.5).astype(np.uint8)


def save_image(img, path):
    """Write an image as 8-bit grayscale PGM or PNG, clamped to [0, 255]."""
    path = str(path)
    u8 = to_uint8(img)
    lower = path.lower()
    if lower.endswith(".pgm"):
        h, w = u8.shape
        with open(path, "wb") as f:
            f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            f.write(u8.tobytes())
    elif lower.endswith(".png"):
        from PIL import Image

        Image.fromarray(u8, mode="L").save(path)
    else:
        raise ValueError(f"{path}: unsupported format (use .pgm or .png)")


def bundled_image_path(name):
    """Filesystem path of a bundled test image ('camera' or 'moon')."""
    ref = importlib.resources.files("opticaltv") / "data" / f"{name}.pgm"
    if not ref.is_file():
        raise ValueError(f"no bundled image named {name!r}")
    return str(ref)


def degrade(img, sigma=10.0 / 255.0, seed=None, rng=None):
    """Add i.i.d. zero-mean Gaussian noise with standard deviation sigma.

    The result is not clamped; the observed image is real-valued.
    """
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    img = np.asarray(img, dtype=float)
    if sigma == 0:
        return img.copy()
    if rng is None:
        rng = np.random.default_rng(seed)
    return img + rng.normal(0.0, sigma, img.shape)


@dataclass(frozen=True)
class PatchSet:
    """Non-overlapping square patches covering an image exactly."""

    patches: np.ndarray       # (count, p, p)
    image_shape: tuple        # (height, width)
    patch_size: int


def patchify(img, patch_size=16):
    """Split an image into non-overlapping patches in row-major block order."""
    img = np.asarray(img, dtype=float)
    h, w = img.shape
    p = int(patch_size)
    if p < 1 or h % p or w % p:
        raise ValueError(
            f"patch size {p} must divide both image dimensions {h}x{w}"
        )
    blocks = img.reshape(h // p, p, w // p, p).transpose(0, 2, 1, 3)
    return PatchSet(blocks.reshape(-1, p, p).copy(), (h, w), p)


def depatchify(patchset):
    """Reassemble patches into the original image; exact inverse of patchify."""
    h, w = patchset.image_shape
    p = patchset.patch_size
    blocks = patchset.patches.reshape(h // p, w // p, p, p).transpose(0, 2, 1, 3)
    return blocks.reshape(h, w).copy()


_SOLVER_TABLE = {
    ("admm", False): solvers.admm_tv,
    ("admm", True): solvers.admm_tv_noisy,
    ("pds", False): solvers.pds_tv,
    ("pds", True): solvers.pds_tv_noisy,
}


def _patch_rng(master_seed, index):
    # per-patch stream: results are independent of patch processing order
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(index)]))


def restore_image(observed, algo, cfg, noisy=None, patch_size=16, reference=None):
    """Denoise each patch independently with A = identity and reassemble.

    ``algo`` is "admm" or "pds"; ``noisy`` defaults to ``cfg.noise_enabled``.
    When a ``reference`` image is given, per-iteration PSNR and SSIM
    against the matching reference patch are recorded in each trace.
    Returns (restored image, list of per-patch SolverTrace).
    """
    if noisy is None:
        noisy = cfg.noise_enabled
    if algo not in ("admm", "pds"):
        raise ValueError(f"unknown algorithm {algo!r}")
    solve = _SOLVER_TABLE[(algo, bool(noisy))]
    obs = patchify(observed, patch_size)
    ref_patches = None
    if reference is not None:
        reference = np.asarray(reference, dtype=float)
        if reference.shape != obs.image_shape:
            raise ValueError("reference shape must match the observed image")
        ref_patches = patchify(reference, patch_size).patches
    p = obs.patch_size
    op = DifferenceOperator(p, p)
    restored = np.empty_like(obs.patches)
    traces = []
    from .metrics import psnr, ssim  # local import avoids a cycle

    for i, patch in enumerate(obs.patches):
        y = patch.flatten(order="F")
        metrics_fn = None
        if ref_patches is not None:
            ref = ref_patches[i]

            def metrics_fn(x, ref=ref):
                img = x.reshape(p, p, order="F")
                return psnr(ref, img), ssim(ref, img, global_window=True)

        kwargs = {"metrics_fn": metrics_fn}
        if noisy:
            kwargs["rng"] = _patch_rng(cfg.seed, i)
        x, trace = solve(y, None, op, cfg, **kwargs)
        restored[i] = x.reshape(p, p, order="F")
        traces.append(trace)
    return depatchify(PatchSet(restored, obs.image_shape, p)), traces
