"""PSNR / SSIM and the per-patch report aggregation."""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.signal

#: Sentinel PSNR for bit-identical images ("exact" rather than a finite dB
#: value); compares equal to math.inf and is excluded from report means.
PSNR_EXACT = math.inf


def psnr(reference, test, peak=1.0):
    """Peak signal-to-noise ratio in dB; PSNR_EXACT for identical inputs."""
    reference = np.asarray(reference, dtype=float)
    test = np.asarray(test, dtype=float)
    if reference.shape != test.shape:
        raise ValueError(f"shape mismatch: {reference.shape} vs {test.shape}")
    mse = float(np.mean((reference - test) ** 2))
    if mse == 0.0:
        return PSNR_EXACT
    return 10.0 * math.log10(peak * peak / mse)


def _gaussian_kernel(sigma=1.5, radius=5):
    x = np.arange(-radius, radius + 1, dtype=float)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def _filter_valid(img, kernel):
    # separable valid-mode convolution with the symmetric kernel
    tmp = scipy.signal.convolve(img, kernel[:, None], mode="valid")
    return scipy.signal.convolve(tmp, kernel[None, :], mode="valid")


def ssim(reference, test, peak=1.0, k1=0.01, k2=0.03, sigma=1.5,
         global_window=False):
    """Structural similarity index in [-1, 1].

    Windowed mode (default) averages the local SSIM map computed with an
    11x11 Gaussian window (sigma 1.5) over the region where the window
    fits entirely; it requires images of at least 11x11.  With
    ``global_window=True`` the statistics are taken over the whole image
    as a single window, which is the mode used for 16x16 patches.
    """
    x = np.asarray(reference, dtype=float)
    y = np.asarray(test, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    c1 = (k1 * peak) ** 2
    c2 = (k2 * peak) ** 2
    if global_window:
        ux, uy = x.mean(), y.mean()
        vx, vy = x.var(), y.var()
        vxy = float(np.mean((x - ux) * (y - uy)))
        return ((2 * ux * uy + c1) * (2 * vxy + c2)) / (
            (ux * ux + uy * uy + c1) * (vx + vy + c2)
        )
    if x.ndim != 2 or min(x.shape) < 11:
        raise ValueError("windowed SSIM needs a 2-D image of at least 11x11")
    kernel = _gaussian_kernel(sigma)
    ux = _filter_valid(x, kernel)
    uy = _filter_valid(y, kernel)
    vx = _filter_valid(x * x, kernel) - ux * ux
    vy = _filter_valid(y * y, kernel) - uy * uy
    vxy = _filter_valid(x * y, kernel) - ux * uy
    ssim_map = ((2 * ux * uy + c1) * (2 * vxy + c2)) / (
        (ux * ux + uy * uy + c1) * (vx + vy + c2)
    )
    return float(ssim_map.mean())


@dataclass
class RestorationReport:
    """Per-patch metrics plus their arithmetic means for one experiment."""

    psnr_per_patch: list
    ssim_per_patch: list
    mean_psnr: float
    mean_ssim: float
    exact_patches: int = 0
    config: dict = field(default_factory=dict)
    seed: int | None = None
    runtime_seconds: float | None = None


def aggregate_report(psnr_per_patch, ssim_per_patch, config=None, seed=None,
                     runtime_seconds=None):
    """Average per-patch metrics into a RestorationReport.

    Patches with an exact ("infinite") PSNR are excluded from the PSNR
    mean and counted separately.
    """
    psnr_per_patch = list(psnr_per_patch)
    ssim_per_patch = list(ssim_per_patch)
    if not psnr_per_patch or not ssim_per_patch:
        raise ValueError("metric lists must be non-empty")
    finite = [p for p in psnr_per_patch if math.isfinite(p)]
    exact = len(psnr_per_patch) - len(finite)
    mean_psnr = float(np.mean(finite)) if finite else PSNR_EXACT
    return RestorationReport(
        psnr_per_patch=psnr_per_patch,
        ssim_per_patch=ssim_per_patch,
        mean_psnr=mean_psnr,
        mean_ssim=float(np.mean(ssim_per_patch)),
        exact_patches=exact,
        config=dict(config) if config else {},
        seed=seed,
        runtime_seconds=runtime_seconds,
    )
