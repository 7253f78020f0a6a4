"""TV-regularized image restoration with ADMM/PDS and optical-amplifier
noise simulation."""

from .imaging import (
    PatchSet,
    bundled_image_path,
    degrade,
    depatchify,
    load_image,
    patchify,
    restore_image,
    save_image,
)
from .metrics import PSNR_EXACT, RestorationReport, aggregate_report, psnr, ssim
from .operators import AdmmLinearSolver, DifferenceOperator, FactorizationError
from .optics import (
    AmplifierNoiseModel,
    REFERENCE_NOISE_TABLE,
    beam_splitter_combine,
    gain_for_scalar_multiply,
    power,
    signal_splitter,
)
from .prox import prox_conjugate, prox_group_l12, prox_numeric_oracle
from .solvers import (
    SolverConfig,
    SolverTrace,
    admm_tv,
    admm_tv_noisy,
    objective,
    pds_tv,
    pds_tv_noisy,
)

__version__ = "0.1.0"
