"""TV-regularized restoration solvers: ADMM, PDS, and their circuit-noise
variants.

All four solvers minimize 0.5*||A x - y||^2 + lambda*||D x||_{1,2} for a
fixed iteration count.  The noisy variants model the additive noise of the
optical amplifiers in an analog-circuit implementation: a fixed set of
gain-specific noise vectors is injected each iteration, plus extra noise
whenever a step-size multiplication amounts to amplification (scale > 1).

Noise draws occur in a fixed documented order per iteration so seeded runs
are bit-reproducible:
  ADMM: n256 (length 2N), then the 1/gamma-multiply noise (length N) when
        1/gamma > 1.
  PDS:  n32 (N), n16 (2N), n2 (N), n256 (2N), then the gamma1-multiply
        noise (N) when gamma1 > 1, then the gamma2-multiply noise (2N)
        when gamma2 > 1.

With the amplifier model's ``sim_scale`` set to 0 every draw is a zero
vector and the noisy variants produce bit-identical output to their
noiseless counterparts.
"""

import functools
import warnings
from dataclasses import dataclass, field

import numpy as np

from .operators import AdmmLinearSolver, DifferenceOperator
from .optics import AmplifierNoiseModel, gain_for_scalar_multiply
from .prox import prox_group_l12

# Operator-norm bound used only in the PDS step-size warning:
# ||D||^2 <= ||D_v||^2 + ||D_h||^2 <= 4 + 4.
_D_NORM_SQ_BOUND = 8.0


@dataclass
class SolverConfig:
    """Algorithm parameters shared by all solvers."""

    lam: float = 0.03
    gamma: float = 10.0      # ADMM step
    gamma1: float = 0.1      # PDS primal step
    gamma2: float = 1.0      # PDS dual step
    iterations: int = 50
    noise_enabled: bool = False
    noise_model: AmplifierNoiseModel = field(default_factory=AmplifierNoiseModel)
    seed: int = 0

    def __post_init__(self):
        for name in ("lam", "gamma", "gamma1", "gamma2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


@dataclass
class SolverTrace:
    """Per-iteration diagnostics; lists all have length ``iterations``."""

    objective: list = field(default_factory=list)
    psnr: list = field(default_factory=list)
    ssim: list = field(default_factory=list)


def objective(x, y, A, op, lam):
    """Objective value 0.5*||A x - y||^2 + lam * TV(x)."""
    x = np.asarray(x)
    y = np.asarray(y)
    r = (x if A is None else A @ x) - y
    return 0.5 * float(r @ r) + lam * op.tv_seminorm(x)


def _record(trace, x, y, A, op, cfg, metrics_fn):
    trace.objective.append(objective(x, y, A, op, cfg.lam))
    if metrics_fn is not None:
        p, s = metrics_fn(x)
        trace.psnr.append(p)
        trace.ssim.append(s)


@functools.lru_cache(maxsize=8)
def _identity_solver(n1, n2, gamma):
    # the factorization only depends on (shape, gamma) when A is the
    # identity; sharing it across patches avoids refactorizing per patch
    return AdmmLinearSolver(None, DifferenceOperator(n1, n2), gamma)


def _admm_run(y, A, op, cfg, z0, v0, rng, metrics_fn):
    n = op.size
    y = np.asarray(y, dtype=float)
    z = np.zeros(2 * n) if z0 is None else np.asarray(z0, dtype=float).copy()
    v = np.zeros(2 * n) if v0 is None else np.asarray(v0, dtype=float).copy()
    if z.shape != (2 * n,) or v.shape != (2 * n,):
        raise ValueError(f"initial z and v must have length {2 * n}")
    if A is None:
        solver = _identity_solver(op.n1, op.n2, cfg.gamma)
    else:
        solver = AdmmLinearSolver(A, op, cfg.gamma)
    aty = y if A is None else A.T @ y
    inv_gamma = 1.0 / cfg.gamma
    amp_gain = gain_for_scalar_multiply(inv_gamma)
    model = cfg.noise_model
    trace = SolverTrace()
    for _ in range(cfg.iterations):
        if rng is not None:
            n256 = model.sample_noise_vector(256, 2 * n, rng)
        scaled = inv_gamma * op.apply_transpose(z - v)
        if rng is not None and amp_gain is not None:
            scaled = scaled + model.sample_noise_vector(amp_gain, n, rng)
        x = solver.solve(aty + scaled)
        u = op.apply(x) + v
        if rng is not None:
            # the amplified signal D x + v + n256 feeds both the prox
            # input and the dual update; one physical signal, one draw
            u = u + n256
        z = prox_group_l12(u, cfg.gamma * cfg.lam)
        v = u - z
        _record(trace, x, y, A, op, cfg, metrics_fn)
    return x, trace


def _pds_step_warning(A, cfg):
    beta = 1.0 if A is None else float(np.linalg.norm(A, 2)) ** 2
    bound = cfg.gamma1 * (beta / 2.0 + cfg.gamma2 * _D_NORM_SQ_BOUND)
    if bound > 1.0:
        warnings.warn(
            f"PDS step sizes exceed the standard convergence range "
            f"(gamma1*(beta/2 + 8*gamma2) = {bound:.3g} > 1); "
            "continuing anyway",
            RuntimeWarning,
            stacklevel=3,
        )


def _pds_run(y, A, op, cfg, x0, v0, rng, metrics_fn):
    n = op.size
    y = np.asarray(y, dtype=float)
    if x0 is None:
        if A is not None:
            raise ValueError("x0 is required when A is not the identity")
        x = y.copy()
    else:
        x = np.asarray(x0, dtype=float).copy()
    v = np.zeros(2 * n) if v0 is None else np.asarray(v0, dtype=float).copy()
    if x.shape != (n,) or v.shape != (2 * n,):
        raise ValueError(f"initial x must have length {n} and v length {2 * n}")
    _pds_step_warning(A, cfg)
    aty = y if A is None else A.T @ y
    amp_gain1 = gain_for_scalar_multiply(cfg.gamma1)
    amp_gain2 = gain_for_scalar_multiply(cfg.gamma2)
    model = cfg.noise_model
    trace = SolverTrace()
    for _ in range(cfg.iterations):
        if rng is not None:
            n32 = model.sample_noise_vector(32, n, rng)
            n16 = model.sample_noise_vector(16, 2 * n, rng)
            n2 = model.sample_noise_vector(2, n, rng)
            n256 = model.sample_noise_vector(256, 2 * n, rng)
        xn = x + n32 if rng is not None else x
        grad = (xn - y) if A is None else A.T @ (A @ xn) - aty
        step = cfg.gamma1 * (grad + op.apply_transpose(v))
        if rng is not None and amp_gain1 is not None:
            step = step + model.sample_noise_vector(amp_gain1, n, rng)
        x_new = xn - step
        u = 2.0 * x_new
        if rng is not None:
            u = u + n2
        w = cfg.gamma2 * op.apply(u - x)
        if rng is not None and amp_gain2 is not None:
            w = w + model.sample_noise_vector(amp_gain2, 2 * n, rng)
        z = ((v + n16) if rng is not None else v) + w
        if rng is not None:
            z = z + n256
        v = z - prox_group_l12(z, cfg.lam)
        x = x_new
        _record(trace, x, y, A, op, cfg, metrics_fn)
    return x, trace


def admm_tv(y, A, op, cfg, z0=None, v0=None, metrics_fn=None):
    """Noiseless ADMM; returns (x, trace).

    The x-update solves the prefactorized normal equations, the z-update
    is group soft-thresholding with threshold gamma*lam, and the scaled
    dual v accumulates the constraint residual.  Defaults: z0 = v0 = 0.
    """
    if cfg.noise_enabled:
        raise ValueError("admm_tv requires noise_enabled=False; use admm_tv_noisy")
    return _admm_run(y, A, op, cfg, z0, v0, None, metrics_fn)


def admm_tv_noisy(y, A, op, cfg, z0=None, v0=None, metrics_fn=None, rng=None):
    """ADMM with amplifier noise injected each iteration; returns (x, trace).

    A gain-256 noise vector perturbs the amplified signal D x + v feeding
    the prox and the dual update; when 1/gamma > 1 the scaled vector
    (1/gamma) D^T (z - v) additionally picks up noise at the amplifier
    gain (1/gamma)^2.  ``rng`` defaults to a generator seeded from
    ``cfg.seed``.
    """
    if not cfg.noise_enabled:
        raise ValueError("admm_tv_noisy requires noise_enabled=True")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    return _admm_run(y, A, op, cfg, z0, v0, rng, metrics_fn)


def pds_tv(y, A, op, cfg, x0=None, v0=None, metrics_fn=None):
    """Noiseless PDS; returns (x, trace).

    Gradient step on the data term, dual ascent through D, and the
    simplified dual prox v = z - prox_lam(z).  Defaults: x0 = y (valid for
    identity A), v0 = 0.
    """
    if cfg.noise_enabled:
        raise ValueError("pds_tv requires noise_enabled=False; use pds_tv_noisy")
    return _pds_run(y, A, op, cfg, x0, v0, None, metrics_fn)


def pds_tv_noisy(y, A, op, cfg, x0=None, v0=None, metrics_fn=None, rng=None):
    """PDS with amplifier noise injected each iteration; returns (x, trace).

    Implements the circuit form with gain {32, 16, 2, 256} noise vectors
    added to x_t, v_t, 2*x_{t+1} and the dual input respectively, plus
    step-size amplifier noise when gamma1 > 1 or gamma2 > 1.
    """
    if not cfg.noise_enabled:
        raise ValueError("pds_tv_noisy requires noise_enabled=True")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    return _pds_run(y, A, op, cfg, x0, v0, rng, metrics_fn)
