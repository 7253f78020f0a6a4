"""Proximal operators: group soft-thresholding and the conjugate identity.

Vectors of length 2N are grouped per pixel: group i consists of entries
i (vertical difference) and N+i (horizontal difference).
"""

import numpy as np
import scipy.optimize


def prox_group_l12(z, tau):
    """Group-wise scaled soft-thresholding, the prox of tau*||.||_{1,2}.

    Each per-pixel group (z_i, z_{N+i}) is scaled by
    max(1 - tau/||group||_2, 0); a zero-norm group maps to zero.
    """
    if tau <= 0:
        raise ValueError("threshold must be positive")
    z = np.asarray(z)
    if z.ndim != 1 or z.size % 2:
        raise ValueError("expected a 1-D vector of even length")
    n = z.size // 2
    zv = z[:n]
    zh = z[n:]
    norms = np.hypot(zv, zh)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norms > 0, np.maximum(1.0 - tau / norms, 0.0), 0.0)
    return np.concatenate([scale * zv, scale * zh])


def prox_conjugate(u, gamma, base_prox):
    """Prox of the scaled convex conjugate via the Moreau decomposition.

    ``base_prox`` must evaluate prox_{(1/gamma) h}; the result is
    u - gamma * base_prox(u / gamma) = prox_{gamma h*}(u).
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    u = np.asarray(u)
    return u - gamma * base_prox(u / gamma)


def prox_numeric_oracle(g, gamma, z, grid_points=10_000):
    """Brute-force proximal operator for testing closed forms against.

    Minimizes g(u) + ||z - u||^2 / (2*gamma) by a dense grid search over
    the hypercube [z - 3*gamma, z + 3*gamma] followed by a local
    derivative-free polish.  Intended for dimensions k <= 3 only.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    z = np.asarray(z, dtype=float)
    k = z.size
    if k > 3:
        raise ValueError("oracle is limited to dimensions <= 3")

    def objective(u):
        return g(u) + np.sum((z - u) ** 2) / (2.0 * gamma)

    per_axis = max(3, int(round(grid_points ** (1.0 / k))))
    axes = [np.linspace(zi - 3 * gamma, zi + 3 * gamma, per_axis) for zi in z]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)
    values = np.array([objective(u) for u in grid])
    best = grid[np.argmin(values)]
    result = scipy.optimize.minimize(
        objective, best, method="Nelder-Mead",
        options={"xatol": 1e-9, "fatol": 1e-14, "maxiter": 5000},
    )
    return result.x
