"""Circulant difference operator and the prefactorized ADMM linear solver.

Images of shape (n1, n2) are vectorized by stacking columns top-to-bottom,
left-to-right (Fortran order).  With that convention the vertical
difference operator is the circular next-pixel difference within the
stacked vector (stride 1) and the horizontal one differences pixels at
stride n1, both with periodic wraparound.
"""

import numpy as np
import scipy.linalg


class FactorizationError(RuntimeError):
    """The ADMM system matrix is singular or indefinite."""


class DifferenceOperator:
    """Stacked vertical/horizontal circular first-difference operator.

    Maps R^N -> R^{2N} with N = n1*n2: the first N output entries are the
    vertical differences, the last N the horizontal ones.  Applied
    matrix-free via cyclic shifts.
    """

    def __init__(self, n1, n2):
        if n1 < 2 or n2 < 2:
            raise ValueError("grid must be at least 2x2")
        self.n1 = int(n1)
        self.n2 = int(n2)
        self.size = self.n1 * self.n2

    def apply(self, x):
        """Compute the stacked difference vector D x of length 2N."""
        x = np.asarray(x)
        if x.shape != (self.size,):
            raise ValueError(f"expected vector of length {self.size}, got shape {x.shape}")
        dv = np.roll(x, 1) - x
        dh = np.roll(x, self.n1) - x
        return np.concatenate([dv, dh])

    def apply_transpose(self, z):
        """Compute D^T z for a stacked vector z of length 2N."""
        z = np.asarray(z)
        if z.shape != (2 * self.size,):
            raise ValueError(f"expected vector of length {2 * self.size}, got shape {z.shape}")
        zv = z[: self.size]
        zh = z[self.size:]
        return (np.roll(zv, -1) - zv) + (np.roll(zh, -self.n1) - zh)

    def tv_seminorm(self, x):
        """Isotropic total variation: sum of per-pixel difference magnitudes."""
        d = self.apply(x)
        return float(np.hypot(d[: self.size], d[self.size:]).sum())


class AdmmLinearSolver:
    """Cholesky-prefactorized solver for M = A^T A + (1/gamma) D^T D.

    ``A`` is either a dense (M, N) observation matrix or None for the
    identity.  The factorization is computed once at construction; a
    singular or indefinite system raises FactorizationError.
    """

    def __init__(self, A, op, gamma):
        if gamma <= 0:
            raise ValueError("gamma must be positive")
        n = op.size
        shift_v = np.roll(np.eye(n), 1, axis=0)
        shift_h = np.roll(np.eye(n), op.n1, axis=0)
        dv = shift_v - np.eye(n)
        dh = shift_h - np.eye(n)
        m = (dv.T @ dv + dh.T @ dh) / gamma
        if A is None:
            m[np.diag_indices(n)] += 1.0
        else:
            A = np.asarray(A, dtype=float)
            if A.shape[1] != n:
                raise ValueError(f"A has {A.shape[1]} columns, expected {n}")
            m += A.T @ A
        try:
            self._factor = scipy.linalg.cho_factor(m, lower=True)
        except scipy.linalg.LinAlgError as exc:
            raise FactorizationError(f"system matrix is not positive definite: {exc}") from None
        # Cholesky can slip through on an exactly singular matrix due to
        # rounding; a cheap residual probe catches that case.
        probe = np.ones(n)
        sol = scipy.linalg.cho_solve(self._factor, probe)
        if not np.all(np.isfinite(sol)) or np.linalg.norm(m @ sol - probe) > 1e-6 * np.linalg.norm(probe):
            raise FactorizationError("system matrix is numerically singular")
        self.gamma = float(gamma)
        self.size = n

    def solve(self, rhs):
        rhs = np.asarray(rhs)
        if rhs.shape != (self.size,):
            raise ValueError(f"expected rhs of length {self.size}, got shape {rhs.shape}")
        return scipy.linalg.cho_solve(self._factor, rhs)
