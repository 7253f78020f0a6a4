"""Optical component models and the amplifier noise model.

Signals are complex field amplitudes (plain Python/numpy complex numbers);
the optical power of a signal is the squared magnitude of its amplitude.
The splitter/adder/subtractor models below are the idealized lossless
versions: phase shifts that only re-label the outputs are compensated so
that both outputs carry real 1/sqrt(2) scaling.
"""

import math
from dataclasses import dataclass

import numpy as np

PLANCK = 6.62607015e-34  # J*s, exact SI value

_SQRT2 = math.sqrt(2.0)


def power(a):
    """Optical power of a complex field amplitude."""
    return abs(a) ** 2


def beam_splitter_combine(a, b):
    """Adder/subtractor outputs for two input amplitudes.

    Returns (o1, o2) with o1 = (a+b)/sqrt(2) and o2 = (a-b)/sqrt(2).
    Total output power equals total input power.
    """
    return (a + b) / _SQRT2, (a - b) / _SQRT2


def signal_splitter(a):
    """Split one input amplitude into two equal-power outputs.

    Each output carries the input signal scaled by 1/sqrt(2), i.e. half
    of the input power.
    """
    return a / _SQRT2, a / _SQRT2


def gain_for_scalar_multiply(c):
    """Power gain of the amplifier needed to multiply an amplitude by c.

    Attenuation (c <= 1) needs no amplifier and returns None; for c > 1
    the amplitude scale corresponds to power gain c**2.
    """
    if c <= 0:
        raise ValueError(f"scale factor must be positive, got {c}")
    if c <= 1:
        return None
    return c * c


@dataclass(frozen=True)
class AmplifierNoiseModel:
    """ASE noise of an optical amplifier (EDFA-style model).

    The added noise power for power gain G is F*(G-1)*h*mu*B.  For
    simulation the noise variance is additionally scaled by ``sim_scale``
    to account for the typical signal power in the circuit; ``sim_scale``
    may be 0 to disable the noise entirely (useful for degeneracy checks).
    """

    noise_figure: float = 2.0
    frequency: float = 1.94e14       # Hz (1550 nm carrier)
    bandwidth: float = 1.0e10        # Hz
    sim_scale: float = 1000.0

    def __post_init__(self):
        if self.noise_figure < 1:
            raise ValueError("noise figure must be >= 1")
        if self.frequency <= 0 or self.bandwidth <= 0:
            raise ValueError("frequency and bandwidth must be positive")
        if self.sim_scale < 0:
            raise ValueError("sim_scale must be nonnegative")

    def ase_noise_power(self, gain):
        """Added ASE noise power (Watts) for power gain ``gain`` >= 1."""
        if gain < 1:
            raise ValueError(
                f"power gain must be >= 1, got {gain} "
                "(attenuators add no ASE noise)"
            )
        return (
            self.noise_figure * (gain - 1) * PLANCK
            * self.frequency * self.bandwidth
        )

    def sim_noise_std(self, gain):
        """Standard deviation of the simulated additive noise for ``gain``."""
        return math.sqrt(self.sim_scale * self.ase_noise_power(gain))

    def sample_noise_vector(self, gain, n, rng):
        """Draw an i.i.d. zero-mean Gaussian noise vector of length ``n``.

        The standard deviation is ``sim_noise_std(gain)``.  The generator
        state advances even when the std is zero, so noise-free runs keep
        the same stream alignment.
        """
        if n < 1:
            raise ValueError("noise vector length must be >= 1")
        return rng.normal(0.0, self.sim_noise_std(gain), n)


# (gain, added power) reference rows quoted in the amplifier literature;
# regression targets for the recomputed F*(G-1)*h*mu*B values.
REFERENCE_NOISE_TABLE = (
    (8, 1.79e-8),
    (16, 3.84e-8),
    (32, 7.94e-8),
    (64, 1.61e-7),
    (128, 3.25e-7),
    (256, 6.53e-7),
)
