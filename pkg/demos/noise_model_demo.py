"""Walk through the optical component models and the amplifier noise table.

Run:  python demos/noise_model_demo.py
"""

import numpy as np

from opticaltv import (
    AmplifierNoiseModel,
    REFERENCE_NOISE_TABLE,
    beam_splitter_combine,
    gain_for_scalar_multiply,
    power,
    signal_splitter,
)

# A beam splitter turns two inputs into their (scaled) sum and difference.
a, b = 1.0 + 0.5j, 0.3 - 0.2j
o1, o2 = beam_splitter_combine(a, b)
print("beam splitter outputs:", o1, o2)
print("power in: ", power(a) + power(b))
print("power out:", power(o1) + power(o2))

# A signal splitter halves the power on each branch.
s1, s2 = signal_splitter(a)
print("\nsplitter branch power:", power(s1), "=", power(a) / 2)

# The ASE noise model recomputes the published noise-power table from
# F*(G-1)*h*mu*B with the default EDFA parameters.
model = AmplifierNoiseModel()
print("\ngain   computed power   reference   rel. error")
for gain, reference in REFERENCE_NOISE_TABLE:
    computed = model.ase_noise_power(gain)
    print(f"{gain:4d}   {computed:.3e}       {reference:.2e}    "
          f"{abs(computed - reference) / reference:.3%}")

# For simulation the variance is scaled by 1000 (typical signal power
# ~0.001 makes the absolute powers above too small to matter otherwise).
print("\nsimulated noise std at G=256:", model.sim_noise_std(256))

sample = model.sample_noise_vector(256, 10**6, np.random.default_rng(0))
print("empirical std of 1e6 draws:  ", sample.std())

# Multiplying a signal by a scalar c > 1 needs an amplifier with power
# gain c^2; attenuation is noise-free.
print("\ngain for x10 amplitude:", gain_for_scalar_multiply(10.0))
print("gain for x0.5 amplitude:", gain_for_scalar_multiply(0.5))
