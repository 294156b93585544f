"""Physical constants used throughout the package.

The values are pinned (CODATA 2018 exact / recommended) rather than pulled
from ``scipy.constants`` so that outputs stay bit-reproducible across SciPy
releases.
"""

SPEED_OF_LIGHT = 299_792_458.0  # m/s
HBAR = 1.054_571_817e-34  # J s
BOLTZMANN = 1.380_649e-23  # J/K
