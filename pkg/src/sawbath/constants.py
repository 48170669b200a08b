"""Physical constants used throughout the package.

CODATA exact SI values (2019 redefinition); kept in one place so every
module agrees on them.
"""

import math

PLANCK_H = 6.62607015e-34  # J s
BOLTZMANN_K = 1.380649e-23  # J / K

TWO_PI = 2.0 * math.pi
