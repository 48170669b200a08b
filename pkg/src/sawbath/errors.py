"""Exception types shared across the package.

The CLI maps these onto process exit codes: configuration problems exit
with 2, numerical failures with 3, and I/O errors (plain OSError) with 4.
"""


class SawBathError(Exception):
    """Base class for package-specific errors."""


class ConfigError(SawBathError):
    """Malformed configuration input: unknown key, bad unit, bad value."""


class NumericalError(SawBathError):
    """A computation failed: non-convergence, degeneracy, singularity."""


class FitConvergenceError(NumericalError):
    """An iterative fit exhausted its budget without converging."""


class DegenerateCascadeError(NumericalError):
    """The acoustic cascade is numerically singular at some frequency."""


class SteadyStateError(NumericalError):
    """The Liouvillian kernel is empty, degenerate, or inconsistent."""
